// Copyright 2026 The lbft Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace lbft;
using namespace lbft::test;

TEST(ProposerSet, WeightsMustSumToOne)
{
   EXPECT_THROW(ProposerSet({{P(0), Weight{1, 2}}, {P(1), Weight{1, 3}}}), std::invalid_argument);
   EXPECT_THROW(ProposerSet({{P(0), Weight{1, 2}}, {P(0), Weight{1, 2}}}), std::invalid_argument);
   EXPECT_THROW(ProposerSet({{P(0), Weight{0}}, {P(1), Weight{1}}}), std::invalid_argument);
   const ProposerSet s({{P(0), Weight{1, 2}}, {P(1), Weight{1, 3}}, {P(2), Weight{1, 6}}});
   EXPECT_EQ(s.total(std::vector<ProposerId>{P(0), P(1), P(2)}), Weight{1});
   EXPECT_TRUE(s.is_quorum(s.scaled_weight(P(0)) + s.scaled_weight(P(2))) == false);
   EXPECT_TRUE(s.is_quorum(s.scaled_weight(P(0)) + s.scaled_weight(P(1))));
}

TEST(ProposerSet, UniformQuorumIs68Of101)
{
   std::vector<ProposerId> ids;
   for (std::uint32_t i = 0; i < 101; ++i)
      ids.push_back(P(i));
   const auto s = ProposerSet::uniform(ids);
   EXPECT_FALSE(s.is_quorum(67 * s.scaled_weight(P(0))));
   EXPECT_TRUE(s.is_quorum(68 * s.scaled_weight(P(0))));
}

TEST(RoundSchedule, CutoffFollowsDelay)
{
   RoundSchedule s = uniform_schedule(4, 10, 2);
   EXPECT_EQ(s.round_of(0), 0);
   EXPECT_EQ(s.round_of(9), 0);
   EXPECT_EQ(s.round_of(10), 1);
   EXPECT_EQ(s.cutoff_height(2), -1);
   EXPECT_EQ(s.cutoff_height(3), 9);  // round 3 reads state up to the end of round 0
   s.delay_rounds = 0;
   EXPECT_EQ(s.cutoff_height(1), 9);
}

TEST(ActiveSet, RoundZeroIsInitial)
{
   const auto s = uniform_schedule(4, 10, 2);
   const auto set = active_set(s, [](Height) { return std::optional<ProposerId>{}; }, 0);
   EXPECT_EQ(set, s.initial_set());
}

TEST(ActiveSet, ZeroDelayTakesEffectNextRound)
{
   RoundSchedule s = uniform_schedule(4, 10, 0);
   s.changes.push_back(ChangeEvent{35, ChangeKind::join, P(4), Weight{1}, std::nullopt});
   auto none = [](Height) { return std::optional<ProposerId>{}; };
   EXPECT_FALSE(active_set(s, none, 3).contains(P(4)));
   EXPECT_TRUE(active_set(s, none, 4).contains(P(4)));
   EXPECT_EQ(active_set(s, none, 4).weight(P(4)), Weight(1, 5));
}

TEST(ActiveSet, BranchesDivergingBeforeChangeDiffer)
{
   RoundSchedule s = uniform_schedule(4, 4, 0);
   s.changes.push_back(ChangeEvent{2, ChangeKind::leave, P(3), Weight{0}, P(1)});
   BlockTree tree;
   const auto b1 = grow(tree, genesis_id, P(0));
   const auto left = grow(tree, grow(tree, b1, P(1)), P(2));
   const auto right = grow(tree, grow(tree, b1, P(2)), P(3));
   const auto l = active_set(s, tree, chain(tree, left, 2).back(), 1);
   const auto r = active_set(s, tree, chain(tree, right, 2).back(), 1);
   EXPECT_FALSE(l.contains(P(3)));
   EXPECT_TRUE(r.contains(P(3)));
}

TEST(ActiveSet, WeightChangeViaSyntheticProposer)
{
   // P0 goes from 1/4 to 1/2 of the total: the set is rescaled by
   // announcing a synthetic proposer that carries the extra weight.
   RoundSchedule s;
   s.round_length = 4;
   s.delay_rounds = 0;
   s.uniform_weights = false;
   s.initial = {{P(0), Weight{1, 4}}, {P(1), Weight{1, 4}}, {P(2), Weight{1, 4}}, {P(3), Weight{1, 4}}};
   s.changes = {
       {1, ChangeKind::leave, P(1), Weight{0}, std::nullopt},
       {1, ChangeKind::join, P(10), Weight{1, 4}, std::nullopt},
   };
   const auto set = active_set(s, [](Height) { return std::optional<ProposerId>{}; }, 1);
   EXPECT_EQ(set.total(std::vector<ProposerId>{P(0), P(10)}), Weight(1, 2));
   EXPECT_EQ(set.epoch(), 2u);
}

TEST(SlotProposer, EachDelegateOncePerRound)
{
   RoundSchedule s = uniform_schedule(101, 101, 2);
   s.seed = 99;
   const auto set = s.initial_set();
   for (std::int64_t round = 0; round < 3; ++round) {
      std::set<ProposerId> seen;
      for (std::int64_t slot = round * 101; slot < (round + 1) * 101; ++slot)
         seen.insert(slot_proposer(s, set, slot));
      EXPECT_EQ(seen.size(), 101u);
   }
   EXPECT_NE(round_permutation(s, set, 0), round_permutation(s, set, 1));
}

TEST(SlotProposer, OverrideIsHonored)
{
   RoundSchedule s = uniform_schedule(4, 4, 2);
   s.permutation_overrides[1] = {P(3), P(2), P(9)};
   const auto order = round_permutation(s, s.initial_set(), 1);
   ASSERT_EQ(order.size(), 4u);
   EXPECT_EQ(order[0], P(3));
   EXPECT_EQ(order[1], P(2));
   EXPECT_EQ(slot_proposer(s, s.initial_set(), 4), P(3));
}

TEST(HonestOverlap, Examples)
{
   std::vector<ProposerId> ids;
   for (std::uint32_t i = 0; i < 101; ++i)
      ids.push_back(P(i));
   const auto all = ProposerSet::uniform(ids);
   std::unordered_set<ProposerId> honest(ids.begin(), ids.end());
   EXPECT_EQ(honest_overlap(std::vector<ProposerSet>{all, all}, honest), Weight{1});

   std::unordered_set<ProposerId> h68(ids.begin(), ids.begin() + 68);
   const auto w = honest_overlap(std::vector<ProposerSet>{all}, h68);
   EXPECT_EQ(w, Weight(68, 101));
   EXPECT_TRUE(w > Weight(4, 3) - two_thirds);

   // With m = 16 set changes the honest count must reach 68 + 2m = 100.
   std::unordered_set<ProposerId> h98(ids.begin(), ids.begin() + 98);
   EXPECT_LT(static_cast<int>(h98.size()), 68 + 2 * 16);
}

TEST(HonestChange, CountsLeaversAndJoiners)
{
   const auto a = ProposerSet::uniform({P(0), P(1), P(2), P(3)});
   const auto b = ProposerSet::uniform({P(0), P(1), P(2), P(4)});
   std::unordered_set<ProposerId> honest{P(0), P(1), P(2), P(3), P(4)};
   EXPECT_EQ(honest_change(a, b, honest), Weight(1, 4));
   honest.erase(P(3));
   honest.erase(P(4));
   EXPECT_EQ(honest_change(a, b, honest), Weight{0});
}
