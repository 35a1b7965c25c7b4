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

#include "lbft/approve.hpp"
#include "lbft/consensus.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <map>

using namespace lbft;
using namespace lbft::test;

namespace {

BlockId line(ChainState& cs, BlockId from, int n)
{
   for (int i = 0; i < n; ++i)
      from = extend(cs, from);
   return from;
}

VoteBatch quorum_prevotes(BlockId target, BlockId context, std::uint32_t count)
{
   VoteBatch v;
   for (std::uint32_t i = 0; i < count; ++i)
      v.prevotes.push_back(Prevote{target, context, P(i)});
   return v;
}

}  // namespace

TEST(ValidateApprove, GenesisOnlyQuorum)
{
   ChainState cs(uniform_schedule(4), 4);
   const auto t = line(cs, genesis_id, 5);
   EXPECT_FALSE(validate_approve(Approve{0, 0, t, P(0)}, cs.tree(), cs.tally(t)).has_value());
   EXPECT_TRUE(validate_approve(Approve{5, 0, t, P(0)}, cs.tree(), cs.tally(t)).has_value());
   EXPECT_TRUE(validate_approve(Approve{0, 5, t, P(0)}, cs.tree(), cs.tally(t)).has_value());
}

TEST(ValidateApprove, DeclaredPMustMatch)
{
   ChainState cs(uniform_schedule(4), 4);
   const auto b3 = line(cs, genesis_id, 3);
   const auto b4 = extend(cs, b3, quorum_prevotes(b3, b3, 3));
   const auto t = line(cs, b4, 2);
   EXPECT_EQ(cs.tally(t).max_prevoted_height(), 3);
   EXPECT_FALSE(validate_approve(Approve{1, 3, t, P(0)}, cs.tree(), cs.tally(t)).has_value());
   EXPECT_TRUE(validate_approve(Approve{1, 4, t, P(0)}, cs.tree(), cs.tally(t)).has_value());
   EXPECT_THROW(expand_approve(Approve{1, 4, t, P(0)}, cs.tree(), cs.tally(t)), InvalidApprove);
}

TEST(Monotonicity, Examples)
{
   BlockTree tree;
   const auto c = chain(tree, genesis_id, 8);
   const auto at = [&](int h) { return c[h - 1]; };

   const std::vector<Approve> h1{{2, 1, at(4), P(0)}};
   EXPECT_FALSE(check_monotonicity(tree, h1, Approve{4, 1, at(6), P(0)}).has_value());

   const std::vector<Approve> h2{{2, 0, at(5), P(0)}};
   const auto v = check_monotonicity(tree, h2, Approve{4, 0, at(6), P(0)});
   ASSERT_TRUE(v.has_value());
   EXPECT_EQ(v->clause, "i");

   const std::vector<Approve> h3{{2, 3, at(4), P(0)}};
   const auto w = check_monotonicity(tree, h3, Approve{5, 2, at(7), P(0)});
   ASSERT_TRUE(w.has_value());
   EXPECT_EQ(w->clause, "ii");
   EXPECT_EQ(w->first.k, 2);

   // Order of arrival does not matter, and other authors are ignored.
   EXPECT_TRUE(check_monotonicity(tree, std::vector<Approve>{{4, 0, at(6), P(0)}}, h2[0]).has_value());
   EXPECT_FALSE(check_monotonicity(tree, h2, Approve{4, 0, at(6), P(1)}).has_value());
   // Equal k between distinct messages always fails (i).
   EXPECT_TRUE(check_monotonicity(tree, h1, Approve{2, 1, at(3), P(0)}).has_value());
}

TEST(ExpandApprove, SinglePrevoteWhenKIsJustBelow)
{
   ChainState cs(uniform_schedule(4), 4);
   const auto t = line(cs, genesis_id, 4);
   const auto v = expand_approve(Approve{3, 0, t, P(0)}, cs.tree(), cs.tally(t));
   ASSERT_EQ(v.prevotes.size(), 1u);
   EXPECT_EQ(v.prevotes[0].target, t);
}

TEST(ExpandApprove, FreshAuthorNoQuorum)
{
   ChainState cs(uniform_schedule(4), 4);
   const auto t = line(cs, genesis_id, 3);
   const auto v = expand_approve(Approve{0, 0, t, P(2)}, cs.tree(), cs.tally(t));
   EXPECT_EQ(v.prevotes.size(), 3u);
   for (const auto& pc : v.precommits)
      EXPECT_EQ(cs.tree().height(pc.target), 0);
}

TEST(ExpandApprove, PrecommitsQuorumBlocksAfterOwnPrevote)
{
   ChainState cs(uniform_schedule(4), 4);
   const auto b1 = extend(cs, genesis_id);
   const auto b2 = extend(cs, b1, quorum_prevotes(b1, b1, 3));
   const auto v = expand_approve(Approve{1, 1, b2, P(0)}, cs.tree(), cs.tally(b2));
   ASSERT_EQ(v.prevotes.size(), 1u);
   // Genesis counts as prevoted by everyone, so it is precommitted too.
   ASSERT_EQ(v.precommits.size(), 2u);
   EXPECT_EQ(v.precommits[0].target, genesis_id);
   EXPECT_EQ(v.precommits[1].target, b1);

   // P(3) never prevoted b1, so j2 = 1 and nothing is precommitted.
   const auto w = expand_approve(Approve{1, 1, b2, P(3)}, cs.tree(), cs.tally(b2));
   EXPECT_TRUE(w.precommits.empty());
}

TEST(ExpandApprove, Deterministic)
{
   ChainState cs(uniform_schedule(4), 4);
   const auto b1 = extend(cs, genesis_id);
   const auto b2 = extend(cs, b1, quorum_prevotes(b1, b1, 3));
   const Approve a{1, 1, b2, P(1)};
   const auto x = expand_approve(a, cs.tree(), cs.tally(b2));
   const auto y = expand_approve(a, cs.tree(), cs.tally(b2));
   EXPECT_EQ(x.prevotes, y.prevotes);
   EXPECT_EQ(x.precommits, y.precommits);
}

// Any monotone approve history expands into votes that satisfy rules I-III,
// and every implied precommit sits at or below p.
TEST(ExpandApprove, MonotoneHistoriesSatisfyRules)
{
   std::mt19937_64 rng(11);
   for (int run = 0; run < 40; ++run) {
      const std::uint32_t n = 4;
      ChainState cs(uniform_schedule(n), n);
      std::map<std::uint32_t, std::vector<Approve>> approves;
      std::map<std::uint32_t, std::vector<VoteBatch>> batches;
      std::map<std::uint32_t, Height> last_k;
      VoteBatch pending;
      for (int step = 0; step < 120; ++step) {
         const auto size = cs.tree().size();
         const BlockId base{static_cast<std::uint32_t>(size > 5 ? size - 1 - rng() % 5 : rng() % size)};
         if (rng() % 2 == 0) {
            extend(cs, base, std::exchange(pending, {}), P(rng() % n));
            continue;
         }
         const auto author = static_cast<std::uint32_t>(rng() % n);
         const Height h = cs.tree().height(base);
         const Height k = last_k.count(author) ? last_k[author] : 0;
         if (h <= k)
            continue;
         const Approve a{k, cs.tally(base).max_prevoted_height(), base, P(author)};
         if (check_monotonicity(cs.tree(), approves[author], a))
            continue;
         const auto v = expand_approve(a, cs.tree(), cs.tally(base));
         for (const auto& pc : v.precommits)
            EXPECT_LE(cs.tree().height(pc.target), a.p);
         approves[author].push_back(a);
         batches[author].push_back(v);
         last_k[author] = h;
         pending.prevotes.insert(pending.prevotes.end(), v.prevotes.begin(), v.prevotes.end());
         pending.precommits.insert(pending.precommits.end(), v.precommits.begin(), v.precommits.end());
      }
      const TallyLookup lookup = [&](BlockId id) -> const ChainTally& { return cs.tally(id); };
      for (const auto& [author, list] : batches) {
         const auto violations = check_history(cs.tree(), lookup, list);
         EXPECT_TRUE(violations.empty()) << "run " << run << " author " << author << ": "
                                         << (violations.empty() ? "" : violations[0].detail);
      }
   }
}
