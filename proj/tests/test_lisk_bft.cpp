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

#include "lbft/lisk_bft.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace lbft;
using namespace lbft::test;

namespace {

BlockId line(ChainState& cs, BlockId from, int n)
{
   for (int i = 0; i < n; ++i)
      from = extend(cs, from);
   return from;
}

Block headed(BlockId id, Height height, Height h_prev, Height h_prevoted, ProposerId who = P(3))
{
   Block b;
   b.id = id;
   b.parent = genesis_id;
   b.height = height;
   b.proposer = who;
   b.header = LiskHeader{h_prev, h_prevoted};
   return b;
}

Block child_of(const ChainState& cs, BlockId parent, LiskHeader header, ProposerId who = P(0))
{
   Block b;
   b.id = cs.next_id();
   b.parent = parent;
   b.height = cs.tree().height(parent) + 1;
   b.proposer = who;
   b.header = header;
   return b;
}

}  // namespace

TEST(MakeHeader, Fields)
{
   ChainState cs(uniform_schedule(101), 101);
   const auto tip = line(cs, genesis_id, 4);
   EXPECT_EQ(make_header(DelegateState{P(1), 0, 0}, cs.tally(tip)), (LiskHeader{0, 0}));
   // A block proposed higher up on a discarded branch still counts.
   EXPECT_EQ(make_header(DelegateState{P(1), 0, 500}, cs.tally(tip)).h_previous, 500);
   EXPECT_THROW(make_header(DelegateState{P(1), -1, 0}, cs.tally(tip)), NotActive);
}

TEST(ExpandHeader, RecentPreviousLimitsPrevotes)
{
   ChainState cs(uniform_schedule(101), 101);
   const auto parent = line(cs, genesis_id, 499);
   const auto b = child_of(cs, parent, {490, 0});
   const auto v = expand_header(b, cs.tally(parent), 0);
   ASSERT_EQ(v.prevotes.size(), 10u);
   EXPECT_EQ(cs.tree().height(v.prevotes.front().target), 491);
   EXPECT_EQ(v.prevotes.back().target, b.id);
}

TEST(ExpandHeader, WindowCapsPrevotes)
{
   ChainState cs(uniform_schedule(101), 101);
   const auto parent = line(cs, genesis_id, 399);
   const auto b = child_of(cs, parent, {10, 0});
   const auto v = expand_header(b, cs.tally(parent), 0);
   ASSERT_EQ(v.prevotes.size(), 303u);
   EXPECT_EQ(cs.tree().height(v.prevotes.front().target), 98);
}

TEST(ExpandHeader, ActivityStartCapsPrevotes)
{
   ChainState cs(uniform_schedule(101), 101);
   const auto parent = line(cs, genesis_id, 49);
   const auto b = child_of(cs, parent, {0, 0});
   EXPECT_EQ(expand_header(b, cs.tally(parent), 41).prevotes.size(), 10u);
   EXPECT_THROW(expand_header(b, cs.tally(parent), -1), InactiveAtHeight);
}

TEST(ExpandHeader, NoVotesWithoutProgress)
{
   ChainState cs(uniform_schedule(101), 101);
   const auto parent = line(cs, genesis_id, 9);
   const auto v = expand_header(child_of(cs, parent, {10, 0}), cs.tally(parent), 0);
   EXPECT_TRUE(v.prevotes.empty());
   EXPECT_TRUE(v.precommits.empty());
}

TEST(ExpandHeader, WrongPrevotedHeightIsMalformed)
{
   ChainState cs(uniform_schedule(101), 101);
   const auto parent = line(cs, genesis_id, 9);
   EXPECT_THROW(expand_header(child_of(cs, parent, {0, 3}), cs.tally(parent), 0), MalformedHeader);
}

TEST(ExpandHeader, PrecommitsAfterQuorum)
{
   ChainState cs(uniform_schedule(4), 4);
   const auto b1 = extend(cs, genesis_id);
   VoteBatch quorum;
   for (std::uint32_t i = 0; i < 3; ++i)
      quorum.prevotes.push_back(Prevote{b1, b1, P(i)});
   const auto b2 = extend(cs, b1, quorum);
   // P(0) proposed b1 at height 1, so h_previous = 1 and its prevote is present.
   const auto v = expand_header(child_of(cs, b2, {1, 1}), cs.tally(b2), 0);
   ASSERT_EQ(v.precommits.size(), 2u);
   EXPECT_EQ(v.precommits[1].target, b1);
   // P(3) did not prevote b1.
   const auto w = expand_header(child_of(cs, b2, {1, 1}, P(3)), cs.tally(b2), 0);
   EXPECT_TRUE(w.precommits.empty());
}

TEST(Finalize, SixtyEightPrecommits)
{
   ChainState cs(uniform_schedule(101), 101);
   const auto a = line(cs, genesis_id, 3);
   auto with = [&](std::uint32_t count) {
      VoteBatch v;
      for (std::uint32_t i = 0; i < count; ++i)
         v.precommits.push_back(Precommit{a, a, P(i)});
      return extend(cs, a, v);
   };
   EXPECT_EQ(finalized_height(cs.tally(with(68))), 3);
   EXPECT_EQ(finalized_height(cs.tally(with(67))), 0);
   EXPECT_EQ(finalized_height(cs.tally(line(cs, genesis_id, 10))), 0);
}

TEST(InferOrder, Lexicographic)
{
   EXPECT_EQ(infer_order(headed(B(1), 7, 5, 3), headed(B(2), 9, 7, 3)), Order::first_before_second);
   EXPECT_EQ(infer_order(headed(B(1), 7, 5, 3), headed(B(2), 6, 5, 4)), Order::first_before_second);
   EXPECT_EQ(infer_order(headed(B(2), 6, 5, 4), headed(B(1), 7, 5, 3)), Order::second_before_first);
   EXPECT_EQ(infer_order(headed(B(1), 5, 2, 0), headed(B(2), 5, 2, 0)), Order::tie);
   EXPECT_THROW(infer_order(headed(B(1), 5, 2, 0), headed(B(2), 5, 2, 0, P(4))), DifferentAuthors);
   EXPECT_EQ(to_string(Order::tie), "order-tie");
}

TEST(CheckContradicting, Clauses)
{
   EXPECT_FALSE(check_contradicting(headed(B(1), 5, 0, 0), headed(B(2), 9, 5, 0)).has_value());

   const auto tie = check_contradicting(headed(B(1), 5, 2, 1), headed(B(2), 5, 2, 1));
   ASSERT_TRUE(tie.has_value());
   EXPECT_EQ(tie->inferred_order, Order::tie);

   const auto third = check_contradicting(headed(B(1), 5, 0, 0), headed(B(2), 9, 4, 0));
   ASSERT_TRUE(third.has_value());
   EXPECT_EQ(third->clause, "height_vs_h_previous");
   EXPECT_EQ(third->block_a, B(1));

   const auto prevoted = check_contradicting(headed(B(1), 9, 5, 4), headed(B(2), 12, 6, 2));
   ASSERT_TRUE(prevoted.has_value());
   EXPECT_EQ(prevoted->clause, "h_prevoted");
}

TEST(SuccessivePairs, InjectedViolationFound)
{
   BlockTree tree;
   BlockId cur = genesis_id;
   Height last1 = 0;
   Height last2 = 0;
   for (int h = 1; h <= 20; ++h) {
      Block b;
      b.id = BlockId{static_cast<std::uint32_t>(tree.size())};
      b.parent = cur;
      b.proposer = h % 4 == 0 ? P(1) : P(2);
      Height prev = b.proposer == P(1) ? last1 : last2;
      if (h == 12)
         prev = 3;  // forgets the block at height 8
      b.header = LiskHeader{prev, 0};
      (b.proposer == P(1) ? last1 : last2) = h;
      cur = tree.insert(b).id;
   }
   EXPECT_FALSE(check_successive_pairs(tree, cur, P(2)).has_value());
   const auto ev = check_successive_pairs(tree, cur, P(1));
   ASSERT_TRUE(ev.has_value());
   // In inferred order the forged block sits between heights 4 and 8.
   EXPECT_EQ(ev->height_a, 4);
   EXPECT_EQ(ev->height_b, 12);
   EXPECT_EQ(ev->clause, "height_vs_h_previous");
}

// A header whose h_previous exceeds its own height reverses the inferred
// order of two chain neighbours; the check must still see the outer pair.
TEST(SuccessivePairs, ForwardPreviousDoesNotHideContradiction)
{
   BlockTree tree;
   BlockId cur = genesis_id;
   const std::vector<std::pair<Height, LiskHeader>> mine = {{52, {51, 16}}, {53, {54, 16}}, {54, {53, 6}}};
   for (Height h = 1; h <= 54; ++h) {
      Block b;
      b.id = BlockId{static_cast<std::uint32_t>(tree.size())};
      b.parent = cur;
      b.proposer = P(2);
      b.header = LiskHeader{h - 1, 0};
      for (const auto& [height, header] : mine)
         if (height == h) {
            b.proposer = P(1);
            b.header = header;
         }
      cur = tree.insert(b).id;
   }
   std::vector<Block> blocks;
   for (auto id : tree.branch_to(cur))
      if (tree.block(id).proposer == P(1))
         blocks.push_back(tree.block(id));
   // Chain neighbours are pairwise fine.
   EXPECT_FALSE(check_contradicting(blocks[0], blocks[1]).has_value());
   EXPECT_FALSE(check_contradicting(blocks[1], blocks[2]).has_value());
   ASSERT_TRUE(check_contradicting(blocks[0], blocks[2]).has_value());
   const auto ev = check_successive_pairs(tree, cur, P(1));
   ASSERT_TRUE(ev.has_value());
   EXPECT_EQ(ev->clause, "h_prevoted");
}

TEST(SuccessivePairs, NeighbourScanAgreesWithAllPairs)
{
   std::mt19937_64 rng(3);
   for (int run = 0; run < 200; ++run) {
      std::vector<Block> blocks;
      Height prev = 0;
      for (std::uint32_t i = 1; i <= 8; ++i) {
         const Height h = prev + 1 + static_cast<Height>(rng() % 4);
         Block b = headed(BlockId{i}, h, prev, static_cast<Height>(rng() % 3));
         if (rng() % 6 == 0)
            b.header->h_previous = static_cast<Height>(rng() % (h + 1));
         prev = h;
         blocks.push_back(b);
      }
      std::shuffle(blocks.begin(), blocks.end(), rng);
      const bool any = !scan_author_all_pairs(blocks).empty();
      EXPECT_EQ(any, !scan_author(blocks).empty()) << "run " << run;
   }
}
