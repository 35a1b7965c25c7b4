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

using namespace lbft;
using namespace lbft::test;

TEST(BlockTree, GenesisIsImplicit)
{
   BlockTree tree;
   EXPECT_EQ(tree.size(), 1u);
   EXPECT_EQ(tree.height(genesis_id), 0);
   EXPECT_FALSE(tree.block(genesis_id).proposer.has_value());
   EXPECT_EQ(tree.branch_to(genesis_id), std::vector<BlockId>{genesis_id});
}

TEST(BlockTree, ChildOfGenesisHasHeightOne)
{
   BlockTree tree;
   const auto a = grow(tree, genesis_id);
   EXPECT_EQ(tree.height(a), 1);
   EXPECT_EQ(tree.arrival_index(a), 1u);
}

TEST(BlockTree, InsertErrors)
{
   BlockTree tree;
   Block orphan{B(1), B(7), 0, P(0), 0, std::nullopt};
   EXPECT_THROW(tree.insert(orphan), UnknownParent);

   grow(tree, genesis_id);
   Block dup{B(1), genesis_id, 0, P(0), 0, std::nullopt};
   EXPECT_THROW(tree.insert(dup), DuplicateId);

   Block wrong{B(2), B(1), 5, P(0), 0, std::nullopt};
   EXPECT_THROW(tree.insert(wrong), HeightMismatch);
   EXPECT_THROW((void)tree.block(B(9)), UnknownBlock);
}

TEST(BlockTree, FiveBlockChainHeights)
{
   BlockTree tree;
   const auto ids = chain(tree, genesis_id, 5);
   const auto branch = tree.branch_to(ids.back());
   ASSERT_EQ(branch.size(), 6u);
   for (std::size_t h = 0; h < branch.size(); ++h)
      EXPECT_EQ(tree.height(branch[h]), static_cast<Height>(h));
}

TEST(BlockTree, AncestryAndConflicts)
{
   // Two branches off block 1; mirrors two conflicting blocks at heights 2
   // and 4 on different branches.
   BlockTree tree;
   const auto b1 = grow(tree, genesis_id);
   const auto a = grow(tree, b1);                     // height 2, branch 1
   const auto side = chain(tree, b1, 3);              // heights 2..4, branch 2
   EXPECT_TRUE(tree.are_conflicting(a, side.back()));
   EXPECT_FALSE(tree.are_conflicting(side.back(), b1));
   EXPECT_FALSE(tree.are_conflicting(a, a));
   EXPECT_TRUE(tree.is_ancestor(genesis_id, a));
   EXPECT_FALSE(tree.is_ancestor(a, a));
   EXPECT_FALSE(tree.is_ancestor(a, side[0]));
   EXPECT_FALSE(tree.is_ancestor(side[0], a));
   EXPECT_EQ(tree.ancestor_at(side.back(), 1), b1);

   const auto branch = tree.branch_to(side.back());
   EXPECT_EQ(std::count(branch.begin(), branch.end(), a), 0);
   EXPECT_EQ(branch.size(), 5u);
}

namespace {

bool path_contains(const BlockTree& tree, BlockId from, BlockId target)
{
   for (std::optional<BlockId> cur = from; cur; cur = tree.block(*cur).parent)
      if (*cur == target)
         return true;
   return false;
}

}  // namespace

TEST(BlockTree, RandomTreesMatchPathOracle)
{
   std::mt19937_64 rng(17);
   for (int round = 0; round < 5; ++round) {
      const auto tree = random_tree(rng, 200);
      for (const auto& a : tree.blocks()) {
         EXPECT_TRUE(tree.is_ancestor(genesis_id, a.id) != (a.id == genesis_id));
         for (const auto& b : tree.blocks()) {
            const bool anc = a.id != b.id && path_contains(tree, b.id, a.id);
            ASSERT_EQ(tree.is_ancestor(a.id, b.id), anc);
            const bool conflict = a.id != b.id && !path_contains(tree, b.id, a.id) && !path_contains(tree, a.id, b.id);
            ASSERT_EQ(tree.are_conflicting(a.id, b.id), conflict);
         }
         const auto branch = tree.branch_to(a.id);
         ASSERT_EQ(static_cast<Height>(branch.size()), a.height + 1);
         for (std::size_t i = 1; i < branch.size(); ++i)
            ASSERT_EQ(tree.block(branch[i]).parent, branch[i - 1]);
      }
   }
}
