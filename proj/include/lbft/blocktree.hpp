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

#pragma once

#include "lbft/types.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace lbft {

/// Directed block tree rooted at an implicit genesis block (id 0, height 0).
///
/// Blocks are kept in insertion order; the position of a block in that order
/// is its arrival index, which the fork choice uses to break ties. Ancestor
/// lookups use a binary-lifting table so `ancestor_at` is O(log height).
class BlockTree {
public:
   BlockTree();

   /// Inserts `block` below its parent. If `block.height` is zero on a
   /// non-genesis block the height is filled in from the parent; any other
   /// disagreement throws HeightMismatch.
   const Block& insert(Block block);

   bool contains(BlockId id) const;
   const Block& block(BlockId id) const;
   Height height(BlockId id) const { return block(id).height; }
   std::size_t size() const { return nodes_.size(); }

   /// Position of `id` in insertion order (genesis is 0).
   std::uint64_t arrival_index(BlockId id) const;

   /// Blocks in insertion order.
   std::span<const Block> blocks() const { return {blocks_.data(), blocks_.size()}; }
   std::span<const BlockId> children(BlockId id) const;

   /// True iff `a` != `b` and `a` lies on the path from `b` to genesis.
   bool is_ancestor(BlockId a, BlockId b) const;
   /// True iff `a` == `tip` or `a` is an ancestor of `tip`.
   bool on_branch(BlockId a, BlockId tip) const;
   bool are_conflicting(BlockId a, BlockId b) const;

   /// The block at height `h` on the branch ending in `tip`.
   BlockId ancestor_at(BlockId tip, Height h) const;

   /// Blocks genesis..tip in height order.
   std::vector<BlockId> branch_to(BlockId tip) const;

private:
   struct Node {
      std::vector<std::uint32_t> up;  // up[i]: index of the 2^i-th ancestor
      std::vector<BlockId> children;
   };

   std::uint32_t index_of(BlockId id) const;
   std::uint32_t climb(std::uint32_t index, Height steps) const;

   std::vector<Block> blocks_;
   std::vector<Node> nodes_;
   std::vector<std::int32_t> index_by_id_;
};

}  // namespace lbft
