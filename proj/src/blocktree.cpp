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

#include "lbft/blocktree.hpp"

#include <algorithm>

namespace lbft {

BlockTree::BlockTree()
{
   blocks_.push_back(Block{genesis_id, std::nullopt, 0, std::nullopt, 0, std::nullopt});
   nodes_.emplace_back();
   index_by_id_.push_back(0);
}

std::uint32_t BlockTree::index_of(BlockId id) const
{
   if (id.value >= index_by_id_.size() || index_by_id_[id.value] < 0)
      throw UnknownBlock(id);
   return static_cast<std::uint32_t>(index_by_id_[id.value]);
}

bool BlockTree::contains(BlockId id) const
{
   return id.value < index_by_id_.size() && index_by_id_[id.value] >= 0;
}

const Block& BlockTree::block(BlockId id) const
{
   return blocks_[index_of(id)];
}

std::uint64_t BlockTree::arrival_index(BlockId id) const
{
   return index_of(id);
}

std::span<const BlockId> BlockTree::children(BlockId id) const
{
   const auto& c = nodes_[index_of(id)].children;
   return {c.data(), c.size()};
}

const Block& BlockTree::insert(Block block)
{
   if (contains(block.id))
      throw DuplicateId(block.id);
   if (!block.parent || !contains(*block.parent))
      throw UnknownParent(block.parent.value_or(block.id));

   const auto parent_index = index_of(*block.parent);
   const Height expected = blocks_[parent_index].height + 1;
   if (block.height == 0)
      block.height = expected;
   else if (block.height != expected)
      throw HeightMismatch(block.id, block.height, expected);

   const auto index = static_cast<std::uint32_t>(blocks_.size());
   Node node;
   node.up.push_back(parent_index);
   for (std::size_t level = 0;; ++level) {
      const auto& mid = nodes_[node.up[level]];
      if (level >= mid.up.size())
         break;
      node.up.push_back(mid.up[level]);
   }

   nodes_[parent_index].children.push_back(block.id);
   if (block.id.value >= index_by_id_.size())
      index_by_id_.resize(block.id.value + 1, -1);
   index_by_id_[block.id.value] = static_cast<std::int32_t>(index);
   nodes_.push_back(std::move(node));
   blocks_.push_back(block);
   return blocks_.back();
}

std::uint32_t BlockTree::climb(std::uint32_t index, Height steps) const
{
   for (std::size_t level = 0; steps > 0; ++level, steps >>= 1) {
      if (steps & 1)
         index = nodes_[index].up[level];
   }
   return index;
}

BlockId BlockTree::ancestor_at(BlockId tip, Height h) const
{
   const auto index = index_of(tip);
   const Height tip_height = blocks_[index].height;
   if (h < 0 || h > tip_height)
      throw std::out_of_range("height " + std::to_string(h) + " not on branch of " + tip.str());
   return blocks_[climb(index, tip_height - h)].id;
}

bool BlockTree::on_branch(BlockId a, BlockId tip) const
{
   const auto ia = index_of(a);
   const auto it = index_of(tip);
   const Height ha = blocks_[ia].height;
   const Height ht = blocks_[it].height;
   if (ha > ht)
      return false;
   return climb(it, ht - ha) == ia;
}

bool BlockTree::is_ancestor(BlockId a, BlockId b) const
{
   return a != b && on_branch(a, b);
}

bool BlockTree::are_conflicting(BlockId a, BlockId b) const
{
   if (a == b)
      return false;
   return !on_branch(a, b) && !on_branch(b, a);
}

std::vector<BlockId> BlockTree::branch_to(BlockId tip) const
{
   auto index = index_of(tip);
   std::vector<BlockId> out(static_cast<std::size_t>(blocks_[index].height) + 1);
   for (auto pos = out.size(); pos-- > 0;) {
      out[pos] = blocks_[index].id;
      if (pos > 0)
         index = nodes_[index].up[0];
   }
   return out;
}

}  // namespace lbft
