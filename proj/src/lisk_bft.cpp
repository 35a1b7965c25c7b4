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

#include <algorithm>
#include <map>
#include <tuple>

namespace lbft {

namespace {

const LiskHeader& header_of(const Block& b)
{
   if (!b.header)
      throw MalformedHeader("block " + b.id.str() + " has no header");
   return *b.header;
}

auto order_key(const Block& b)
{
   const auto& h = header_of(b);
   return std::make_tuple(h.h_previous, h.h_prevoted, b.height);
}

}  // namespace

LiskHeader make_header(const DelegateState& state, const ChainTally& parent)
{
   if (state.h0 < 0)
      throw NotActive("proposer " + state.proposer.str() + " is not active");
   return LiskHeader{state.max_proposed_height, parent.max_prevoted_height()};
}

VoteBatch expand_header(const Block& block, const ChainTally& parent, Height h0, const LiskConfig& config)
{
   const auto& header = header_of(block);
   const Height l = block.height;
   if (!block.proposer)
      throw MalformedHeader("block " + block.id.str() + " has no proposer");
   if (parent.tip_height() != l - 1 || !block.parent || parent.tip() != *block.parent)
      throw MalformedHeader("tally does not end in the parent of block " + block.id.str());
   if (header.h_prevoted != parent.max_prevoted_height())
      throw MalformedHeader("h_prevoted " + std::to_string(header.h_prevoted) + " but branch has quorum up to " +
                            std::to_string(parent.max_prevoted_height()));
   if (h0 < 0)
      throw InactiveAtHeight("proposer " + block.proposer->str() + " inactive at height " + std::to_string(l));

   VoteBatch out;
   if (header.h_previous >= l)
      return out;

   const ProposerId author = *block.proposer;
   const Height floor = std::max(h0 - 1, l - config.window);
   const Height k = std::max(header.h_previous, floor);
   for (Height s = k + 1; s < l; ++s)
      out.prevotes.push_back(Prevote{parent.block_at(s), block.id, author});
   out.prevotes.push_back(Prevote{block.id, block.id, author});

   // Only the maximum of j1, j2 and the floor matters, so the scan for j2
   // can stop at whatever bound is already known.
   const Height bound = std::max(parent.last_precommit(author), floor);
   Height j2 = -1;
   for (Height s = header.h_previous; s > bound && s >= 1; --s) {
      if (!parent.has_prevote(s, author)) {
         j2 = s;
         break;
      }
   }
   for (Height s = std::max(bound, j2) + 1; s < l; ++s) {
      if (parent.prevote_quorum(s))
         out.precommits.push_back(Precommit{parent.block_at(s), block.id, author});
   }
   return out;
}

Height finalized_height(const ChainTally& tip)
{
   return tip.max_precommitted_height(two_thirds);
}

std::string to_string(Order order)
{
   switch (order) {
   case Order::first_before_second:
      return "a<b";
   case Order::second_before_first:
      return "b<a";
   case Order::tie:
      return "order-tie";
   }
   return "?";
}

Order infer_order(const Block& a, const Block& b)
{
   if (a.proposer != b.proposer)
      throw DifferentAuthors("blocks " + a.id.str() + " and " + b.id.str() + " have different proposers");
   const auto ka = order_key(a);
   const auto kb = order_key(b);
   if (ka < kb)
      return Order::first_before_second;
   if (kb < ka)
      return Order::second_before_first;
   return Order::tie;
}

std::optional<Evidence> check_contradicting(const Block& a, const Block& b)
{
   const Order order = infer_order(a, b);
   const Block& first = order == Order::second_before_first ? b : a;
   const Block& second = order == Order::second_before_first ? a : b;
   const auto& h1 = header_of(first);
   const auto& h2 = header_of(second);

   std::string clause;
   if (h1.h_previous > h2.h_previous)
      clause = "h_previous";
   else if (h1.h_prevoted > h2.h_prevoted)
      clause = "h_prevoted";
   else if (first.height > h2.h_previous)
      clause = "height_vs_h_previous";
   else if (h1.h_prevoted == h2.h_prevoted && first.height >= second.height)
      clause = "equal_prevoted_height";
   if (clause.empty())
      return std::nullopt;
   return Evidence{*first.proposer, first.id, second.id, clause, order, h1, h2, first.height, second.height};
}

std::optional<Evidence> check_successive_pairs(const BlockTree& tree, BlockId tip, ProposerId author)
{
   std::vector<const Block*> mine;
   for (auto id : tree.branch_to(tip)) {
      const Block& b = tree.block(id);
      if (b.proposer == author)
         mine.push_back(&b);
   }
   // Chain order and inferred order agree unless some header claims an
   // h_previous at or above its own height. Walking in inferred order keeps
   // the neighbour check complete in that case too.
   std::stable_sort(mine.begin(), mine.end(),
                    [](const Block* x, const Block* y) { return order_key(*x) < order_key(*y); });
   for (std::size_t i = 1; i < mine.size(); ++i)
      if (auto e = check_contradicting(*mine[i - 1], *mine[i]))
         return e;
   return std::nullopt;
}

std::vector<Evidence> scan_author(std::vector<Block> blocks)
{
   std::sort(blocks.begin(), blocks.end(), [](const Block& x, const Block& y) {
      return std::make_pair(order_key(x), x.id) < std::make_pair(order_key(y), y.id);
   });
   std::vector<Evidence> out;
   for (std::size_t i = 1; i < blocks.size(); ++i)
      if (auto e = check_contradicting(blocks[i - 1], blocks[i]))
         out.push_back(*e);
   return out;
}

std::vector<Evidence> scan_author_all_pairs(std::span<const Block> blocks)
{
   std::vector<Evidence> out;
   for (std::size_t i = 0; i < blocks.size(); ++i)
      for (std::size_t j = i + 1; j < blocks.size(); ++j)
         if (auto e = check_contradicting(blocks[i], blocks[j]))
            out.push_back(*e);
   return out;
}

std::vector<Evidence> scan_tree(const BlockTree& tree)
{
   std::map<ProposerId, std::vector<Block>> by_author;
   for (const auto& b : tree.blocks())
      if (b.proposer && b.header)
         by_author[*b.proposer].push_back(b);
   std::vector<Evidence> out;
   for (auto& [author, blocks] : by_author) {
      auto found = scan_author(std::move(blocks));
      out.insert(out.end(), found.begin(), found.end());
   }
   return out;
}

}  // namespace lbft
