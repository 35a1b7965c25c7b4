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

#include "lbft/blocktree.hpp"
#include "lbft/chain_state.hpp"
#include "lbft/proposer_dynamics.hpp"

#include <random>
#include <vector>

namespace lbft::test {

inline ProposerId P(std::uint32_t v)
{
   return ProposerId{v};
}

inline BlockId B(std::uint32_t v)
{
   return BlockId{v};
}

/// Appends a child of `parent` and returns its id.
inline BlockId grow(BlockTree& tree, BlockId parent, std::optional<ProposerId> proposer = P(0))
{
   Block b;
   b.id = BlockId{static_cast<std::uint32_t>(tree.size())};
   b.parent = parent;
   b.proposer = proposer;
   return tree.insert(b).id;
}

/// Appends a chain of `n` blocks below `from`; returns the ids in order.
inline std::vector<BlockId> chain(BlockTree& tree, BlockId from, int n)
{
   std::vector<BlockId> out;
   for (int i = 0; i < n; ++i)
      out.push_back(from = grow(tree, from));
   return out;
}

/// Uniform schedule over ids 0..n-1 with one long round.
inline RoundSchedule uniform_schedule(std::uint32_t n, Height m = 1000, std::int64_t d = 2)
{
   RoundSchedule s;
   s.round_length = m;
   s.delay_rounds = d;
   for (std::uint32_t i = 0; i < n; ++i)
      s.initial.emplace_back(P(i), Weight{1});
   return s;
}

/// Adds a child to a ChainState with the given votes.
inline BlockId extend(ChainState& cs, BlockId parent, VoteBatch votes = {}, ProposerId proposer = P(0),
                      std::optional<LiskHeader> header = std::nullopt)
{
   Block b;
   b.id = cs.next_id();
   b.parent = parent;
   b.height = cs.tree().height(parent) + 1;
   b.proposer = proposer;
   b.header = header;
   return cs.add_block(b, std::move(votes)).id;
}

/// Random tree: each new block picks a uniformly random existing parent,
/// biased towards recent blocks so that branches get long.
inline BlockTree random_tree(std::mt19937_64& rng, int blocks)
{
   BlockTree tree;
   for (int i = 0; i < blocks; ++i) {
      const auto size = tree.size();
      const auto lo = size > 8 ? size - 8 : 0;
      const auto parent = static_cast<std::uint32_t>(lo + rng() % (size - lo));
      grow(tree, BlockId{parent}, ProposerId{static_cast<std::uint32_t>(rng() % 7)});
   }
   return tree;
}

}  // namespace lbft::test
