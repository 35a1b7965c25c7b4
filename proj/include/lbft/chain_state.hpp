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
#include "lbft/chain_tally.hpp"
#include "lbft/proposer_dynamics.hpp"
#include "lbft/votes.hpp"

#include <map>
#include <memory>
#include <vector>

namespace lbft {

/// Active set of one round on one branch, plus for every member the round
/// since which it has been continuously active on that branch.
struct RoundInfo {
   std::int64_t round = 0;
   std::shared_ptr<const ProposerSet> set;
   std::vector<std::int64_t> active_since;  // indexed by ProposerId::value, -1 if absent

   /// Height of the first block of the round since which `id` has been
   /// continuously active, or -1 if `id` is not active.
   Height h0(ProposerId id, Height round_length) const
   {
      if (id.value >= active_since.size() || active_since[id.value] < 0)
         return -1;
      return active_since[id.value] * round_length;
   }
};

/// Every block created in one simulation together with the derived chain
/// data: per-block cumulative tallies, round membership, and the votes each
/// block carries. Tallies depend only on the branch, so they are computed
/// once per block and shared by every observer.
class ChainState {
public:
   ChainState(RoundSchedule schedule, std::size_t universe);

   ChainState(const ChainState&) = delete;
   ChainState& operator=(const ChainState&) = delete;
   ChainState(ChainState&&) = default;
   ChainState& operator=(ChainState&&) = default;

   const BlockTree& tree() const { return tree_; }
   const RoundSchedule& schedule() const { return schedule_; }
   std::size_t universe() const { return universe_; }

   BlockId next_id() const { return BlockId{static_cast<std::uint32_t>(tree_.size())}; }

   /// Round data a child of `parent` would belong to.
   std::shared_ptr<const RoundInfo> round_info_for_child(BlockId parent);
   const RoundInfo& round_info(BlockId id) const { return *records_.at(id.value).round; }

   /// Adds `block` (id must equal next_id()) and the votes it includes.
   /// Votes whose target is not on the new block's branch are dropped.
   const Block& add_block(Block block, VoteBatch included);

   const ChainTally& tally(BlockId id) const { return records_.at(id.value).tally; }
   const VoteBatch& included_votes(BlockId id) const { return records_.at(id.value).included; }

   /// Largest >2/3-prevoted height on the branch of `id`; with `exclude_tip`
   /// the votes carried by `id` itself are ignored.
   Height prevoted_height(BlockId id, bool exclude_tip) const;

   /// Largest height whose included precommit weight exceeds `tau` on the
   /// branch of `id` (memoised per threshold).
   Height finalized_height(BlockId id, const Rational& tau) const;

private:
   struct Record {
      ChainTally tally;
      std::shared_ptr<const RoundInfo> round;
      VoteBatch included;
      mutable std::vector<std::pair<Rational, Height>> finalized_cache;
      mutable std::shared_ptr<const RoundInfo> child_round;  // for children starting a new round
   };

   RoundSchedule schedule_;
   std::size_t universe_;
   BlockTree tree_;
   std::vector<Record> records_;
};

}  // namespace lbft
