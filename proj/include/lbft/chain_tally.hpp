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

#include "lbft/proposer_dynamics.hpp"
#include "lbft/types.hpp"

#include <cstdint>
#include <vector>

namespace lbft {

/// Cumulative prevote/precommit accounting for one branch genesis..tip,
/// counting only votes included in blocks of that branch.
///
/// One entry per height on the branch. Each entry keeps the set of voters
/// (so a proposer counts once per block and kind) and the accumulated
/// integer weight measured in the active set of the target block. The
/// ProposerSet pointers must outlive the tally.
class ChainTally {
public:
   ChainTally() = default;

   /// Tally of the single-block branch [genesis]. Genesis counts as
   /// prevoted by every member of `initial`.
   static ChainTally genesis(const ProposerSet& initial, std::size_t universe);

   /// Copy of this tally extended by one block (no votes yet).
   ChainTally extend(BlockId child, const ProposerSet& child_set) const;

   /// Returns true if the vote was new.
   bool add_prevote(Height target_height, ProposerId author);
   bool add_precommit(Height target_height, ProposerId author);

   Height tip_height() const { return static_cast<Height>(entries_.size()) - 1; }
   BlockId tip() const { return entries_.back().block; }
   BlockId block_at(Height h) const { return entries_.at(static_cast<std::size_t>(h)).block; }
   const ProposerSet& set_at(Height h) const { return *entries_.at(static_cast<std::size_t>(h)).set; }
   std::size_t universe() const { return universe_; }

   bool has_prevote(Height h, ProposerId author) const { return test(h, 0, author); }
   bool has_precommit(Height h, ProposerId author) const { return test(h, 1, author); }
   std::vector<ProposerId> prevoters(Height h) const { return voters(h, 0); }
   std::vector<ProposerId> precommitters(Height h) const { return voters(h, 1); }

   Weight prevote_weight(Height h) const;
   Weight precommit_weight(Height h) const;
   bool prevote_quorum(Height h) const;
   bool precommit_exceeds(Height h, const Rational& tau) const;

   /// Largest height on the branch with >2/3 included prevotes (0 = genesis).
   Height max_prevoted_height() const { return max_prevoted_; }
   /// Largest height on the branch with included precommit weight > tau,
   /// or 0 when only genesis qualifies.
   Height max_precommitted_height(const Rational& tau) const;
   /// Largest target height of an included precommit by `author`, or -1.
   Height last_precommit(ProposerId author) const;

   friend bool operator==(const ChainTally& a, const ChainTally& b);

private:
   struct Entry {
      BlockId block;
      const ProposerSet* set = nullptr;
      std::int64_t prevote_weight = 0;
      std::int64_t precommit_weight = 0;
   };

   bool test(Height h, int kind, ProposerId author) const;
   bool add(Height h, int kind, ProposerId author);
   std::vector<ProposerId> voters(Height h, int kind) const;
   std::uint64_t* word(Height h, int kind, ProposerId author);

   std::size_t universe_ = 0;
   std::size_t words_ = 0;
   std::vector<Entry> entries_;
   std::vector<std::uint64_t> bits_;
   std::vector<Height> last_precommit_;
   Height max_prevoted_ = 0;
};

}  // namespace lbft
