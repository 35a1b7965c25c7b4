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
#include "lbft/votes.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace lbft {

enum class Rule { I, II, III };

struct RuleViolation {
   Rule rule;
   ProposerId author;
   BlockId target;  // the offending vote's target
   BlockId other;   // conflicting prevote (I) or precommit (III); target again for II
   std::string detail;
};

std::string to_string(Rule rule);

/// Rule I: no two distinct prevotes by one author at the same height.
std::optional<RuleViolation> check_rule_I(const BlockTree& tree, std::span<const Prevote> history,
                                          const Prevote& next);

/// Rule II: the branch up to the precommit's context must include the
/// author's own prevote for the target and >2/3 prevote weight for it.
/// `carried` holds prevotes that travel with the precommit in the same
/// header or approve message and therefore count as included with it.
std::optional<RuleViolation> check_rule_II(const BlockTree& tree, const ChainTally& at_context, const Precommit& pc,
                                           std::span<const Prevote> carried = {});

/// Rule III: after precommitting B, every prevote at a greater height must
/// target a descendant of B unless the prevote's branch justifies the switch
/// with a >2/3-prevoted block at height >= h(B).
std::optional<RuleViolation> check_rule_III(const BlockTree& tree, std::span<const Precommit> history,
                                            const Prevote& next, const ChainTally& at_next_context);

using TallyLookup = std::function<const ChainTally&(BlockId)>;

/// Checks the complete vote history of one author against rules I-III,
/// considering every pair of messages regardless of sending order.
std::vector<RuleViolation> check_history(const BlockTree& tree, const TallyLookup& tally_at,
                                         std::span<const VoteBatch> batches);

/// Precommits a proposer has received, deduplicated per (block, author).
class PrecommitInbox {
public:
   explicit PrecommitInbox(std::size_t universe = 0) : words_{(universe + 63) / 64} {}

   /// Returns true if the precommit was new. `set` is the active set of the
   /// target block and must outlive the inbox.
   bool add(BlockId target, ProposerId author, const ProposerSet& set);
   Weight weight(BlockId target) const;
   bool exceeds(BlockId target, const Rational& tau) const;

private:
   struct Entry {
      std::vector<std::uint64_t> bits;
      std::int64_t weight = 0;
      const ProposerSet* set = nullptr;
   };
   std::size_t words_;
   std::unordered_map<BlockId, Entry> entries_;
};

/// Ancestor-closed set of finalized blocks: every block with received
/// precommit weight > tau together with all of its ancestors.
std::vector<BlockId> decide(const BlockTree& tree, const PrecommitInbox& received, const Rational& tau);

/// Per-proposer finalized set. Grows monotonically; normally a single chain
/// represented by its tip, but more tips are retained if conflicting blocks
/// get finalized.
class FinalityTracker {
public:
   /// Marks `block` (and its ancestors) final. Returns true if the set grew.
   bool finalize(const BlockTree& tree, BlockId block);

   Height height() const { return height_; }
   std::span<const BlockId> tips() const { return {tips_.data(), tips_.size()}; }
   bool is_final(const BlockTree& tree, BlockId block) const;
   bool conflicting() const { return tips_.size() > 1; }

private:
   std::vector<BlockId> tips_{genesis_id};
   Height height_ = 0;
};

/// Quorum height used by the fork choice for a given tip.
using QuorumHeight = std::function<Height(BlockId)>;

/// Longest-Chain: among branches containing a block at the globally largest
/// >2/3-prevoted height, the longest; ties go to the tip that arrived first,
/// then to the lower id.
BlockId fork_choice_longest_chain(const BlockTree& tree, const QuorumHeight& quorum_height);

/// Ranking used by the incremental fork choice. `a` beats `b` iff its
/// (quorum height, height) is lexicographically larger, or equal and it
/// arrived first.
struct ForkKey {
   Height quorum_height = 0;
   Height height = 0;
   std::uint64_t arrival = 0;
   BlockId id;

   bool beats(const ForkKey& other) const;
};

}  // namespace lbft
