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

#include "lbft/rational.hpp"
#include "lbft/types.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <unordered_set>
#include <vector>

namespace lbft {

/// A weighted set of active proposers. Weights are exact and sum to 1.
///
/// Internally every weight is also kept as an integer numerator over a
/// common denominator so that tallies can accumulate integers and compare
/// against thresholds without building rationals.
class ProposerSet {
public:
   ProposerSet() = default;
   ProposerSet(std::vector<std::pair<ProposerId, Weight>> members, std::uint64_t epoch = 0);

   static ProposerSet uniform(std::vector<ProposerId> ids, std::uint64_t epoch = 0);

   bool contains(ProposerId id) const { return scaled_weight(id) > 0; }
   Weight weight(ProposerId id) const { return Weight{scaled_weight(id), denominator_}; }
   Weight total(std::span<const ProposerId> ids) const;

   std::span<const ProposerId> members() const { return {ids_.data(), ids_.size()}; }
   std::size_t size() const { return ids_.size(); }
   std::uint64_t epoch() const { return epoch_; }

   std::int64_t denominator() const { return denominator_; }
   std::int64_t scaled_weight(ProposerId id) const
   {
      return id.value < scaled_.size() ? scaled_[id.value] : 0;
   }

   /// True iff scaled/denominator > fraction.
   bool exceeds(std::int64_t scaled, const Rational& fraction) const
   {
      return static_cast<__int128>(scaled) * fraction.den() >
             static_cast<__int128>(fraction.num()) * denominator_;
   }
   bool is_quorum(std::int64_t scaled) const { return exceeds(scaled, two_thirds); }

   friend bool operator==(const ProposerSet& a, const ProposerSet& b)
   {
      return a.ids_ == b.ids_ && a.denominator_ == b.denominator_ && a.weights_ == b.weights_;
   }

private:
   std::vector<ProposerId> ids_;
   std::vector<std::int64_t> weights_;  // parallel to ids_, scaled
   std::vector<std::int64_t> scaled_;   // indexed by ProposerId::value
   std::int64_t denominator_ = 1;
   std::uint64_t epoch_ = 0;
};

enum class ChangeKind { join, leave };

/// A scripted membership change, recorded at `height` on every branch whose
/// block at that height was proposed by `via` (or on every branch if unset).
///
/// A weight change of P is expressed with a synthetic proposer: an increase
/// joins a new id carrying the extra weight, a decrease has the original set
/// hold the split part under its own id and lets it leave.
struct ChangeEvent {
   Height height = 0;
   ChangeKind kind = ChangeKind::join;
   ProposerId proposer;
   Weight weight{0};
   std::optional<ProposerId> via;
};

/// Round structure and scripted proposer changes.
struct RoundSchedule {
   Height round_length = 101;
   std::int64_t delay_rounds = 2;
   std::vector<std::pair<ProposerId, Weight>> initial;
   bool uniform_weights = true;
   std::vector<ChangeEvent> changes;
   std::uint64_t seed = 0;
   std::map<std::int64_t, std::vector<ProposerId>> permutation_overrides;

   std::int64_t round_of(Height h) const { return h / round_length; }
   /// Last height whose chain content determines the set of `round`, or -1
   /// when the initial set applies.
   Height cutoff_height(std::int64_t round) const;

   ProposerSet initial_set() const;
};

/// Looks up the proposer of the block at a height on some branch.
using ProposerAtHeight = std::function<std::optional<ProposerId>(Height)>;

/// Active set for `round` on the branch described by `proposer_at`, which
/// must cover heights up to `cutoff_height(round)`.
ProposerSet active_set(const RoundSchedule& schedule, const ProposerAtHeight& proposer_at, std::int64_t round);

class BlockTree;
ProposerSet active_set(const RoundSchedule& schedule, const BlockTree& tree, BlockId tip, std::int64_t round);

/// Proposal order of `set` within time-round `time_round`.
std::vector<ProposerId> round_permutation(const RoundSchedule& schedule, const ProposerSet& set,
                                          std::int64_t time_round);

/// Owner of time slot `slot` given the active set that applies to it.
ProposerId slot_proposer(const RoundSchedule& schedule, const ProposerSet& set, std::int64_t slot);

/// Caches one permutation per (set, time-round) pair.
class SlotAssigner {
public:
   explicit SlotAssigner(const RoundSchedule& schedule) : schedule_{&schedule} {}
   ProposerId owner(const std::shared_ptr<const ProposerSet>& set, std::int64_t slot);

private:
   const RoundSchedule* schedule_;
   std::map<std::pair<const ProposerSet*, std::int64_t>,
            std::pair<std::shared_ptr<const ProposerSet>, std::vector<ProposerId>>>
       cache_;
};

/// Weight of honest proposers common to every set, measured in each set's
/// own weighting; the minimum across sets is returned.
Weight honest_overlap(std::span<const ProposerSet> sets, const std::unordered_set<ProposerId>& honest);

/// Honest churn between two consecutive sets: the larger of the weight (in
/// `from`) of honest members that left and the weight (in `to`) of honest
/// members that joined.
Weight honest_change(const ProposerSet& from, const ProposerSet& to, const std::unordered_set<ProposerId>& honest);

}  // namespace lbft
