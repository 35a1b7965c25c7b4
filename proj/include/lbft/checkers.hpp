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

#include "lbft/approve.hpp"
#include "lbft/consensus.hpp"
#include "lbft/lisk_bft.hpp"
#include "lbft/trace.hpp"

#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

namespace lbft {

struct SafetyResult {
   bool pass = true;
   /// Earliest pair (by finalization time) of conflicting honest decisions.
   std::optional<std::pair<FinalEvent, FinalEvent>> witness;
};

SafetyResult check_safety(const Trace& trace, const BlockTree& tree);

struct LivenessResult {
   bool pass = true;
   bool exercised = false;  // some height above convergence reached its deadline
   Height convergence = 0;
   Height deadline = 0;
   std::optional<Height> target;
   // Failure details.
   std::optional<ProposerId> proposer;
   Height unfinalized = 0;
   Height tip_height = 0;
   std::int64_t time = 0;
   std::string detail;
};

/// Default deadline in blocks: one window minus one in Lisk mode
/// (302 with the standard window), three rounds minus one otherwise.
Height default_deadline(const Scenario& scenario);

/// Every honest proposer must have finalized height l by the time its tip
/// reaches l + 1 + deadline, for every l above the convergence height. With
/// a target the trace must also reach that point for l = target.
LivenessResult check_liveness(const Trace& trace, std::optional<Height> target, Height deadline);

struct EvidenceRecord {
   ProposerId author;
   std::optional<Evidence> headers;               // Lisk mode
   std::optional<MonotonicityViolation> approves;  // general mode
};

/// Evidence derivable from the published blocks and messages alone.
std::vector<EvidenceRecord> collect_evidence(const Trace& trace, const ChainState& state);

struct AccountabilityResult {
   bool pass = true;
   std::vector<EvidenceRecord> evidence;
   std::vector<ProposerId> flagged;
   std::vector<ProposerId> wrongly_flagged;  // flagged but scripted honest or crashed
   std::vector<ProposerId> violators;        // broke rule I, II or III
   std::vector<ProposerId> missed;           // violators without evidence
   std::vector<RuleViolation> sample;        // first violation of each violator
};

AccountabilityResult check_accountability(const Trace& trace, const ChainState& state);

/// Rule I-III check of one author's complete published vote history.
std::vector<RuleViolation> author_violations(const Trace& trace, const ChainState& state, ProposerId author);

enum class CheckSet { safety, liveness, accountability, all };

struct CheckOptions {
   CheckSet which = CheckSet::all;
   std::optional<Height> target;
   std::optional<Height> deadline;
};

struct Verdict {
   CheckSet which = CheckSet::all;
   SafetyResult safety;
   LivenessResult liveness;
   AccountabilityResult accountability;
};

Verdict evaluate(const Trace& trace, const ChainState& state, const CheckOptions& options);
/// 0 all pass, 2 safety, 3 liveness, 4 accountability (first failure wins).
int exit_code(const Verdict& verdict);
/// Structured text report, one "key: value" per line.
std::string format_verdict(const Verdict& verdict, const Scenario& scenario);

std::string evidence_json(const EvidenceRecord& e);
EvidenceRecord evidence_from_json(const std::string& line);

/// Brute-force recount of every block's tally from the included votes of
/// its branch. Returns a description of the first mismatch.
std::optional<std::string> tally_recount_mismatch(const ChainState& state);

/// Heights at which two different blocks each hold >2/3 prevotes on their
/// own branch.
std::vector<Height> duplicate_quorum_heights(const ChainState& state);

/// Largest honest churn (see honest_change) between consecutive rounds on
/// the branch ending in `tip`.
Weight max_round_churn(const ChainState& state, BlockId tip, const std::unordered_set<ProposerId>& honest);

}  // namespace lbft
