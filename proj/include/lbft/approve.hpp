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

#include <optional>
#include <span>
#include <stdexcept>
#include <string>

namespace lbft {

/// Approve(k, p, T, P): prevotes every block on the branch of T above
/// height k, and precommits what the branch already justifies.
struct Approve {
   Height k = 0;
   Height p = 0;
   BlockId context;
   ProposerId author;

   friend bool operator==(const Approve&, const Approve&) = default;
};

class InvalidApprove : public std::invalid_argument {
public:
   using std::invalid_argument::invalid_argument;
};

/// Empty when valid, otherwise the reason. `at_context` is the tally of the
/// branch ending in `a.context`.
std::optional<std::string> validate_approve(const Approve& a, const BlockTree& tree, const ChainTally& at_context);

struct MonotonicityViolation {
   Approve first;   // the message with the smaller k
   Approve second;
   std::string clause;  // "i" for h(T) <= k', "ii" for p <= p'
};

/// Checks `next` against every earlier approve of the same author.
std::optional<MonotonicityViolation> check_monotonicity(const BlockTree& tree, std::span<const Approve> history,
                                                        const Approve& next);

/// Prevotes and precommits implied by `a`. `at_context` is the tally of the
/// branch ending in `a.context`; the votes `a` itself implies are not in it.
/// Throws InvalidApprove when `a` fails validate_approve.
VoteBatch expand_approve(const Approve& a, const BlockTree& tree, const ChainTally& at_context);

}  // namespace lbft
