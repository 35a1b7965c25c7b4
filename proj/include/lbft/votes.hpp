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

#include <vector>

namespace lbft {

/// Prevote(target, context, author): context is the target or a descendant.
struct Prevote {
   BlockId target;
   BlockId context;
   ProposerId author;

   friend constexpr bool operator==(const Prevote&, const Prevote&) = default;
};

struct Precommit {
   BlockId target;
   BlockId context;
   ProposerId author;

   friend constexpr bool operator==(const Precommit&, const Precommit&) = default;
};

/// Votes that travel together: the expansion of one header or one approve
/// message, or a single raw vote.
struct VoteBatch {
   std::vector<Prevote> prevotes;
   std::vector<Precommit> precommits;

   bool empty() const { return prevotes.empty() && precommits.empty(); }
   friend bool operator==(const VoteBatch&, const VoteBatch&) = default;
};

}  // namespace lbft
