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

#include "lbft/approve.hpp"

#include <algorithm>

namespace lbft {

std::optional<std::string> validate_approve(const Approve& a, const BlockTree& tree, const ChainTally& at_context)
{
   const Height h = tree.height(a.context);
   if (at_context.tip() != a.context)
      return "tally does not end in the context block";
   if (a.k >= h)
      return "k=" + std::to_string(a.k) + " not below h(T)=" + std::to_string(h);
   if (a.k < 0 || a.p < 0)
      return "negative k or p";
   if (a.p >= h)
      return "p=" + std::to_string(a.p) + " not below h(T)=" + std::to_string(h);
   if (a.p != at_context.max_prevoted_height())
      return "p=" + std::to_string(a.p) + " but branch has quorum up to " +
             std::to_string(at_context.max_prevoted_height());
   return std::nullopt;
}

std::optional<MonotonicityViolation> check_monotonicity(const BlockTree& tree, std::span<const Approve> history,
                                                        const Approve& next)
{
   for (const auto& prior : history) {
      if (prior.author != next.author || prior == next)
         continue;
      const Approve& lo = prior.k <= next.k ? prior : next;
      const Approve& hi = prior.k <= next.k ? next : prior;
      if (tree.height(lo.context) > hi.k)
         return MonotonicityViolation{lo, hi, "i"};
      if (lo.p > hi.p)
         return MonotonicityViolation{lo, hi, "ii"};
   }
   return std::nullopt;
}

VoteBatch expand_approve(const Approve& a, const BlockTree& tree, const ChainTally& at_context)
{
   if (auto reason = validate_approve(a, tree, at_context))
      throw InvalidApprove(*reason);

   const Height r = tree.height(a.context);
   VoteBatch out;
   for (Height s = a.k + 1; s <= r; ++s)
      out.prevotes.push_back(Prevote{at_context.block_at(s), a.context, a.author});

   const Height j1 = at_context.last_precommit(a.author);
   Height j2 = -1;
   for (Height s = a.k; s >= 1; --s) {
      if (!at_context.has_prevote(s, a.author)) {
         j2 = s;
         break;
      }
   }
   for (Height s = std::max(j1, j2) + 1; s <= r; ++s) {
      if (at_context.prevote_quorum(s))
         out.precommits.push_back(Precommit{at_context.block_at(s), a.context, a.author});
   }
   return out;
}

}  // namespace lbft
