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

#include "lbft/chain_tally.hpp"

#include <stdexcept>

namespace lbft {

ChainTally ChainTally::genesis(const ProposerSet& initial, std::size_t universe)
{
   ChainTally t;
   t.universe_ = universe;
   t.words_ = (universe + 63) / 64;
   t.entries_.push_back(Entry{genesis_id, &initial, initial.denominator(), 0});
   t.bits_.assign(2 * t.words_, 0);
   for (auto id : initial.members()) {
      if (id.value >= universe)
         throw std::out_of_range("proposer " + id.str() + " outside universe");
      t.bits_[id.value / 64] |= std::uint64_t{1} << (id.value % 64);
   }
   t.last_precommit_.assign(universe, -1);
   return t;
}

ChainTally ChainTally::extend(BlockId child, const ProposerSet& child_set) const
{
   ChainTally t;
   t.universe_ = universe_;
   t.words_ = words_;
   t.entries_.reserve(entries_.size() + 1);
   t.entries_ = entries_;
   t.entries_.push_back(Entry{child, &child_set, 0, 0});
   t.bits_.reserve(bits_.size() + 2 * words_);
   t.bits_ = bits_;
   t.bits_.resize(bits_.size() + 2 * words_, 0);
   t.last_precommit_ = last_precommit_;
   t.max_prevoted_ = max_prevoted_;
   return t;
}

std::uint64_t* ChainTally::word(Height h, int kind, ProposerId author)
{
   if (h < 0 || h > tip_height())
      throw std::out_of_range("height " + std::to_string(h) + " not on tallied branch");
   if (author.value >= universe_)
      throw std::out_of_range("proposer " + author.str() + " outside universe");
   return &bits_[(static_cast<std::size_t>(h) * 2 + static_cast<std::size_t>(kind)) * words_ + author.value / 64];
}

bool ChainTally::test(Height h, int kind, ProposerId author) const
{
   if (h < 0 || h > tip_height() || author.value >= universe_)
      return false;
   const auto w = bits_[(static_cast<std::size_t>(h) * 2 + static_cast<std::size_t>(kind)) * words_ + author.value / 64];
   return (w >> (author.value % 64)) & 1;
}

bool ChainTally::add(Height h, int kind, ProposerId author)
{
   auto* w = word(h, kind, author);
   const auto mask = std::uint64_t{1} << (author.value % 64);
   if (*w & mask)
      return false;
   *w |= mask;
   auto& e = entries_[static_cast<std::size_t>(h)];
   const auto scaled = e.set->scaled_weight(author);
   if (kind == 0) {
      e.prevote_weight += scaled;
      if (h > max_prevoted_ && e.set->is_quorum(e.prevote_weight))
         max_prevoted_ = h;
   }
   else {
      e.precommit_weight += scaled;
      auto& last = last_precommit_[author.value];
      last = std::max(last, h);
   }
   return true;
}

bool ChainTally::add_prevote(Height target_height, ProposerId author)
{
   return add(target_height, 0, author);
}

bool ChainTally::add_precommit(Height target_height, ProposerId author)
{
   return add(target_height, 1, author);
}

std::vector<ProposerId> ChainTally::voters(Height h, int kind) const
{
   std::vector<ProposerId> out;
   for (std::uint32_t id = 0; id < universe_; ++id) {
      if (test(h, kind, ProposerId{id}))
         out.push_back(ProposerId{id});
   }
   return out;
}

Weight ChainTally::prevote_weight(Height h) const
{
   const auto& e = entries_.at(static_cast<std::size_t>(h));
   return Weight{e.prevote_weight, e.set->denominator()};
}

Weight ChainTally::precommit_weight(Height h) const
{
   const auto& e = entries_.at(static_cast<std::size_t>(h));
   return Weight{e.precommit_weight, e.set->denominator()};
}

bool ChainTally::prevote_quorum(Height h) const
{
   const auto& e = entries_.at(static_cast<std::size_t>(h));
   return e.set->is_quorum(e.prevote_weight);
}

bool ChainTally::precommit_exceeds(Height h, const Rational& tau) const
{
   const auto& e = entries_.at(static_cast<std::size_t>(h));
   return e.set->exceeds(e.precommit_weight, tau);
}

Height ChainTally::max_precommitted_height(const Rational& tau) const
{
   for (Height h = tip_height(); h > 0; --h) {
      if (precommit_exceeds(h, tau))
         return h;
   }
   return 0;
}

Height ChainTally::last_precommit(ProposerId author) const
{
   return author.value < last_precommit_.size() ? last_precommit_[author.value] : -1;
}

bool operator==(const ChainTally& a, const ChainTally& b)
{
   if (a.universe_ != b.universe_ || a.entries_.size() != b.entries_.size() || a.bits_ != b.bits_ ||
       a.last_precommit_ != b.last_precommit_ || a.max_prevoted_ != b.max_prevoted_)
      return false;
   for (std::size_t i = 0; i < a.entries_.size(); ++i) {
      const auto& x = a.entries_[i];
      const auto& y = b.entries_[i];
      if (x.block != y.block || x.prevote_weight != y.prevote_weight || x.precommit_weight != y.precommit_weight ||
          !(*x.set == *y.set))
         return false;
   }
   return true;
}

}  // namespace lbft
