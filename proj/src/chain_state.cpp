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

#include "lbft/chain_state.hpp"

#include <stdexcept>

namespace lbft {

ChainState::ChainState(RoundSchedule schedule, std::size_t universe)
    : schedule_{std::move(schedule)}, universe_{universe}
{
   auto info = std::make_shared<RoundInfo>();
   info->round = 0;
   info->set = std::make_shared<const ProposerSet>(schedule_.initial_set());
   info->active_since.assign(universe_, -1);
   for (auto id : info->set->members()) {
      if (id.value >= universe_)
         throw std::out_of_range("proposer " + id.str() + " outside universe");
      info->active_since[id.value] = 0;
   }
   records_.push_back(Record{ChainTally::genesis(*info->set, universe_), info, {}, {}, {}});
}

std::shared_ptr<const RoundInfo> ChainState::round_info_for_child(BlockId parent)
{
   const auto& parent_record = records_.at(parent.value);
   const Height child_height = tree_.height(parent) + 1;
   const auto round = schedule_.round_of(child_height);
   if (round == parent_record.round->round)
      return parent_record.round;
   if (parent_record.child_round)
      return parent_record.child_round;

   auto set = active_set(
       schedule_,
       [&](Height h) -> std::optional<ProposerId> { return tree_.block(tree_.ancestor_at(parent, h)).proposer; },
       round);

   const auto& prev = *parent_record.round;
   auto info = std::make_shared<RoundInfo>();
   info->round = round;
   info->active_since.assign(universe_, -1);
   for (auto id : set.members()) {
      if (id.value >= universe_)
         throw std::out_of_range("proposer " + id.str() + " outside universe");
      const bool continued = prev.set->contains(id) && prev.round + 1 == round;
      info->active_since[id.value] = continued ? prev.active_since[id.value] : round;
   }
   if (*prev.set == set)
      info->set = prev.set;
   else
      info->set = std::make_shared<const ProposerSet>(std::move(set));
   parent_record.child_round = info;
   return info;
}

const Block& ChainState::add_block(Block block, VoteBatch included)
{
   if (block.id != next_id())
      throw std::invalid_argument("block id " + block.id.str() + " out of sequence");
   if (!block.parent)
      throw UnknownParent(block.id);
   auto info = round_info_for_child(*block.parent);
   const auto& inserted = tree_.insert(block);

   ChainTally tally = records_.at(block.parent->value).tally.extend(inserted.id, *info->set);
   VoteBatch kept;
   for (const auto& v : included.prevotes) {
      if (!tree_.contains(v.target) || !tree_.on_branch(v.target, inserted.id))
         continue;
      tally.add_prevote(tree_.height(v.target), v.author);
      kept.prevotes.push_back(v);
   }
   for (const auto& v : included.precommits) {
      if (!tree_.contains(v.target) || !tree_.on_branch(v.target, inserted.id))
         continue;
      tally.add_precommit(tree_.height(v.target), v.author);
      kept.precommits.push_back(v);
   }
   records_.push_back(Record{std::move(tally), std::move(info), std::move(kept), {}, {}});
   return inserted;
}

Height ChainState::prevoted_height(BlockId id, bool exclude_tip) const
{
   if (!exclude_tip)
      return tally(id).max_prevoted_height();
   const auto& b = tree_.block(id);
   return b.parent ? tally(*b.parent).max_prevoted_height() : 0;
}

Height ChainState::finalized_height(BlockId id, const Rational& tau) const
{
   const auto& record = records_.at(id.value);
   for (const auto& [t, h] : record.finalized_cache) {
      if (t == tau)
         return h;
   }
   const Height h = record.tally.max_precommitted_height(tau);
   record.finalized_cache.emplace_back(tau, h);
   return h;
}

}  // namespace lbft
