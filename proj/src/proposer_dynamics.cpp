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

#include "lbft/proposer_dynamics.hpp"

#include "lbft/blocktree.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

namespace lbft {

namespace {

std::uint64_t splitmix(std::uint64_t x)
{
   x += 0x9e3779b97f4a7c15ULL;
   x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
   x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
   return x ^ (x >> 31);
}

}  // namespace

ProposerSet::ProposerSet(std::vector<std::pair<ProposerId, Weight>> members, std::uint64_t epoch) : epoch_{epoch}
{
   if (members.empty())
      throw std::invalid_argument("empty proposer set");
   std::sort(members.begin(), members.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
   Weight sum{0};
   for (std::size_t i = 0; i < members.size(); ++i) {
      if (i > 0 && members[i].first == members[i - 1].first)
         throw std::invalid_argument("duplicate proposer " + members[i].first.str());
      const auto& w = members[i].second;
      if (w <= Weight{0} || w > Weight{1})
         throw std::invalid_argument("weight of proposer " + members[i].first.str() + " outside (0,1]");
      sum += w;
      denominator_ = std::lcm(denominator_, w.den());
   }
   if (sum != Weight{1})
      throw std::invalid_argument("proposer weights sum to " + sum.str() + ", expected 1");

   scaled_.assign(members.back().first.value + 1, 0);
   for (const auto& [id, w] : members) {
      const std::int64_t scaled = w.num() * (denominator_ / w.den());
      ids_.push_back(id);
      weights_.push_back(scaled);
      scaled_[id.value] = scaled;
   }
}

ProposerSet ProposerSet::uniform(std::vector<ProposerId> ids, std::uint64_t epoch)
{
   std::vector<std::pair<ProposerId, Weight>> members;
   members.reserve(ids.size());
   const auto n = static_cast<std::int64_t>(ids.size());
   for (auto id : ids)
      members.emplace_back(id, Weight{1, n});
   return ProposerSet{std::move(members), epoch};
}

Weight ProposerSet::total(std::span<const ProposerId> ids) const
{
   std::int64_t sum = 0;
   for (auto id : ids)
      sum += scaled_weight(id);
   return Weight{sum, denominator_};
}

Height RoundSchedule::cutoff_height(std::int64_t round) const
{
   if (round < delay_rounds + 1)
      return -1;
   return (round - delay_rounds) * round_length - 1;
}

ProposerSet RoundSchedule::initial_set() const
{
   if (uniform_weights) {
      std::vector<ProposerId> ids;
      for (const auto& [id, w] : initial)
         ids.push_back(id);
      return ProposerSet::uniform(std::move(ids));
   }
   return ProposerSet{initial};
}

ProposerSet active_set(const RoundSchedule& schedule, const ProposerAtHeight& proposer_at, std::int64_t round)
{
   const Height cutoff = schedule.cutoff_height(round);
   std::map<ProposerId, Weight> members(schedule.initial.begin(), schedule.initial.end());
   std::uint64_t epoch = 0;
   for (const auto& change : schedule.changes) {
      if (change.height > cutoff)
         continue;
      if (change.via && proposer_at(change.height) != change.via)
         continue;
      ++epoch;
      if (change.kind == ChangeKind::join)
         members[change.proposer] = change.weight;
      else
         members.erase(change.proposer);
   }
   if (schedule.uniform_weights) {
      std::vector<ProposerId> ids;
      for (const auto& [id, w] : members)
         ids.push_back(id);
      return ProposerSet::uniform(std::move(ids), epoch);
   }
   return ProposerSet{{members.begin(), members.end()}, epoch};
}

ProposerSet active_set(const RoundSchedule& schedule, const BlockTree& tree, BlockId tip, std::int64_t round)
{
   return active_set(
       schedule,
       [&](Height h) -> std::optional<ProposerId> { return tree.block(tree.ancestor_at(tip, h)).proposer; },
       round);
}

std::vector<ProposerId> round_permutation(const RoundSchedule& schedule, const ProposerSet& set,
                                          std::int64_t time_round)
{
   std::vector<ProposerId> order(set.members().begin(), set.members().end());
   if (auto it = schedule.permutation_overrides.find(time_round); it != schedule.permutation_overrides.end()) {
      std::vector<ProposerId> forced;
      for (auto id : it->second) {
         if (set.contains(id) && std::find(forced.begin(), forced.end(), id) == forced.end())
            forced.push_back(id);
      }
      for (auto id : order) {
         if (std::find(forced.begin(), forced.end(), id) == forced.end())
            forced.push_back(id);
      }
      return forced;
   }
   std::mt19937_64 rng{splitmix(schedule.seed ^ splitmix(static_cast<std::uint64_t>(time_round)))};
   for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[rng() % i]);
   return order;
}

ProposerId slot_proposer(const RoundSchedule& schedule, const ProposerSet& set, std::int64_t slot)
{
   const auto order = round_permutation(schedule, set, slot / schedule.round_length);
   return order[static_cast<std::size_t>(slot % schedule.round_length) % order.size()];
}

ProposerId SlotAssigner::owner(const std::shared_ptr<const ProposerSet>& set, std::int64_t slot)
{
   const std::int64_t time_round = slot / schedule_->round_length;
   auto key = std::make_pair(set.get(), time_round);
   auto it = cache_.find(key);
   if (it == cache_.end()) {
      if (cache_.size() > 64)
         cache_.clear();
      it = cache_.emplace(key, std::make_pair(set, round_permutation(*schedule_, *set, time_round))).first;
   }
   const auto& order = it->second.second;
   return order[static_cast<std::size_t>(slot % schedule_->round_length) % order.size()];
}

Weight honest_overlap(std::span<const ProposerSet> sets, const std::unordered_set<ProposerId>& honest)
{
   if (sets.empty())
      throw std::invalid_argument("honest_overlap needs at least one set");
   std::vector<ProposerId> common;
   for (auto id : sets.front().members()) {
      if (!honest.contains(id))
         continue;
      if (std::all_of(sets.begin(), sets.end(), [&](const ProposerSet& s) { return s.contains(id); }))
         common.push_back(id);
   }
   Weight best = sets.front().total(common);
   for (const auto& s : sets)
      best = std::min(best, s.total(common));
   return best;
}

Weight honest_change(const ProposerSet& from, const ProposerSet& to, const std::unordered_set<ProposerId>& honest)
{
   std::vector<ProposerId> left;
   std::vector<ProposerId> joined;
   for (auto id : from.members()) {
      if (honest.contains(id) && !to.contains(id))
         left.push_back(id);
   }
   for (auto id : to.members()) {
      if (honest.contains(id) && !from.contains(id))
         joined.push_back(id);
   }
   return std::max(from.total(left), to.total(joined));
}

}  // namespace lbft
