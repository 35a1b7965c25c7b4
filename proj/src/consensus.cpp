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

#include "lbft/consensus.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace lbft {

std::string to_string(Rule rule)
{
   switch (rule) {
   case Rule::I:
      return "I";
   case Rule::II:
      return "II";
   case Rule::III:
      return "III";
   }
   return "?";
}

std::optional<RuleViolation> check_rule_I(const BlockTree& tree, std::span<const Prevote> history,
                                          const Prevote& next)
{
   const Height h = tree.height(next.target);
   for (const auto& prior : history) {
      if (prior.author == next.author && prior.target != next.target && tree.height(prior.target) == h)
         return RuleViolation{Rule::I, next.author, next.target, prior.target,
                              "two prevotes at height " + std::to_string(h)};
   }
   return std::nullopt;
}

std::optional<RuleViolation> check_rule_II(const BlockTree& tree, const ChainTally& at_context, const Precommit& pc,
                                           std::span<const Prevote> carried)
{
   const Height h = tree.height(pc.target);
   if (h > at_context.tip_height() || at_context.block_at(h) != pc.target)
      return RuleViolation{Rule::II, pc.author, pc.target, pc.target, "target not on the context branch"};

   auto carried_for = [&](ProposerId author) {
      return std::any_of(carried.begin(), carried.end(),
                         [&](const Prevote& v) { return v.target == pc.target && v.author == author; });
   };

   if (!at_context.has_prevote(h, pc.author) && !carried_for(pc.author))
      return RuleViolation{Rule::II, pc.author, pc.target, pc.target, "own prevote missing from branch"};

   Weight w = at_context.prevote_weight(h);
   std::set<ProposerId> extra;
   for (const auto& v : carried) {
      if (v.target == pc.target && !at_context.has_prevote(h, v.author) && extra.insert(v.author).second)
         w += at_context.set_at(h).weight(v.author);
   }
   if (!(w > two_thirds))
      return RuleViolation{Rule::II, pc.author, pc.target, pc.target,
                           "prevote weight " + w.str() + " not above 2/3"};
   return std::nullopt;
}

std::optional<RuleViolation> check_rule_III(const BlockTree& tree, std::span<const Precommit> history,
                                            const Prevote& next, const ChainTally& at_next_context)
{
   const Height h_next = tree.height(next.target);
   const Height justified = at_next_context.max_prevoted_height();
   for (const auto& pc : history) {
      if (pc.author != next.author)
         continue;
      const Height h = tree.height(pc.target);
      if (h >= h_next || justified >= h || tree.is_ancestor(pc.target, next.target))
         continue;
      return RuleViolation{Rule::III, next.author, next.target, pc.target,
                           "prevote leaves precommitted block at height " + std::to_string(h) +
                               " without justification"};
   }
   return std::nullopt;
}

std::vector<RuleViolation> check_history(const BlockTree& tree, const TallyLookup& tally_at,
                                         std::span<const VoteBatch> batches)
{
   std::vector<RuleViolation> out;

   std::map<Height, BlockId> prevoted_at;
   std::set<std::pair<Height, BlockId>> reported_I;
   for (const auto& batch : batches) {
      for (const auto& v : batch.prevotes) {
         const Height h = tree.height(v.target);
         auto [it, inserted] = prevoted_at.emplace(h, v.target);
         if (!inserted && it->second != v.target && reported_I.emplace(h, v.target).second)
            out.push_back(RuleViolation{Rule::I, v.author, v.target, it->second,
                                        "two prevotes at height " + std::to_string(h)});
      }
   }

   std::vector<std::pair<Height, Precommit>> precommits;
   for (const auto& batch : batches) {
      for (const auto& pc : batch.precommits) {
         if (auto v = check_rule_II(tree, tally_at(pc.context), pc, batch.prevotes))
            out.push_back(*v);
         precommits.emplace_back(tree.height(pc.target), pc);
      }
   }
   std::sort(precommits.begin(), precommits.end(),
             [](const auto& a, const auto& b) { return a.first < b.first; });

   for (const auto& batch : batches) {
      for (const auto& v : batch.prevotes) {
         const Height h_next = tree.height(v.target);
         const Height justified = tally_at(v.context).max_prevoted_height();
         auto lo = std::upper_bound(precommits.begin(), precommits.end(), justified,
                                    [](Height x, const auto& e) { return x < e.first; });
         for (auto it = lo; it != precommits.end() && it->first < h_next; ++it) {
            if (!tree.is_ancestor(it->second.target, v.target))
               out.push_back(RuleViolation{Rule::III, v.author, v.target, it->second.target,
                                           "prevote leaves precommitted block at height " +
                                               std::to_string(it->first) + " without justification"});
         }
      }
   }
   return out;
}

bool PrecommitInbox::add(BlockId target, ProposerId author, const ProposerSet& set)
{
   auto& e = entries_[target];
   if (e.bits.empty()) {
      e.bits.assign(std::max<std::size_t>(words_, author.value / 64 + 1), 0);
      e.set = &set;
   }
   if (author.value / 64 >= e.bits.size())
      e.bits.resize(author.value / 64 + 1, 0);
   auto& w = e.bits[author.value / 64];
   const auto mask = std::uint64_t{1} << (author.value % 64);
   if (w & mask)
      return false;
   w |= mask;
   e.weight += e.set->scaled_weight(author);
   return true;
}

Weight PrecommitInbox::weight(BlockId target) const
{
   auto it = entries_.find(target);
   if (it == entries_.end())
      return Weight{0};
   return Weight{it->second.weight, it->second.set->denominator()};
}

bool PrecommitInbox::exceeds(BlockId target, const Rational& tau) const
{
   auto it = entries_.find(target);
   return it != entries_.end() && it->second.set->exceeds(it->second.weight, tau);
}

std::vector<BlockId> decide(const BlockTree& tree, const PrecommitInbox& received, const Rational& tau)
{
   std::set<BlockId> final_blocks{genesis_id};
   for (const auto& b : tree.blocks()) {
      if (!received.exceeds(b.id, tau))
         continue;
      for (auto id : tree.branch_to(b.id))
         final_blocks.insert(id);
   }
   std::vector<BlockId> out(final_blocks.begin(), final_blocks.end());
   std::sort(out.begin(), out.end(), [&](BlockId a, BlockId b) {
      return std::make_pair(tree.height(a), a) < std::make_pair(tree.height(b), b);
   });
   return out;
}

bool FinalityTracker::finalize(const BlockTree& tree, BlockId block)
{
   for (auto tip : tips_) {
      if (tree.on_branch(block, tip))
         return false;
   }
   bool extended = false;
   for (auto& tip : tips_) {
      if (tree.is_ancestor(tip, block)) {
         tip = block;
         extended = true;
      }
   }
   if (!extended)
      tips_.push_back(block);
   std::sort(tips_.begin(), tips_.end());
   tips_.erase(std::unique(tips_.begin(), tips_.end()), tips_.end());
   height_ = std::max(height_, tree.height(block));
   return true;
}

bool FinalityTracker::is_final(const BlockTree& tree, BlockId block) const
{
   return std::any_of(tips_.begin(), tips_.end(), [&](BlockId tip) { return tree.on_branch(block, tip); });
}

bool ForkKey::beats(const ForkKey& other) const
{
   if (quorum_height != other.quorum_height)
      return quorum_height > other.quorum_height;
   if (height != other.height)
      return height > other.height;
   if (arrival != other.arrival)
      return arrival < other.arrival;
   return id < other.id;
}

BlockId fork_choice_longest_chain(const BlockTree& tree, const QuorumHeight& quorum_height)
{
   ForkKey best{quorum_height(genesis_id), 0, 0, genesis_id};
   for (const auto& b : tree.blocks()) {
      ForkKey key{quorum_height(b.id), b.height, tree.arrival_index(b.id), b.id};
      if (key.beats(best))
         best = key;
   }
   return best.id;
}

}  // namespace lbft
