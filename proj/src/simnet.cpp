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

#include "lbft/simnet.hpp"

#include "lbft/consensus.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <unordered_map>

namespace lbft {

namespace {

std::uint64_t mix(std::uint64_t x)
{
   x += 0x9e3779b97f4a7c15ULL;
   x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
   x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
   return x ^ (x >> 31);
}

}  // namespace

Network::Network(const Scenario& scenario, std::uint64_t seed)
    : scenario_{&scenario}, rng_{mix(seed ^ 0x6e6574776f726bULL)}
{
}

std::int64_t Network::uniform(std::int64_t lo, std::int64_t hi)
{
   if (hi <= lo)
      return lo;
   return lo + static_cast<std::int64_t>(rng_() % static_cast<std::uint64_t>(hi - lo + 1));
}

std::int64_t Network::delivery_time(std::int64_t now, ProposerId from, ProposerId to)
{
   const auto& s = *scenario_;
   if (now >= s.gst)
      return now + uniform(0, s.delta);
   const int gf = s.group_of(from);
   const int gt = s.group_of(to);
   const bool cut = gf >= 0 && gt >= 0 && gf != gt;
   const auto& p = s.drop_rate;
   const bool dropped = cut || (p.num() > 0 && static_cast<std::int64_t>(rng_() % static_cast<std::uint64_t>(p.den())) < p.num());
   if (dropped)
      return s.gst + uniform(0, s.delta);
   const std::int64_t max_delay = s.max_pre_gst_delay > 0 ? s.max_pre_gst_delay : s.gst - now;
   return std::min(now + uniform(0, max_delay), s.gst + s.delta);
}

namespace {

struct Event {
   std::int64_t time;
   std::uint64_t seq;
   bool is_block;
   std::uint32_t recipient;
   std::uint32_t payload;

   bool operator>(const Event& o) const { return std::tie(time, seq) > std::tie(o.time, o.seq); }
};

struct View {
   std::vector<std::uint8_t> known;
   std::vector<std::uint64_t> arrival;
   std::uint64_t next_arrival = 1;
   std::unordered_map<std::uint32_t, std::vector<BlockId>> orphans;
   BlockId tip = genesis_id;
   ForkKey key;
   FinalityTracker finals;
   PrecommitInbox inbox;
   std::vector<std::uint8_t> msg_seen;
   std::vector<std::uint32_t> pending;
   std::uint64_t digest = 0;
   std::uint64_t count = 1;
   Height max_proposed = 0;
   Height approved = 0;
};

using Audience = std::function<bool(ProposerId)>;

class Simulation {
public:
   explicit Simulation(const Scenario& scenario)
       : sc_{scenario},
         cs_{scenario.schedule, scenario.universe()},
         net_{scenario, scenario.seed},
         slots_{cs_.schedule()},
         m_{scenario.schedule.round_length}
   {
      trace_.scenario = scenario;
      const auto n = scenario.universe();
      behavior_.resize(n);
      views_.resize(n);
      for (std::uint32_t i = 0; i < n; ++i) {
         const ProposerId p{i};
         behavior_[i] = scenario.behavior(p);
         views_[i].known.assign(1, 1);
         views_[i].arrival.assign(1, 0);
         views_[i].inbox = PrecommitInbox(n);
         views_[i].key = ForkKey{0, 0, 0, genesis_id};
         if (behavior_[i] == Behavior::honest)
            honest_.push_back(p);
      }
      for (const auto& group : scenario.partition) {
         ProposerId rep = group.front();
         for (auto id : group)
            if (id.value < n && behavior_[id.value] == Behavior::honest) {
               rep = id;
               break;
            }
         reps_.push_back(rep);
      }
   }

   Trace run()
   {
      const std::int64_t slot_ticks = sc_.slot_ticks();
      const std::int64_t cap = sc_.tick_cap();
      bool converged = sc_.gst == 0;
      for (std::int64_t s = 0;; ++s) {
         const std::int64_t t = s * slot_ticks;
         drain(t);
         now_ = t;
         if (!converged && t >= sc_.gst + 2 * sc_.delta) {
            converged = true;
            trace_.convergence_height = max_honest_height();
         }
         if (t >= sc_.gst + 2 * sc_.delta)
            check_uniform();
         slot_start(s);
         if ((t >= sc_.gst && min_honest_height() >= sc_.stop_height) || t >= cap)
            break;
      }
      trace_.end_time = now_;
      return std::move(trace_);
   }

private:
   bool crashed(ProposerId p) const { return behavior_[p.value] == Behavior::crashed; }
   bool honest(ProposerId p) const { return behavior_[p.value] == Behavior::honest; }
   const BlockTree& tree() const { return cs_.tree(); }

   Height min_honest_height() const
   {
      Height h = -1;
      for (auto p : honest_)
         h = h < 0 ? tree().height(views_[p.value].tip) : std::min(h, tree().height(views_[p.value].tip));
      return h < 0 ? max_honest_height() : h;
   }

   Height max_honest_height() const
   {
      Height h = 0;
      const bool any = !honest_.empty();
      for (std::uint32_t i = 0; i < views_.size(); ++i)
         if ((any && honest(ProposerId{i})) || (!any && !crashed(ProposerId{i})))
            h = std::max(h, tree().height(views_[i].tip));
      return h;
   }

   void drain(std::int64_t until)
   {
      while (!events_.empty() && events_.top().time <= until) {
         const Event e = events_.top();
         events_.pop();
         now_ = e.time;
         if (e.is_block)
            accept_block(ProposerId{e.recipient}, BlockId{e.payload});
         else
            receive_msg(ProposerId{e.recipient}, e.payload);
      }
   }

   void check_uniform()
   {
      if (honest_.size() < 2)
         return;
      const auto& first = views_[honest_.front().value];
      for (auto p : honest_) {
         const auto& v = views_[p.value];
         if (v.digest != first.digest || v.count != first.count) {
            ++trace_.sync_violations;
            return;
         }
      }
   }

   // Delivery -----------------------------------------------------------

   std::int64_t late_time()
   {
      // Messages an adversary holds back still reach everyone once the
      // network is synchronous.
      return net_.delivery_time(std::max(now_, sc_.gst), ProposerId{0}, ProposerId{0});
   }

   void schedule(std::int64_t time, bool is_block, ProposerId to, std::uint32_t payload)
   {
      events_.push(Event{time, seq_++, is_block, to.value, payload});
   }

   void send(ProposerId from, bool is_block, std::uint32_t payload, const Audience& audience = {})
   {
      for (std::uint32_t i = 0; i < views_.size(); ++i) {
         const ProposerId to{i};
         if (to == from || crashed(to))
            continue;
         const bool direct = !audience || audience(to);
         schedule(direct ? net_.delivery_time(now_, from, to) : late_time(), is_block, to, payload);
      }
      if (is_block)
         accept_block(from, BlockId{payload});
      else
         receive_msg(from, payload);
   }

   // Block handling -----------------------------------------------------

   Height quorum_height(BlockId b) const
   {
      return sc_.mode == Mode::lisk ? cs_.prevoted_height(b, true) : cs_.tally(b).max_prevoted_height();
   }

   void accept_block(ProposerId q, BlockId b)
   {
      auto& v = views_[q.value];
      if (v.known.size() <= b.value) {
         v.known.resize(tree().size(), 0);
         v.arrival.resize(tree().size(), 0);
      }
      if (v.known[b.value])
         return;
      const BlockId parent = *tree().block(b).parent;
      if (!v.known[parent.value]) {
         v.orphans[parent.value].push_back(b);
         return;
      }
      std::vector<BlockId> stack{b};
      while (!stack.empty()) {
         const BlockId x = stack.back();
         stack.pop_back();
         if (v.known[x.value])
            continue;
         v.known[x.value] = 1;
         v.arrival[x.value] = v.next_arrival++;
         v.digest ^= mix(x.value);
         ++v.count;
         on_new_block(q, x);
         if (auto it = v.orphans.find(x.value); it != v.orphans.end()) {
            stack.insert(stack.end(), it->second.begin(), it->second.end());
            v.orphans.erase(it);
         }
      }
   }

   void on_new_block(ProposerId q, BlockId x)
   {
      auto& v = views_[q.value];
      const ForkKey key{quorum_height(x), tree().height(x), v.arrival[x.value], x};
      if (key.beats(v.key)) {
         v.tip = x;
         v.key = key;
         on_tip_change(q);
      }
      if (sc_.mode == Mode::general) {
         if (v.inbox.exceeds(x, sc_.threshold(q)))
            finalize(q, x);
         if (behavior_[q.value] == Behavior::equivocate)
            send_approve(q, x, tree().height(x) - 1, {});
      }
   }

   void on_tip_change(ProposerId q)
   {
      auto& v = views_[q.value];
      const Height h = tree().height(v.tip);
      if (honest(q))
         trace_.tips.push_back(TipEvent{now_, q, v.tip, h});
      if (sc_.mode == Mode::lisk) {
         const Height fh = cs_.finalized_height(v.tip, two_thirds);
         if (fh > 0)
            finalize(q, tree().ancestor_at(v.tip, fh));
         return;
      }
      const auto b = behavior_[q.value];
      if ((b == Behavior::honest || b == Behavior::withhold || b == Behavior::understate) && h > v.approved) {
         const auto& info = cs_.round_info(v.tip);
         const Height h0 = info.h0(q, m_);
         const Height k = b == Behavior::understate ? 0 : std::max(v.approved, h0 - 1);
         v.approved = h;
         send_approve(q, v.tip, k, {});
      }
      // Split attackers approve every partition branch they follow.
      for (std::size_t g = 0; g < reps_.size(); ++g) {
         if (reps_[g] != q)
            continue;
         for (std::uint32_t i = 0; i < views_.size(); ++i) {
            if (behavior_[i] != Behavior::split)
               continue;
            auto& approved = split_approved_[{i, static_cast<int>(g)}];
            if (h <= approved)
               continue;
            const Height k = approved;
            approved = h;
            send_approve(ProposerId{i}, v.tip, k, group_audience(static_cast<int>(g)));
         }
      }
   }

   void finalize(ProposerId q, BlockId b)
   {
      auto& v = views_[q.value];
      if (v.finals.finalize(tree(), b) && honest(q))
         trace_.finals.push_back(FinalEvent{now_, q, b, tree().height(b)});
   }

   // Messages -----------------------------------------------------------

   void send_approve(ProposerId author, BlockId context, Height k, const Audience& audience)
   {
      if (k < 0 || k >= tree().height(context))
         return;
      const Approve a{k, cs_.tally(context).max_prevoted_height(), context, author};
      MessageRecord m;
      m.id = static_cast<std::uint32_t>(trace_.messages.size());
      m.author = author;
      m.time = now_;
      m.approve = a;
      m.votes = expand_approve(a, tree(), cs_.tally(context));
      trace_.messages.push_back(std::move(m));
      included_in_.emplace_back();
      send(author, false, trace_.messages.back().id, audience);
   }

   void receive_msg(ProposerId q, std::uint32_t id)
   {
      auto& v = views_[q.value];
      if (v.msg_seen.size() <= id)
         v.msg_seen.resize(trace_.messages.size(), 0);
      if (v.msg_seen[id])
         return;
      v.msg_seen[id] = 1;
      v.pending.push_back(id);
      const auto& m = trace_.messages[id];
      const auto tau = sc_.threshold(q);
      for (const auto& pc : m.votes.precommits) {
         if (!v.inbox.add(pc.target, pc.author, *cs_.round_info(pc.target).set))
            continue;
         if (pc.target.value < v.known.size() && v.known[pc.target.value] && v.inbox.exceeds(pc.target, tau))
            finalize(q, pc.target);
      }
   }

   // Proposals ----------------------------------------------------------

   Audience group_audience(int g) const
   {
      return [this, g](ProposerId to) { return sc_.group_of(to) == g; };
   }

   std::vector<std::uint32_t> take_pending(ProposerId p, BlockId parent)
   {
      auto& v = views_[p.value];
      const Height hp = tree().height(parent);
      std::vector<std::uint32_t> take;
      std::vector<std::uint32_t> keep;
      for (auto id : v.pending) {
         const BlockId ctx = trace_.messages[id].approve ? trace_.messages[id].approve->context : parent;
         const bool on_branch = tree().on_branch(ctx, parent);
         const bool included = std::any_of(included_in_[id].begin(), included_in_[id].end(),
                                           [&](BlockId b) { return tree().on_branch(b, parent); });
         if (on_branch && !included)
            take.push_back(id);
         else if (!included && (on_branch || tree().height(ctx) + 2 * m_ > hp))
            keep.push_back(id);
      }
      // Messages land on other branches too, so the proposer keeps them.
      keep.insert(keep.end(), take.begin(), take.end());
      std::sort(keep.begin(), keep.end());
      v.pending = std::move(keep);
      std::sort(take.begin(), take.end());
      return take;
   }

   BlockId build(ProposerId p, BlockId parent, std::int64_t slot, std::optional<Height> h_previous)
   {
      Block b{cs_.next_id(), parent, tree().height(parent) + 1, p, slot, std::nullopt};
      std::vector<std::uint32_t> msgs;
      std::vector<const MessageRecord*> ptrs;
      if (sc_.mode == Mode::lisk) {
         const auto info = cs_.round_info_for_child(parent);
         DelegateState state{p, info->h0(p, m_), h_previous.value_or(views_[p.value].max_proposed)};
         b.header = make_header(state, cs_.tally(parent));
      } else {
         msgs = take_pending(p, parent);
         for (auto id : msgs)
            ptrs.push_back(&trace_.messages[id]);
      }
      auto votes = block_votes(cs_, sc_, b, ptrs);
      cs_.add_block(b, std::move(votes));
      for (auto id : msgs)
         included_in_[id].push_back(b.id);
      trace_.blocks.push_back(BlockRecord{b, now_, std::move(msgs)});
      return b.id;
   }

   void note_proposed(ProposerId p, BlockId b)
   {
      auto& v = views_[p.value];
      v.max_proposed = std::max(v.max_proposed, tree().height(b));
   }

   void slot_start(std::int64_t s)
   {
      if (auto range = withheld_.equal_range(s); range.first != range.second) {
         std::vector<std::pair<ProposerId, BlockId>> due;
         for (auto it = range.first; it != range.second; ++it)
            due.push_back(it->second);
         withheld_.erase(range.first, range.second);
         for (auto [p, b] : due)
            send(p, true, b.value);
      }

      std::map<BlockId, ProposerId> owners;
      auto owner_of = [&](BlockId tip) {
         auto it = owners.find(tip);
         if (it == owners.end())
            it = owners.emplace(tip, slots_.owner(cs_.round_info_for_child(tip)->set, s)).first;
         return it->second;
      };

      for (std::uint32_t i = 0; i < views_.size(); ++i) {
         const ProposerId p{i};
         const auto b = behavior_[i];
         if (b == Behavior::crashed)
            continue;
         if (b == Behavior::split) {
            for (std::size_t g = 0; g < reps_.size(); ++g) {
               const BlockId tip = views_[reps_[g].value].tip;
               if (owner_of(tip) == p)
                  propose_split(p, static_cast<int>(g), tip, s);
            }
            continue;
         }
         const BlockId tip = views_[i].tip;
         if (owner_of(tip) != p)
            continue;
         switch (b) {
         case Behavior::honest:
            propose(p, tip, s, std::nullopt, false);
            break;
         case Behavior::understate:
            propose(p, tip, s, sc_.mode == Mode::lisk ? std::optional<Height>{0} : std::nullopt, false);
            break;
         case Behavior::withhold:
            propose(p, tip, s, std::nullopt, true);
            break;
         case Behavior::equivocate:
            propose_equivocate(p, tip, s);
            break;
         default:
            break;
         }
      }
   }

   void propose(ProposerId p, BlockId tip, std::int64_t s, std::optional<Height> h_previous, bool hold)
   {
      const BlockId b = build(p, tip, s, h_previous);
      note_proposed(p, b);
      if (!hold) {
         send(p, true, b.value);
         return;
      }
      accept_block(p, b);
      withheld_.emplace(s + std::max<std::int64_t>(sc_.withhold_slots, 1), std::make_pair(p, b));
   }

   void propose_equivocate(ProposerId p, BlockId tip, std::int64_t s)
   {
      const BlockId other_parent = tip == genesis_id ? genesis_id : *tree().block(tip).parent;
      const BlockId a = build(p, tip, s, std::nullopt);
      if (cs_.round_info_for_child(other_parent)->h0(p, m_) < 0) {
         note_proposed(p, a);
         send(p, true, a.value);
         return;
      }
      const BlockId b = build(p, other_parent, s, std::nullopt);
      note_proposed(p, a);
      note_proposed(p, b);
      send(p, true, a.value, [](ProposerId to) { return to.value % 2 == 0; });
      send(p, true, b.value, [](ProposerId to) { return to.value % 2 == 1; });
   }

   void propose_split(ProposerId p, int g, BlockId tip, std::int64_t s)
   {
      auto& h = split_max_[{p.value, g}];
      const BlockId b = build(p, tip, s, h);
      h = std::max(h, tree().height(b));
      note_proposed(p, b);
      send(p, true, b.value, group_audience(g));
   }

   const Scenario& sc_;
   ChainState cs_;
   Network net_;
   SlotAssigner slots_;
   Height m_;
   Trace trace_;
   std::vector<Behavior> behavior_;
   std::vector<View> views_;
   std::vector<ProposerId> honest_;
   std::vector<ProposerId> reps_;
   std::priority_queue<Event, std::vector<Event>, std::greater<Event>> events_;
   std::uint64_t seq_ = 0;
   std::int64_t now_ = 0;
   std::vector<std::vector<BlockId>> included_in_;
   std::map<std::pair<std::uint32_t, int>, Height> split_max_;
   std::map<std::pair<std::uint32_t, int>, Height> split_approved_;
   std::multimap<std::int64_t, std::pair<ProposerId, BlockId>> withheld_;
};

}  // namespace

Trace run(const Scenario& scenario)
{
   scenario.validate();
   Scenario s = scenario;
   s.schedule.seed = s.seed;
   Simulation sim(s);
   return sim.run();
}

}  // namespace lbft
