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

#include "lbft/checkers.hpp"

#include "json.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace lbft {

using nlohmann::json;

SafetyResult check_safety(const Trace& trace, const BlockTree& tree)
{
   SafetyResult out;
   std::vector<BlockId> frontier;
   for (std::size_t i = 0; i < trace.finals.size(); ++i) {
      const auto& f = trace.finals[i];
      const bool conflict = std::any_of(frontier.begin(), frontier.end(),
                                        [&](BlockId t) { return tree.are_conflicting(t, f.block); });
      if (conflict) {
         for (std::size_t j = 0; j < i; ++j) {
            if (tree.are_conflicting(trace.finals[j].block, f.block)) {
               out.pass = false;
               out.witness = std::make_pair(trace.finals[j], f);
               return out;
            }
         }
      }
      if (std::any_of(frontier.begin(), frontier.end(), [&](BlockId t) { return tree.on_branch(f.block, t); }))
         continue;
      std::erase_if(frontier, [&](BlockId t) { return tree.is_ancestor(t, f.block); });
      frontier.push_back(f.block);
   }
   return out;
}

Height default_deadline(const Scenario& scenario)
{
   if (scenario.mode == Mode::lisk)
      return scenario.lisk.window - 1;
   return 3 * scenario.schedule.round_length - 1;
}

LivenessResult check_liveness(const Trace& trace, std::optional<Height> target, Height deadline)
{
   LivenessResult out;
   out.convergence = trace.convergence_height;
   out.deadline = deadline;
   out.target = target;

   // Per honest proposer, finals and tips merged by time with finals first
   // so that a decision triggered by a tip switch counts for that tip.
   struct Item {
      std::int64_t time;
      int kind;  // 0 final, 1 tip
      Height height;
   };
   std::map<ProposerId, std::vector<Item>> items;
   for (auto p : trace.scenario.all_proposers())
      if (trace.scenario.is_honest(p))
         items[p];
   for (const auto& f : trace.finals)
      items[f.proposer].push_back(Item{f.time, 0, f.height});
   for (const auto& t : trace.tips)
      items[t.proposer].push_back(Item{t.time, 1, t.height});

   auto fail = [&](ProposerId p, Height l, Height tip, std::int64_t time, std::string detail) {
      if (!out.pass)
         return;
      out.pass = false;
      out.proposer = p;
      out.unfinalized = l;
      out.tip_height = tip;
      out.time = time;
      out.detail = std::move(detail);
   };

   for (auto& [p, list] : items) {
      std::stable_sort(list.begin(), list.end(),
                       [](const Item& a, const Item& b) { return std::tie(a.time, a.kind) < std::tie(b.time, b.kind); });
      Height finalized = 0;
      bool reached_target = false;
      for (const auto& it : list) {
         if (it.kind == 0) {
            finalized = std::max(finalized, it.height);
            continue;
         }
         const Height l = it.height - 1 - deadline;
         if (l > out.convergence) {
            out.exercised = true;
            if (finalized < l)
               fail(p, l, it.height, it.time,
                    "height " + std::to_string(l) + " not finalized when tip reached " + std::to_string(it.height));
         }
         if (target && it.height >= *target + 1 + deadline && !reached_target) {
            reached_target = true;
            if (finalized < *target)
               fail(p, *target, it.height, it.time, "target height not finalized within deadline");
         }
      }
      if (target && !reached_target)
         fail(p, *target, 0, trace.end_time, "insufficient trace: tip never reached target + 1 + deadline");
   }
   return out;
}

namespace {

std::vector<EvidenceRecord> approve_evidence(const Trace& trace, const BlockTree& tree)
{
   std::map<ProposerId, std::vector<Approve>> by_author;
   for (const auto& m : trace.messages)
      if (m.approve)
         by_author[m.author].push_back(*m.approve);
   std::vector<EvidenceRecord> out;
   for (auto& [author, list] : by_author) {
      std::sort(list.begin(), list.end(), [&](const Approve& a, const Approve& b) {
         return std::make_tuple(a.k, a.p, tree.height(a.context), a.context) <
                std::make_tuple(b.k, b.p, tree.height(b.context), b.context);
      });
      list.erase(std::unique(list.begin(), list.end()), list.end());
      for (std::size_t i = 1; i < list.size(); ++i)
         if (auto v = check_monotonicity(tree, std::span<const Approve>(&list[i - 1], 1), list[i]))
            out.push_back(EvidenceRecord{author, std::nullopt, *v});
   }
   return out;
}

std::vector<ProposerId> sorted_unique(std::vector<ProposerId> ids)
{
   std::sort(ids.begin(), ids.end());
   ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
   return ids;
}

std::string id_list(const std::vector<ProposerId>& ids)
{
   std::string out;
   for (auto id : ids)
      out += (out.empty() ? "" : ",") + id.str();
   return out.empty() ? "-" : out;
}

}  // namespace

std::vector<EvidenceRecord> collect_evidence(const Trace& trace, const ChainState& state)
{
   if (trace.scenario.mode == Mode::general)
      return approve_evidence(trace, state.tree());
   std::vector<EvidenceRecord> out;
   for (auto& e : scan_tree(state.tree()))
      out.push_back(EvidenceRecord{e.author, e, std::nullopt});
   return out;
}

std::vector<RuleViolation> author_violations(const Trace& trace, const ChainState& state, ProposerId author)
{
   std::vector<VoteBatch> batches;
   if (trace.scenario.mode == Mode::lisk) {
      for (const auto& r : trace.blocks)
         if (r.block.proposer == author)
            batches.push_back(state.included_votes(r.block.id));
   } else {
      for (const auto& m : trace.messages)
         if (m.author == author)
            batches.push_back(m.votes);
   }
   if (batches.empty())
      return {};
   return check_history(state.tree(), [&](BlockId id) -> const ChainTally& { return state.tally(id); }, batches);
}

AccountabilityResult check_accountability(const Trace& trace, const ChainState& state)
{
   AccountabilityResult out;
   out.evidence = collect_evidence(trace, state);
   for (const auto& e : out.evidence)
      out.flagged.push_back(e.author);
   out.flagged = sorted_unique(out.flagged);
   for (auto p : out.flagged)
      if (trace.scenario.is_honest(p) || trace.scenario.behavior(p) == Behavior::crashed)
         out.wrongly_flagged.push_back(p);

   std::set<ProposerId> authors;
   for (const auto& r : trace.blocks)
      authors.insert(*r.block.proposer);
   for (const auto& m : trace.messages)
      authors.insert(m.author);
   for (auto p : authors) {
      auto v = author_violations(trace, state, p);
      if (v.empty())
         continue;
      out.violators.push_back(p);
      out.sample.push_back(v.front());
      if (!std::binary_search(out.flagged.begin(), out.flagged.end(), p))
         out.missed.push_back(p);
   }
   out.pass = out.wrongly_flagged.empty() && out.missed.empty();
   return out;
}

Verdict evaluate(const Trace& trace, const ChainState& state, const CheckOptions& options)
{
   Verdict v;
   v.which = options.which;
   const bool all = options.which == CheckSet::all;
   if (all || options.which == CheckSet::safety)
      v.safety = check_safety(trace, state.tree());
   if (all || options.which == CheckSet::liveness)
      v.liveness = check_liveness(trace, options.target, options.deadline.value_or(default_deadline(trace.scenario)));
   if (all || options.which == CheckSet::accountability)
      v.accountability = check_accountability(trace, state);
   return v;
}

int exit_code(const Verdict& v)
{
   if (!v.safety.pass)
      return 2;
   if (!v.liveness.pass)
      return 3;
   if (!v.accountability.pass)
      return 4;
   return 0;
}

std::string format_verdict(const Verdict& v, const Scenario& scenario)
{
   std::ostringstream out;
   const bool all = v.which == CheckSet::all;
   out << "mode: " << to_string(scenario.mode) << '\n';
   out << "seed: " << scenario.seed << '\n';
   const auto initial = scenario.schedule.initial_set();
   if (scenario.mode == Mode::lisk) {
      const auto n = static_cast<std::int64_t>(initial.size());
      out << "thresholds: prevote and precommit quorum above 2/3 of active weight";
      if (scenario.schedule.uniform_weights)
         out << " (" << (2 * n) / 3 + 1 << " of " << n << ")";
      out << '\n';
   } else {
      out << "thresholds: prevote quorum above 2/3; decision threshold default " << scenario.default_threshold.str();
      for (const auto& [id, tau] : scenario.thresholds)
         out << ", " << id.str() << '=' << tau.str();
      out << '\n';
   }
   if (all || v.which == CheckSet::safety) {
      out << "safety: " << (v.safety.pass ? "pass" : "fail") << '\n';
      if (v.safety.witness) {
         const auto& [a, b] = *v.safety.witness;
         out << "safety.witness: block " << a.block.str() << " (height " << a.height << ", decided by " << a.proposer.str()
             << " at " << a.time << ") conflicts with block " << b.block.str() << " (height " << b.height
             << ", decided by " << b.proposer.str() << " at " << b.time << ")\n";
      }
   }
   if (all || v.which == CheckSet::liveness) {
      const auto& l = v.liveness;
      out << "liveness: " << (l.pass ? "pass" : "fail") << '\n';
      out << "liveness.deadline_blocks: " << l.deadline << '\n';
      out << "liveness.convergence_height: " << l.convergence << '\n';
      if (l.target)
         out << "liveness.target_height: " << *l.target << '\n';
      out << "liveness.exercised: " << (l.exercised ? "yes" : "no") << '\n';
      if (!l.pass)
         out << "liveness.failure: proposer " << l.proposer->str() << ", " << l.detail << " (time " << l.time << ")\n";
   }
   if (all || v.which == CheckSet::accountability) {
      const auto& a = v.accountability;
      out << "accountability: " << (a.pass ? "pass" : "fail") << '\n';
      out << "accountability.evidence_records: " << a.evidence.size() << '\n';
      out << "accountability.flagged: " << id_list(a.flagged) << '\n';
      out << "accountability.wrongly_flagged: " << id_list(a.wrongly_flagged) << '\n';
      out << "accountability.rule_violators: " << id_list(a.violators) << '\n';
      out << "accountability.missed: " << id_list(a.missed) << '\n';
   }
   return out.str();
}

namespace {

json header_json(Height h, const LiskHeader& header)
{
   return json{{"height", h}, {"h_previous", header.h_previous}, {"h_prevoted", header.h_prevoted}};
}

json approve_json(const Approve& a)
{
   return json{{"k", a.k}, {"p", a.p}, {"context", a.context.value}};
}

Approve approve_from(const json& j, ProposerId author)
{
   return Approve{j.at("k").get<Height>(), j.at("p").get<Height>(), BlockId{j.at("context").get<std::uint32_t>()},
                  author};
}

}  // namespace

std::string evidence_json(const EvidenceRecord& e)
{
   json j{{"author", e.author.value}};
   if (e.headers) {
      const auto& h = *e.headers;
      j["kind"] = "contradicting_headers";
      j["block_a"] = h.block_a.value;
      j["block_b"] = h.block_b.value;
      j["clause"] = h.clause;
      j["order"] = to_string(h.inferred_order);
      j["a"] = header_json(h.height_a, h.header_a);
      j["b"] = header_json(h.height_b, h.header_b);
   } else if (e.approves) {
      j["kind"] = "monotonicity";
      j["clause"] = e.approves->clause;
      j["first"] = approve_json(e.approves->first);
      j["second"] = approve_json(e.approves->second);
   }
   return j.dump();
}

EvidenceRecord evidence_from_json(const std::string& line)
{
   const json j = json::parse(line);
   EvidenceRecord e;
   e.author = ProposerId{j.at("author").get<std::uint32_t>()};
   const auto kind = j.at("kind").get<std::string>();
   if (kind == "contradicting_headers") {
      Evidence h;
      h.author = e.author;
      h.block_a = BlockId{j.at("block_a").get<std::uint32_t>()};
      h.block_b = BlockId{j.at("block_b").get<std::uint32_t>()};
      h.clause = j.at("clause").get<std::string>();
      const auto order = j.at("order").get<std::string>();
      h.inferred_order = order == "a<b" ? Order::first_before_second
                         : order == "b<a" ? Order::second_before_first
                                          : Order::tie;
      h.height_a = j.at("a").at("height").get<Height>();
      h.header_a = LiskHeader{j["a"].at("h_previous").get<Height>(), j["a"].at("h_prevoted").get<Height>()};
      h.height_b = j.at("b").at("height").get<Height>();
      h.header_b = LiskHeader{j["b"].at("h_previous").get<Height>(), j["b"].at("h_prevoted").get<Height>()};
      e.headers = h;
   } else if (kind == "monotonicity") {
      e.approves = MonotonicityViolation{approve_from(j.at("first"), e.author), approve_from(j.at("second"), e.author),
                                         j.at("clause").get<std::string>()};
   } else {
      throw std::runtime_error("unknown evidence kind '" + kind + "'");
   }
   return e;
}

std::optional<std::string> tally_recount_mismatch(const ChainState& state)
{
   const auto& tree = state.tree();
   const auto& initial = state.tally(genesis_id).set_at(0);
   for (const auto& b : tree.blocks()) {
      const auto branch = tree.branch_to(b.id);
      const auto& tally = state.tally(b.id);
      std::vector<std::set<ProposerId>> pv(branch.size());
      std::vector<std::set<ProposerId>> pc(branch.size());
      pv[0].insert(initial.members().begin(), initial.members().end());
      for (std::size_t i = 1; i < branch.size(); ++i) {
         const auto& votes = state.included_votes(branch[i]);
         for (const auto& v : votes.prevotes)
            if (tree.on_branch(v.target, b.id))
               pv[static_cast<std::size_t>(tree.height(v.target))].insert(v.author);
         for (const auto& v : votes.precommits)
            if (tree.on_branch(v.target, b.id))
               pc[static_cast<std::size_t>(tree.height(v.target))].insert(v.author);
      }
      const std::string where = "block " + b.id.str();
      if (tally.tip_height() != b.height || tally.tip() != b.id)
         return where + ": tally does not end in the block";
      Height max_prevoted = 0;
      for (std::size_t h = 0; h < branch.size(); ++h) {
         const auto H = static_cast<Height>(h);
         if (tally.block_at(H) != branch[h])
            return where + ": wrong block at height " + std::to_string(h);
         if (!(tally.set_at(H) == *state.round_info(branch[h]).set))
            return where + ": wrong active set at height " + std::to_string(h);
         const auto& set = tally.set_at(H);
         Weight wp{0};
         Weight wc{0};
         for (auto p : pv[h])
            wp += set.weight(p);
         for (auto p : pc[h])
            wc += set.weight(p);
         if (tally.prevote_weight(H) != wp)
            return where + ": prevote weight at height " + std::to_string(h) + " is " + tally.prevote_weight(H).str() +
                   ", recount " + wp.str();
         if (tally.precommit_weight(H) != wc)
            return where + ": precommit weight at height " + std::to_string(h) + " is " +
                   tally.precommit_weight(H).str() + ", recount " + wc.str();
         const auto pvs = tally.prevoters(H);
         const auto pcs = tally.precommitters(H);
         if (!std::equal(pvs.begin(), pvs.end(), pv[h].begin(), pv[h].end()))
            return where + ": prevoter set differs at height " + std::to_string(h);
         if (!std::equal(pcs.begin(), pcs.end(), pc[h].begin(), pc[h].end()))
            return where + ": precommitter set differs at height " + std::to_string(h);
         if (wp > two_thirds)
            max_prevoted = H;
      }
      if (tally.max_prevoted_height() != max_prevoted)
         return where + ": max prevoted height " + std::to_string(tally.max_prevoted_height()) + ", recount " +
                std::to_string(max_prevoted);
   }
   return std::nullopt;
}

std::vector<Height> duplicate_quorum_heights(const ChainState& state)
{
   const auto& tree = state.tree();
   std::map<Height, std::set<BlockId>> quorum_blocks;
   for (const auto& b : tree.blocks()) {
      if (!tree.children(b.id).empty())
         continue;
      const auto& tally = state.tally(b.id);
      for (Height h = 1; h <= tally.tip_height(); ++h)
         if (tally.prevote_quorum(h))
            quorum_blocks[h].insert(tally.block_at(h));
   }
   std::vector<Height> out;
   for (const auto& [h, blocks] : quorum_blocks)
      if (blocks.size() > 1)
         out.push_back(h);
   return out;
}

Weight max_round_churn(const ChainState& state, BlockId tip, const std::unordered_set<ProposerId>& honest)
{
   Weight worst{0};
   const RoundInfo* prev = nullptr;
   for (auto id : state.tree().branch_to(tip)) {
      const auto& info = state.round_info(id);
      if (prev && prev->round != info.round)
         worst = std::max(worst, honest_change(*prev->set, *info.set, honest));
      prev = &info;
   }
   return worst;
}

}  // namespace lbft
