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

#include "lbft/trace.hpp"

#include "json.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace lbft {

using nlohmann::json;

VoteBatch block_votes(ChainState& state, const Scenario& scenario, const Block& block,
                      const std::vector<const MessageRecord*>& msgs)
{
   if (scenario.mode == Mode::lisk) {
      const auto info = state.round_info_for_child(*block.parent);
      const Height h0 = info->h0(*block.proposer, scenario.schedule.round_length);
      return expand_header(block, state.tally(*block.parent), h0, scenario.lisk);
   }
   VoteBatch out;
   for (const auto* m : msgs) {
      out.prevotes.insert(out.prevotes.end(), m->votes.prevotes.begin(), m->votes.prevotes.end());
      out.precommits.insert(out.precommits.end(), m->votes.precommits.begin(), m->votes.precommits.end());
   }
   return out;
}

ChainState replay(Trace& trace)
{
   ChainState state(trace.scenario.schedule, trace.scenario.universe());
   auto refresh = [&](MessageRecord& m) {
      if (m.approve)
         m.votes = expand_approve(*m.approve, state.tree(), state.tally(m.approve->context));
   };
   for (const auto& rec : trace.blocks) {
      if (rec.block.id != state.next_id())
         throw std::runtime_error("trace blocks out of order at id " + rec.block.id.str());
      std::vector<const MessageRecord*> msgs;
      for (auto id : rec.msgs) {
         if (id >= trace.messages.size())
            throw std::runtime_error("block " + rec.block.id.str() + " includes unknown message");
         refresh(trace.messages[id]);
         msgs.push_back(&trace.messages[id]);
      }
      state.add_block(rec.block, block_votes(state, trace.scenario, rec.block, msgs));
   }
   for (auto& m : trace.messages)
      refresh(m);
   return state;
}

namespace {

json votes_json(const std::vector<Prevote>& votes)
{
   json out = json::array();
   for (const auto& v : votes)
      out.push_back({v.target.value, v.context.value});
   return out;
}

template <typename Vote>
std::vector<Vote> votes_from(const json& j, ProposerId author)
{
   std::vector<Vote> out;
   for (const auto& pair : j)
      out.push_back(Vote{BlockId{pair.at(0).get<std::uint32_t>()}, BlockId{pair.at(1).get<std::uint32_t>()}, author});
   return out;
}

json precommits_json(const std::vector<Precommit>& votes)
{
   json out = json::array();
   for (const auto& v : votes)
      out.push_back({v.target.value, v.context.value});
   return out;
}

}  // namespace

void write_trace(std::ostream& out, const Trace& trace)
{
   const auto& s = trace.scenario;
   out << json{{"type", "scenario"}, {"text", format_scenario(s)}}.dump() << '\n';
   for (const auto& r : trace.blocks) {
      const auto& b = r.block;
      json j{{"type", "block"},
             {"id", b.id.value},
             {"parent", b.parent->value},
             {"height", b.height},
             {"proposer", b.proposer->value},
             {"slot", b.round_slot},
             {"time", r.time}};
      if (b.header)
         j["header"] = {b.header->h_previous, b.header->h_prevoted};
      if (!r.msgs.empty())
         j["msgs"] = r.msgs;
      out << j.dump() << '\n';
   }
   for (const auto& m : trace.messages) {
      json j{{"type", "msg"}, {"id", m.id}, {"author", m.author.value}, {"time", m.time}};
      if (m.approve) {
         j["k"] = m.approve->k;
         j["p"] = m.approve->p;
         j["context"] = m.approve->context.value;
      } else {
         j["prevotes"] = votes_json(m.votes.prevotes);
         j["precommits"] = precommits_json(m.votes.precommits);
      }
      out << j.dump() << '\n';
   }
   for (const auto& t : trace.tips)
      out << json{{"type", "tip"}, {"time", t.time}, {"proposer", t.proposer.value}, {"block", t.block.value},
                  {"height", t.height}}
                 .dump()
          << '\n';
   for (const auto& f : trace.finals)
      out << json{{"type", "final"}, {"time", f.time}, {"proposer", f.proposer.value}, {"block", f.block.value},
                  {"height", f.height}}
                 .dump()
          << '\n';
   out << json{{"type", "summary"},
               {"end_time", trace.end_time},
               {"convergence_height", trace.convergence_height},
               {"sync_violations", trace.sync_violations},
               {"blocks", trace.blocks.size()},
               {"messages", trace.messages.size()}}
              .dump()
       << '\n';
}

Trace read_trace(std::istream& in)
{
   Trace trace;
   bool have_scenario = false;
   bool have_summary = false;
   std::string line;
   std::size_t lineno = 0;
   while (std::getline(in, line)) {
      ++lineno;
      if (line.empty())
         continue;
      try {
         const json j = json::parse(line);
         const auto type = j.at("type").get<std::string>();
         if (type == "scenario") {
            trace.scenario = parse_scenario(j.at("text").get<std::string>());
            have_scenario = true;
         } else if (type == "block") {
            BlockRecord r;
            r.block.id = BlockId{j.at("id").get<std::uint32_t>()};
            r.block.parent = BlockId{j.at("parent").get<std::uint32_t>()};
            r.block.height = j.at("height").get<Height>();
            r.block.proposer = ProposerId{j.at("proposer").get<std::uint32_t>()};
            r.block.round_slot = j.at("slot").get<std::int64_t>();
            r.time = j.at("time").get<std::int64_t>();
            if (j.contains("header"))
               r.block.header = LiskHeader{j["header"].at(0).get<Height>(), j["header"].at(1).get<Height>()};
            if (j.contains("msgs"))
               r.msgs = j["msgs"].get<std::vector<std::uint32_t>>();
            trace.blocks.push_back(std::move(r));
         } else if (type == "msg") {
            MessageRecord m;
            m.id = j.at("id").get<std::uint32_t>();
            m.author = ProposerId{j.at("author").get<std::uint32_t>()};
            m.time = j.at("time").get<std::int64_t>();
            if (j.contains("context")) {
               m.approve = Approve{j.at("k").get<Height>(), j.at("p").get<Height>(),
                                   BlockId{j.at("context").get<std::uint32_t>()}, m.author};
            } else {
               m.votes.prevotes = votes_from<Prevote>(j.at("prevotes"), m.author);
               m.votes.precommits = votes_from<Precommit>(j.at("precommits"), m.author);
            }
            if (m.id != trace.messages.size())
               throw std::runtime_error("message ids out of order");
            trace.messages.push_back(std::move(m));
         } else if (type == "tip") {
            trace.tips.push_back(TipEvent{j.at("time").get<std::int64_t>(),
                                          ProposerId{j.at("proposer").get<std::uint32_t>()},
                                          BlockId{j.at("block").get<std::uint32_t>()}, j.at("height").get<Height>()});
         } else if (type == "final") {
            trace.finals.push_back(FinalEvent{j.at("time").get<std::int64_t>(),
                                              ProposerId{j.at("proposer").get<std::uint32_t>()},
                                              BlockId{j.at("block").get<std::uint32_t>()},
                                              j.at("height").get<Height>()});
         } else if (type == "summary") {
            trace.end_time = j.at("end_time").get<std::int64_t>();
            trace.convergence_height = j.at("convergence_height").get<Height>();
            trace.sync_violations = j.at("sync_violations").get<std::int64_t>();
            have_summary = true;
         } else {
            throw std::runtime_error("unknown record type '" + type + "'");
         }
      } catch (const std::exception& e) {
         throw std::runtime_error("trace line " + std::to_string(lineno) + ": " + e.what());
      }
   }
   if (!have_scenario)
      throw std::runtime_error("trace has no scenario record");
   if (!have_summary)
      throw std::runtime_error("trace has no summary record (truncated?)");
   return trace;
}

void save_trace(const std::string& path, const Trace& trace)
{
   std::ofstream out(path);
   if (!out)
      throw std::runtime_error("cannot write " + path);
   write_trace(out, trace);
}

Trace load_trace(const std::string& path)
{
   std::ifstream in(path);
   if (!in)
      throw std::runtime_error("cannot open " + path);
   return read_trace(in);
}

}  // namespace lbft
