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

#include "lbft/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace lbft {

namespace {

const std::map<std::string, Behavior> behavior_names{
    {"honest", Behavior::honest},         {"crashed", Behavior::crashed},   {"equivocate", Behavior::equivocate},
    {"understate", Behavior::understate}, {"withhold", Behavior::withhold}, {"split", Behavior::split},
};

std::string compress_ids(std::vector<ProposerId> ids)
{
   std::sort(ids.begin(), ids.end());
   std::ostringstream out;
   for (std::size_t i = 0; i < ids.size();) {
      std::size_t j = i;
      while (j + 1 < ids.size() && ids[j + 1].value == ids[j].value + 1)
         ++j;
      if (i > 0)
         out << ',';
      out << ids[i].value;
      if (j > i)
         out << '-' << ids[j].value;
      i = j + 1;
   }
   return out.str();
}

std::int64_t to_int(const std::string& s)
{
   std::size_t pos = 0;
   std::int64_t v = 0;
   try {
      v = std::stoll(s, &pos);
   } catch (const std::exception&) {
      throw InvalidScenario("expected an integer, got '" + s + "'");
   }
   if (pos != s.size())
      throw InvalidScenario("expected an integer, got '" + s + "'");
   return v;
}

std::int64_t to_nonneg(const std::string& s)
{
   auto v = to_int(s);
   if (v < 0)
      throw InvalidScenario("expected a non-negative integer, got '" + s + "'");
   return v;
}

Rational to_rational(const std::string& s)
{
   try {
      return Rational::parse(s);
   } catch (const std::exception& e) {
      throw InvalidScenario("bad rational '" + s + "': " + e.what());
   }
}

}  // namespace

std::string to_string(Mode mode)
{
   return mode == Mode::lisk ? "lisk" : "general";
}

std::string to_string(Behavior behavior)
{
   for (const auto& [name, b] : behavior_names)
      if (b == behavior)
         return name;
   return "?";
}

std::vector<ProposerId> parse_id_list(const std::string& text)
{
   std::vector<ProposerId> out;
   std::stringstream in(text);
   std::string part;
   while (std::getline(in, part, ',')) {
      if (part.empty())
         throw InvalidScenario("empty entry in id list '" + text + "'");
      const auto dash = part.find('-');
      if (dash == std::string::npos) {
         out.push_back(ProposerId{static_cast<std::uint32_t>(to_nonneg(part))});
         continue;
      }
      const auto lo = to_nonneg(part.substr(0, dash));
      const auto hi = to_nonneg(part.substr(dash + 1));
      if (hi < lo)
         throw InvalidScenario("descending range '" + part + "'");
      for (auto v = lo; v <= hi; ++v)
         out.push_back(ProposerId{static_cast<std::uint32_t>(v)});
   }
   return out;
}

std::int64_t Scenario::tick_cap() const
{
   if (stop_ticks > 0)
      return stop_ticks;
   return gst + 8 * (stop_height + 2 * schedule.round_length) * slot_ticks();
}

Behavior Scenario::behavior(ProposerId id) const
{
   auto it = behaviors.find(id);
   return it == behaviors.end() ? Behavior::honest : it->second;
}

Rational Scenario::threshold(ProposerId id) const
{
   auto it = thresholds.find(id);
   return it == thresholds.end() ? default_threshold : it->second;
}

std::vector<ProposerId> Scenario::all_proposers() const
{
   std::set<ProposerId> ids;
   for (const auto& [id, w] : schedule.initial)
      ids.insert(id);
   for (const auto& c : schedule.changes)
      ids.insert(c.proposer);
   return {ids.begin(), ids.end()};
}

std::size_t Scenario::universe() const
{
   auto ids = all_proposers();
   return ids.empty() ? 0 : ids.back().value + 1;
}

int Scenario::group_of(ProposerId id) const
{
   for (std::size_t g = 0; g < partition.size(); ++g)
      if (std::find(partition[g].begin(), partition[g].end(), id) != partition[g].end())
         return static_cast<int>(g);
   return -1;
}

void Scenario::validate() const
{
   if (schedule.initial.empty())
      throw InvalidScenario("no proposers declared");
   if (schedule.round_length < 1)
      throw InvalidScenario("round_length must be positive");
   if (schedule.delay_rounds < 0)
      throw InvalidScenario("delay_rounds must be non-negative");
   if (lisk.window < 1)
      throw InvalidScenario("window must be positive");
   if (delta < 0 || gst < 0)
      throw InvalidScenario("delta and gst must be non-negative");
   if (slot_duration != 0 && slot_duration < 2 * delta + 1)
      throw InvalidScenario("slot_duration must be at least 2*delta+1");
   if (stop_height < 1 && stop_ticks < 1)
      throw InvalidScenario("need stop_height or stop_ticks");
   if (drop_rate < Rational{0} || drop_rate > Rational{1})
      throw InvalidScenario("drop_rate outside [0,1]");

   auto check_tau = [&](const Rational& tau) {
      if (tau <= one_third || tau > Rational{1})
         throw InvalidScenario("threshold " + tau.str() + " outside (1/3,1]");
      if (mode == Mode::lisk && tau != two_thirds)
         throw InvalidScenario("lisk mode fixes every threshold to the least count above 2/3");
   };
   check_tau(default_threshold);
   for (const auto& [id, tau] : thresholds)
      check_tau(tau);

   try {
      (void)schedule.initial_set();
      // Materialize every prefix of the change script to catch bad weights.
      RoundSchedule all = schedule;
      for (auto& c : all.changes)
         c.via.reset();
      for (std::size_t i = 0; i < all.changes.size(); ++i) {
         if (i + 1 < all.changes.size() && all.changes[i + 1].height == all.changes[i].height)
            continue;
         RoundSchedule prefix = all;
         prefix.changes.resize(i + 1);
         prefix.delay_rounds = 0;
         (void)active_set(prefix, [](Height) { return std::optional<ProposerId>{}; },
                          prefix.round_of(all.changes[i].height) + 1);
      }
   } catch (const std::invalid_argument& e) {
      throw InvalidScenario(e.what());
   }

   std::set<ProposerId> seen;
   for (const auto& group : partition)
      for (auto id : group)
         if (!seen.insert(id).second)
            throw InvalidScenario("proposer " + id.str() + " in two partition groups");
   bool any_split = false;
   for (const auto& [id, b] : behaviors)
      any_split = any_split || b == Behavior::split;
   if (any_split && partition.size() < 2)
      throw InvalidScenario("split behavior needs at least two partition groups");
}

Scenario parse_scenario(const std::string& text)
{
   Scenario s;
   s.schedule.initial.clear();
   std::istringstream in(text);
   std::string line;
   int lineno = 0;
   bool explicit_weights = false;
   try {
      while (std::getline(in, line)) {
         ++lineno;
         if (auto hash = line.find('#'); hash != std::string::npos)
            line.resize(hash);
         std::istringstream words(line);
         std::vector<std::string> w;
         for (std::string t; words >> t;)
            w.push_back(t);
         if (w.empty())
            continue;
         const auto& key = w[0];
         auto need = [&](std::size_t n) {
            if (w.size() != n + 1)
               throw InvalidScenario("'" + key + "' expects " + std::to_string(n) + " argument(s)");
         };
         if (key == "mode") {
            need(1);
            if (w[1] == "lisk")
               s.mode = Mode::lisk;
            else if (w[1] == "general")
               s.mode = Mode::general;
            else
               throw InvalidScenario("unknown mode '" + w[1] + "'");
         } else if (key == "seed") {
            need(1);
            s.seed = static_cast<std::uint64_t>(to_nonneg(w[1]));
         } else if (key == "proposers") {
            need(1);
            for (std::int64_t i = 0; i < to_nonneg(w[1]); ++i)
               s.schedule.initial.emplace_back(ProposerId{static_cast<std::uint32_t>(i)}, Weight{1});
         } else if (key == "proposer_ids") {
            need(1);
            for (auto id : parse_id_list(w[1]))
               s.schedule.initial.emplace_back(id, Weight{1});
         } else if (key == "proposer") {
            need(2);
            explicit_weights = true;
            s.schedule.initial.emplace_back(ProposerId{static_cast<std::uint32_t>(to_nonneg(w[1]))},
                                            to_rational(w[2]));
         } else if (key == "round_length") {
            need(1);
            s.schedule.round_length = to_int(w[1]);
         } else if (key == "delay_rounds") {
            need(1);
            s.schedule.delay_rounds = to_int(w[1]);
         } else if (key == "window") {
            need(1);
            s.lisk.window = to_int(w[1]);
         } else if (key == "delta") {
            need(1);
            s.delta = to_int(w[1]);
         } else if (key == "gst") {
            need(1);
            s.gst = to_int(w[1]);
         } else if (key == "slot_duration") {
            need(1);
            s.slot_duration = to_nonneg(w[1]);
         } else if (key == "stop_height") {
            need(1);
            s.stop_height = to_nonneg(w[1]);
         } else if (key == "stop_ticks") {
            need(1);
            s.stop_ticks = to_nonneg(w[1]);
         } else if (key == "threshold") {
            need(2);
            if (w[1] == "default")
               s.default_threshold = to_rational(w[2]);
            else
               for (auto id : parse_id_list(w[1]))
                  s.thresholds[id] = to_rational(w[2]);
         } else if (key == "behavior") {
            need(2);
            auto it = behavior_names.find(w[2]);
            if (it == behavior_names.end())
               throw InvalidScenario("unknown behavior '" + w[2] + "'");
            for (auto id : parse_id_list(w[1]))
               s.behaviors[id] = it->second;
         } else if (key == "drop_rate") {
            need(1);
            s.drop_rate = to_rational(w[1]);
         } else if (key == "max_pre_gst_delay") {
            need(1);
            s.max_pre_gst_delay = to_nonneg(w[1]);
         } else if (key == "withhold_slots") {
            need(1);
            s.withhold_slots = to_nonneg(w[1]);
         } else if (key == "partition") {
            if (w.size() < 2)
               throw InvalidScenario("'partition' expects groups separated by '|'");
            s.partition.assign(1, {});
            for (std::size_t i = 1; i < w.size(); ++i) {
               if (w[i] == "|") {
                  s.partition.emplace_back();
                  continue;
               }
               auto ids = parse_id_list(w[i]);
               s.partition.back().insert(s.partition.back().end(), ids.begin(), ids.end());
            }
         } else if (key == "change") {
            // change <height> join|leave <id> [weight] [via <id>]
            if (w.size() < 4)
               throw InvalidScenario("'change' expects <height> join|leave <id> [weight] [via <id>]");
            ChangeEvent c;
            c.height = to_nonneg(w[1]);
            if (w[2] == "join")
               c.kind = ChangeKind::join;
            else if (w[2] == "leave")
               c.kind = ChangeKind::leave;
            else
               throw InvalidScenario("unknown change kind '" + w[2] + "'");
            c.proposer = ProposerId{static_cast<std::uint32_t>(to_nonneg(w[3]))};
            c.weight = Weight{1};
            std::size_t i = 4;
            if (i < w.size() && w[i] != "via")
               c.weight = to_rational(w[i++]);
            if (i < w.size()) {
               if (w[i] != "via" || i + 2 != w.size())
                  throw InvalidScenario("trailing words in 'change'");
               c.via = ProposerId{static_cast<std::uint32_t>(to_nonneg(w[i + 1]))};
            }
            s.schedule.changes.push_back(c);
         } else if (key == "permutation") {
            if (w.size() < 3)
               throw InvalidScenario("'permutation' expects <round> <ids...>");
            auto& order = s.schedule.permutation_overrides[to_nonneg(w[1])];
            for (std::size_t i = 2; i < w.size(); ++i)
               for (auto id : parse_id_list(w[i]))
                  order.push_back(id);
         } else {
            throw InvalidScenario("unknown key '" + key + "'");
         }
      }
      s.schedule.uniform_weights = !explicit_weights;
      std::stable_sort(s.schedule.changes.begin(), s.schedule.changes.end(),
                       [](const auto& a, const auto& b) { return a.height < b.height; });
      s.schedule.seed = s.seed;
      s.validate();
   } catch (const InvalidScenario& e) {
      if (lineno > 0 && std::string(e.what()).rfind("line ", 0) != 0)
         throw InvalidScenario("line " + std::to_string(lineno) + ": " + e.what());
      throw;
   }
   return s;
}

Scenario load_scenario(const std::string& path)
{
   std::ifstream in(path);
   if (!in)
      throw InvalidScenario("cannot open scenario file " + path);
   std::stringstream buf;
   buf << in.rdbuf();
   return parse_scenario(buf.str());
}

std::string format_scenario(const Scenario& s)
{
   std::ostringstream out;
   out << "mode " << to_string(s.mode) << '\n';
   out << "seed " << s.seed << '\n';
   if (s.schedule.uniform_weights) {
      std::vector<ProposerId> ids;
      for (const auto& [id, w] : s.schedule.initial)
         ids.push_back(id);
      out << "proposer_ids " << compress_ids(ids) << '\n';
   } else {
      for (const auto& [id, w] : s.schedule.initial)
         out << "proposer " << id.value << ' ' << w.str() << '\n';
   }
   out << "round_length " << s.schedule.round_length << '\n';
   out << "delay_rounds " << s.schedule.delay_rounds << '\n';
   out << "window " << s.lisk.window << '\n';
   out << "delta " << s.delta << '\n';
   out << "gst " << s.gst << '\n';
   out << "slot_duration " << s.slot_duration << '\n';
   out << "stop_height " << s.stop_height << '\n';
   out << "stop_ticks " << s.stop_ticks << '\n';
   out << "threshold default " << s.default_threshold.str() << '\n';
   for (const auto& [id, tau] : s.thresholds)
      out << "threshold " << id.value << ' ' << tau.str() << '\n';
   std::map<Behavior, std::vector<ProposerId>> by_behavior;
   for (const auto& [id, b] : s.behaviors)
      by_behavior[b].push_back(id);
   for (const auto& [b, ids] : by_behavior)
      out << "behavior " << compress_ids(ids) << ' ' << to_string(b) << '\n';
   out << "drop_rate " << s.drop_rate.str() << '\n';
   out << "max_pre_gst_delay " << s.max_pre_gst_delay << '\n';
   out << "withhold_slots " << s.withhold_slots << '\n';
   if (!s.partition.empty()) {
      out << "partition";
      for (std::size_t g = 0; g < s.partition.size(); ++g)
         out << (g > 0 ? " | " : " ") << compress_ids(s.partition[g]);
      out << '\n';
   }
   for (const auto& c : s.schedule.changes) {
      out << "change " << c.height << ' ' << (c.kind == ChangeKind::join ? "join" : "leave") << ' '
          << c.proposer.value;
      if (c.kind == ChangeKind::join)
         out << ' ' << c.weight.str();
      if (c.via)
         out << " via " << c.via->value;
      out << '\n';
   }
   for (const auto& [round, ids] : s.schedule.permutation_overrides) {
      out << "permutation " << round;
      for (auto id : ids)
         out << ' ' << id.value;
      out << '\n';
   }
   return out.str();
}

}  // namespace lbft
