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

#include "lbft/lisk_bft.hpp"
#include "lbft/proposer_dynamics.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace lbft {

enum class Mode { general, lisk };

enum class Behavior {
   honest,
   crashed,
   equivocate,  // two blocks per owned slot, each shown to half of the network
   understate,  // under-reports h_previous (or k in approve messages)
   withhold,    // keeps its blocks back for a few slots
   split,       // coordinated: builds and votes on every partition group's branch
};

std::string to_string(Mode mode);
std::string to_string(Behavior behavior);

class InvalidScenario : public std::runtime_error {
public:
   using std::runtime_error::runtime_error;
};

/// Everything needed to reproduce one simulation run.
struct Scenario {
   Mode mode = Mode::lisk;
   std::uint64_t seed = 0;
   RoundSchedule schedule;
   LiskConfig lisk;

   std::int64_t delta = 2;
   std::int64_t gst = 0;
   std::int64_t slot_duration = 0;  // 0 means 2*delta + 1
   Height stop_height = 200;
   std::int64_t stop_ticks = 0;  // 0 derives a cap from stop_height

   Rational default_threshold = two_thirds;
   std::map<ProposerId, Rational> thresholds;
   std::map<ProposerId, Behavior> behaviors;

   Rational drop_rate{1, 4};
   std::int64_t max_pre_gst_delay = 0;  // 0 means up to GST
   std::int64_t withhold_slots = 3;
   std::vector<std::vector<ProposerId>> partition;

   std::int64_t slot_ticks() const { return slot_duration > 0 ? slot_duration : 2 * delta + 1; }
   std::int64_t tick_cap() const;
   Behavior behavior(ProposerId id) const;
   bool is_honest(ProposerId id) const { return behavior(id) == Behavior::honest; }
   Rational threshold(ProposerId id) const;
   /// One more than the largest proposer id mentioned anywhere.
   std::size_t universe() const;
   std::vector<ProposerId> all_proposers() const;
   /// Partition group of `id`, or -1 if it is in none.
   int group_of(ProposerId id) const;

   /// Throws InvalidScenario.
   void validate() const;
};

/// Parses the line-based scenario format. Throws InvalidScenario with the
/// offending line number.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

/// Canonical text form; parse_scenario(format_scenario(s)) reproduces s.
std::string format_scenario(const Scenario& s);

/// Parses "3", "0-32" or "1,4,7-9" into ids.
std::vector<ProposerId> parse_id_list(const std::string& text);

}  // namespace lbft
