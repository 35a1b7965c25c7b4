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

#include "lbft/scenario.hpp"
#include "lbft/trace.hpp"

#include <random>

namespace lbft {

/// Delivery policy of the partially synchronous network. Before GST a
/// message may be dropped (it is then rebroadcast and arrives within delta
/// of GST) or delayed; messages between different partition groups are
/// always dropped. From GST on every message arrives within delta.
class Network {
public:
   Network(const Scenario& scenario, std::uint64_t seed);

   /// Arrival time at `to` of a message `from` sends at `now`.
   std::int64_t delivery_time(std::int64_t now, ProposerId from, ProposerId to);

private:
   std::int64_t uniform(std::int64_t lo, std::int64_t hi);

   const Scenario* scenario_;
   std::mt19937_64 rng_;
};

/// Runs one simulation. Deterministic in the scenario (including its seed).
/// Throws InvalidScenario.
Trace run(const Scenario& scenario);

}  // namespace lbft
