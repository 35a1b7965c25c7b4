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

#include "lbft/approve.hpp"
#include "lbft/chain_state.hpp"
#include "lbft/scenario.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace lbft {

struct BlockRecord {
   Block block;
   std::int64_t time = 0;
   std::vector<std::uint32_t> msgs;  // general mode: messages included
};

/// A vote message. Either an approve (whose votes follow from the chain) or
/// a batch of raw votes.
struct MessageRecord {
   std::uint32_t id = 0;
   ProposerId author;
   std::int64_t time = 0;
   std::optional<Approve> approve;
   VoteBatch votes;  // implied or raw votes
};

struct TipEvent {
   std::int64_t time = 0;
   ProposerId proposer;
   BlockId block;
   Height height = 0;
};

struct FinalEvent {
   std::int64_t time = 0;
   ProposerId proposer;
   BlockId block;
   Height height = 0;
};

struct Trace {
   Scenario scenario;
   std::vector<BlockRecord> blocks;  // genesis excluded, in id order
   std::vector<MessageRecord> messages;
   std::vector<TipEvent> tips;
   std::vector<FinalEvent> finals;
   std::int64_t end_time = 0;
   /// Height of the highest honest tip at the first slot start at or after
   /// GST + 2*delta; heights above it are covered by the liveness deadline.
   Height convergence_height = 0;
   std::int64_t sync_violations = 0;
};

/// Votes carried by `block`, computed against the blocks already in `state`.
/// Lisk blocks imply votes through their header; general blocks carry the
/// votes of the listed messages.
VoteBatch block_votes(ChainState& state, const Scenario& scenario, const Block& block,
                      const std::vector<const MessageRecord*>& msgs);

/// Rebuilds the chain of a trace. Approve expansions in `trace.messages`
/// are refreshed from the rebuilt chain.
ChainState replay(Trace& trace);

void write_trace(std::ostream& out, const Trace& trace);
/// Throws std::runtime_error on malformed input.
Trace read_trace(std::istream& in);

void save_trace(const std::string& path, const Trace& trace);
Trace load_trace(const std::string& path);

}  // namespace lbft
