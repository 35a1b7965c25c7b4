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

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

namespace lbft {

using Height = std::int64_t;

/// Simulator-assigned block identifier. Genesis is always 0.
struct BlockId {
   std::uint32_t value = 0;

   friend constexpr auto operator<=>(BlockId, BlockId) = default;
   std::string str() const { return std::to_string(value); }
};

inline constexpr BlockId genesis_id{0};

struct ProposerId {
   std::uint32_t value = 0;

   friend constexpr auto operator<=>(ProposerId, ProposerId) = default;
   std::string str() const { return std::to_string(value); }
};

/// The two integers a Lisk-BFT proposer adds to every block header.
struct LiskHeader {
   Height h_previous = 0;
   Height h_prevoted = 0;

   friend constexpr bool operator==(const LiskHeader&, const LiskHeader&) = default;
};

struct Block {
   BlockId id;
   std::optional<BlockId> parent;
   Height height = 0;
   std::optional<ProposerId> proposer;
   std::int64_t round_slot = 0;
   std::optional<LiskHeader> header;
};

struct UnknownBlock : std::out_of_range {
   explicit UnknownBlock(BlockId id) : std::out_of_range("unknown block " + id.str()), id{id} {}
   BlockId id;
};

struct UnknownParent : std::invalid_argument {
   explicit UnknownParent(BlockId id) : std::invalid_argument("unknown parent " + id.str()) {}
};

struct DuplicateId : std::invalid_argument {
   explicit DuplicateId(BlockId id) : std::invalid_argument("duplicate block id " + id.str()) {}
};

struct HeightMismatch : std::invalid_argument {
   HeightMismatch(BlockId id, Height declared, Height expected)
       : std::invalid_argument("block " + id.str() + " declares height " + std::to_string(declared) +
                               ", parent implies " + std::to_string(expected))
   {
   }
};

}  // namespace lbft

template <>
struct std::hash<lbft::BlockId> {
   std::size_t operator()(lbft::BlockId id) const noexcept { return std::hash<std::uint32_t>{}(id.value); }
};

template <>
struct std::hash<lbft::ProposerId> {
   std::size_t operator()(lbft::ProposerId id) const noexcept { return std::hash<std::uint32_t>{}(id.value); }
};
