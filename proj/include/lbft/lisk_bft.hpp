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

#include "lbft/blocktree.hpp"
#include "lbft/chain_tally.hpp"
#include "lbft/votes.hpp"

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lbft {

struct LiskConfig {
   Height window = 303;
};

struct DelegateState {
   ProposerId proposer;
   Height h0 = -1;  // -1 when not active on the branch being extended
   Height max_proposed_height = 0;
};

class NotActive : public std::runtime_error {
public:
   using std::runtime_error::runtime_error;
};
class InactiveAtHeight : public std::runtime_error {
public:
   using std::runtime_error::runtime_error;
};
class MalformedHeader : public std::runtime_error {
public:
   using std::runtime_error::runtime_error;
};
class DifferentAuthors : public std::invalid_argument {
public:
   using std::invalid_argument::invalid_argument;
};

/// Header for a new block on top of the branch whose tally is `parent`.
LiskHeader make_header(const DelegateState& state, const ChainTally& parent);

/// Votes implied by the header of `block`. `parent` is the tally of the
/// branch up to the block's parent and `h0` the author's continuous-activity
/// start for the block's round (-1 if inactive).
VoteBatch expand_header(const Block& block, const ChainTally& parent, Height h0, const LiskConfig& config = {});

/// Largest finalized height on the branch of `tip`.
Height finalized_height(const ChainTally& tip);

enum class Order { first_before_second, second_before_first, tie };
std::string to_string(Order order);

/// Proposal order implied by the headers of two blocks of one author.
Order infer_order(const Block& a, const Block& b);

struct Evidence {
   ProposerId author;
   BlockId block_a;
   BlockId block_b;
   std::string clause;
   Order inferred_order = Order::tie;
   LiskHeader header_a;
   LiskHeader header_b;
   Height height_a = 0;
   Height height_b = 0;

   friend bool operator==(const Evidence&, const Evidence&) = default;
};

/// Evidence if the two blocks could not both come from an honest delegate.
std::optional<Evidence> check_contradicting(const Block& a, const Block& b);

/// Checks consecutive blocks of `author` on the branch ending in `tip`,
/// taken in inferred proposal order.
std::optional<Evidence> check_successive_pairs(const BlockTree& tree, BlockId tip, ProposerId author);

/// All blocks of one author anywhere in the tree: sorts them by inferred
/// order and checks neighbours. One record per contradicting neighbour pair.
std::vector<Evidence> scan_author(std::vector<Block> blocks);

/// Quadratic reference scan over every pair.
std::vector<Evidence> scan_author_all_pairs(std::span<const Block> blocks);

/// Evidence across the whole tree, grouped by author.
std::vector<Evidence> scan_tree(const BlockTree& tree);

}  // namespace lbft
