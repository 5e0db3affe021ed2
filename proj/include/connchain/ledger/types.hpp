/*
   Copyright 2026 The ConnectionChain Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "connchain/common/clock.hpp"

namespace connchain::ledger {

using Amount = std::int64_t;
using ChainId = std::string;
using AccountId = std::string;
using TxId = std::string;

using Digest = std::array<std::uint8_t, 32>;

inline constexpr Digest kZeroDigest{};

std::string to_hex(const Digest& digest);

// Return codes carried by failed transactions.
inline constexpr int kReturnOk = 0;
inline constexpr int kReturnInsufficientFunds = 1;
inline constexpr int kReturnExpired = 2;

enum class TxStatus : std::uint8_t { kPending = 0, kSuccess = 1, kFailure = 2 };

std::string_view to_string(TxStatus status) noexcept;

struct BlockPolicy {
    enum class Kind { kPerTransaction, kInterval };

    Kind kind = Kind::kPerTransaction;
    Millis interval = 0;  // only meaningful for kInterval

    static BlockPolicy per_transaction() { return {}; }
    static BlockPolicy every(Millis interval) { return {Kind::kInterval, interval}; }
};

struct ChainConfig {
    ChainId chain_id;
    std::string asset_type = "number";
    std::map<AccountId, Amount> genesis;
    BlockPolicy block_policy;
    unsigned pow_difficulty = 0;  // leading zero bits required in every block hash
};

struct Transaction {
    TxId tx_id;
    AccountId from;
    AccountId to;
    Amount amount = 0;
    TxStatus status = TxStatus::kPending;
    int return_code = kReturnOk;
    Millis submitted_at = 0;
    // Stale pending transactions fail with kReturnExpired instead of executing.
    std::optional<Millis> valid_until;

    bool operator==(const Transaction&) const = default;
};

struct Block {
    std::uint64_t height = 0;
    Digest prev_hash{};
    std::vector<Transaction> transactions;
    std::uint64_t nonce = 0;
    Millis timestamp = 0;
    Digest hash{};

    bool operator==(const Block&) const = default;
};

enum class FaultMode { kNone, kHaltBlockProduction, kFailNextTransaction, kTamperNextBlock };

std::string_view to_string(FaultMode mode) noexcept;
// Throws Error(kBadRequest) for anything but the four wire names.
FaultMode parse_fault_mode(std::string_view text);

struct FaultDirective {
    ChainId chain_id;
    FaultMode mode = FaultMode::kNone;
    int return_code = 0;  // used by kFailNextTransaction
};

}  // namespace connchain::ledger
