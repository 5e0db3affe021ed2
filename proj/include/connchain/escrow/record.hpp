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

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "connchain/common/clock.hpp"
#include "connchain/ledger/types.hpp"

namespace connchain::escrow {

using ledger::TxId;

// Execution progress of one exchange. Names double as timestamps keys.
enum class Progress {
    kCreate,
    kRequestMargin,
    kFixedMargin,
    kFailedMargin,
    kRequestCredit,
    kFixedCredit,
    kFailedCredit,
    kRequestFreeze,
    kFixedFreeze,
    kRequestRecovery,
    kFixedRecovery,
    kComplete,
};

std::string_view to_string(Progress progress) noexcept;
std::optional<Progress> parse_progress(std::string_view text);
bool is_terminal(Progress progress) noexcept;
bool is_legal_transition(Progress from, Progress to) noexcept;

struct FromChain {
    std::string chain_id;
    std::string account_id;
    std::string asset_type = "number";
    std::string asset;
    std::optional<TxId> escrow_tx_id;
    std::optional<TxId> settlement_tx_id;
    std::optional<TxId> restore_tx_id;

    bool operator==(const FromChain&) const = default;
};

struct ToChain {
    std::string chain_id;
    std::string account_id;
    std::string asset_type = "number";
    std::string asset;
    std::optional<TxId> payment_tx_id;

    bool operator==(const ToChain&) const = default;
};

// Persisted state of one Extended Smart Contract execution. Serializes to the
// published record layout: id, userID, ruleID, fromChain, toChain, progress, timestamps.
struct ExchangeRecord {
    std::string id;
    std::string user_id;
    std::string rule_id;
    FromChain from_chain;
    ToChain to_chain;
    Progress progress = Progress::kCreate;
    std::vector<std::pair<std::string, std::string>> timestamps;  // in transition order

    [[nodiscard]] bool has_timestamp(std::string_view key) const;
    [[nodiscard]] std::optional<std::string> timestamp(std::string_view key) const;
    [[nodiscard]] ledger::Amount source_amount() const;
    [[nodiscard]] ledger::Amount destination_amount() const;

    bool operator==(const ExchangeRecord&) const = default;
};

// Checks that the timestamps keys trace a legal path from "create" to the
// current progress, with no repeated key and non-decreasing values.
// Returns a description of the first problem, or nullopt.
std::optional<std::string> check_transition_path(const ExchangeRecord& record);

nlohmann::ordered_json to_json(const ExchangeRecord& record);
// Throws Error(kBadRequest) on shape or type mismatch.
ExchangeRecord record_from_json(const nlohmann::ordered_json& j);

}  // namespace connchain::escrow
