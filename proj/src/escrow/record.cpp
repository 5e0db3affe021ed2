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

#include "connchain/escrow/record.hpp"

#include <algorithm>
#include <array>
#include <charconv>

#include "connchain/common/error.hpp"

namespace connchain::escrow {

namespace {

constexpr std::array<std::pair<Progress, std::string_view>, 12> kProgressNames{{
    {Progress::kCreate, "create"},
    {Progress::kRequestMargin, "requestMargin"},
    {Progress::kFixedMargin, "fixedMargin"},
    {Progress::kFailedMargin, "failedMargin"},
    {Progress::kRequestCredit, "requestCredit"},
    {Progress::kFixedCredit, "fixedCredit"},
    {Progress::kFailedCredit, "failedCredit"},
    {Progress::kRequestFreeze, "requestFreeze"},
    {Progress::kFixedFreeze, "fixedFreeze"},
    {Progress::kRequestRecovery, "requestRecovery"},
    {Progress::kFixedRecovery, "fixedRecovery"},
    {Progress::kComplete, "complete"},
}};

ledger::Amount parse_amount(const std::string& text) {
    ledger::Amount value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw Error(ErrorCode::kBadRequest, "asset is not a decimal integer: " + text);
    }
    return value;
}

const nlohmann::ordered_json& field(const nlohmann::ordered_json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::kBadRequest, std::string("missing field: ") + key);
    return j.at(key);
}

std::string string_field(const nlohmann::ordered_json& j, const char* key) {
    const auto& v = field(j, key);
    if (!v.is_string()) throw Error(ErrorCode::kBadRequest, std::string("field must be a string: ") + key);
    return v.get<std::string>();
}

std::optional<std::string> optional_string(const nlohmann::ordered_json& j, const char* key) {
    if (!j.contains(key)) return std::nullopt;
    return string_field(j, key);
}

}  // namespace

std::string_view to_string(Progress progress) noexcept {
    for (const auto& [p, name] : kProgressNames) {
        if (p == progress) return name;
    }
    return "unknown";
}

std::optional<Progress> parse_progress(std::string_view text) {
    for (const auto& [p, name] : kProgressNames) {
        if (name == text) return p;
    }
    return std::nullopt;
}

bool is_terminal(Progress progress) noexcept {
    return progress == Progress::kComplete || progress == Progress::kFixedRecovery ||
           progress == Progress::kFailedMargin;
}

bool is_legal_transition(Progress from, Progress to) noexcept {
    using P = Progress;
    switch (from) {
        case P::kCreate:
            return to == P::kRequestMargin;
        case P::kRequestMargin:
            return to == P::kFixedMargin || to == P::kFailedMargin;
        case P::kFixedMargin:
            return to == P::kRequestCredit || to == P::kFailedCredit;
        case P::kRequestCredit:
            return to == P::kFixedCredit || to == P::kFailedCredit;
        case P::kFixedCredit:
            return to == P::kRequestFreeze;
        case P::kFailedCredit:
            return to == P::kRequestRecovery;
        case P::kRequestFreeze:
            return to == P::kFixedFreeze;
        case P::kFixedFreeze:
            return to == P::kComplete;
        case P::kRequestRecovery:
            return to == P::kFixedRecovery;
        case P::kFailedMargin:
        case P::kFixedRecovery:
        case P::kComplete:
            return false;
    }
    return false;
}

bool ExchangeRecord::has_timestamp(std::string_view key) const { return timestamp(key).has_value(); }

std::optional<std::string> ExchangeRecord::timestamp(std::string_view key) const {
    for (const auto& [k, v] : timestamps) {
        if (k == key) return v;
    }
    return std::nullopt;
}

ledger::Amount ExchangeRecord::source_amount() const { return parse_amount(from_chain.asset); }

ledger::Amount ExchangeRecord::destination_amount() const { return parse_amount(to_chain.asset); }

std::optional<std::string> check_transition_path(const ExchangeRecord& r) {
    if (r.timestamps.empty() || r.timestamps.front().first != "create") return "path does not start at create";
    Progress at = Progress::kCreate;
    std::vector<std::string_view> seen{"create"};
    for (std::size_t i = 1; i < r.timestamps.size(); ++i) {
        const auto& [key, value] = r.timestamps[i];
        auto next = parse_progress(key);
        if (!next) return "unknown timestamps key " + key;
        if (std::find(seen.begin(), seen.end(), key) != seen.end()) return "repeated timestamps key " + key;
        if (!is_legal_transition(at, *next)) {
            return "illegal edge " + std::string(to_string(at)) + " -> " + key;
        }
        if (value < r.timestamps[i - 1].second) return "timestamp for " + key + " goes backwards";
        seen.push_back(key);
        at = *next;
    }
    if (r.progress == at) return std::nullopt;
    if (r.progress == Progress::kComplete && at == Progress::kFixedFreeze) return std::nullopt;
    return "progress " + std::string(to_string(r.progress)) + " does not match last key " + std::string(to_string(at));
}

nlohmann::ordered_json to_json(const ExchangeRecord& r) {
    nlohmann::ordered_json from;
    from["chainID"] = r.from_chain.chain_id;
    from["accountID"] = r.from_chain.account_id;
    from["assetType"] = r.from_chain.asset_type;
    from["asset"] = r.from_chain.asset;
    if (r.from_chain.escrow_tx_id) from["escrowTxID"] = *r.from_chain.escrow_tx_id;
    if (r.from_chain.settlement_tx_id) from["settlementTxID"] = *r.from_chain.settlement_tx_id;
    if (r.from_chain.restore_tx_id) from["restoreTxID"] = *r.from_chain.restore_tx_id;

    nlohmann::ordered_json to;
    to["chainID"] = r.to_chain.chain_id;
    to["accountID"] = r.to_chain.account_id;
    to["assetType"] = r.to_chain.asset_type;
    to["asset"] = r.to_chain.asset;
    if (r.to_chain.payment_tx_id) to["paymentTxID"] = *r.to_chain.payment_tx_id;

    nlohmann::ordered_json stamps = nlohmann::ordered_json::object();
    for (const auto& [key, value] : r.timestamps) stamps[key] = value;

    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["userID"] = r.user_id;
    j["ruleID"] = r.rule_id;
    j["fromChain"] = std::move(from);
    j["toChain"] = std::move(to);
    j["progress"] = std::string(to_string(r.progress));
    j["timestamps"] = std::move(stamps);
    return j;
}

ExchangeRecord record_from_json(const nlohmann::ordered_json& j) {
    ExchangeRecord r;
    r.id = string_field(j, "id");
    r.user_id = string_field(j, "userID");
    r.rule_id = string_field(j, "ruleID");

    const auto& from = field(j, "fromChain");
    r.from_chain.chain_id = string_field(from, "chainID");
    r.from_chain.account_id = string_field(from, "accountID");
    r.from_chain.asset_type = string_field(from, "assetType");
    r.from_chain.asset = string_field(from, "asset");
    r.from_chain.escrow_tx_id = optional_string(from, "escrowTxID");
    r.from_chain.settlement_tx_id = optional_string(from, "settlementTxID");
    r.from_chain.restore_tx_id = optional_string(from, "restoreTxID");

    const auto& to = field(j, "toChain");
    r.to_chain.chain_id = string_field(to, "chainID");
    r.to_chain.account_id = string_field(to, "accountID");
    r.to_chain.asset_type = string_field(to, "assetType");
    r.to_chain.asset = string_field(to, "asset");
    r.to_chain.payment_tx_id = optional_string(to, "paymentTxID");

    auto progress = parse_progress(string_field(j, "progress"));
    if (!progress) throw Error(ErrorCode::kBadRequest, "unknown progress value");
    r.progress = *progress;

    const auto& stamps = field(j, "timestamps");
    if (!stamps.is_object()) throw Error(ErrorCode::kBadRequest, "timestamps must be an object");
    for (auto it = stamps.begin(); it != stamps.end(); ++it) {
        if (!it.value().is_string()) throw Error(ErrorCode::kBadRequest, "timestamp values must be strings");
        r.timestamps.emplace_back(it.key(), it.value().get<std::string>());
    }
    // validate numeric assets eagerly
    (void)r.source_amount();
    (void)r.destination_amount();
    return r;
}

}  // namespace connchain::escrow
