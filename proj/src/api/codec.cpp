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

#include "connchain/api/codec.hpp"

#include "connchain/common/error.hpp"

namespace connchain::api {

namespace {

[[noreturn]] void bad(const std::string& message) { throw Error(ErrorCode::kBadRequest, message); }

}  // namespace

ledger::ChainConfig chain_config_from_json(const nlohmann::ordered_json& j) {
    if (!j.is_object()) bad("chain config must be an object");
    ledger::ChainConfig config;
    if (!j.contains("chainID") || !j["chainID"].is_string()) bad("chainID must be a string");
    config.chain_id = j["chainID"].get<std::string>();
    if (j.contains("assetType")) {
        if (!j["assetType"].is_string()) bad("assetType must be a string");
        config.asset_type = j["assetType"].get<std::string>();
    }
    if (j.contains("genesis")) {
        const auto& genesis = j["genesis"];
        if (!genesis.is_object()) bad("genesis must be an object");
        for (auto it = genesis.begin(); it != genesis.end(); ++it) {
            if (!it.value().is_number_integer()) bad("genesis balance must be an integer: " + it.key());
            config.genesis[it.key()] = it.value().get<ledger::Amount>();
        }
    }
    if (j.contains("blockPolicy")) {
        const auto& policy = j["blockPolicy"];
        if (policy.is_string() && policy.get<std::string>() == "per-transaction") {
            config.block_policy = ledger::BlockPolicy::per_transaction();
        } else if (policy.is_object() && policy.contains("interval") && policy["interval"].is_number_integer()) {
            config.block_policy = ledger::BlockPolicy::every(policy["interval"].get<Millis>());
        } else {
            bad("blockPolicy must be \"per-transaction\" or {\"interval\": <ms>}");
        }
    }
    if (j.contains("powDifficulty")) {
        const auto& pow = j["powDifficulty"];
        if (!pow.is_number_unsigned()) bad("powDifficulty must be a non-negative integer");
        config.pow_difficulty = pow.get<unsigned>();
    }
    return config;
}

nlohmann::ordered_json to_json(const ledger::ChainConfig& config) {
    nlohmann::ordered_json j;
    j["chainID"] = config.chain_id;
    j["assetType"] = config.asset_type;
    nlohmann::ordered_json genesis = nlohmann::ordered_json::object();
    for (const auto& [account, balance] : config.genesis) genesis[account] = balance;
    j["genesis"] = std::move(genesis);
    if (config.block_policy.kind == ledger::BlockPolicy::Kind::kPerTransaction) {
        j["blockPolicy"] = "per-transaction";
    } else {
        j["blockPolicy"] = {{"interval", config.block_policy.interval}};
    }
    j["powDifficulty"] = config.pow_difficulty;
    return j;
}

ledger::FaultDirective fault_from_json(const ledger::ChainId& chain, const nlohmann::ordered_json& j) {
    if (!j.is_object() || !j.contains("mode") || !j["mode"].is_string()) bad("fault body needs a string mode");
    ledger::FaultDirective directive;
    directive.chain_id = chain;
    directive.mode = ledger::parse_fault_mode(j["mode"].get<std::string>());
    if (j.contains("returnCode")) {
        if (!j["returnCode"].is_number_integer()) bad("returnCode must be an integer");
        directive.return_code = j["returnCode"].get<int>();
    }
    if (directive.mode == ledger::FaultMode::kFailNextTransaction && directive.return_code == 0) {
        bad("fail-next-transaction needs a nonzero returnCode");
    }
    return directive;
}

}  // namespace connchain::api
