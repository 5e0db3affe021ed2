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

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "connchain/common/clock.hpp"
#include "connchain/escrow/profile.hpp"
#include "connchain/escrow/record.hpp"
#include "connchain/ledger/types.hpp"

namespace connchain::harness {

namespace step {

struct StartExchange {
    escrow::ExchangeRequest request;
    std::string alias;  // name later steps use to refer to the exchange
};

struct InjectFault {
    ledger::FaultDirective directive;
};

// Moves the frozen clock, then runs a timeout scan.
struct AdvanceClock {
    Millis millis = 0;
};

struct ProduceBlock {
    ledger::ChainId chain;
};

// Produces blocks round-robin until no chain has pending transactions.
struct RunUntilIdle {
    int max_rounds = 50;
};

struct AssertBalance {
    ledger::ChainId chain;
    ledger::AccountId account;
    ledger::Amount equals = 0;
};

struct AssertProgress {
    std::string alias;
    escrow::Progress equals = escrow::Progress::kComplete;
};

}  // namespace step

using Step = std::variant<step::StartExchange, step::InjectFault, step::AdvanceClock, step::ProduceBlock,
                          step::RunUntilIdle, step::AssertBalance, step::AssertProgress>;

struct Scenario {
    std::string name;
    std::uint64_t seed = 0;
    Millis start_time = 0;
    Millis timeout = 20'000;
    int retry_limit = 3;
    std::vector<ledger::ChainConfig> chains;
    std::vector<escrow::ServiceProfile> profiles;
    std::vector<Step> steps;
};

// Throws Error(kInvalidScenario) when steps reference undeclared chains, profiles or aliases.
void validate(const Scenario& scenario);

Scenario scenario_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json to_json(const Scenario& scenario);

struct AssertionResult {
    std::size_t step = 0;
    std::string description;
    bool passed = false;
    std::string detail;
};

struct Report {
    std::string scenario;
    std::uint64_t seed = 0;
    bool passed = true;
    std::vector<AssertionResult> assertions;
    std::vector<escrow::ExchangeRecord> records;
    std::vector<std::string> stuck;
    nlohmann::ordered_json balances;  // chainID -> {accountID: balance}
    nlohmann::ordered_json chains;    // chainID -> {height, tipHash, intact}
};

nlohmann::ordered_json to_json(const Report& report);

// Deterministic for a given scenario: frozen clock, seeded txIDs.
Report run_scenario(const Scenario& scenario);

// Built-in payment scenarios.
std::vector<std::string> builtin_names();
std::optional<Scenario> builtin(const std::string& name);

}  // namespace connchain::harness
