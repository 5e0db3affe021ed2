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

#include "connchain/harness/scenario.hpp"

#include <map>
#include <set>

#include "connchain/api/codec.hpp"
#include "connchain/api/runtime.hpp"
#include "connchain/common/error.hpp"
#include "connchain/interworking/node.hpp"

namespace connchain::harness {

using nlohmann::ordered_json;

namespace {

[[noreturn]] void invalid(const std::string& message) { throw Error(ErrorCode::kInvalidScenario, message); }

template <typename T>
T get(const ordered_json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) invalid(std::string("missing field: ") + key);
    try {
        return j.at(key).get<T>();
    } catch (const ordered_json::exception&) {
        invalid(std::string("wrong type for field: ") + key);
    }
}

Step step_from_json(const ordered_json& j) {
    const auto action = get<std::string>(j, "action");
    if (action == "start-exchange") {
        if (!j.contains("request")) invalid("start-exchange needs a request");
        return step::StartExchange{escrow::request_from_json(j["request"]), get<std::string>(j, "as")};
    }
    if (action == "inject-fault") {
        return step::InjectFault{api::fault_from_json(get<std::string>(j, "chainID"), j)};
    }
    if (action == "advance-clock") return step::AdvanceClock{get<Millis>(j, "ms")};
    if (action == "produce-block") return step::ProduceBlock{get<std::string>(j, "chainID")};
    if (action == "run-until-idle") {
        return step::RunUntilIdle{j.contains("maxRounds") ? get<int>(j, "maxRounds") : 50};
    }
    if (action == "assert-balance") {
        return step::AssertBalance{get<std::string>(j, "chainID"), get<std::string>(j, "accountID"),
                                   get<ledger::Amount>(j, "equals")};
    }
    if (action == "assert-progress") {
        auto progress = escrow::parse_progress(get<std::string>(j, "equals"));
        if (!progress) invalid("unknown progress in assert-progress");
        return step::AssertProgress{get<std::string>(j, "exchange"), *progress};
    }
    invalid("unknown action: " + action);
}

struct StepToJson {
    ordered_json operator()(const step::StartExchange& s) const {
        return {{"action", "start-exchange"}, {"as", s.alias}, {"request", escrow::to_json(s.request)}};
    }
    ordered_json operator()(const step::InjectFault& s) const {
        ordered_json j{{"action", "inject-fault"},
                       {"chainID", s.directive.chain_id},
                       {"mode", std::string(ledger::to_string(s.directive.mode))}};
        if (s.directive.mode == ledger::FaultMode::kFailNextTransaction) j["returnCode"] = s.directive.return_code;
        return j;
    }
    ordered_json operator()(const step::AdvanceClock& s) const { return {{"action", "advance-clock"}, {"ms", s.millis}}; }
    ordered_json operator()(const step::ProduceBlock& s) const {
        return {{"action", "produce-block"}, {"chainID", s.chain}};
    }
    ordered_json operator()(const step::RunUntilIdle& s) const {
        return {{"action", "run-until-idle"}, {"maxRounds", s.max_rounds}};
    }
    ordered_json operator()(const step::AssertBalance& s) const {
        return {{"action", "assert-balance"}, {"chainID", s.chain}, {"accountID", s.account}, {"equals", s.equals}};
    }
    ordered_json operator()(const step::AssertProgress& s) const {
        return {{"action", "assert-progress"}, {"exchange", s.alias}, {"equals", std::string(escrow::to_string(s.equals))}};
    }
};

class Runner {
  public:
    explicit Runner(const Scenario& scenario)
        : scenario_(scenario), clock_(scenario.start_time), runtime_(clock_, runtime_config(scenario)) {
        report_.scenario = scenario.name;
        report_.seed = scenario.seed;
    }

    Report run() {
        for (std::size_t i = 0; i < scenario_.steps.size(); ++i) {
            index_ = i;
            std::visit([this](const auto& s) { apply(s); }, scenario_.steps[i]);
        }
        finish();
        return std::move(report_);
    }

  private:
    static api::ServiceConfig runtime_config(const Scenario& s) {
        api::ServiceConfig config;
        config.timeout = s.timeout;
        config.retry_limit = s.retry_limit;
        config.seed = s.seed;
        config.chains = s.chains;
        config.profiles = s.profiles;
        return config;
    }

    void record(std::string description, bool passed, std::string detail = {}) {
        report_.assertions.push_back({index_, std::move(description), passed, std::move(detail)});
        if (!passed) report_.passed = false;
    }

    void apply(const step::StartExchange& s) {
        try {
            aliases_[s.alias] = runtime_.engine().start_exchange(s.request);
        } catch (const Error& e) {
            record("start-exchange " + s.alias, false, std::string(to_string(e.code())) + ": " + e.what());
        }
    }

    void apply(const step::InjectFault& s) { runtime_.ledger().inject_fault(s.directive); }

    void apply(const step::AdvanceClock& s) {
        clock_.advance(s.millis);
        runtime_.engine().scan_timeouts();
    }

    void apply(const step::ProduceBlock& s) { runtime_.ledger().produce_block(s.chain); }

    void apply(const step::RunUntilIdle& s) {
        auto& ledger = runtime_.ledger();
        for (int round = 0; round < s.max_rounds; ++round) {
            bool pending = false;
            for (const auto& chain : ledger.chain_ids()) {
                if (ledger.pending_count(chain) == 0) continue;
                pending = true;
                ledger.produce_block(chain);
            }
            if (!pending) break;
        }
    }

    void apply(const step::AssertBalance& s) {
        const auto actual = runtime_.ledger().get_balance(s.chain, s.account);
        record("balance " + s.chain + "/" + s.account + " == " + std::to_string(s.equals), actual == s.equals,
               "actual " + std::to_string(actual));
    }

    void apply(const step::AssertProgress& s) {
        auto it = aliases_.find(s.alias);
        if (it == aliases_.end()) {
            record("progress " + s.alias + " == " + std::string(escrow::to_string(s.equals)), false,
                   "exchange was never started");
            return;
        }
        const auto actual = runtime_.engine().get_record(it->second).progress;
        record("progress " + s.alias + " == " + std::string(escrow::to_string(s.equals)), actual == s.equals,
               "actual " + std::string(escrow::to_string(actual)));
    }

    void finish() {
        auto& engine = runtime_.engine();
        auto& ledger = runtime_.ledger();
        for (const auto& id : engine.record_ids()) {
            report_.records.push_back(engine.get_record(id));
            if (engine.get_meta(id).stuck) report_.stuck.push_back(id);
        }
        report_.balances = ordered_json::object();
        report_.chains = ordered_json::object();
        for (const auto& chain : ledger.chain_ids()) {
            ordered_json accounts = ordered_json::object();
            for (const auto& [account, balance] : ledger.balances(chain)) accounts[account] = balance;
            report_.balances[chain] = std::move(accounts);

            const auto blocks = ledger.blocks(chain);
            report_.chains[chain] = {{"height", blocks.back().height},
                                     {"tipHash", ledger::to_hex(blocks.back().hash)},
                                     {"intact", !interworking::find_broken_link(blocks).has_value()}};
        }
    }

    const Scenario& scenario_;
    ManualClock clock_;
    api::Runtime runtime_;
    Report report_;
    std::size_t index_ = 0;
    std::map<std::string, std::string> aliases_;
};

}  // namespace

void validate(const Scenario& scenario) {
    std::set<std::string> chains;
    for (const auto& c : scenario.chains) {
        if (!chains.insert(c.chain_id).second) invalid("duplicate chain " + c.chain_id);
    }
    std::set<std::string> rules;
    for (const auto& p : scenario.profiles) {
        if (!chains.contains(p.src_chain) || !chains.contains(p.dst_chain)) {
            invalid("profile " + p.rule_id + " references an undeclared chain");
        }
        rules.insert(p.rule_id);
    }
    std::set<std::string> aliases;
    auto need_chain = [&](const std::string& chain) {
        if (!chains.contains(chain)) invalid("step references undeclared chain " + chain);
    };
    for (const auto& s : scenario.steps) {
        if (auto* start = std::get_if<step::StartExchange>(&s)) {
            if (!rules.contains(start->request.rule_id)) {
                invalid("start-exchange references undeclared profile " + start->request.rule_id);
            }
            if (!aliases.insert(start->alias).second) invalid("duplicate exchange alias " + start->alias);
        } else if (auto* fault = std::get_if<step::InjectFault>(&s)) {
            need_chain(fault->directive.chain_id);
        } else if (auto* produce = std::get_if<step::ProduceBlock>(&s)) {
            need_chain(produce->chain);
        } else if (auto* balance = std::get_if<step::AssertBalance>(&s)) {
            need_chain(balance->chain);
        } else if (auto* progress = std::get_if<step::AssertProgress>(&s)) {
            if (!aliases.contains(progress->alias)) invalid("assert-progress before start of " + progress->alias);
        }
    }
}

Scenario scenario_from_json(const ordered_json& j) {
    if (!j.is_object()) invalid("scenario must be a JSON object");
    Scenario s;
    s.name = get<std::string>(j, "name");
    if (j.contains("seed")) s.seed = get<std::uint64_t>(j, "seed");
    if (j.contains("startTime")) {
        try {
            s.start_time = parse_timestamp(get<std::string>(j, "startTime"));
        } catch (const Error& e) {
            invalid(e.what());
        }
    }
    if (j.contains("timeoutMs")) s.timeout = get<Millis>(j, "timeoutMs");
    if (j.contains("retryLimit")) s.retry_limit = get<int>(j, "retryLimit");
    try {
        for (const auto& c : get<ordered_json>(j, "chains")) s.chains.push_back(api::chain_config_from_json(c));
        if (j.contains("profiles")) {
            for (const auto& p : j["profiles"]) s.profiles.push_back(escrow::profile_from_json(p));
        }
        for (const auto& step : get<ordered_json>(j, "steps")) s.steps.push_back(step_from_json(step));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::kInvalidScenario) throw;
        invalid(e.what());
    }
    validate(s);
    return s;
}

ordered_json to_json(const Scenario& s) {
    ordered_json j;
    j["name"] = s.name;
    j["seed"] = s.seed;
    j["startTime"] = format_millis(s.start_time);
    j["timeoutMs"] = s.timeout;
    j["retryLimit"] = s.retry_limit;
    j["chains"] = ordered_json::array();
    for (const auto& c : s.chains) j["chains"].push_back(api::to_json(c));
    j["profiles"] = ordered_json::array();
    for (const auto& p : s.profiles) j["profiles"].push_back(escrow::to_json(p));
    j["steps"] = ordered_json::array();
    for (const auto& step : s.steps) j["steps"].push_back(std::visit(StepToJson{}, step));
    return j;
}

ordered_json to_json(const Report& r) {
    ordered_json j;
    j["scenario"] = r.scenario;
    j["seed"] = r.seed;
    j["passed"] = r.passed;
    j["assertions"] = ordered_json::array();
    for (const auto& a : r.assertions) {
        j["assertions"].push_back(
            {{"step", a.step}, {"description", a.description}, {"passed", a.passed}, {"detail", a.detail}});
    }
    j["records"] = ordered_json::array();
    for (const auto& record : r.records) j["records"].push_back(escrow::to_json(record));
    j["stuck"] = r.stuck;
    j["balances"] = r.balances;
    j["chains"] = r.chains;
    return j;
}

Report run_scenario(const Scenario& scenario) {
    validate(scenario);
    Runner runner(scenario);
    return runner.run();
}

namespace {

// 2017-11-08 03:15:37.992 UTC
constexpr Millis kBuiltinStart = 1'510'110'937'992;

Scenario base(const std::string& name) {
    Scenario s;
    s.name = name;
    s.seed = 2017;
    s.start_time = kBuiltinStart;

    ledger::ChainConfig src;
    src.chain_id = "ChainID-1";
    src.genesis = {{"User1", 10'000}};
    ledger::ChainConfig dst;
    dst.chain_id = "ChainID-2";
    dst.genesis = {{"Carol-2", 100'000}, {"Daisy-2", 50'000}};
    s.chains = {src, dst};

    s.profiles.push_back({"0", "ChainID-1", "ChainID-2", "Carol-1", "Carol-2", {6, 5}, 10});
    s.profiles.push_back({"1", "ChainID-1", "ChainID-2", "Daisy-1", "Daisy-2", {90, 1}, 0});
    return s;
}

step::StartExchange payment(const std::string& rule, ledger::Amount dst_amount) {
    return {{"userXX", "User1", "UserA", rule, dst_amount}, "payment"};
}

step::InjectFault fault(const std::string& chain, ledger::FaultMode mode, int return_code = 0) {
    return {{chain, mode, return_code}};
}

Scenario happy_path() {
    auto s = base("happy-path");
    s.steps = {payment("0", 203),
               step::RunUntilIdle{},
               step::AssertProgress{"payment", escrow::Progress::kComplete},
               step::AssertBalance{"ChainID-1", "User1", 9'820},
               step::AssertBalance{"ChainID-1", "Carol-1", 180},
               step::AssertBalance{"ChainID-2", "Carol-2", 99'797},
               step::AssertBalance{"ChainID-2", "UserA", 203}};
    return s;
}

Scenario credit_failure() {
    auto s = base("credit-failure");
    s.steps = {fault("ChainID-2", ledger::FaultMode::kFailNextTransaction, 17),
               payment("0", 203),
               step::RunUntilIdle{},
               step::AssertProgress{"payment", escrow::Progress::kFixedRecovery},
               step::AssertBalance{"ChainID-1", "User1", 10'000},
               step::AssertBalance{"ChainID-1", "Carol-1", 0},
               step::AssertBalance{"ChainID-2", "Carol-2", 100'000},
               step::AssertBalance{"ChainID-2", "UserA", 0}};
    return s;
}

Scenario insufficient_exchanger_balance() {
    auto s = base("insufficient-exchanger-balance");
    s.start_time = kBuiltinStart + 153'051;  // 03:18:11.043
    s.steps = {payment("1", 136'800),
               step::RunUntilIdle{},
               step::AssertProgress{"payment", escrow::Progress::kFixedRecovery},
               step::AssertBalance{"ChainID-1", "User1", 10'000},
               step::AssertBalance{"ChainID-1", "Daisy-1", 0},
               step::AssertBalance{"ChainID-2", "Daisy-2", 50'000},
               step::AssertBalance{"ChainID-2", "UserA", 0}};
    return s;
}

Scenario credit_timeout() {
    auto s = base("credit-timeout");
    s.steps = {fault("ChainID-2", ledger::FaultMode::kHaltBlockProduction),
               payment("0", 203),
               step::RunUntilIdle{5},
               step::AssertProgress{"payment", escrow::Progress::kRequestCredit},
               step::AdvanceClock{21'000},
               step::RunUntilIdle{5},
               step::AssertProgress{"payment", escrow::Progress::kFixedRecovery},
               fault("ChainID-2", ledger::FaultMode::kNone),
               step::ProduceBlock{"ChainID-2"},
               step::AssertProgress{"payment", escrow::Progress::kFixedRecovery},
               step::AssertBalance{"ChainID-1", "User1", 10'000},
               step::AssertBalance{"ChainID-2", "Carol-2", 100'000},
               step::AssertBalance{"ChainID-2", "UserA", 0}};
    return s;
}

}  // namespace

std::vector<std::string> builtin_names() {
    return {"happy-path", "credit-failure", "insufficient-exchanger-balance", "credit-timeout"};
}

std::optional<Scenario> builtin(const std::string& name) {
    if (name == "happy-path") return happy_path();
    if (name == "credit-failure") return credit_failure();
    if (name == "insufficient-exchanger-balance") return insufficient_exchanger_balance();
    if (name == "credit-timeout") return credit_timeout();
    return std::nullopt;
}

}  // namespace connchain::harness
