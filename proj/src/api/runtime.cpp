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

#include "connchain/api/runtime.hpp"

#include <cstdlib>
#include <fstream>

#include <spdlog/spdlog.h>

#include "connchain/api/codec.hpp"
#include "connchain/common/error.hpp"

namespace connchain::api {

namespace {

void parse_listen(const std::string& listen, ServiceConfig& config) {
    auto colon = listen.rfind(':');
    if (colon == std::string::npos) throw Error(ErrorCode::kInvalidConfig, "listen must be host:port");
    config.host = listen.substr(0, colon);
    try {
        config.port = std::stoi(listen.substr(colon + 1));
    } catch (const std::exception&) {
        throw Error(ErrorCode::kInvalidConfig, "bad port in listen address: " + listen);
    }
}

bool truthy(const std::string& v) { return v == "1" || v == "true" || v == "yes" || v == "on"; }

}  // namespace

ServiceConfig config_from_json(const nlohmann::ordered_json& j) {
    if (!j.is_object()) throw Error(ErrorCode::kInvalidConfig, "config must be a JSON object");
    ServiceConfig config;
    try {
        if (j.contains("listen")) parse_listen(j["listen"].get<std::string>(), config);
        if (j.contains("timeoutSeconds")) {
            config.timeout = static_cast<Millis>(j["timeoutSeconds"].get<double>() * 1000.0);
        }
        if (j.contains("retryLimit")) config.retry_limit = j["retryLimit"].get<int>();
        if (j.contains("testMode")) config.test_mode = j["testMode"].get<bool>();
        if (j.contains("tickMs")) config.tick = j["tickMs"].get<Millis>();
        if (j.contains("seed")) config.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("snapshotPath")) config.snapshot_path = j["snapshotPath"].get<std::string>();
    } catch (const nlohmann::ordered_json::exception& e) {
        throw Error(ErrorCode::kInvalidConfig, std::string("bad config value: ") + e.what());
    }
    if (j.contains("chains")) {
        for (const auto& c : j["chains"]) config.chains.push_back(chain_config_from_json(c));
    }
    if (j.contains("profiles")) {
        for (const auto& p : j["profiles"]) config.profiles.push_back(escrow::profile_from_json(p));
    }
    return config;
}

ServiceConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::kInvalidConfig, "cannot open config file: " + path.string());
    try {
        return config_from_json(nlohmann::ordered_json::parse(in));
    } catch (const nlohmann::ordered_json::parse_error& e) {
        throw Error(ErrorCode::kInvalidConfig, std::string("config is not valid JSON: ") + e.what());
    }
}

void apply_environment(ServiceConfig& config) {
    if (const char* v = std::getenv("CONNCHAIN_LISTEN")) parse_listen(v, config);
    try {
        if (const char* v = std::getenv("CONNCHAIN_TIMEOUT_SECONDS")) {
            config.timeout = static_cast<Millis>(std::stod(v) * 1000.0);
        }
        if (const char* v = std::getenv("CONNCHAIN_RETRY_LIMIT")) config.retry_limit = std::stoi(v);
        if (const char* v = std::getenv("CONNCHAIN_TICK_MS")) config.tick = std::stoll(v);
    } catch (const std::exception&) {
        throw Error(ErrorCode::kInvalidConfig, "malformed numeric CONNCHAIN_* environment variable");
    }
    if (const char* v = std::getenv("CONNCHAIN_TEST_MODE")) config.test_mode = truthy(v);
}

Runtime::Runtime(const Clock& clock, const ServiceConfig& config)
    : clock_(clock), config_(config), ledger_(clock, config.seed) {
    engine_ = std::make_unique<escrow::EscrowEngine>(
        clock_, state_, escrow::EngineOptions{.timeout = config_.timeout, .retry_limit = config_.retry_limit});
    for (const auto& chain : config_.chains) add_chain(chain);
    for (const auto& profile : config_.profiles) engine_->register_profile(profile);
}

Runtime::~Runtime() { stop(); }

void Runtime::add_chain(const ledger::ChainConfig& config) {
    ledger_.create_chain(config);
    auto node = std::make_unique<interworking::InterworkingNode>(ledger_, config.chain_id, clock_);
    engine_->attach(*node);
    std::lock_guard lock(nodes_mu_);
    nodes_.emplace(config.chain_id, std::move(node));
}

void Runtime::tick() {
    for (const auto& chain : ledger_.chain_ids()) ledger_.produce_block(chain);
    engine_->scan_timeouts();
    if (config_.snapshot_path && state_.writes() != saved_writes_) {
        saved_writes_ = state_.writes();
        state_.save_snapshot(*config_.snapshot_path);
    }
}

void Runtime::start() {
    std::lock_guard lock(driver_mu_);
    if (driver_.joinable()) return;
    stopping_ = false;
    driver_ = std::thread([this] { run(); });
}

void Runtime::stop() {
    {
        std::lock_guard lock(driver_mu_);
        stopping_ = true;
    }
    driver_cv_.notify_all();
    if (driver_.joinable()) driver_.join();
}

void Runtime::run() {
    std::unique_lock lock(driver_mu_);
    while (!stopping_) {
        lock.unlock();
        try {
            tick();
        } catch (const std::exception& e) {
            spdlog::error("driver tick failed: {}", e.what());
        }
        lock.lock();
        driver_cv_.wait_for(lock, std::chrono::milliseconds(config_.tick), [this] { return stopping_; });
    }
}

}  // namespace connchain::api
