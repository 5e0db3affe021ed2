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

#include <atomic>
#include <condition_variable>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "connchain/common/clock.hpp"
#include "connchain/escrow/engine.hpp"
#include "connchain/escrow/world_state.hpp"
#include "connchain/interworking/node.hpp"
#include "connchain/ledger/ledger.hpp"

namespace connchain::api {

struct ServiceConfig {
    std::string host = "127.0.0.1";
    int port = 8080;
    Millis timeout = 20'000;
    int retry_limit = 3;
    bool test_mode = false;
    Millis tick = 100;  // block production and timeout scan period
    std::uint64_t seed = 0;
    std::optional<std::filesystem::path> snapshot_path;
    std::vector<ledger::ChainConfig> chains;
    std::vector<escrow::ServiceProfile> profiles;
};

// Reads a JSON config file:
// {"listen": "host:port", "timeoutSeconds", "retryLimit", "testMode", "tickMs",
//  "seed", "snapshotPath", "chains": [...], "profiles": [...]}
ServiceConfig load_config(const std::filesystem::path& path);
ServiceConfig config_from_json(const nlohmann::ordered_json& j);

// Overrides from CONNCHAIN_LISTEN, CONNCHAIN_TIMEOUT_SECONDS, CONNCHAIN_RETRY_LIMIT,
// CONNCHAIN_TEST_MODE and CONNCHAIN_TICK_MS when set.
void apply_environment(ServiceConfig& config);

// Ledgers, interworking nodes and the engine wired together in one process.
// A single driver thread produces blocks and scans timeouts, so the delivery
// of a block and a timeout on the same transfer are never concurrent.
class Runtime {
  public:
    Runtime(const Clock& clock, const ServiceConfig& config);
    ~Runtime();

    Runtime(const Runtime&) = delete;
    Runtime& operator=(const Runtime&) = delete;

    void add_chain(const ledger::ChainConfig& config);

    // One round: a block attempt on every chain, then a timeout scan.
    void tick();

    void start();
    void stop();

    ledger::LedgerNetwork& ledger() { return ledger_; }
    escrow::EscrowEngine& engine() { return *engine_; }
    escrow::WorldState& world_state() { return state_; }
    const ServiceConfig& config() const { return config_; }

  private:
    void run();

    const Clock& clock_;
    ServiceConfig config_;
    ledger::LedgerNetwork ledger_;
    escrow::WorldState state_;
    std::unique_ptr<escrow::EscrowEngine> engine_;
    std::atomic<std::uint64_t> saved_writes_{0};

    std::mutex nodes_mu_;
    std::map<ledger::ChainId, std::unique_ptr<interworking::InterworkingNode>> nodes_;

    std::mutex driver_mu_;
    std::condition_variable driver_cv_;
    bool stopping_ = false;
    std::thread driver_;
};

}  // namespace connchain::api
