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
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "connchain/escrow/profile.hpp"
#include "connchain/escrow/record.hpp"

namespace connchain::escrow {

// Engine bookkeeping that lives beside a record but is not part of its published layout.
struct RecordMeta {
    Millis awaiting_since = 0;  // when the currently awaited transfer was issued
    int retries = 0;            // re-issues of the current settlement/refund transfer
    bool stuck = false;         // retries exhausted or transition violation; no further processing

    bool operator==(const RecordMeta&) const = default;
};

struct WorldEntry {
    ExchangeRecord record;
    RecordMeta meta;

    bool operator==(const WorldEntry&) const = default;
};

// Key-value store for exchange records, service profiles and the engine's
// escrow accounts. Each put is atomic for its record; records are never removed.
class WorldState {
  public:
    using PersistObserver = std::function<void(const WorldEntry&)>;

    WorldState() = default;
    WorldState(const WorldState& other);
    WorldState& operator=(const WorldState& other);

    void put(const ExchangeRecord& record, const RecordMeta& meta);
    [[nodiscard]] std::optional<WorldEntry> get(const std::string& id) const;
    [[nodiscard]] bool contains(const std::string& id) const;
    [[nodiscard]] std::vector<std::string> ids() const;
    [[nodiscard]] std::vector<WorldEntry> entries() const;
    [[nodiscard]] std::uint64_t writes() const;

    // Returns false if the ruleID is already taken.
    bool put_profile(const ServiceProfile& profile);
    [[nodiscard]] std::optional<ServiceProfile> profile(const std::string& rule_id) const;
    [[nodiscard]] std::vector<ServiceProfile> profiles() const;

    void register_escrow_account(const ChainId& chain, const AccountId& account);
    [[nodiscard]] std::optional<AccountId> escrow_account(const ChainId& chain) const;
    [[nodiscard]] std::map<ChainId, AccountId> escrow_accounts() const;

    // Called after every record write, outside the store lock.
    void set_observer(PersistObserver observer);

    // id -> record, in the published record layout.
    [[nodiscard]] nlohmann::ordered_json snapshot_json() const;
    void save_snapshot(const std::filesystem::path& path) const;
    static WorldState from_snapshot_json(const nlohmann::ordered_json& j);
    static WorldState load_snapshot(const std::filesystem::path& path);

  private:
    mutable std::mutex mu_;
    std::map<std::string, WorldEntry> records_;
    std::map<std::string, ServiceProfile> profiles_;
    std::vector<std::string> profile_order_;
    std::map<ChainId, AccountId> escrow_accounts_;
    std::uint64_t writes_ = 0;
    PersistObserver observer_;
};

}  // namespace connchain::escrow
