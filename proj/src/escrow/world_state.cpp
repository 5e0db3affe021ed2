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

#include "connchain/escrow/world_state.hpp"

#include <fstream>

#include "connchain/common/error.hpp"

namespace connchain::escrow {

WorldState::WorldState(const WorldState& other) {
    std::lock_guard lock(other.mu_);
    records_ = other.records_;
    profiles_ = other.profiles_;
    profile_order_ = other.profile_order_;
    escrow_accounts_ = other.escrow_accounts_;
    writes_ = other.writes_;
}

WorldState& WorldState::operator=(const WorldState& other) {
    if (this == &other) return *this;
    WorldState copy(other);
    std::scoped_lock lock(mu_);
    records_ = std::move(copy.records_);
    profiles_ = std::move(copy.profiles_);
    profile_order_ = std::move(copy.profile_order_);
    escrow_accounts_ = std::move(copy.escrow_accounts_);
    writes_ = copy.writes_;
    return *this;
}

void WorldState::put(const ExchangeRecord& record, const RecordMeta& meta) {
    PersistObserver observer;
    WorldEntry entry{record, meta};
    {
        std::lock_guard lock(mu_);
        records_[record.id] = entry;
        ++writes_;
        observer = observer_;
    }
    if (observer) observer(entry);
}

std::optional<WorldEntry> WorldState::get(const std::string& id) const {
    std::lock_guard lock(mu_);
    auto it = records_.find(id);
    if (it == records_.end()) return std::nullopt;
    return it->second;
}

bool WorldState::contains(const std::string& id) const {
    std::lock_guard lock(mu_);
    return records_.contains(id);
}

std::vector<std::string> WorldState::ids() const {
    std::lock_guard lock(mu_);
    std::vector<std::string> out;
    out.reserve(records_.size());
    for (const auto& [id, entry] : records_) out.push_back(id);
    return out;
}

std::vector<WorldEntry> WorldState::entries() const {
    std::lock_guard lock(mu_);
    std::vector<WorldEntry> out;
    out.reserve(records_.size());
    for (const auto& [id, entry] : records_) out.push_back(entry);
    return out;
}

std::uint64_t WorldState::writes() const {
    std::lock_guard lock(mu_);
    return writes_;
}

bool WorldState::put_profile(const ServiceProfile& profile) {
    std::lock_guard lock(mu_);
    auto [it, inserted] = profiles_.emplace(profile.rule_id, profile);
    if (inserted) profile_order_.push_back(profile.rule_id);
    return inserted;
}

std::optional<ServiceProfile> WorldState::profile(const std::string& rule_id) const {
    std::lock_guard lock(mu_);
    auto it = profiles_.find(rule_id);
    if (it == profiles_.end()) return std::nullopt;
    return it->second;
}

std::vector<ServiceProfile> WorldState::profiles() const {
    std::lock_guard lock(mu_);
    std::vector<ServiceProfile> out;
    for (const auto& id : profile_order_) out.push_back(profiles_.at(id));
    return out;
}

void WorldState::register_escrow_account(const ChainId& chain, const AccountId& account) {
    std::lock_guard lock(mu_);
    escrow_accounts_[chain] = account;
}

std::optional<AccountId> WorldState::escrow_account(const ChainId& chain) const {
    std::lock_guard lock(mu_);
    auto it = escrow_accounts_.find(chain);
    if (it == escrow_accounts_.end()) return std::nullopt;
    return it->second;
}

std::map<ChainId, AccountId> WorldState::escrow_accounts() const {
    std::lock_guard lock(mu_);
    return escrow_accounts_;
}

void WorldState::set_observer(PersistObserver observer) {
    std::lock_guard lock(mu_);
    observer_ = std::move(observer);
}

nlohmann::ordered_json WorldState::snapshot_json() const {
    std::lock_guard lock(mu_);
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [id, entry] : records_) j[id] = to_json(entry.record);
    return j;
}

void WorldState::save_snapshot(const std::filesystem::path& path) const {
    const std::string body = snapshot_json().dump(2) + "\n";
    // write-then-rename so a crash never leaves a half-written snapshot
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::kBadRequest, "cannot write snapshot: " + tmp.string());
        out << body;
    }
    std::filesystem::rename(tmp, path);
}

WorldState WorldState::from_snapshot_json(const nlohmann::ordered_json& j) {
    if (!j.is_object()) throw Error(ErrorCode::kBadRequest, "snapshot must be a JSON object");
    WorldState state;
    for (auto it = j.begin(); it != j.end(); ++it) {
        ExchangeRecord record = record_from_json(it.value());
        if (record.id != it.key()) throw Error(ErrorCode::kBadRequest, "snapshot key does not match record id");
        RecordMeta meta;
        if (auto stamp = record.timestamp(to_string(record.progress))) meta.awaiting_since = parse_timestamp(*stamp);
        std::string id = record.id;
        state.records_.emplace(std::move(id), WorldEntry{std::move(record), meta});
    }
    return state;
}

WorldState WorldState::load_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::kBadRequest, "cannot read snapshot: " + path.string());
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(in);
    } catch (const nlohmann::ordered_json::parse_error& e) {
        throw Error(ErrorCode::kBadRequest, std::string("snapshot is not valid JSON: ") + e.what());
    }
    return from_snapshot_json(j);
}

}  // namespace connchain::escrow
