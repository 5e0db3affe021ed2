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

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "connchain/common/clock.hpp"
#include "connchain/escrow/profile.hpp"
#include "connchain/escrow/record.hpp"
#include "connchain/escrow/world_state.hpp"
#include "connchain/interworking/node.hpp"

namespace connchain::escrow {

struct EngineOptions {
    Millis timeout = 20'000;
    int retry_limit = 3;
};

// One applied step. from == to marks a re-issued settlement or refund transfer.
struct Transition {
    std::string id;
    Progress from;
    Progress to;

    bool operator==(const Transition&) const = default;
};

// Runs escrow exchanges between a source and a destination chain.
//
// The payer's asset is first deposited into the engine's escrow account on the
// source chain. Once the deposit is confirmed the exchanger pays the merchant
// on the destination chain; the deposit is then settled to the exchanger, or
// refunded to the payer if the payment fails or times out. Every transition is
// written to the WorldState before the transfer that depends on it is issued.
class EscrowEngine {
  public:
    EscrowEngine(const Clock& clock, WorldState& state, EngineOptions options = {});
    ~EscrowEngine();

    EscrowEngine(const EscrowEngine&) = delete;
    EscrowEngine& operator=(const EscrowEngine&) = delete;

    // Routes the node's block events into on_block_event and registers the
    // engine's escrow account for that chain. The node must outlive the engine.
    void attach(interworking::InterworkingNode& node);

    static AccountId escrow_account_for(const ChainId& chain);

    std::string register_profile(const ServiceProfile& profile);
    [[nodiscard]] std::vector<ServiceProfile> list_profiles() const;
    [[nodiscard]] ServiceProfile get_profile(const std::string& rule_id) const;

    std::string start_exchange(const ExchangeRequest& request);

    std::vector<Transition> on_block_event(const interworking::VerifiedBlockEvent& event);

    // Applies the timeout policy to one record if its awaited transfer is overdue.
    std::vector<Transition> on_timeout(const std::string& id);
    std::vector<Transition> scan_timeouts();

    // Continues records left in an intermediate state by a restart from a snapshot.
    // Awaited transfers that were confirmed while no engine was listening are
    // looked up on their chains. Records still in create are flagged stuck.
    std::vector<Transition> recover();

    [[nodiscard]] ExchangeRecord get_record(const std::string& id) const;
    [[nodiscard]] RecordMeta get_meta(const std::string& id) const;
    [[nodiscard]] std::vector<std::string> record_ids() const;
    [[nodiscard]] std::size_t rejected_events() const;
    [[nodiscard]] const EngineOptions& options() const { return options_; }

  private:
    struct Work {
        WorldEntry entry;
        std::vector<Transition>* applied;
    };

    void advance(Work& work, Progress to);
    void persist(const Work& work);
    interworking::InterworkingNode& node_for(const ChainId& chain) const;
    AccountId escrow_on(const ChainId& chain) const;
    Millis deadline() const;
    std::string next_id();

    void request_margin(Work& work, const ExchangeRequest& request);
    void check_and_request_credit(Work& work);
    void request_freeze(Work& work);
    void request_recovery(Work& work);
    void retry_engine_transfer(Work& work);
    void mark_stuck(Work& work, const std::string& why);
    void await(Work& work, const TxId& tx);

    void handle_result(Work& work, const interworking::TxResult& result);
    void rebuild_index();

    const Clock& clock_;
    WorldState& state_;
    const EngineOptions options_;

    mutable std::mutex mu_;
    std::map<ChainId, interworking::InterworkingNode*> nodes_;
    std::map<TxId, std::string> awaiting_;  // awaited txID -> record id
    std::map<std::string, int> id_collisions_;
    std::size_t rejected_events_ = 0;
};

}  // namespace connchain::escrow
