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
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <set>
#include <vector>

#include "connchain/common/clock.hpp"
#include "connchain/ledger/ledger.hpp"
#include "connchain/ledger/types.hpp"

namespace connchain::interworking {

using ledger::AccountId;
using ledger::Amount;
using ledger::ChainId;
using ledger::Digest;
using ledger::TxId;
using ledger::TxStatus;

struct TxResult {
    TxId tx_id;
    TxStatus status = TxStatus::kPending;
    int return_code = 0;
    AccountId from;
    AccountId to;
    Amount amount = 0;

    bool operator==(const TxResult&) const = default;
};

// Chain-independent view of one block, as handed to the escrow engine.
struct VerifiedBlockEvent {
    ChainId chain_id;
    std::uint64_t height = 0;
    std::vector<TxResult> results;  // empty unless verified
    bool verified = false;
    Millis received_at = 0;
};

struct ResultLookup {
    TxStatus status;
    int return_code;

    bool operator==(const ResultLookup&) const = default;
};

// True iff the recomputed hash equals block.hash and block.prev_hash equals expected_prev_hash.
bool verify_block_integrity(const ledger::Block& block, const Digest& expected_prev_hash);

// Audits a whole stored chain from genesis: every hash recomputes and every
// prevHash links to its predecessor. Returns the first failing height, or nullopt.
std::optional<std::uint64_t> find_broken_link(const std::vector<ledger::Block>& chain);

// Throws Error(kUnverifiedEvent) when event.verified is false.
std::optional<ResultLookup> lookup_result(const VerifiedBlockEvent& event, const TxId& tx_id);

using EventSink = std::function<void(const VerifiedBlockEvent&)>;

// Adapter between one ledger and the engine. It behaves as an ordinary
// participant: it submits transfers, reads balances, receives broadcast blocks
// and may re-read canonical blocks by height. It never touches faults or
// block production.
class InterworkingNode {
  public:
    InterworkingNode(ledger::LedgerNetwork& ledger, ChainId chain, const Clock& clock);
    ~InterworkingNode();

    InterworkingNode(const InterworkingNode&) = delete;
    InterworkingNode& operator=(const InterworkingNode&) = delete;

    // Subscribes to the chain and trusts its current tip as the starting checkpoint.
    void attach(EventSink sink);
    void detach();
    [[nodiscard]] bool attached() const;

    TxId issue_transaction(const AccountId& from, const AccountId& to, Amount amount,
                           std::optional<Millis> valid_until = std::nullopt);

    // Verifies against the last verified block and hands the event to the sink.
    // Verification failure is reported in the event, never thrown.
    VerifiedBlockEvent forward_block(const ledger::Block& block);

    [[nodiscard]] Amount query_balance(const AccountId& account) const;

    // Searches the canonical chain for a transaction's result, auditing every
    // link from genesis on the way. Used after a restart, when blocks delivered
    // before the current tip will not be broadcast again. Returns nullopt if the
    // transaction is not in a block yet or the chain fails verification.
    [[nodiscard]] std::optional<TxResult> find_confirmed(const TxId& tx_id) const;

    // Moves the verification cursor to a trusted (height, hash) pair.
    void set_checkpoint(std::uint64_t height, const Digest& hash);

    [[nodiscard]] const ChainId& chain_id() const { return chain_; }
    [[nodiscard]] std::string asset_type() const;
    [[nodiscard]] bool in_flight(const TxId& tx_id) const;
    [[nodiscard]] std::size_t in_flight_count() const;
    [[nodiscard]] std::uint64_t verified_height() const;
    [[nodiscard]] std::size_t rejected_blocks() const;

  private:
    void on_block(const ledger::Block& block);
    VerifiedBlockEvent forward_locked(const ledger::Block& block);
    void resync_locked();

    ledger::LedgerNetwork& ledger_;
    const ChainId chain_;
    const Clock& clock_;

    mutable std::mutex handling_mu_;  // serializes block handling in height order
    EventSink sink_;
    std::optional<ledger::SubscriptionId> subscription_;
    std::atomic<bool> attached_{false};  // read without handling_mu_ from inside the sink
    std::uint64_t verified_height_ = 0;
    Digest verified_hash_{};
    std::size_t rejected_ = 0;

    mutable std::mutex in_flight_mu_;
    std::set<TxId> in_flight_;
};

}  // namespace connchain::interworking
