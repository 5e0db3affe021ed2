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
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <vector>

#include "connchain/common/clock.hpp"
#include "connchain/ledger/types.hpp"

namespace connchain::ledger {

using BlockHandler = std::function<void(const Block&)>;
using SubscriptionId = std::uint64_t;

// A set of independent simulated blockchains sharing one clock.
//
// Each chain is a serialized unit guarded by its own mutex. Produced blocks go
// through a per-chain outbox which is drained under a separate delivery mutex,
// so subscribers see blocks in height order without the chain state being
// locked while handlers run. Handlers may submit transfers to any chain but
// must not call produce_block on the chain that is delivering to them.
class LedgerNetwork {
  public:
    explicit LedgerNetwork(const Clock& clock, std::uint64_t seed = 0);
    ~LedgerNetwork();

    LedgerNetwork(const LedgerNetwork&) = delete;
    LedgerNetwork& operator=(const LedgerNetwork&) = delete;

    ChainId create_chain(ChainConfig config);

    // Queues a pending transfer. No balance changes until the next block.
    TxId submit_transfer(const ChainId& chain, const AccountId& from, const AccountId& to, Amount amount,
                         std::optional<Millis> valid_until = std::nullopt);

    // Executes all pending transactions in submission order and appends a block.
    // Returns nullopt when halted or when the block policy does not permit a block yet.
    std::optional<Block> produce_block(const ChainId& chain);

    [[nodiscard]] Amount get_balance(const ChainId& chain, const AccountId& account) const;

    SubscriptionId subscribe_blocks(const ChainId& chain, BlockHandler handler);
    void unsubscribe(SubscriptionId id);

    void inject_fault(const FaultDirective& directive);

    [[nodiscard]] bool has_chain(const ChainId& chain) const;
    [[nodiscard]] std::vector<ChainId> chain_ids() const;
    [[nodiscard]] ChainConfig config(const ChainId& chain) const;
    [[nodiscard]] std::vector<Block> blocks(const ChainId& chain) const;
    // Canonical stored block, as a peer would serve it on request.
    [[nodiscard]] std::optional<Block> block_at(const ChainId& chain, std::uint64_t height) const;
    [[nodiscard]] std::uint64_t height(const ChainId& chain) const;
    [[nodiscard]] std::map<AccountId, Amount> balances(const ChainId& chain) const;
    [[nodiscard]] std::size_t pending_count(const ChainId& chain) const;
    [[nodiscard]] FaultDirective fault(const ChainId& chain) const;
    // True once a txID has been accepted by submit_transfer on this chain.
    [[nodiscard]] bool knows_transaction(const ChainId& chain, const TxId& tx_id) const;

  private:
    struct Chain;

    Chain& chain_ref(const ChainId& chain) const;
    TxId next_tx_id();
    void drain_outbox(Chain& chain);

    const Clock& clock_;

    mutable std::shared_mutex registry_mu_;
    std::map<ChainId, std::unique_ptr<Chain>> chains_;
    std::map<SubscriptionId, ChainId> subscription_owner_;
    SubscriptionId next_subscription_ = 1;

    std::mutex rng_mu_;
    std::mt19937_64 rng_;
};

}  // namespace connchain::ledger
