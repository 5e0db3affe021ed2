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

#include "connchain/ledger/ledger.hpp"

#include <cstdio>
#include <deque>
#include <set>

#include "connchain/common/error.hpp"
#include "connchain/ledger/hash.hpp"

namespace connchain::ledger {

struct LedgerNetwork::Chain {
    ChainConfig config;

    mutable std::mutex mu;
    std::map<AccountId, Amount> balances;
    std::vector<Block> blocks;
    std::deque<Transaction> pending;
    std::set<TxId> used_ids;
    FaultDirective fault;
    std::map<SubscriptionId, std::shared_ptr<BlockHandler>> subscribers;

    struct Outgoing {
        Block block;
        std::vector<std::shared_ptr<BlockHandler>> recipients;
    };
    std::deque<Outgoing> outbox;  // guarded by mu

    std::mutex delivery_mu;
};

LedgerNetwork::LedgerNetwork(const Clock& clock, std::uint64_t seed) : clock_(clock), rng_(seed) {}

LedgerNetwork::~LedgerNetwork() = default;

LedgerNetwork::Chain& LedgerNetwork::chain_ref(const ChainId& chain) const {
    std::shared_lock lock(registry_mu_);
    auto it = chains_.find(chain);
    if (it == chains_.end()) throw Error(ErrorCode::kUnknownChain, "unknown chain: " + chain);
    return *it->second;
}

ChainId LedgerNetwork::create_chain(ChainConfig config) {
    if (config.chain_id.empty()) throw Error(ErrorCode::kInvalidConfig, "chainID must not be empty");
    if (config.block_policy.kind == BlockPolicy::Kind::kInterval && config.block_policy.interval < 0) {
        throw Error(ErrorCode::kInvalidConfig, "block interval must be non-negative");
    }
    if (config.pow_difficulty > 256) throw Error(ErrorCode::kInvalidConfig, "powDifficulty exceeds 256 bits");
    for (const auto& [account, balance] : config.genesis) {
        if (balance < 0) {
            throw Error(ErrorCode::kInvalidConfig, "negative genesis balance for " + account);
        }
    }

    auto chain = std::make_unique<Chain>();
    chain->config = config;
    chain->fault.chain_id = config.chain_id;
    for (const auto& [account, balance] : config.genesis) {
        if (balance > 0) chain->balances[account] = balance;
    }

    Block genesis;
    genesis.height = 0;
    genesis.prev_hash = kZeroDigest;
    genesis.timestamp = clock_.now();
    genesis.hash = compute_block_hash(genesis);
    chain->blocks.push_back(std::move(genesis));

    std::unique_lock lock(registry_mu_);
    if (chains_.contains(config.chain_id)) {
        throw Error(ErrorCode::kDuplicateChainId, "chain already registered: " + config.chain_id);
    }
    chains_.emplace(config.chain_id, std::move(chain));
    return config.chain_id;
}

TxId LedgerNetwork::next_tx_id() {
    std::lock_guard lock(rng_mu_);
    std::uint64_t hi = rng_();
    std::uint64_t lo = rng_();
    // RFC 4122 version 4 / variant 1 bit layout
    hi = (hi & 0xffffffffffff0fffULL) | 0x0000000000004000ULL;
    lo = (lo & 0x3fffffffffffffffULL) | 0x8000000000000000ULL;
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%08x-%04x-%04x-%04x-%012llx", static_cast<unsigned>(hi >> 32),
                  static_cast<unsigned>((hi >> 16) & 0xffff), static_cast<unsigned>(hi & 0xffff),
                  static_cast<unsigned>(lo >> 48), static_cast<unsigned long long>(lo & 0xffffffffffffULL));
    return buf;
}

TxId LedgerNetwork::submit_transfer(const ChainId& chain_id, const AccountId& from, const AccountId& to,
                                    Amount amount, std::optional<Millis> valid_until) {
    Chain& chain = chain_ref(chain_id);
    if (amount < 1) throw Error(ErrorCode::kInvalidAmount, "transfer amount must be >= 1");

    Transaction tx;
    tx.from = from;
    tx.to = to;
    tx.amount = amount;
    tx.valid_until = valid_until;

    std::lock_guard lock(chain.mu);
    do {
        tx.tx_id = next_tx_id();
    } while (chain.used_ids.contains(tx.tx_id));
    chain.used_ids.insert(tx.tx_id);
    tx.submitted_at = clock_.now();
    chain.pending.push_back(tx);
    return tx.tx_id;
}

std::optional<Block> LedgerNetwork::produce_block(const ChainId& chain_id) {
    Chain& chain = chain_ref(chain_id);
    std::optional<Block> produced;
    {
        std::lock_guard lock(chain.mu);
        if (chain.fault.mode == FaultMode::kHaltBlockProduction) return std::nullopt;

        const Millis now = clock_.now();
        const Block& tip = chain.blocks.back();
        const auto& policy = chain.config.block_policy;
        if (policy.kind == BlockPolicy::Kind::kPerTransaction && chain.pending.empty()) return std::nullopt;
        if (policy.kind == BlockPolicy::Kind::kInterval && now - tip.timestamp < policy.interval) {
            return std::nullopt;
        }

        Block block;
        block.height = tip.height + 1;
        block.prev_hash = tip.hash;
        block.timestamp = now;

        while (!chain.pending.empty()) {
            Transaction tx = std::move(chain.pending.front());
            chain.pending.pop_front();

            if (tx.valid_until && now > *tx.valid_until) {
                tx.status = TxStatus::kFailure;
                tx.return_code = kReturnExpired;
            } else if (chain.fault.mode == FaultMode::kFailNextTransaction) {
                tx.status = TxStatus::kFailure;
                tx.return_code = chain.fault.return_code;
                chain.fault.mode = FaultMode::kNone;
            } else {
                Amount& from_balance = chain.balances[tx.from];
                if (from_balance >= tx.amount) {
                    from_balance -= tx.amount;
                    chain.balances[tx.to] += tx.amount;
                    tx.status = TxStatus::kSuccess;
                    tx.return_code = kReturnOk;
                } else {
                    tx.status = TxStatus::kFailure;
                    tx.return_code = kReturnInsufficientFunds;
                }
                if (from_balance == 0) chain.balances.erase(tx.from);
            }
            block.transactions.push_back(std::move(tx));
        }

        const unsigned difficulty = chain.config.pow_difficulty;
        for (block.nonce = 0;; ++block.nonce) {
            block.hash = compute_block_hash(block);
            if (difficulty == 0 || leading_zero_bits(block.hash) >= difficulty) break;
        }
        chain.blocks.push_back(block);

        Chain::Outgoing out{block, {}};
        if (chain.fault.mode == FaultMode::kTamperNextBlock && !out.block.transactions.empty()) {
            // the distributed copy no longer matches its hash; the stored block stays canonical
            out.block.transactions.front().amount += 1;
            chain.fault.mode = FaultMode::kNone;
        }
        for (const auto& [id, handler] : chain.subscribers) out.recipients.push_back(handler);
        chain.outbox.push_back(std::move(out));
        produced = std::move(block);
    }
    drain_outbox(chain);
    return produced;
}

void LedgerNetwork::drain_outbox(Chain& chain) {
    std::lock_guard delivery(chain.delivery_mu);
    for (;;) {
        Chain::Outgoing next;
        {
            std::lock_guard lock(chain.mu);
            if (chain.outbox.empty()) return;
            next = std::move(chain.outbox.front());
            chain.outbox.pop_front();
        }
        for (const auto& handler : next.recipients) (*handler)(next.block);
    }
}

Amount LedgerNetwork::get_balance(const ChainId& chain_id, const AccountId& account) const {
    Chain& chain = chain_ref(chain_id);
    std::lock_guard lock(chain.mu);
    auto it = chain.balances.find(account);
    return it == chain.balances.end() ? 0 : it->second;
}

SubscriptionId LedgerNetwork::subscribe_blocks(const ChainId& chain_id, BlockHandler handler) {
    Chain& chain = chain_ref(chain_id);
    SubscriptionId id;
    {
        std::unique_lock lock(registry_mu_);
        id = next_subscription_++;
        subscription_owner_.emplace(id, chain_id);
    }
    std::lock_guard lock(chain.mu);
    chain.subscribers.emplace(id, std::make_shared<BlockHandler>(std::move(handler)));
    return id;
}

void LedgerNetwork::unsubscribe(SubscriptionId id) {
    ChainId owner;
    {
        std::unique_lock lock(registry_mu_);
        auto it = subscription_owner_.find(id);
        if (it == subscription_owner_.end()) return;
        owner = it->second;
        subscription_owner_.erase(it);
    }
    Chain& chain = chain_ref(owner);
    std::lock_guard lock(chain.mu);
    chain.subscribers.erase(id);
}

void LedgerNetwork::inject_fault(const FaultDirective& directive) {
    Chain& chain = chain_ref(directive.chain_id);
    if (directive.mode == FaultMode::kFailNextTransaction && directive.return_code == kReturnOk) {
        throw Error(ErrorCode::kBadRequest, "fail-next-transaction needs a nonzero returnCode");
    }
    std::lock_guard lock(chain.mu);
    chain.fault = directive;
}

bool LedgerNetwork::has_chain(const ChainId& chain) const {
    std::shared_lock lock(registry_mu_);
    return chains_.contains(chain);
}

std::vector<ChainId> LedgerNetwork::chain_ids() const {
    std::shared_lock lock(registry_mu_);
    std::vector<ChainId> ids;
    for (const auto& [id, chain] : chains_) ids.push_back(id);
    return ids;
}

ChainConfig LedgerNetwork::config(const ChainId& chain_id) const {
    // config is immutable after creation
    return chain_ref(chain_id).config;
}

std::vector<Block> LedgerNetwork::blocks(const ChainId& chain_id) const {
    Chain& chain = chain_ref(chain_id);
    std::lock_guard lock(chain.mu);
    return chain.blocks;
}

std::optional<Block> LedgerNetwork::block_at(const ChainId& chain_id, std::uint64_t height) const {
    Chain& chain = chain_ref(chain_id);
    std::lock_guard lock(chain.mu);
    if (height >= chain.blocks.size()) return std::nullopt;
    return chain.blocks[height];
}

std::uint64_t LedgerNetwork::height(const ChainId& chain_id) const {
    Chain& chain = chain_ref(chain_id);
    std::lock_guard lock(chain.mu);
    return chain.blocks.back().height;
}

std::map<AccountId, Amount> LedgerNetwork::balances(const ChainId& chain_id) const {
    Chain& chain = chain_ref(chain_id);
    std::lock_guard lock(chain.mu);
    return chain.balances;
}

std::size_t LedgerNetwork::pending_count(const ChainId& chain_id) const {
    Chain& chain = chain_ref(chain_id);
    std::lock_guard lock(chain.mu);
    return chain.pending.size();
}

FaultDirective LedgerNetwork::fault(const ChainId& chain_id) const {
    Chain& chain = chain_ref(chain_id);
    std::lock_guard lock(chain.mu);
    return chain.fault;
}

bool LedgerNetwork::knows_transaction(const ChainId& chain_id, const TxId& tx_id) const {
    Chain& chain = chain_ref(chain_id);
    std::lock_guard lock(chain.mu);
    return chain.used_ids.contains(tx_id);
}

}  // namespace connchain::ledger
