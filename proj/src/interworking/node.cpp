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

#include "connchain/interworking/node.hpp"

#include <algorithm>

#include "connchain/common/error.hpp"
#include "connchain/ledger/hash.hpp"

namespace connchain::interworking {

bool verify_block_integrity(const ledger::Block& block, const Digest& expected_prev_hash) {
    if (block.prev_hash != expected_prev_hash) return false;
    return ledger::compute_block_hash(block) == block.hash;
}

std::optional<std::uint64_t> find_broken_link(const std::vector<ledger::Block>& chain) {
    Digest expected = ledger::kZeroDigest;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        if (chain[i].height != i || !verify_block_integrity(chain[i], expected)) return chain[i].height;
        expected = chain[i].hash;
    }
    return std::nullopt;
}

std::optional<ResultLookup> lookup_result(const VerifiedBlockEvent& event, const TxId& tx_id) {
    if (!event.verified) {
        throw Error(ErrorCode::kUnverifiedEvent, "lookup on unverified block event at height " +
                                                     std::to_string(event.height) + " of " + event.chain_id);
    }
    auto it = std::find_if(event.results.begin(), event.results.end(),
                           [&](const TxResult& r) { return r.tx_id == tx_id; });
    if (it == event.results.end()) return std::nullopt;
    return ResultLookup{it->status, it->return_code};
}

InterworkingNode::InterworkingNode(ledger::LedgerNetwork& ledger, ChainId chain, const Clock& clock)
    : ledger_(ledger), chain_(std::move(chain)), clock_(clock) {}

InterworkingNode::~InterworkingNode() { detach(); }

void InterworkingNode::attach(EventSink sink) {
    if (!ledger_.has_chain(chain_)) throw Error(ErrorCode::kUnknownChain, "unknown chain: " + chain_);
    detach();
    {
        std::lock_guard lock(handling_mu_);
        sink_ = std::move(sink);
        auto tip = ledger_.block_at(chain_, ledger_.height(chain_));
        verified_height_ = tip->height;
        verified_hash_ = tip->hash;
    }
    auto id = ledger_.subscribe_blocks(chain_, [this](const ledger::Block& block) { on_block(block); });
    std::lock_guard lock(handling_mu_);
    subscription_ = id;
    attached_ = true;
}

void InterworkingNode::detach() {
    std::optional<ledger::SubscriptionId> id;
    {
        std::lock_guard lock(handling_mu_);
        id = subscription_;
        subscription_.reset();
        attached_ = false;
    }
    if (id) ledger_.unsubscribe(*id);
}

bool InterworkingNode::attached() const { return attached_; }

TxId InterworkingNode::issue_transaction(const AccountId& from, const AccountId& to, Amount amount,
                                         std::optional<Millis> valid_until) {
    if (!attached()) throw Error(ErrorCode::kUnknownChain, "node is not attached to " + chain_);
    TxId id = ledger_.submit_transfer(chain_, from, to, amount, valid_until);
    std::lock_guard lock(in_flight_mu_);
    in_flight_.insert(id);
    return id;
}

Amount InterworkingNode::query_balance(const AccountId& account) const { return ledger_.get_balance(chain_, account); }

std::optional<TxResult> InterworkingNode::find_confirmed(const TxId& tx_id) const {
    const auto blocks = ledger_.blocks(chain_);
    if (find_broken_link(blocks)) return std::nullopt;
    for (const auto& block : blocks) {
        for (const auto& tx : block.transactions) {
            if (tx.tx_id == tx_id) return TxResult{tx.tx_id, tx.status, tx.return_code, tx.from, tx.to, tx.amount};
        }
    }
    return std::nullopt;
}

std::string InterworkingNode::asset_type() const { return ledger_.config(chain_).asset_type; }

void InterworkingNode::set_checkpoint(std::uint64_t height, const Digest& hash) {
    std::lock_guard lock(handling_mu_);
    verified_height_ = height;
    verified_hash_ = hash;
}

VerifiedBlockEvent InterworkingNode::forward_block(const ledger::Block& block) {
    std::lock_guard lock(handling_mu_);
    return forward_locked(block);
}

VerifiedBlockEvent InterworkingNode::forward_locked(const ledger::Block& block) {
    VerifiedBlockEvent event;
    event.chain_id = chain_;
    event.height = block.height;
    event.received_at = clock_.now();
    event.verified = block.height == verified_height_ + 1 && verify_block_integrity(block, verified_hash_);

    if (event.verified) {
        verified_height_ = block.height;
        verified_hash_ = block.hash;
        event.results.reserve(block.transactions.size());
        std::lock_guard lock(in_flight_mu_);
        for (const auto& tx : block.transactions) {
            event.results.push_back({tx.tx_id, tx.status, tx.return_code, tx.from, tx.to, tx.amount});
            in_flight_.erase(tx.tx_id);
        }
    } else {
        ++rejected_;
    }
    if (sink_) sink_(event);
    return event;
}

void InterworkingNode::on_block(const ledger::Block& block) {
    std::lock_guard lock(handling_mu_);
    // already recovered through resync
    if (block.height <= verified_height_) return;
    if (!forward_locked(block).verified) resync_locked();
}

void InterworkingNode::resync_locked() {
    while (auto canonical = ledger_.block_at(chain_, verified_height_ + 1)) {
        if (!forward_locked(*canonical).verified) return;
    }
}

bool InterworkingNode::in_flight(const TxId& tx_id) const {
    std::lock_guard lock(in_flight_mu_);
    return in_flight_.contains(tx_id);
}

std::size_t InterworkingNode::in_flight_count() const {
    std::lock_guard lock(in_flight_mu_);
    return in_flight_.size();
}

std::uint64_t InterworkingNode::verified_height() const {
    std::lock_guard lock(handling_mu_);
    return verified_height_;
}

std::size_t InterworkingNode::rejected_blocks() const {
    std::lock_guard lock(handling_mu_);
    return rejected_;
}

}  // namespace connchain::interworking
