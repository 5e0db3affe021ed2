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

#include "connchain/escrow/engine.hpp"

#include <stdexcept>

#include <spdlog/spdlog.h>

#include "connchain/common/error.hpp"

namespace connchain::escrow {

using interworking::InterworkingNode;
using interworking::TxResult;
using interworking::VerifiedBlockEvent;
using ledger::TxStatus;

namespace {

// The txID a record is currently waiting on, if it is in an awaiting state.
std::optional<TxId> awaited_tx(const ExchangeRecord& r) {
    switch (r.progress) {
        case Progress::kRequestMargin:
            return r.from_chain.escrow_tx_id;
        case Progress::kRequestCredit:
            return r.to_chain.payment_tx_id;
        case Progress::kRequestFreeze:
            return r.from_chain.settlement_tx_id;
        case Progress::kRequestRecovery:
            return r.from_chain.restore_tx_id;
        default:
            return std::nullopt;
    }
}

}  // namespace

EscrowEngine::EscrowEngine(const Clock& clock, WorldState& state, EngineOptions options)
    : clock_(clock), state_(state), options_(options) {
    if (options_.timeout < 0 || options_.retry_limit < 0) {
        throw Error(ErrorCode::kInvalidConfig, "timeout and retry limit must be non-negative");
    }
    rebuild_index();
}

EscrowEngine::~EscrowEngine() = default;

void EscrowEngine::rebuild_index() {
    for (const auto& entry : state_.entries()) {
        if (entry.meta.stuck || is_terminal(entry.record.progress)) continue;
        if (auto tx = awaited_tx(entry.record)) awaiting_[*tx] = entry.record.id;
    }
}

AccountId EscrowEngine::escrow_account_for(const ChainId& chain) { return "cc-escrow-" + chain; }

void EscrowEngine::attach(InterworkingNode& node) {
    {
        std::lock_guard lock(mu_);
        nodes_[node.chain_id()] = &node;
        state_.register_escrow_account(node.chain_id(), escrow_account_for(node.chain_id()));
    }
    node.attach([this](const VerifiedBlockEvent& event) { on_block_event(event); });
}

InterworkingNode& EscrowEngine::node_for(const ChainId& chain) const {
    auto it = nodes_.find(chain);
    if (it == nodes_.end()) throw Error(ErrorCode::kUnknownChain, "engine is not attached to " + chain);
    return *it->second;
}

AccountId EscrowEngine::escrow_on(const ChainId& chain) const {
    auto account = state_.escrow_account(chain);
    if (!account) throw Error(ErrorCode::kUnknownChain, "no escrow account on " + chain);
    return *account;
}

Millis EscrowEngine::deadline() const { return clock_.now() + options_.timeout; }

std::string EscrowEngine::register_profile(const ServiceProfile& profile) {
    validate(profile);
    std::lock_guard lock(mu_);
    node_for(profile.src_chain);
    node_for(profile.dst_chain);
    if (!state_.put_profile(profile)) {
        throw Error(ErrorCode::kDuplicateRule, "ruleID already registered: " + profile.rule_id);
    }
    return profile.rule_id;
}

std::vector<ServiceProfile> EscrowEngine::list_profiles() const { return state_.profiles(); }

ServiceProfile EscrowEngine::get_profile(const std::string& rule_id) const {
    auto profile = state_.profile(rule_id);
    if (!profile) throw Error(ErrorCode::kUnknownRule, "unknown ruleID: " + rule_id);
    return *profile;
}

std::string EscrowEngine::next_id() {
    const std::string base = format_millis(clock_.now());
    if (!state_.contains(base)) return base;
    int& counter = id_collisions_[base];
    std::string candidate;
    do {
        candidate = base + "-" + std::to_string(++counter);
    } while (state_.contains(candidate));
    return candidate;
}

void EscrowEngine::persist(const Work& work) { state_.put(work.entry.record, work.entry.meta); }

void EscrowEngine::advance(Work& work, Progress to) {
    auto& record = work.entry.record;
    const Progress from = record.progress;
    if (!is_legal_transition(from, to)) {
        throw std::logic_error("illegal transition " + std::string(to_string(from)) + " -> " +
                               std::string(to_string(to)) + " for " + record.id);
    }
    record.progress = to;
    // "complete" is reported through progress only
    if (to != Progress::kComplete) record.timestamps.emplace_back(to_string(to), format_seconds(clock_.now()));
    work.applied->push_back({record.id, from, to});
    persist(work);
}

void EscrowEngine::await(Work& work, const TxId& tx) {
    work.entry.meta.awaiting_since = clock_.now();
    awaiting_[tx] = work.entry.record.id;
}

void EscrowEngine::mark_stuck(Work& work, const std::string& why) {
    spdlog::warn("exchange {} halted in {}: {}", work.entry.record.id, to_string(work.entry.record.progress), why);
    if (auto tx = awaited_tx(work.entry.record)) awaiting_.erase(*tx);
    work.entry.meta.stuck = true;
    persist(work);
}

std::string EscrowEngine::start_exchange(const ExchangeRequest& request) {
    std::lock_guard lock(mu_);
    auto profile = state_.profile(request.rule_id);
    if (!profile) throw Error(ErrorCode::kUnknownRule, "unknown ruleID: " + request.rule_id);
    if (request.dst_amount < 1) throw Error(ErrorCode::kInvalidAmount, "dstAmount must be >= 1");
    const Amount src_amount = compute_source_amount(request.dst_amount, *profile);
    auto& src_node = node_for(profile->src_chain);
    auto& dst_node = node_for(profile->dst_chain);

    std::vector<Transition> applied;
    Work work{{}, &applied};
    auto& record = work.entry.record;
    record.id = next_id();
    record.user_id = request.user_id;
    record.rule_id = request.rule_id;
    record.from_chain.chain_id = profile->src_chain;
    record.from_chain.account_id = request.src_account;
    record.from_chain.asset_type = src_node.asset_type();
    record.from_chain.asset = std::to_string(src_amount);
    record.to_chain.chain_id = profile->dst_chain;
    record.to_chain.account_id = request.dst_account;
    record.to_chain.asset_type = dst_node.asset_type();
    record.to_chain.asset = std::to_string(request.dst_amount);
    record.progress = Progress::kCreate;
    record.timestamps.emplace_back("create", format_seconds(clock_.now()));
    persist(work);

    request_margin(work, request);
    return record.id;
}

void EscrowEngine::request_margin(Work& work, const ExchangeRequest& request) {
    auto& record = work.entry.record;
    const Millis valid_until = deadline();
    TxId tx = node_for(record.from_chain.chain_id)
                  .issue_transaction(request.src_account, escrow_on(record.from_chain.chain_id),
                                     record.source_amount(), valid_until);
    record.from_chain.escrow_tx_id = tx;
    await(work, tx);
    advance(work, Progress::kRequestMargin);
}

void EscrowEngine::check_and_request_credit(Work& work) {
    auto& record = work.entry.record;
    const ServiceProfile profile = get_profile(record.rule_id);
    auto& dst_node = node_for(record.to_chain.chain_id);
    const Amount amount = record.destination_amount();

    // advisory fast-fail; the credit transaction's own status is authoritative
    if (dst_node.query_balance(profile.exchanger_dst_account) < amount) {
        advance(work, Progress::kFailedCredit);
        request_recovery(work);
        return;
    }
    const Millis valid_until = deadline();
    TxId tx = dst_node.issue_transaction(profile.exchanger_dst_account, record.to_chain.account_id, amount, valid_until);
    record.to_chain.payment_tx_id = tx;
    await(work, tx);
    advance(work, Progress::kRequestCredit);
}

void EscrowEngine::request_freeze(Work& work) {
    auto& record = work.entry.record;
    const ServiceProfile profile = get_profile(record.rule_id);
    const ChainId& chain = record.from_chain.chain_id;
    const Millis valid_until = deadline();
    TxId tx = node_for(chain).issue_transaction(escrow_on(chain), profile.exchanger_src_account,
                                                record.source_amount(), valid_until);
    record.from_chain.settlement_tx_id = tx;
    work.entry.meta.retries = 0;
    await(work, tx);
    advance(work, Progress::kRequestFreeze);
}

void EscrowEngine::request_recovery(Work& work) {
    auto& record = work.entry.record;
    const ChainId& chain = record.from_chain.chain_id;
    const Millis valid_until = deadline();
    TxId tx = node_for(chain).issue_transaction(escrow_on(chain), record.from_chain.account_id,
                                                record.source_amount(), valid_until);
    record.from_chain.restore_tx_id = tx;
    work.entry.meta.retries = 0;
    await(work, tx);
    advance(work, Progress::kRequestRecovery);
}

void EscrowEngine::retry_engine_transfer(Work& work) {
    auto& record = work.entry.record;
    auto& meta = work.entry.meta;
    if (auto old = awaited_tx(record)) awaiting_.erase(*old);
    if (meta.retries >= options_.retry_limit) {
        mark_stuck(work, "retry limit reached");
        return;
    }
    ++meta.retries;

    const ChainId& chain = record.from_chain.chain_id;
    const bool settling = record.progress == Progress::kRequestFreeze;
    const AccountId to = settling ? get_profile(record.rule_id).exchanger_src_account : record.from_chain.account_id;
    const Millis valid_until = deadline();
    TxId tx = node_for(chain).issue_transaction(escrow_on(chain), to, record.source_amount(), valid_until);
    (settling ? record.from_chain.settlement_tx_id : record.from_chain.restore_tx_id) = tx;
    await(work, tx);
    work.applied->push_back({record.id, record.progress, record.progress});
    persist(work);
}

void EscrowEngine::handle_result(Work& work, const TxResult& result) {
    const bool ok = result.status == TxStatus::kSuccess;
    switch (work.entry.record.progress) {
        case Progress::kRequestMargin:
            if (ok) {
                advance(work, Progress::kFixedMargin);
                check_and_request_credit(work);
            } else {
                advance(work, Progress::kFailedMargin);
            }
            break;
        case Progress::kRequestCredit:
            if (ok) {
                advance(work, Progress::kFixedCredit);
                request_freeze(work);
            } else {
                advance(work, Progress::kFailedCredit);
                request_recovery(work);
            }
            break;
        case Progress::kRequestFreeze:
            if (ok) {
                advance(work, Progress::kFixedFreeze);
                advance(work, Progress::kComplete);
            } else {
                retry_engine_transfer(work);
            }
            break;
        case Progress::kRequestRecovery:
            if (ok) {
                advance(work, Progress::kFixedRecovery);
            } else {
                retry_engine_transfer(work);
            }
            break;
        default:
            mark_stuck(work, "unexpected result for " + result.tx_id);
            break;
    }
}

std::vector<Transition> EscrowEngine::on_block_event(const VerifiedBlockEvent& event) {
    std::lock_guard lock(mu_);
    std::vector<Transition> applied;
    if (!event.verified) {
        ++rejected_events_;
        spdlog::debug("rejected unverified block {} of {}", event.height, event.chain_id);
        return applied;
    }
    for (const auto& result : event.results) {
        auto it = awaiting_.find(result.tx_id);
        if (it == awaiting_.end()) continue;
        const std::string id = it->second;
        awaiting_.erase(it);

        auto entry = state_.get(id);
        if (!entry || entry->meta.stuck) continue;
        if (awaited_tx(entry->record) != result.tx_id) continue;  // superseded by a retry

        Work work{std::move(*entry), &applied};
        try {
            handle_result(work, result);
        } catch (const std::exception& e) {
            mark_stuck(work, e.what());
        }
    }
    return applied;
}

std::vector<Transition> EscrowEngine::on_timeout(const std::string& id) {
    std::lock_guard lock(mu_);
    auto entry = state_.get(id);
    if (!entry) throw Error(ErrorCode::kUnknownId, "unknown exchange id: " + id);
    std::vector<Transition> applied;
    if (entry->meta.stuck || is_terminal(entry->record.progress)) return applied;
    if (clock_.now() - entry->meta.awaiting_since <= options_.timeout) return applied;

    Work work{std::move(*entry), &applied};
    try {
        switch (work.entry.record.progress) {
            case Progress::kRequestMargin:
                awaiting_.erase(*work.entry.record.from_chain.escrow_tx_id);
                advance(work, Progress::kFailedMargin);
                break;
            case Progress::kRequestCredit:
                awaiting_.erase(*work.entry.record.to_chain.payment_tx_id);
                advance(work, Progress::kFailedCredit);
                request_recovery(work);
                break;
            case Progress::kRequestFreeze:
            case Progress::kRequestRecovery:
                retry_engine_transfer(work);
                break;
            default:
                // intermediate states only survive a restart; recover() owns them
                break;
        }
    } catch (const std::exception& e) {
        mark_stuck(work, e.what());
    }
    return applied;
}

std::vector<Transition> EscrowEngine::scan_timeouts() {
    std::vector<Transition> applied;
    for (const auto& id : state_.ids()) {
        auto step = on_timeout(id);
        applied.insert(applied.end(), step.begin(), step.end());
    }
    return applied;
}

std::vector<Transition> EscrowEngine::recover() {
    std::lock_guard lock(mu_);
    std::vector<Transition> applied;
    for (auto& entry : state_.entries()) {
        if (entry.meta.stuck || is_terminal(entry.record.progress)) continue;
        Work work{std::move(entry), &applied};
        try {
            switch (work.entry.record.progress) {
                case Progress::kCreate:
                    // the deposit may or may not have been issued before the restart
                    mark_stuck(work, "deposit state unknown after restart");
                    break;
                case Progress::kFixedMargin:
                    check_and_request_credit(work);
                    break;
                case Progress::kFixedCredit:
                    request_freeze(work);
                    break;
                case Progress::kFailedCredit:
                    request_recovery(work);
                    break;
                case Progress::kFixedFreeze:
                    advance(work, Progress::kComplete);
                    break;
                case Progress::kRequestMargin:
                case Progress::kRequestCredit:
                case Progress::kRequestFreeze:
                case Progress::kRequestRecovery: {
                    // the confirming block may have been delivered to the previous process only
                    const auto tx = awaited_tx(work.entry.record);
                    if (!tx) {
                        mark_stuck(work, "awaited transfer missing from record");
                        break;
                    }
                    const auto& chain = work.entry.record.progress == Progress::kRequestCredit
                                            ? work.entry.record.to_chain.chain_id
                                            : work.entry.record.from_chain.chain_id;
                    if (auto result = node_for(chain).find_confirmed(*tx)) {
                        awaiting_.erase(*tx);
                        handle_result(work, *result);
                    }
                    break;
                }
                default:
                    break;
            }
        } catch (const std::exception& e) {
            mark_stuck(work, e.what());
        }
    }
    return applied;
}

ExchangeRecord EscrowEngine::get_record(const std::string& id) const {
    auto entry = state_.get(id);
    if (!entry) throw Error(ErrorCode::kUnknownId, "unknown exchange id: " + id);
    return entry->record;
}

RecordMeta EscrowEngine::get_meta(const std::string& id) const {
    auto entry = state_.get(id);
    if (!entry) throw Error(ErrorCode::kUnknownId, "unknown exchange id: " + id);
    return entry->meta;
}

std::vector<std::string> EscrowEngine::record_ids() const { return state_.ids(); }

std::size_t EscrowEngine::rejected_events() const {
    std::lock_guard lock(mu_);
    return rejected_events_;
}

}  // namespace connchain::escrow
