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

#include "connchain/harness/sweep.hpp"

#include <map>
#include <random>
#include <set>

#include "connchain/api/runtime.hpp"
#include "connchain/common/error.hpp"
#include "connchain/interworking/node.hpp"

namespace connchain::harness {

using escrow::Progress;
using ledger::AccountId;
using ledger::Amount;
using ledger::ChainId;

namespace {

constexpr Millis kSweepStart = 1'500'000'000'000;
constexpr int kDrainRounds = 200;
constexpr Millis kDrainStep = 5'000;

const std::vector<ChainId> kChains = {"ChainID-1", "ChainID-2"};
const std::vector<AccountId> kPayers = {"Payer1", "Payer2", "Payer3"};
const std::vector<AccountId> kMerchants = {"Merchant1", "Merchant2"};

struct World {
    api::ServiceConfig config;
    std::map<ChainId, std::map<AccountId, Amount>> genesis;
};

World make_world(std::mt19937_64& rng, const SweepOptions& options, std::uint64_t seed) {
    World w;
    w.config.timeout = options.timeout;
    w.config.retry_limit = options.retry_limit;
    w.config.seed = seed;

    std::uniform_int_distribution<Amount> payer_funds(0, 3'000);
    std::uniform_int_distribution<Amount> exchanger_funds(0, 5'000);
    for (const auto& chain : kChains) {
        ledger::ChainConfig c;
        c.chain_id = chain;
        for (const auto& payer : kPayers) c.genesis[payer] = payer_funds(rng);
        c.genesis["X-" + chain] = exchanger_funds(rng);
        c.genesis["Y-" + chain] = exchanger_funds(rng);
        w.genesis[chain] = c.genesis;
        w.config.chains.push_back(std::move(c));
    }
    // one exchanger per direction, each with a different rate and fee
    w.config.profiles.push_back({"x", "ChainID-1", "ChainID-2", "X-ChainID-1", "X-ChainID-2", {3, 2}, 5});
    w.config.profiles.push_back({"y", "ChainID-2", "ChainID-1", "Y-ChainID-2", "Y-ChainID-1", {1, 3}, 0});
    return w;
}

template <typename T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& items) {
    std::uniform_int_distribution<std::size_t> d(0, items.size() - 1);
    return items[d(rng)];
}

bool settled(const escrow::EscrowEngine& engine) {
    for (const auto& id : engine.record_ids()) {
        if (!is_terminal(engine.get_record(id).progress) && !engine.get_meta(id).stuck) return false;
    }
    return true;
}

struct TxView {
    ChainId chain;
    ledger::Transaction tx;
};

class Checker {
  public:
    Checker(api::Runtime& runtime, const World& world, ScheduleOutcome& out)
        : runtime_(runtime), world_(world), out_(out) {
        for (const auto& chain : kChains) {
            for (const auto& block : runtime_.ledger().blocks(chain)) {
                for (const auto& tx : block.transactions) txs_[tx.tx_id] = {chain, tx};
            }
        }
    }

    void run() {
        check_links();
        expected_ = world_.genesis;
        for (const auto& id : runtime_.engine().record_ids()) check_record(id);
        check_balances();
        check_orphans();
    }

  private:
    void fail(std::string what) { out_.violations.push_back(std::move(what)); }

    std::optional<ledger::TxStatus> status(const std::optional<ledger::TxId>& id) const {
        if (!id) return std::nullopt;
        auto it = txs_.find(*id);
        if (it == txs_.end()) return std::nullopt;
        return it->second.tx.status;
    }

    bool succeeded(const std::optional<ledger::TxId>& id) const {
        return status(id) == ledger::TxStatus::kSuccess;
    }

    void check_links() {
        for (const auto& chain : kChains) {
            if (auto bad = interworking::find_broken_link(runtime_.ledger().blocks(chain))) {
                fail(chain + " hash chain broken at height " + std::to_string(*bad));
            }
        }
    }

    void move(const ChainId& chain, const AccountId& from, const AccountId& to, Amount amount) {
        expected_[chain][from] -= amount;
        expected_[chain][to] += amount;
    }

    void check_record(const std::string& id) {
        auto& engine = runtime_.engine();
        const auto record = engine.get_record(id);
        const auto meta = engine.get_meta(id);
        const auto profile = engine.get_profile(record.rule_id);
        const auto& src = record.from_chain;
        const auto& dst = record.to_chain;
        const Amount s = record.source_amount();
        const Amount d = record.destination_amount();
        const AccountId escrow = escrow::EscrowEngine::escrow_account_for(src.chain_id);

        if (auto problem = check_transition_path(record)) fail(id + ": " + *problem);

        ++out_.exchanges;
        if (meta.stuck) ++out_.stuck;

        switch (record.progress) {
            case Progress::kComplete:
                ++out_.complete;
                if (!succeeded(src.escrow_tx_id) || !succeeded(dst.payment_tx_id) ||
                    !succeeded(src.settlement_tx_id)) {
                    fail(id + ": complete but a transfer did not succeed");
                }
                move(src.chain_id, src.account_id, profile.exchanger_src_account, s);
                move(dst.chain_id, profile.exchanger_dst_account, dst.account_id, d);
                break;
            case Progress::kFixedRecovery:
                ++out_.fixed_recovery;
                if (!succeeded(src.escrow_tx_id) || !succeeded(src.restore_tx_id)) {
                    fail(id + ": fixedRecovery but deposit or refund did not succeed");
                }
                if (succeeded(dst.payment_tx_id)) fail(id + ": refunded although the payment succeeded");
                break;
            case Progress::kFailedMargin:
                ++out_.failed_margin;
                if (succeeded(src.escrow_tx_id)) fail(id + ": failedMargin but the deposit succeeded");
                break;
            case Progress::kRequestFreeze:
                if (!meta.stuck) {
                    fail(id + ": never reached a terminal state (requestFreeze)");
                    break;
                }
                if (!succeeded(dst.payment_tx_id)) fail(id + ": stuck settlement without a payment");
                move(src.chain_id, src.account_id, escrow, s);
                move(dst.chain_id, profile.exchanger_dst_account, dst.account_id, d);
                break;
            case Progress::kRequestRecovery:
                if (!meta.stuck) {
                    fail(id + ": never reached a terminal state (requestRecovery)");
                    break;
                }
                if (succeeded(dst.payment_tx_id)) fail(id + ": refund requested although the payment succeeded");
                move(src.chain_id, src.account_id, escrow, s);
                break;
            default:
                fail(id + ": never reached a terminal state (" + std::string(to_string(record.progress)) + ")");
                break;
        }
        for (const auto& tx : {src.escrow_tx_id, src.settlement_tx_id, src.restore_tx_id}) {
            if (tx) referenced_.insert(*tx);
        }
    }

    void check_balances() {
        for (const auto& chain : kChains) {
            const auto actual = runtime_.ledger().balances(chain);
            Amount total_actual = 0;
            Amount total_genesis = 0;
            for (const auto& [account, balance] : actual) total_actual += balance;
            for (const auto& [account, balance] : world_.genesis.at(chain)) total_genesis += balance;
            if (total_actual != total_genesis) {
                fail(chain + ": total supply " + std::to_string(total_actual) + " != " + std::to_string(total_genesis));
            }

            std::set<AccountId> accounts;
            for (const auto& [account, balance] : actual) accounts.insert(account);
            for (const auto& [account, balance] : expected_[chain]) accounts.insert(account);
            for (const auto& account : accounts) {
                const Amount want = expected_[chain].count(account) ? expected_[chain][account] : 0;
                const Amount got = actual.count(account) ? actual.at(account) : 0;
                if (want != got) {
                    fail(chain + "/" + account + ": balance " + std::to_string(got) + ", expected " +
                         std::to_string(want));
                }
            }
        }
    }

    void check_orphans() {
        for (const auto& [id, view] : txs_) {
            if (view.tx.status != ledger::TxStatus::kSuccess) continue;
            const AccountId escrow = escrow::EscrowEngine::escrow_account_for(view.chain);
            if (view.tx.from != escrow && view.tx.to != escrow) continue;
            if (!referenced_.contains(id)) fail(view.chain + ": escrow transfer " + id + " has no record");
        }
    }

    api::Runtime& runtime_;
    const World& world_;
    ScheduleOutcome& out_;
    std::map<ledger::TxId, TxView> txs_;
    std::map<ChainId, std::map<AccountId, Amount>> expected_;
    std::set<ledger::TxId> referenced_;
};

}  // namespace

std::uint64_t schedule_seed(std::uint64_t sweep_seed, int index) {
    std::seed_seq seq{static_cast<std::uint32_t>(sweep_seed), static_cast<std::uint32_t>(sweep_seed >> 32),
                      static_cast<std::uint32_t>(index)};
    std::uint32_t words[2];
    seq.generate(words, words + 2);
    return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

ScheduleOutcome run_schedule(std::uint64_t seed, const SweepOptions& options) {
    std::mt19937_64 rng(seed);
    ScheduleOutcome out;
    out.schedule_seed = seed;

    World world = make_world(rng, options, seed);
    ManualClock clock(kSweepStart);
    api::Runtime runtime(clock, world.config);
    auto& ledger = runtime.ledger();

    if (options.halt_everything) {
        for (const auto& chain : kChains) ledger.inject_fault({chain, ledger::FaultMode::kHaltBlockProduction, 0});
        out.faults_injected += static_cast<int>(kChains.size());
    }

    std::uniform_int_distribution<int> action(0, 9);
    std::uniform_int_distribution<Amount> amount(1, 900);
    std::uniform_int_distribution<Millis> wait(1, 12'000);
    std::uniform_int_distribution<int> mode(0, 3);
    std::uniform_int_distribution<int> code(3, 99);
    const std::vector<std::string> rules = {"x", "y"};

    for (int i = 0; i < options.steps; ++i) {
        switch (action(rng)) {
            case 0:
            case 1:
            case 2: {
                escrow::ExchangeRequest request{"", pick(rng, kPayers), pick(rng, kMerchants), pick(rng, rules),
                                                amount(rng)};
                request.user_id = request.src_account;
                runtime.engine().start_exchange(request);
                break;
            }
            case 3:
            case 4:
                ledger.produce_block(pick(rng, kChains));
                break;
            case 5:
            case 6:
                clock.advance(wait(rng));
                runtime.engine().scan_timeouts();
                break;
            case 7:
                runtime.tick();
                break;
            default: {
                if (options.halt_everything) break;
                const auto& chain = pick(rng, kChains);
                switch (mode(rng)) {
                    case 0:
                        ledger.inject_fault({chain, ledger::FaultMode::kHaltBlockProduction, 0});
                        break;
                    case 1:
                        ledger.inject_fault({chain, ledger::FaultMode::kFailNextTransaction, code(rng)});
                        break;
                    case 2:
                        ledger.inject_fault({chain, ledger::FaultMode::kTamperNextBlock, 0});
                        break;
                    default:
                        ledger.inject_fault({chain, ledger::FaultMode::kNone, 0});
                        break;
                }
                ++out.faults_injected;
                break;
            }
        }
    }

    if (!options.halt_everything) {
        for (const auto& chain : kChains) ledger.inject_fault({chain, ledger::FaultMode::kNone, 0});
    }
    for (int round = 0; round < kDrainRounds && !settled(runtime.engine()); ++round) {
        runtime.tick();
        clock.advance(kDrainStep);
        runtime.engine().scan_timeouts();
    }

    Checker(runtime, world, out).run();
    return out;
}

SweepSummary run_fault_sweep(const SweepOptions& options) {
    if (options.count < 1) throw Error(ErrorCode::kBadRequest, "sweep count must be >= 1");
    SweepSummary summary;
    summary.count = options.count;
    summary.seed = options.seed;
    for (int i = 0; i < options.count; ++i) {
        const auto seed = schedule_seed(options.seed, i);
        auto out = run_schedule(seed, options);
        summary.exchanges += out.exchanges;
        summary.complete += out.complete;
        summary.fixed_recovery += out.fixed_recovery;
        summary.failed_margin += out.failed_margin;
        summary.stuck += out.stuck;
        summary.faults_injected += out.faults_injected;
        for (auto& what : out.violations) summary.violations.push_back({i, seed, std::move(what)});
    }
    return summary;
}

nlohmann::ordered_json to_json(const SweepSummary& s) {
    nlohmann::ordered_json j;
    j["count"] = s.count;
    j["seed"] = s.seed;
    j["exchanges"] = s.exchanges;
    j["complete"] = s.complete;
    j["fixedRecovery"] = s.fixed_recovery;
    j["failedMargin"] = s.failed_margin;
    j["stuck"] = s.stuck;
    j["faultsInjected"] = s.faults_injected;
    j["violations"] = nlohmann::ordered_json::array();
    for (const auto& v : s.violations) {
        j["violations"].push_back({{"schedule", v.schedule}, {"scheduleSeed", v.schedule_seed}, {"what", v.what}});
    }
    return j;
}

}  // namespace connchain::harness
