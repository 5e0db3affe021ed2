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

// Acceptance gate. Prints one PASS/FAIL line per criterion and exits nonzero on any failure.

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "connchain/api/codec.hpp"
#include "connchain/api/runtime.hpp"
#include "connchain/api/server.hpp"
#include "connchain/common/error.hpp"
#include "connchain/escrow/engine.hpp"
#include "connchain/escrow/profile.hpp"
#include "connchain/harness/scenario.hpp"
#include "connchain/harness/sweep.hpp"
#include "connchain/ledger/hash.hpp"
#include "two_chains.hpp"

using namespace connchain;
using nlohmann::ordered_json;

namespace {

// Wall-clock limits per criterion, in milliseconds.
constexpr long kLimitHappyPath = 5'000;
constexpr long kLimitRecovery = 30'000;
constexpr long kLimitSweep = 60'000;
constexpr long kLimitTamper = 10'000;
constexpr long kLimitIntegrity = 60'000;
constexpr long kLimitConversion = 10'000;
constexpr long kLimitApi = 30'000;
constexpr long kLimitPostLatency = 100;

constexpr int kSweepCount = 200;
constexpr std::uint64_t kSweepSeed = 42;
constexpr int kTamperBlocks = 50;

// Collects failures for one criterion.
struct Check {
    std::vector<std::string> failures;
    std::string note;

    void expect(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
};

int run_criterion(const std::string& tag, const std::string& title, long limit_ms,
                  const std::function<void(Check&)>& body) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(check);
    } catch (const std::exception& e) {
        check.failures.push_back(std::string("exception: ") + e.what());
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
    check.expect(ms.count() < limit_ms, "took " + std::to_string(ms.count()) + " ms, limit " +
                                            std::to_string(limit_ms) + " ms");

    const bool passed = check.failures.empty();
    std::cout << tag << " " << (passed ? "PASS" : "FAIL") << "  " << title << "  [" << ms.count() << " ms";
    if (!check.note.empty()) std::cout << "; " << check.note;
    std::cout << "]\n";
    const std::size_t shown = std::min<std::size_t>(check.failures.size(), 10);
    for (std::size_t i = 0; i < shown; ++i) std::cout << "    " << check.failures[i] << "\n";
    if (check.failures.size() > shown) std::cout << "    ... " << check.failures.size() - shown << " more\n";
    std::cout.flush();
    return passed ? 0 : 1;
}

std::vector<std::string> keys_of(const ordered_json& j) {
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) keys.push_back(k);
    return keys;
}

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) out += (out.empty() ? "" : ",") + s;
    return out;
}

harness::Report run_builtin(const std::string& name) {
    auto scenario = harness::builtin(name);
    if (!scenario) throw std::runtime_error("missing built-in " + name);
    return harness::run_scenario(*scenario);
}

// ---------------------------------------------------------------- AC1

void happy_path(Check& c) {
    const auto report = run_builtin("happy-path");
    c.expect(report.passed, "scenario assertions failed");
    if (report.records.size() != 1) {
        c.expect(false, "expected one record, got " + std::to_string(report.records.size()));
        return;
    }
    const auto j = escrow::to_json(report.records[0]);
    c.expect(keys_of(j) == std::vector<std::string>{"id", "userID", "ruleID", "fromChain", "toChain", "progress",
                                                    "timestamps"},
             "record keys " + join(keys_of(j)));
    c.expect(j["progress"] == "complete", "progress " + j["progress"].dump());
    c.expect(std::regex_match(j["id"].get<std::string>(), std::regex(R"(\d{8}T\d{9})")), "id shape");
    c.expect(keys_of(j["fromChain"]) == std::vector<std::string>{"chainID", "accountID", "assetType", "asset",
                                                                 "escrowTxID", "settlementTxID"},
             "fromChain keys " + join(keys_of(j["fromChain"])));
    c.expect(keys_of(j["toChain"]) ==
                 std::vector<std::string>{"chainID", "accountID", "assetType", "asset", "paymentTxID"},
             "toChain keys " + join(keys_of(j["toChain"])));
    c.expect(keys_of(j["timestamps"]) == std::vector<std::string>{"create", "requestMargin", "fixedMargin",
                                                                  "requestCredit", "fixedCredit", "requestFreeze",
                                                                  "fixedFreeze"},
             "timestamps keys " + join(keys_of(j["timestamps"])));
    Millis last = 0;
    for (const auto& [k, v] : j["timestamps"].items()) {
        const Millis t = parse_timestamp(v.get<std::string>());
        c.expect(t >= last, "timestamp " + k + " goes backwards");
        last = t;
    }
    c.expect(report.balances["ChainID-1"]["User1"] == 9'820, "payer balance");
    c.expect(report.balances["ChainID-2"]["UserA"] == 203, "merchant balance");
}

// ---------------------------------------------------------------- AC2

void recovery_paths(Check& c) {
    for (const auto* name : {"credit-failure", "credit-timeout", "insufficient-exchanger-balance"}) {
        const auto report = run_builtin(name);
        const std::string at = std::string(name) + ": ";
        c.expect(report.passed, at + "scenario assertions failed");
        if (report.records.size() != 1) {
            c.expect(false, at + "expected one record");
            continue;
        }
        const auto j = escrow::to_json(report.records[0]);
        c.expect(j["progress"] == "fixedRecovery", at + "progress " + j["progress"].dump());
        c.expect(keys_of(j["fromChain"]) == std::vector<std::string>{"chainID", "accountID", "assetType", "asset",
                                                                     "escrowTxID", "restoreTxID"},
                 at + "fromChain keys " + join(keys_of(j["fromChain"])));
        c.expect(!j["fromChain"].contains("settlementTxID"), at + "settlementTxID present");
        const auto& ts = j["timestamps"];
        for (const auto* key : {"failedCredit", "requestRecovery", "fixedRecovery"}) {
            c.expect(ts.contains(key), at + "missing timestamp " + key);
        }
        c.expect(!ts.contains("requestFreeze") && !ts.contains("fixedFreeze"), at + "freeze timestamps present");
        c.expect(report.balances["ChainID-1"]["User1"] == 10'000,
                 at + "payer balance " + report.balances["ChainID-1"]["User1"].dump());
        c.expect(report.balances["ChainID-2"].value("UserA", 0) == 0, at + "merchant was paid");
    }
}

// ---------------------------------------------------------------- AC3

void atomicity_sweep(Check& c) {
    harness::SweepOptions options;
    options.count = kSweepCount;
    options.seed = kSweepSeed;
    const auto summary = harness::run_fault_sweep(options);
    for (const auto& v : summary.violations) {
        c.expect(false, "schedule " + std::to_string(v.schedule) + " (seed " + std::to_string(v.schedule_seed) +
                            "): " + v.what);
    }
    c.expect(summary.exchanges > 0 && summary.faults_injected > 0, "sweep exercised nothing");
    c.expect(summary.complete > 0 && summary.fixed_recovery > 0 && summary.failed_margin > 0,
             "sweep did not reach every terminal state");
    const auto again = harness::run_fault_sweep(options);
    c.expect(harness::to_json(again).dump() == harness::to_json(summary).dump(), "sweep not seed-reproducible");
    c.note = std::to_string(summary.count) + " schedules, " + std::to_string(summary.exchanges) + " exchanges, " +
             std::to_string(summary.faults_injected) + " faults, " + std::to_string(summary.violations.size()) +
             " violations";
}

// ---------------------------------------------------------------- AC4

std::vector<std::pair<std::string, ledger::Block>> mutations(const ledger::Block& block) {
    std::vector<std::pair<std::string, ledger::Block>> out;
    auto add = [&](const std::string& label, const std::function<void(ledger::Block&)>& mutate) {
        auto copy = block;
        mutate(copy);
        out.emplace_back(label, std::move(copy));
    };
    for (std::size_t i = 0; i < block.transactions.size(); ++i) {
        const std::string at = "tx" + std::to_string(i) + ".";
        add(at + "txID", [i](auto& b) { b.transactions[i].tx_id += "0"; });
        add(at + "from", [i](auto& b) { b.transactions[i].from += "x"; });
        add(at + "to", [i](auto& b) { b.transactions[i].to += "x"; });
        add(at + "amount", [i](auto& b) { b.transactions[i].amount += 1; });
        for (auto status : {ledger::TxStatus::kPending, ledger::TxStatus::kSuccess, ledger::TxStatus::kFailure}) {
            if (status == block.transactions[i].status) continue;
            add(at + "status=" + std::string(ledger::to_string(status)),
                [i, status](auto& b) { b.transactions[i].status = status; });
        }
        add(at + "returnCode", [i](auto& b) { b.transactions[i].return_code += 1; });
        add(at + "submittedAt", [i](auto& b) { b.transactions[i].submitted_at += 1; });
        if (block.transactions[i].valid_until) {
            add(at + "validUntil", [i](auto& b) { *b.transactions[i].valid_until += 1; });
            add(at + "validUntil=absent", [i](auto& b) { b.transactions[i].valid_until.reset(); });
        } else {
            add(at + "validUntil=present",
                [i](auto& b) { b.transactions[i].valid_until = b.transactions[i].submitted_at; });
        }
        add(at + "dropped", [i](auto& b) { b.transactions.erase(b.transactions.begin() + i); });
        add(at + "duplicated", [i](auto& b) { b.transactions.push_back(b.transactions[i]); });
    }
    if (block.transactions.size() >= 2) {
        add("swap", [](auto& b) { std::swap(b.transactions[0], b.transactions[1]); });
    }
    add("height", [](auto& b) { b.height += 1; });
    add("prevHash", [](auto& b) { b.prev_hash[0] ^= 1; });
    add("nonce", [](auto& b) { b.nonce += 1; });
    add("timestamp", [](auto& b) { b.timestamp += 1; });
    add("hash", [](auto& b) { b.hash[31] ^= 1; });
    return out;
}

// Ledger pair with a probe subscribed ahead of the engine's own nodes, so every
// block is examined while the engine is still waiting on its transactions.
struct TamperWorld {
    ManualClock clock{testing::kStart};
    ledger::LedgerNetwork ledger{clock, 2017};
    escrow::WorldState state;
    std::vector<std::unique_ptr<interworking::InterworkingNode>> nodes;
    std::unique_ptr<escrow::EscrowEngine> engine;

    std::size_t blocks_seen = 0;
    std::size_t mutations_tried = 0;
    std::size_t baseline_transitions = 0;
    std::vector<std::string> failures;

    TamperWorld() {
        ledger::ChainConfig src;
        src.chain_id = "ChainID-1";
        src.genesis = {{"User1", 10'000}};
        ledger::ChainConfig dst;
        dst.chain_id = "ChainID-2";
        dst.genesis = {{"Carol-2", 100'000}, {"Daisy-2", 50'000}};
        for (auto* config : {&src, &dst}) {
            ledger.create_chain(*config);
            const auto chain = config->chain_id;
            ledger.subscribe_blocks(chain, [this, chain](const ledger::Block& b) { probe(chain, b); });
        }
        engine = std::make_unique<escrow::EscrowEngine>(clock, state);
        for (const auto* chain : {"ChainID-1", "ChainID-2"}) {
            nodes.push_back(std::make_unique<interworking::InterworkingNode>(ledger, chain, clock));
            engine->attach(*nodes.back());
        }
        engine->register_profile(testing::carol());
        engine->register_profile(testing::daisy());
    }

    interworking::VerifiedBlockEvent reforward(const ledger::ChainId& chain, const ledger::Block& block) {
        interworking::InterworkingNode node(ledger, chain, clock);
        node.set_checkpoint(block.height - 1, ledger.block_at(chain, block.height - 1)->hash);
        return node.forward_block(block);
    }

    void probe(const ledger::ChainId& chain, const ledger::Block& broadcast) {
        ++blocks_seen;
        // The stored block is canonical; a broadcast copy may have been tampered with by a fault.
        const auto canonical = *ledger.block_at(chain, broadcast.height);
        const std::string where = chain + "#" + std::to_string(canonical.height) + " ";
        for (const auto& [label, mutated] : mutations(canonical)) {
            ++mutations_tried;
            const auto before = state.snapshot_json().dump();
            const auto writes = state.writes();
            const auto event = reforward(chain, mutated);
            const auto applied = engine->on_block_event(event);
            if (event.verified) failures.push_back(where + label + ": verified");
            if (!applied.empty()) failures.push_back(where + label + ": engine transitioned");
            if (state.writes() != writes || state.snapshot_json().dump() != before) {
                failures.push_back(where + label + ": world state changed");
            }
        }
        if (!(broadcast == canonical)) {
            ++mutations_tried;
            if (reforward(chain, broadcast).verified) failures.push_back(where + "tampered broadcast: verified");
        }
        const auto event = reforward(chain, canonical);
        if (!event.verified) failures.push_back(where + "unmutated: rejected");
        baseline_transitions += engine->on_block_event(event).size();
    }
};

void tamper_rejection(Check& c) {
    TamperWorld world;
    int produced = 0;
    int started = 0;
    while (produced < kTamperBlocks) {
        if (world.ledger.pending_count("ChainID-1") + world.ledger.pending_count("ChainID-2") == 0) {
            // Rotate through paths that put successes, failures, refunds and expiry bounds into blocks.
            switch (started++ % 4) {
            case 0:
                world.engine->start_exchange(testing::request("0", 20 + started));
                break;
            case 1:
                world.engine->start_exchange(testing::request("1", 136'800));
                break;
            case 2:
                world.ledger.inject_fault({"ChainID-2", ledger::FaultMode::kFailNextTransaction, 17});
                world.engine->start_exchange(testing::request("0", 40 + started));
                break;
            default:
                world.ledger.inject_fault({"ChainID-1", ledger::FaultMode::kTamperNextBlock, 0});
                world.engine->start_exchange(testing::request("0", 60 + started));
                break;
            }
        }
        for (const auto* chain : {"ChainID-1", "ChainID-2"}) {
            if (produced >= kTamperBlocks || world.ledger.pending_count(chain) == 0) continue;
            world.clock.advance(10);
            if (world.ledger.produce_block(chain)) ++produced;
        }
    }
    for (const auto& f : world.failures) c.expect(false, f);
    c.expect(world.blocks_seen == static_cast<std::size_t>(kTamperBlocks),
             "probed " + std::to_string(world.blocks_seen) + " blocks");
    // The probe must have been ahead of the engine: the unmutated re-forward drove the exchanges.
    c.expect(world.baseline_transitions > 0, "unmutated blocks produced no engine transitions");
    c.note = std::to_string(world.blocks_seen) + " blocks, " + std::to_string(world.mutations_tried) +
             " mutations, " + std::to_string(started) + " exchanges";
}

// ---------------------------------------------------------------- AC5

// Re-encodes a block in the canonical layout without going through the library's encoder.
std::vector<std::uint8_t> reference_encoding(const ledger::Block& b) {
    std::vector<std::uint8_t> out;
    auto u64 = [&](std::uint64_t v) {
        for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
    };
    auto bytes = [&](const auto& s) {
        u64(s.size());
        out.insert(out.end(), s.begin(), s.end());
    };
    u64(b.height);
    bytes(b.prev_hash);
    u64(b.transactions.size());
    for (const auto& tx : b.transactions) {
        bytes(tx.tx_id);
        bytes(tx.from);
        bytes(tx.to);
        u64(static_cast<std::uint64_t>(tx.amount));
        u64(static_cast<std::uint64_t>(tx.status));
        u64(static_cast<std::uint64_t>(tx.return_code));
        u64(static_cast<std::uint64_t>(tx.submitted_at));
        u64(tx.valid_until ? 1 : 0);
        if (tx.valid_until) u64(static_cast<std::uint64_t>(*tx.valid_until));
    }
    u64(b.nonce);
    u64(static_cast<std::uint64_t>(b.timestamp));
    return out;
}

void audit_chain(Check& c, const std::string& where, const std::vector<ledger::Block>& chain) {
    c.expect(!chain.empty(), where + ": no genesis");
    for (std::size_t i = 0; i < chain.size(); ++i) {
        const auto& b = chain[i];
        const std::string at = where + "#" + std::to_string(i);
        c.expect(b.height == i, at + ": height");
        c.expect(reference_encoding(b) == ledger::canonical_serialization(b), at + ": encoding differs");
        c.expect(ledger::sha256(reference_encoding(b)) == b.hash, at + ": hash does not recompute");
        const ledger::Digest want_prev = i == 0 ? ledger::kZeroDigest : chain[i - 1].hash;
        c.expect(b.prev_hash == want_prev, at + ": prevHash does not link");
    }
    c.expect(!interworking::find_broken_link(chain).has_value(), where + ": library audit disagrees");
}

void hash_chain_integrity(Check& c) {
    std::size_t audited = 0;
    auto audit_ledger = [&](const std::string& label, const ledger::LedgerNetwork& net) {
        for (const auto& chain : net.chain_ids()) {
            const auto blocks = net.blocks(chain);
            audit_chain(c, label + "/" + chain, blocks);
            audited += blocks.size();
        }
    };

    // Engine-driven runs across every path, including tampered broadcasts.
    TamperWorld tamper;
    for (int i = 0; i < 12; ++i) {
        if (i % 3 == 1) tamper.ledger.inject_fault({"ChainID-1", ledger::FaultMode::kTamperNextBlock, 0});
        if (i % 3 == 2) tamper.ledger.inject_fault({"ChainID-2", ledger::FaultMode::kFailNextTransaction, 9});
        tamper.engine->start_exchange(testing::request(i % 4 == 3 ? "1" : "0", i % 4 == 3 ? 136'800 : 30 + i));
        for (int round = 0; round < 10; ++round) {
            for (const auto* chain : {"ChainID-1", "ChainID-2"}) {
                tamper.clock.advance(10);
                tamper.ledger.produce_block(chain);
            }
        }
    }
    c.expect(tamper.failures.empty(), "probe failures during integrity run");
    audit_ledger("engine-run", tamper.ledger);

    testing::TwoChains timeouts;
    timeouts.register_profiles();
    timeouts.ledger.inject_fault({"ChainID-2", ledger::FaultMode::kHaltBlockProduction, 0});
    timeouts.engine->start_exchange(testing::request("0", 203));
    timeouts.run_until_idle();
    timeouts.clock.advance(30'000);
    timeouts.engine->scan_timeouts();
    timeouts.ledger.inject_fault({"ChainID-2", ledger::FaultMode::kNone, 0});
    timeouts.run_until_idle();
    audit_ledger("timeout-run", timeouts.ledger);

    for (const auto& name : harness::builtin_names()) {
        const auto report = run_builtin(name);
        for (const auto& [chain, info] : report.chains.items()) {
            c.expect(info["intact"].get<bool>(), name + "/" + chain + ": chain not intact");
        }
    }
    harness::SweepOptions options;
    options.count = kSweepCount;
    options.seed = kSweepSeed + 1;
    const auto summary = harness::run_fault_sweep(options);
    for (const auto& v : summary.violations) c.expect(false, "sweep: " + v.what);
    c.note = std::to_string(audited) + " blocks re-encoded, " + std::to_string(harness::builtin_names().size()) +
             " scenarios, " + std::to_string(summary.count) + " sweep schedules";
}

// ---------------------------------------------------------------- AC6

void conversion_oracle(Check& c) {
    std::size_t cases = 0;
    for (ledger::Amount n = 1; n <= 20; ++n) {
        for (ledger::Amount d = 1; d <= 20; ++d) {
            for (ledger::Amount fee = 0; fee <= 10; ++fee) {
                const escrow::ServiceProfile profile{"r", "A", "B", "x", "y", {n, d}, fee};
                // The minimal source amount never decreases as dst grows, so one upward walk
                // over s is an exhaustive search for every dst in turn.
                ledger::Amount s = fee + 1;
                for (ledger::Amount dst = 1; dst <= 1000; ++dst) {
                    while ((s - fee) * n < dst * d) ++s;
                    ++cases;
                    const auto got = escrow::compute_source_amount(dst, profile);
                    if (got != s) {
                        c.expect(false, "dst " + std::to_string(dst) + " rate " + std::to_string(n) + "/" +
                                            std::to_string(d) + " fee " + std::to_string(fee) + ": got " +
                                            std::to_string(got) + ", want " + std::to_string(s));
                    }
                }
            }
        }
    }
    c.note = std::to_string(cases) + " cases";
}

// ---------------------------------------------------------------- AC7

api::ServiceConfig api_config() {
    api::ServiceConfig config;
    ledger::ChainConfig src;
    src.chain_id = "ChainID-1";
    src.genesis = {{"User1", 10'000}};
    ledger::ChainConfig dst;
    dst.chain_id = "ChainID-2";
    dst.genesis = {{"Carol-2", 100'000}, {"Daisy-2", 50'000}};
    config.chains = {src, dst};
    config.test_mode = true;
    return config;
}

ordered_json exchange_body(const std::string& rule, ledger::Amount amount) {
    return escrow::to_json(testing::request(rule, amount));
}

// Runs a server for `runtime` on an ephemeral port for the lifetime of the object.
struct Served {
    api::ApiServer server;
    std::thread thread;
    std::unique_ptr<httplib::Client> client;

    Served(api::Runtime& runtime, bool test_mode) : server(runtime, test_mode) {
        const int port = server.bind_any_port("127.0.0.1");
        thread = std::thread([this] { server.serve(); });
        server.wait_until_ready();
        client = std::make_unique<httplib::Client>("127.0.0.1", port);
    }
    ~Served() {
        server.stop();
        thread.join();
    }
    httplib::Result post(const std::string& path, const ordered_json& body) {
        return client->Post(path, body.dump(), "application/json");
    }
};

void expect_api_error(Check& c, const httplib::Result& res, int status, const std::string& code) {
    if (!res) {
        c.expect(false, code + ": no response");
        return;
    }
    c.expect(res->status == status, code + ": status " + std::to_string(res->status));
    const auto body = ordered_json::parse(res->body, nullptr, false);
    c.expect(body.is_object() && keys_of(body) == std::vector<std::string>{"httpStatus", "code", "message"},
             code + ": body shape " + res->body);
    if (!body.is_object()) return;
    c.expect(body.value("httpStatus", 0) == status, code + ": httpStatus field");
    c.expect(body.value("code", "") == code, code + ": code field " + body.value("code", ""));
}

void api_contract(Check& c) {
    {
        ManualClock clock{testing::kStart};
        api::Runtime runtime(clock, api_config());
        Served s(runtime, true);

        c.expect(s.post("/profiles", escrow::to_json(testing::carol()))->status == 201, "create Carol");
        c.expect(s.post("/profiles", escrow::to_json(testing::daisy()))->status == 201, "create Daisy");

        std::vector<std::string> ids;
        for (const auto& [rule, amount] : {std::pair{"0", 203}, std::pair{"1", 136'800}}) {
            auto res = s.post("/exchanges", exchange_body(rule, amount));
            if (!res || res->status != 202) {
                c.expect(false, "POST /exchanges did not return 202");
                return;
            }
            ids.push_back(ordered_json::parse(res->body)["id"].get<std::string>());
            clock.advance(1);
        }
        c.expect(std::regex_match(ids[0], std::regex(R"(\d{8}T\d{9})")), "id shape " + ids[0]);
        for (int i = 0; i < 6; ++i) runtime.tick();

        for (const auto& id : ids) {
            auto res = s.client->Get("/exchanges/" + id);
            c.expect(res && res->status == 200, id + ": GET failed");
            if (!res) continue;
            const auto body = ordered_json::parse(res->body);
            const auto record = runtime.engine().get_record(id);
            c.expect(body == escrow::to_json(record), id + ": body differs from engine record");
            c.expect(escrow::record_from_json(body) == record, id + ": body does not parse back to the record");
            c.expect(ordered_json::parse(body.dump()) == body, id + ": body does not round-trip");
            c.expect(s.client->Get("/exchanges/" + id)->body == res->body, id + ": repeated GET differs");
        }
        c.expect(runtime.engine().get_record(ids[0]).progress == escrow::Progress::kComplete, "first not complete");
        c.expect(runtime.engine().get_record(ids[1]).progress == escrow::Progress::kFixedRecovery,
                 "second not recovered");

        expect_api_error(c, s.post("/exchanges", exchange_body("nope", 5)), 404, "unknown-rule");
        expect_api_error(c, s.client->Get("/exchanges/20000101T000000000"), 404, "unknown-id");
        expect_api_error(c, s.client->Get("/chains/ChainID-9/accounts/User1"), 404, "unknown-chain");
        expect_api_error(c, s.post("/chains/ChainID-9/faults", {{"mode", "none"}}), 404, "unknown-chain");
        expect_api_error(c, s.post("/exchanges", exchange_body("0", 0)), 400, "invalid-amount");
        expect_api_error(c, s.post("/profiles", escrow::to_json(testing::carol())), 409, "duplicate-rule");
        expect_api_error(c, s.post("/chains", {{"chainID", "ChainID-1"}, {"genesis", ordered_json::object()}}), 409,
                         "duplicate-chain-id");
        expect_api_error(c, s.client->Get("/profiles/9"), 404, "unknown-rule");
    }

    // Asynchrony: the real clock, a running driver, and ledgers that never produce a block.
    SystemClock clock;
    auto config = api_config();
    config.tick = 20;
    api::Runtime runtime(clock, config);
    runtime.engine().register_profile(testing::carol());
    for (const auto* chain : {"ChainID-1", "ChainID-2"}) {
        runtime.ledger().inject_fault({chain, ledger::FaultMode::kHaltBlockProduction, 0});
    }
    runtime.start();
    long worst = 0;
    {
        Served s(runtime, false);
        s.client->Get("/profiles");
        for (int i = 0; i < 10; ++i) {
            const auto start = std::chrono::steady_clock::now();
            auto res = s.post("/exchanges", exchange_body("0", 10 + i));
            const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                                  start)
                                .count();
            worst = std::max<long>(worst, ms);
            c.expect(res && res->status == 202, "halted POST did not return 202");
            if (res && res->status == 202) {
                const auto id = ordered_json::parse(res->body)["id"].get<std::string>();
                c.expect(runtime.engine().get_record(id).progress == escrow::Progress::kRequestMargin,
                         "halted exchange moved past requestMargin");
            }
        }
    }
    runtime.stop();
    c.expect(worst < kLimitPostLatency, "POST under halted ledger took " + std::to_string(worst) + " ms");
    c.note = "worst halted POST " + std::to_string(worst) + " ms";
}

}  // namespace

int main() {
    spdlog::set_level(spdlog::level::err);
    int failed = 0;
    failed += run_criterion("AC1", "happy-path golden record", kLimitHappyPath, happy_path);
    failed += run_criterion("AC2", "failure-path golden records", kLimitRecovery, recovery_paths);
    failed += run_criterion("AC3", "atomicity sweep", kLimitSweep, atomicity_sweep);
    failed += run_criterion("AC4", "tamper rejection", kLimitTamper, tamper_rejection);
    failed += run_criterion("AC5", "hash-chain integrity", kLimitIntegrity, hash_chain_integrity);
    failed += run_criterion("AC6", "conversion oracle", kLimitConversion, conversion_oracle);
    failed += run_criterion("AC7", "API contract", kLimitApi, api_contract);
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << "\n";
    return failed == 0 ? 0 : 1;
}
