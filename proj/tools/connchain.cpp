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

#include <csignal>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "connchain/api/runtime.hpp"
#include "connchain/api/server.hpp"
#include "connchain/common/error.hpp"
#include "connchain/harness/scenario.hpp"
#include "connchain/harness/sweep.hpp"

using namespace connchain;

namespace {

constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

harness::Scenario load_scenario(const std::string& source) {
    if (auto s = harness::builtin(source)) return *s;
    std::ifstream in(source);
    if (!in) throw Error(ErrorCode::kInvalidScenario, "no built-in scenario or readable file named " + source);
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(in);
    } catch (const nlohmann::ordered_json::parse_error& e) {
        throw Error(ErrorCode::kInvalidScenario, source + ": " + e.what());
    }
    return harness::scenario_from_json(j);
}

int run(const std::string& source, bool as_json) {
    const auto report = harness::run_scenario(load_scenario(source));
    if (as_json) {
        std::cout << harness::to_json(report).dump(2) << "\n";
    } else {
        for (const auto& a : report.assertions) {
            std::cout << (a.passed ? "ok    " : "FAIL  ") << "step " << a.step << "  " << a.description;
            if (!a.passed) std::cout << "  (" << a.detail << ")";
            std::cout << "\n";
        }
        for (const auto& r : report.records) {
            std::cout << "record " << r.id << "  " << escrow::to_string(r.progress) << "\n";
        }
        for (const auto& id : report.stuck) std::cout << "stuck  " << id << "\n";
        std::cout << report.scenario << ": " << (report.passed ? "passed" : "FAILED") << "\n";
    }
    return report.passed ? 0 : kExitFailed;
}

int sweep(const harness::SweepOptions& options, bool as_json) {
    const auto summary = harness::run_fault_sweep(options);
    if (as_json) {
        std::cout << harness::to_json(summary).dump(2) << "\n";
    } else {
        std::cout << "schedules " << summary.count << "  seed " << summary.seed << "\n"
                  << "exchanges " << summary.exchanges << "  complete " << summary.complete << "  fixedRecovery "
                  << summary.fixed_recovery << "  failedMargin " << summary.failed_margin << "  stuck "
                  << summary.stuck << "  faults " << summary.faults_injected << "\n";
        for (const auto& v : summary.violations) {
            std::cout << "violation  schedule " << v.schedule << " (seed " << v.schedule_seed << "): " << v.what
                      << "\n";
        }
        std::cout << (summary.violations.empty() ? "no violations" : "VIOLATIONS FOUND") << "\n";
    }
    return summary.violations.empty() ? 0 : kExitFailed;
}

int serve(const std::string& config_path, const std::string& listen, bool test_mode) {
    // Block termination signals before any thread starts so only the waiter below sees them.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    api::ServiceConfig config = config_path.empty() ? api::ServiceConfig{} : api::load_config(config_path);
    api::apply_environment(config);
    if (!listen.empty()) {
        const auto colon = listen.rfind(':');
        if (colon == std::string::npos) throw Error(ErrorCode::kInvalidConfig, "--listen must be host:port");
        config.host = listen.substr(0, colon);
        try {
            config.port = std::stoi(listen.substr(colon + 1));
        } catch (const std::exception&) {
            throw Error(ErrorCode::kInvalidConfig, "bad port in --listen: " + listen);
        }
    }
    if (test_mode) config.test_mode = true;

    SystemClock clock;
    api::Runtime runtime(clock, config);
    api::ApiServer server(runtime, config.test_mode);

    std::thread waiter([&] {
        int sig = 0;
        sigwait(&signals, &sig);
        spdlog::info("signal {}, shutting down", sig);
        server.stop();
    });

    runtime.start();
    spdlog::info("listening on {}:{}{}", config.host, config.port, config.test_mode ? " (test mode)" : "");
    const bool ok = server.listen(config.host, config.port);
    runtime.stop();
    if (!ok) {
        spdlog::error("could not listen on {}:{}", config.host, config.port);
        pthread_kill(waiter.native_handle(), SIGTERM);
    }
    waiter.join();
    return ok ? 0 : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
    spdlog::set_default_logger(spdlog::stderr_color_mt("connchain"));

    CLI::App app{"Cross-chain escrow exchange simulator"};
    app.require_subcommand(1);
    std::string level = "warn";
    app.add_option("--log-level", level, "trace, debug, info, warn, error or off");

    bool as_json = false;

    auto* run_cmd = app.add_subcommand("run", "Run a scenario file or a built-in scenario");
    std::string source;
    run_cmd->add_option("scenario", source, "Path to a scenario JSON file or a built-in name")->required();
    run_cmd->add_flag("--json", as_json, "Print the full report as JSON");

    auto* list_cmd = app.add_subcommand("list", "List built-in scenarios");

    auto* show_cmd = app.add_subcommand("show", "Print a built-in scenario as JSON");
    std::string show_name;
    show_cmd->add_option("name", show_name)->required();

    auto* sweep_cmd = app.add_subcommand("sweep", "Run seeded random fault schedules and check invariants");
    harness::SweepOptions sweep_options;
    sweep_cmd->add_option("--count", sweep_options.count, "Number of schedules")->capture_default_str();
    sweep_cmd->add_option("--seed", sweep_options.seed, "Sweep seed")->capture_default_str();
    sweep_cmd->add_option("--steps", sweep_options.steps, "Random actions per schedule")->capture_default_str();
    sweep_cmd->add_flag("--halt-everything", sweep_options.halt_everything, "Halt every chain for the whole run");
    sweep_cmd->add_flag("--json", as_json, "Print the summary as JSON");

    auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP API");
    std::string config_path;
    std::string listen;
    bool test_mode = false;
    serve_cmd->add_option("--config", config_path, "Service config JSON")->check(CLI::ExistingFile);
    serve_cmd->add_option("--listen", listen, "host:port, overrides the config file");
    serve_cmd->add_flag("--test-mode", test_mode, "Enable the fault injection route");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    const auto parsed_level = spdlog::level::from_str(level);
    spdlog::set_level(parsed_level);

    try {
        if (*run_cmd) return run(source, as_json);
        if (*list_cmd) {
            for (const auto& name : harness::builtin_names()) std::cout << name << "\n";
            return 0;
        }
        if (*show_cmd) {
            auto s = harness::builtin(show_name);
            if (!s) {
                std::cerr << "unknown built-in scenario: " << show_name << "\n";
                return kExitUsage;
            }
            std::cout << harness::to_json(*s).dump(2) << "\n";
            return 0;
        }
        if (*sweep_cmd) return sweep(sweep_options, as_json);
        if (*serve_cmd) return serve(config_path, listen, test_mode);
    } catch (const Error& e) {
        std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
        const bool usage = e.code() == ErrorCode::kInvalidScenario || e.code() == ErrorCode::kBadRequest ||
                           e.code() == ErrorCode::kInvalidConfig;
        return usage ? kExitUsage : kExitFailed;
    }
    return kExitUsage;
}
