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
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "connchain/common/clock.hpp"

namespace connchain::harness {

struct SweepOptions {
    int count = 200;
    std::uint64_t seed = 42;
    int steps = 40;  // random actions per schedule before draining
    Millis timeout = 20'000;
    int retry_limit = 3;
    // Halt every chain before the first action and never resume.
    bool halt_everything = false;
};

struct Violation {
    int schedule = 0;
    std::uint64_t schedule_seed = 0;
    std::string what;
};

struct ScheduleOutcome {
    std::uint64_t schedule_seed = 0;
    int exchanges = 0;
    int complete = 0;
    int fixed_recovery = 0;
    int failed_margin = 0;
    int stuck = 0;
    int faults_injected = 0;
    std::vector<std::string> violations;
};

struct SweepSummary {
    int count = 0;
    std::uint64_t seed = 0;
    int exchanges = 0;
    int complete = 0;
    int fixed_recovery = 0;
    int failed_margin = 0;
    int stuck = 0;
    int faults_injected = 0;
    std::vector<Violation> violations;
};

// Seed for schedule `index` of a sweep; lets a single failing schedule be replayed.
std::uint64_t schedule_seed(std::uint64_t sweep_seed, int index);

ScheduleOutcome run_schedule(std::uint64_t schedule_seed, const SweepOptions& options);

// Throws Error(kBadRequest) when count < 1.
SweepSummary run_fault_sweep(const SweepOptions& options);

nlohmann::ordered_json to_json(const SweepSummary& summary);

}  // namespace connchain::harness
