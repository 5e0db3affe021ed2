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
#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>

namespace connchain {

// Milliseconds since the Unix epoch, UTC. All simulated time is expressed in this unit.
using Millis = std::int64_t;

class Clock {
  public:
    virtual ~Clock() = default;
    [[nodiscard]] virtual Millis now() const = 0;
};

class SystemClock final : public Clock {
  public:
    [[nodiscard]] Millis now() const override;
};

// Frozen clock that only moves when told to. Used by tests and the scenario harness.
class ManualClock final : public Clock {
  public:
    explicit ManualClock(Millis start = 0) : now_(start) {}

    [[nodiscard]] Millis now() const override { return now_.load(); }
    void advance(Millis delta) { now_.fetch_add(delta); }
    void set(Millis t) { now_.store(t); }

  private:
    std::atomic<Millis> now_;
};

// "YYYYMMDDTHHMMSS" (15 chars), as used for ExchangeRecord timestamp values.
std::string format_seconds(Millis t);

// "YYYYMMDDTHHMMSSmmm" (18 chars incl. 'T'), as used for ExchangeRecord ids.
std::string format_millis(Millis t);

// Parses either of the two shapes above. Throws Error(kBadRequest) on malformed input.
Millis parse_timestamp(std::string_view text);

}  // namespace connchain
