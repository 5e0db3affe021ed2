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

#include "connchain/common/clock.hpp"

#include <charconv>
#include <cstdio>
#include <ctime>

#include "connchain/common/error.hpp"

namespace connchain {

namespace {

std::tm to_utc(Millis t) {
    std::time_t secs = static_cast<std::time_t>(t >= 0 ? t / 1000 : (t - 999) / 1000);
    std::tm tm{};
    gmtime_r(&secs, &tm);
    return tm;
}

int parse_digits(std::string_view text, std::size_t pos, std::size_t len) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, value);
    if (ec != std::errc{} || ptr != text.data() + pos + len) {
        throw Error(ErrorCode::kBadRequest, "malformed timestamp: " + std::string(text));
    }
    return value;
}

}  // namespace

Millis SystemClock::now() const {
    using namespace std::chrono;
    return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

std::string format_seconds(Millis t) {
    std::tm tm = to_utc(t);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d%02d%02dT%02d%02d%02d", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                  tm.tm_hour, tm.tm_min, tm.tm_sec);
    return buf;
}

std::string format_millis(Millis t) {
    Millis ms = ((t % 1000) + 1000) % 1000;
    char buf[8];
    std::snprintf(buf, sizeof(buf), "%03d", static_cast<int>(ms));
    return format_seconds(t) + buf;
}

Millis parse_timestamp(std::string_view text) {
    if ((text.size() != 15 && text.size() != 18) || text[8] != 'T') {
        throw Error(ErrorCode::kBadRequest, "malformed timestamp: " + std::string(text));
    }
    std::tm tm{};
    tm.tm_year = parse_digits(text, 0, 4) - 1900;
    tm.tm_mon = parse_digits(text, 4, 2) - 1;
    tm.tm_mday = parse_digits(text, 6, 2);
    tm.tm_hour = parse_digits(text, 9, 2);
    tm.tm_min = parse_digits(text, 11, 2);
    tm.tm_sec = parse_digits(text, 13, 2);
    const Millis ms = text.size() == 18 ? parse_digits(text, 15, 3) : 0;
    const Millis t = static_cast<Millis>(timegm(&tm)) * 1000 + ms;
    // timegm normalizes out-of-range fields; a valid stamp survives a round trip
    if (format_seconds(t) != text.substr(0, 15)) {
        throw Error(ErrorCode::kBadRequest, "timestamp out of range: " + std::string(text));
    }
    return t;
}

}  // namespace connchain
