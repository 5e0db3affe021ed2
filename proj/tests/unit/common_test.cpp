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

#include <gtest/gtest.h>

#include "connchain/common/clock.hpp"
#include "connchain/common/error.hpp"

namespace connchain {
namespace {

constexpr Millis kFig4Id = 1'510'110'937'992;  // 2017-11-08 03:15:37.992 UTC

TEST(Timestamps, FormatsRecordShapes) {
    EXPECT_EQ(format_seconds(kFig4Id), "20171108T031537");
    EXPECT_EQ(format_millis(kFig4Id), "20171108T031537992");
    EXPECT_EQ(format_millis(0), "19700101T000000000");
}

TEST(Timestamps, ParseRoundTrip) {
    EXPECT_EQ(parse_timestamp("20171108T031537992"), kFig4Id);
    EXPECT_EQ(parse_timestamp("20171108T031537"), kFig4Id - 992);
    for (Millis t : {Millis{0}, kFig4Id, Millis{4'102'444'799'999}}) {
        EXPECT_EQ(parse_timestamp(format_millis(t)), t);
    }
}

TEST(Timestamps, RejectsMalformed) {
    for (const char* bad : {"", "2017-11-08", "20171108 031537", "20171108T0315379", "20171308T031537",
                            "20171108T03153799x"}) {
        EXPECT_THROW(parse_timestamp(bad), Error) << bad;
    }
}

TEST(ManualClock, OnlyMovesWhenTold) {
    ManualClock clock(100);
    EXPECT_EQ(clock.now(), 100);
    clock.advance(50);
    EXPECT_EQ(clock.now(), 150);
    clock.set(7);
    EXPECT_EQ(clock.now(), 7);
}

TEST(Error, CarriesWireCode) {
    Error e(ErrorCode::kDuplicateChainId, "twice");
    EXPECT_EQ(e.code(), ErrorCode::kDuplicateChainId);
    EXPECT_EQ(to_string(e.code()), "duplicate-chain-id");
    EXPECT_STREQ(e.what(), "twice");
    EXPECT_EQ(to_string(ErrorCode::kUnverifiedEvent), "unverified-event");
}

}  // namespace
}  // namespace connchain
