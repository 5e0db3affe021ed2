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

#include <limits>

#include "connchain/common/error.hpp"
#include "connchain/escrow/profile.hpp"

namespace connchain::escrow {
namespace {

ServiceProfile profile(Amount n, Amount d, Amount fee) {
    return {"r", "ChainID-1", "ChainID-2", "X-1", "X-2", {n, d}, fee};
}

// Smallest s >= fee + 1 whose convertible part (s - fee) * n / d covers dst.
Amount brute_force(Amount dst, Amount n, Amount d, Amount fee) {
    for (Amount s = fee + 1;; ++s) {
        if ((s - fee) * n >= dst * d) return s;
    }
}

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::kBadRequest;
}

TEST(ComputeSourceAmount, WorkedExamples) {
    EXPECT_EQ(compute_source_amount(100, profile(2, 1, 5)), 55);
    EXPECT_EQ(compute_source_amount(7, profile(1, 1, 0)), 7);
    EXPECT_EQ(compute_source_amount(10, profile(3, 1, 0)), 4);
}

TEST(ComputeSourceAmount, ScenarioProfiles) {
    // Carol: 6 destination units per 5 source units plus 10 fee; Daisy: 90 per unit, no fee
    EXPECT_EQ(compute_source_amount(203, profile(6, 5, 10)), 180);
    EXPECT_EQ(compute_source_amount(136'800, profile(90, 1, 0)), 1'520);
}

TEST(ComputeSourceAmount, AgreesWithBruteForceOnSample) {
    for (Amount dst : {1, 2, 3, 17, 99, 100, 101, 577}) {
        for (Amount n = 1; n <= 20; n += 3) {
            for (Amount d = 1; d <= 20; d += 4) {
                for (Amount fee : {0, 1, 10}) {
                    ASSERT_EQ(compute_source_amount(dst, profile(n, d, fee)), brute_force(dst, n, d, fee))
                        << dst << " " << n << "/" << d << " +" << fee;
                }
            }
        }
    }
}

TEST(ComputeSourceAmount, RejectsBadAmountsAndOverflow) {
    EXPECT_EQ(code_of([] { compute_source_amount(0, profile(1, 1, 0)); }), ErrorCode::kInvalidAmount);
    EXPECT_EQ(code_of([] { compute_source_amount(-3, profile(1, 1, 0)); }), ErrorCode::kInvalidAmount);
    const auto max = std::numeric_limits<Amount>::max();
    EXPECT_EQ(code_of([&] { compute_source_amount(max, profile(1, 2, 0)); }), ErrorCode::kInvalidAmount);
    EXPECT_EQ(compute_source_amount(max, profile(1, 1, 0)), max);
}

TEST(Validate, RejectsBrokenProfiles) {
    EXPECT_NO_THROW(validate(profile(6, 5, 10)));
    EXPECT_EQ(code_of([] { validate(profile(0, 1, 0)); }), ErrorCode::kInvalidConfig);
    EXPECT_EQ(code_of([] { validate(profile(1, 0, 0)); }), ErrorCode::kInvalidConfig);
    EXPECT_EQ(code_of([] { validate(profile(1, 1, -1)); }), ErrorCode::kInvalidConfig);
    auto same = profile(1, 1, 0);
    same.dst_chain = same.src_chain;
    EXPECT_EQ(code_of([&] { validate(same); }), ErrorCode::kInvalidConfig);
    auto unnamed = profile(1, 1, 0);
    unnamed.rule_id.clear();
    EXPECT_EQ(code_of([&] { validate(unnamed); }), ErrorCode::kInvalidConfig);
}

TEST(ProfileJson, RoundTrip) {
    const auto p = profile(6, 5, 10);
    const auto j = to_json(p);
    EXPECT_EQ(j.dump(),
              R"({"ruleID":"r","srcChainID":"ChainID-1","dstChainID":"ChainID-2","exchangerSrcAccount":"X-1",)"
              R"("exchangerDstAccount":"X-2","rate":{"numerator":6,"denominator":5},"fee":10})");
    EXPECT_EQ(profile_from_json(j), p);
}

TEST(ProfileJson, RejectsMissingOrMistypedFields) {
    auto j = to_json(profile(6, 5, 10));
    j.erase("fee");
    EXPECT_EQ(profile_from_json(j).fee, 0);  // fee is optional
    j.erase("srcChainID");
    EXPECT_EQ(code_of([&] { profile_from_json(j); }), ErrorCode::kBadRequest);
    j = to_json(profile(6, 5, 10));
    j["rate"]["numerator"] = "six";
    EXPECT_EQ(code_of([&] { profile_from_json(j); }), ErrorCode::kBadRequest);
}

TEST(RequestJson, RoundTripAndValidation) {
    ExchangeRequest r{"userXX", "User1", "UserA", "0", 203};
    const auto back = request_from_json(to_json(r));
    EXPECT_EQ(back.user_id, r.user_id);
    EXPECT_EQ(back.src_account, r.src_account);
    EXPECT_EQ(back.dst_account, r.dst_account);
    EXPECT_EQ(back.rule_id, r.rule_id);
    EXPECT_EQ(back.dst_amount, 203);

    auto j = to_json(r);
    j["dstAmount"] = 2.5;
    EXPECT_EQ(code_of([&] { request_from_json(j); }), ErrorCode::kBadRequest);
    j["dstAmount"] = "203";
    EXPECT_EQ(code_of([&] { request_from_json(j); }), ErrorCode::kBadRequest);
    EXPECT_EQ(code_of([] { request_from_json(nlohmann::ordered_json::array()); }), ErrorCode::kBadRequest);
}

}  // namespace
}  // namespace connchain::escrow
