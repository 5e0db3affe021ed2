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

#include "connchain/escrow/profile.hpp"

#include <limits>

#include "connchain/common/error.hpp"

namespace connchain::escrow {

namespace {

template <typename T>
T require(const nlohmann::ordered_json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) {
        throw Error(ErrorCode::kBadRequest, std::string("missing field: ") + key);
    }
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::ordered_json::exception&) {
        throw Error(ErrorCode::kBadRequest, std::string("wrong type for field: ") + key);
    }
}

Amount require_integer(const nlohmann::ordered_json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) {
        throw Error(ErrorCode::kBadRequest, std::string("missing field: ") + key);
    }
    const auto& v = j.at(key);
    if (!v.is_number_integer()) throw Error(ErrorCode::kBadRequest, std::string("field must be an integer: ") + key);
    return v.get<Amount>();
}

}  // namespace

void validate(const ServiceProfile& profile) {
    if (profile.rule_id.empty()) throw Error(ErrorCode::kInvalidConfig, "ruleID must not be empty");
    if (profile.rate.numerator < 1 || profile.rate.denominator < 1) {
        throw Error(ErrorCode::kInvalidConfig, "rate numerator and denominator must be >= 1");
    }
    if (profile.fee < 0) throw Error(ErrorCode::kInvalidConfig, "fee must be non-negative");
    if (profile.src_chain == profile.dst_chain) {
        throw Error(ErrorCode::kInvalidConfig, "source and destination chains must differ");
    }
}

__extension__ using Wide = __int128;

Amount compute_source_amount(Amount dst_amount, const ServiceProfile& profile) {
    if (dst_amount < 1) throw Error(ErrorCode::kInvalidAmount, "dstAmount must be >= 1");
    const auto n = static_cast<Wide>(profile.rate.numerator);
    const auto d = static_cast<Wide>(profile.rate.denominator);
    const Wide covered = (static_cast<Wide>(dst_amount) * d + n - 1) / n;
    const Wide total = covered + profile.fee;
    if (total > std::numeric_limits<Amount>::max()) {
        throw Error(ErrorCode::kInvalidAmount, "source amount overflows");
    }
    return static_cast<Amount>(total);
}

nlohmann::ordered_json to_json(const ServiceProfile& p) {
    nlohmann::ordered_json j;
    j["ruleID"] = p.rule_id;
    j["srcChainID"] = p.src_chain;
    j["dstChainID"] = p.dst_chain;
    j["exchangerSrcAccount"] = p.exchanger_src_account;
    j["exchangerDstAccount"] = p.exchanger_dst_account;
    j["rate"] = {{"numerator", p.rate.numerator}, {"denominator", p.rate.denominator}};
    j["fee"] = p.fee;
    return j;
}

ServiceProfile profile_from_json(const nlohmann::ordered_json& j) {
    ServiceProfile p;
    p.rule_id = require<std::string>(j, "ruleID");
    p.src_chain = require<std::string>(j, "srcChainID");
    p.dst_chain = require<std::string>(j, "dstChainID");
    p.exchanger_src_account = require<std::string>(j, "exchangerSrcAccount");
    p.exchanger_dst_account = require<std::string>(j, "exchangerDstAccount");
    if (!j.contains("rate")) throw Error(ErrorCode::kBadRequest, "missing field: rate");
    p.rate.numerator = require_integer(j.at("rate"), "numerator");
    p.rate.denominator = require_integer(j.at("rate"), "denominator");
    p.fee = j.contains("fee") ? require_integer(j, "fee") : 0;
    return p;
}

nlohmann::ordered_json to_json(const ExchangeRequest& r) {
    nlohmann::ordered_json j;
    j["userID"] = r.user_id;
    j["srcAccount"] = r.src_account;
    j["dstAccount"] = r.dst_account;
    j["ruleID"] = r.rule_id;
    j["dstAmount"] = r.dst_amount;
    return j;
}

ExchangeRequest request_from_json(const nlohmann::ordered_json& j) {
    ExchangeRequest r;
    r.user_id = require<std::string>(j, "userID");
    r.src_account = require<std::string>(j, "srcAccount");
    r.dst_account = require<std::string>(j, "dstAccount");
    r.rule_id = require<std::string>(j, "ruleID");
    r.dst_amount = require_integer(j, "dstAmount");
    return r;
}

}  // namespace connchain::escrow
