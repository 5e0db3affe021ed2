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

#include <string>

#include <nlohmann/json.hpp>

#include "connchain/ledger/types.hpp"

namespace connchain::escrow {

using ledger::AccountId;
using ledger::Amount;
using ledger::ChainId;

// Destination units per source unit, kept exact as a fraction.
struct Rate {
    Amount numerator = 1;
    Amount denominator = 1;

    bool operator==(const Rate&) const = default;
};

// An exchanger's offer: where it holds funds on both chains, its rate and its fee.
struct ServiceProfile {
    std::string rule_id;
    ChainId src_chain;
    ChainId dst_chain;
    AccountId exchanger_src_account;
    AccountId exchanger_dst_account;
    Rate rate;
    Amount fee = 0;  // source-chain units

    bool operator==(const ServiceProfile&) const = default;
};

struct ExchangeRequest {
    std::string user_id;
    AccountId src_account;  // payer, source chain
    AccountId dst_account;  // merchant, destination chain
    std::string rule_id;
    Amount dst_amount = 0;
};

// Throws Error(kInvalidConfig) when the profile breaks its invariants.
void validate(const ServiceProfile& profile);

// Smallest source amount that covers dst_amount at the profile's rate, plus the fee:
// ceil(dst_amount * denominator / numerator) + fee.
// Throws Error(kInvalidAmount) for dst_amount < 1 or on overflow.
Amount compute_source_amount(Amount dst_amount, const ServiceProfile& profile);

nlohmann::ordered_json to_json(const ServiceProfile& profile);
ServiceProfile profile_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json to_json(const ExchangeRequest& request);
ExchangeRequest request_from_json(const nlohmann::ordered_json& j);

}  // namespace connchain::escrow
