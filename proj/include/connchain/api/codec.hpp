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

#include <nlohmann/json.hpp>

#include "connchain/ledger/types.hpp"

namespace connchain::api {

// {"chainID", "assetType", "genesis": {account: balance}, "blockPolicy", "powDifficulty"}
// blockPolicy is "per-transaction" or {"interval": <ms>}.
ledger::ChainConfig chain_config_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json to_json(const ledger::ChainConfig& config);

// {"mode": "<fault mode>", "returnCode": <int>}; the chain comes from the caller.
ledger::FaultDirective fault_from_json(const ledger::ChainId& chain, const nlohmann::ordered_json& j);

}  // namespace connchain::api
