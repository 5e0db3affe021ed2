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

#include "connchain/common/error.hpp"

namespace connchain {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::kUnknownRule:
            return "unknown-rule";
        case ErrorCode::kUnknownId:
            return "unknown-id";
        case ErrorCode::kUnknownChain:
            return "unknown-chain";
        case ErrorCode::kInvalidAmount:
            return "invalid-amount";
        case ErrorCode::kDuplicateRule:
            return "duplicate-rule";
        case ErrorCode::kDuplicateChainId:
            return "duplicate-chain-id";
        case ErrorCode::kInvalidConfig:
            return "invalid-config";
        case ErrorCode::kUnverifiedEvent:
            return "unverified-event";
        case ErrorCode::kBadRequest:
            return "bad-request";
        case ErrorCode::kInvalidScenario:
            return "invalid-scenario";
    }
    return "unknown";
}

}  // namespace connchain
