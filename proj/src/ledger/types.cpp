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

#include "connchain/ledger/types.hpp"

#include "connchain/common/error.hpp"

namespace connchain::ledger {

std::string to_hex(const Digest& digest) {
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(digest.size() * 2);
    for (auto b : digest) {
        out.push_back(kHex[b >> 4]);
        out.push_back(kHex[b & 0x0f]);
    }
    return out;
}

std::string_view to_string(TxStatus status) noexcept {
    switch (status) {
        case TxStatus::kPending:
            return "pending";
        case TxStatus::kSuccess:
            return "success";
        case TxStatus::kFailure:
            return "failure";
    }
    return "unknown";
}

std::string_view to_string(FaultMode mode) noexcept {
    switch (mode) {
        case FaultMode::kNone:
            return "none";
        case FaultMode::kHaltBlockProduction:
            return "halt-block-production";
        case FaultMode::kFailNextTransaction:
            return "fail-next-transaction";
        case FaultMode::kTamperNextBlock:
            return "tamper-next-block";
    }
    return "unknown";
}

FaultMode parse_fault_mode(std::string_view text) {
    for (auto mode : {FaultMode::kNone, FaultMode::kHaltBlockProduction, FaultMode::kFailNextTransaction,
                      FaultMode::kTamperNextBlock}) {
        if (text == to_string(mode)) return mode;
    }
    throw Error(ErrorCode::kBadRequest, "unknown fault mode: " + std::string(text));
}

}  // namespace connchain::ledger
