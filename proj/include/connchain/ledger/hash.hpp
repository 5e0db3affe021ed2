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
#include <vector>

#include "connchain/ledger/types.hpp"

namespace connchain::ledger {

// Byte-stable, length-prefixed encoding of every hashed block field:
// height, prevHash, transaction count, then per transaction
// txID/from/to/amount/status/returnCode/submittedAt/validUntil, then nonce and timestamp.
// Integers are 8-byte big-endian; strings and digests carry an 8-byte length prefix.
std::vector<std::uint8_t> canonical_serialization(const Block& block);

Digest sha256(const std::vector<std::uint8_t>& bytes);

// Recomputes the hash from the block's content; ignores block.hash.
Digest compute_block_hash(const Block& block);

unsigned leading_zero_bits(const Digest& digest);

}  // namespace connchain::ledger
