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

#include "connchain/ledger/hash.hpp"

#include <bit>

#include <openssl/sha.h>

namespace connchain::ledger {

namespace {

class Writer {
  public:
    void u64(std::uint64_t v) {
        for (int shift = 56; shift >= 0; shift -= 8) out_.push_back(static_cast<std::uint8_t>(v >> shift));
    }
    void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
    void bytes(const std::uint8_t* data, std::size_t len) {
        u64(len);
        out_.insert(out_.end(), data, data + len);
    }
    void str(const std::string& s) { bytes(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()); }
    void digest(const Digest& d) { bytes(d.data(), d.size()); }

    std::vector<std::uint8_t> take() { return std::move(out_); }

  private:
    std::vector<std::uint8_t> out_;
};

}  // namespace

std::vector<std::uint8_t> canonical_serialization(const Block& block) {
    Writer w;
    w.u64(block.height);
    w.digest(block.prev_hash);
    w.u64(block.transactions.size());
    for (const auto& tx : block.transactions) {
        w.str(tx.tx_id);
        w.str(tx.from);
        w.str(tx.to);
        w.i64(tx.amount);
        w.u64(static_cast<std::uint64_t>(tx.status));
        w.i64(tx.return_code);
        w.i64(tx.submitted_at);
        // absent deadline encodes as a zero flag with no value
        w.u64(tx.valid_until ? 1 : 0);
        if (tx.valid_until) w.i64(*tx.valid_until);
    }
    w.u64(block.nonce);
    w.i64(block.timestamp);
    return w.take();
}

Digest sha256(const std::vector<std::uint8_t>& bytes) {
    Digest out{};
    SHA256(bytes.data(), bytes.size(), out.data());
    return out;
}

Digest compute_block_hash(const Block& block) { return sha256(canonical_serialization(block)); }

unsigned leading_zero_bits(const Digest& digest) {
    unsigned bits = 0;
    for (auto b : digest) {
        if (b == 0) {
            bits += 8;
            continue;
        }
        bits += static_cast<unsigned>(std::countl_zero(b));
        break;
    }
    return bits;
}

}  // namespace connchain::ledger
