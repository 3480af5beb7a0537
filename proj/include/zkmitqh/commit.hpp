// Copyright 2026 The zkmitqh Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ZKMITQH_COMMIT_HPP
#define ZKMITQH_COMMIT_HPP

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "zkmitqh/rng.hpp"

namespace zkmitqh {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m);
uint64_t powmod(uint64_t base, uint64_t e, uint64_t m);
bool is_prime(uint64_t n);  // deterministic Miller-Rabin for 64-bit inputs

// Order-q subgroup of Z_p^* with p = 2q + 1. Arithmetic is native 64-bit, so
// p must stay below 2^63.
struct GroupParams {
    uint64_t p = 0;
    uint64_t q = 0;
    uint64_t g = 0;

    static GroupParams safe_prime(uint64_t q);  // g = 4
    static GroupParams default31();             // largest q < 2^31 with 2q+1 prime
    static GroupParams toy();                   // q = 83
    static GroupParams micro();                 // q = 11
    bool valid() const;
    bool in_subgroup(uint64_t x) const;
    int limb_bits() const;  // floor(log2 q)
    bool operator==(const GroupParams& o) const { return p == o.p && q == o.q && g == o.g; }
};

// Precomputed powers base^(d * 16^i) for fast fixed-base exponentiation.
class FixedBase {
   public:
    FixedBase() = default;
    FixedBase(uint64_t base, const GroupParams& gp);
    uint64_t pow(uint64_t e) const;

   private:
    uint64_t p_ = 0;
    std::vector<std::array<uint64_t, 16>> table_;
};

struct Commitment {
    uint64_t c1 = 0;
    uint64_t c2 = 0;
    bool operator==(const Commitment& o) const { return c1 == o.c1 && c2 == o.c2; }
    bool operator<(const Commitment& o) const { return c1 != o.c1 ? c1 < o.c1 : c2 < o.c2; }
};

struct Opening {
    uint64_t message = 0;
    uint64_t randomness = 0;
    bool operator==(const Opening& o) const { return message == o.message && randomness == o.randomness; }
};

struct PlainKey {
    GroupParams params;
    uint64_t h = 0;
};

PlainKey gen_plain(const GroupParams& params, Rng& rng);
Commitment commit_plain(const PlainKey& key, uint64_t m, uint64_t r);
bool verify_plain(const PlainKey& key, const Commitment& com, uint64_t m, uint64_t r);

enum class DualMode { Binding, Hiding };

struct DualKey {
    GroupParams params;
    uint64_t g = 0, h = 0, u = 0, v = 0;
    DualMode mode = DualMode::Binding;
    std::optional<uint64_t> trapdoor;  // alpha, hiding mode only

    // Exponents kept for tests and experiments; never serialized.
    uint64_t beta = 0, alpha1 = 0, alpha2 = 0;

    std::shared_ptr<const std::array<FixedBase, 4>> tables;  // g, h, u, v
    void build_tables();
};

DualKey gen_dual(const GroupParams& params, DualMode mode, Rng& rng);
// Reassembles a key from its public elements (e.g. after parsing).
DualKey dual_from_elements(const GroupParams& params, uint64_t g, uint64_t h, uint64_t u, uint64_t v, DualMode mode);
Commitment commit_dual(const DualKey& key, uint64_t m, uint64_t r);
bool verify_dual(const DualKey& key, const Commitment& com, const Opening& op);
Opening equivocate(const DualKey& key, const Commitment& com, const Opening& original, uint64_t target_m);

// Little-endian bit packing of bytes into limbs of limb_bits bits.
std::vector<uint64_t> bytes_to_limbs(const std::vector<uint8_t>& bytes, int limb_bits);
std::vector<uint8_t> limbs_to_bytes(const std::vector<uint64_t>& limbs, int limb_bits, size_t num_bytes);

struct CommittedBlock {
    std::vector<Commitment> coms;
    std::vector<Opening> openings;
};
CommittedBlock commit_message_block(const DualKey& key, const std::vector<uint8_t>& bytes, Rng& rng);
bool verify_message_block(const DualKey& key, const std::vector<Commitment>& coms, const std::vector<Opening>& openings,
                          const std::vector<uint8_t>& bytes);

}  // namespace zkmitqh

#endif
