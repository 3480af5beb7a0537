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

#include "zkmitqh/commit.hpp"

#include <stdexcept>

namespace zkmitqh {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) { return (uint64_t)((unsigned __int128)a * b % m); }

uint64_t powmod(uint64_t base, uint64_t e, uint64_t m) {
    uint64_t r = 1 % m;
    base %= m;
    while (e) {
        if (e & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        e >>= 1;
    }
    return r;
}

bool is_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t sp : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == sp) return true;
        if (n % sp == 0) return false;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        s++;
    }
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool comp = true;
        for (int i = 1; i < s; i++) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                comp = false;
                break;
            }
        }
        if (comp) return false;
    }
    return true;
}

GroupParams GroupParams::safe_prime(uint64_t q) {
    if (!is_prime(q) || !is_prime(2 * q + 1) || q < 3) throw std::invalid_argument("q must be a Sophie Germain prime");
    return GroupParams{2 * q + 1, q, 4};
}

GroupParams GroupParams::default31() {
    static const GroupParams gp = [] {
        for (uint64_t q = (uint64_t{1} << 31) - 1;; q -= 2)
            if (is_prime(q) && is_prime(2 * q + 1)) return safe_prime(q);
    }();
    return gp;
}

GroupParams GroupParams::toy() { return safe_prime(83); }
GroupParams GroupParams::micro() { return safe_prime(11); }

bool GroupParams::valid() const {
    return p == 2 * q + 1 && is_prime(p) && is_prime(q) && g != 1 && g < p && powmod(g, q, p) == 1;
}

bool GroupParams::in_subgroup(uint64_t x) const { return x != 0 && x < p && powmod(x, q, p) == 1; }

int GroupParams::limb_bits() const {
    int b = 0;
    while ((uint64_t{2} << b) <= q) b++;
    return b;  // largest b with 2^b <= q
}

FixedBase::FixedBase(uint64_t base, const GroupParams& gp) : p_(gp.p) {
    int windows = 0;
    while (windows * 4 < 64 && (gp.q >> (windows * 4))) windows++;
    table_.resize(windows);
    uint64_t b = base % p_;
    for (int i = 0; i < windows; i++) {
        table_[i][0] = 1;
        for (int d = 1; d < 16; d++) table_[i][d] = mulmod(table_[i][d - 1], b, p_);
        b = mulmod(table_[i][15], b, p_);  // base^(16^(i+1))
    }
}

uint64_t FixedBase::pow(uint64_t e) const {
    uint64_t r = 1;
    for (size_t i = 0; i < table_.size() && e; i++, e >>= 4) {
        uint64_t d = e & 15;
        if (d) r = mulmod(r, table_[i][d], p_);
    }
    if (e) throw std::invalid_argument("exponent exceeds table range");
    return r;
}

static uint64_t nonzero_exponent(const GroupParams& gp, Rng& rng) { return 1 + rng.below(gp.q - 1); }

PlainKey gen_plain(const GroupParams& params, Rng& rng) {
    return PlainKey{params, powmod(params.g, nonzero_exponent(params, rng), params.p)};
}

static void check_range(const GroupParams& gp, uint64_t m, uint64_t r) {
    if (m >= gp.q || r >= gp.q) throw std::out_of_range("message or randomness outside [0, q)");
}

Commitment commit_plain(const PlainKey& key, uint64_t m, uint64_t r) {
    const auto& gp = key.params;
    check_range(gp, m, r);
    return {powmod(gp.g, r, gp.p), mulmod(powmod(key.h, r, gp.p), powmod(gp.g, m, gp.p), gp.p)};
}

bool verify_plain(const PlainKey& key, const Commitment& com, uint64_t m, uint64_t r) {
    if (m >= key.params.q || r >= key.params.q) return false;
    return commit_plain(key, m, r) == com;
}

void DualKey::build_tables() {
    auto t = std::make_shared<std::array<FixedBase, 4>>();
    (*t)[0] = FixedBase(g, params);
    (*t)[1] = FixedBase(h, params);
    (*t)[2] = FixedBase(u, params);
    (*t)[3] = FixedBase(v, params);
    tables = t;
}

DualKey gen_dual(const GroupParams& params, DualMode mode, Rng& rng) {
    DualKey k;
    k.params = params;
    k.mode = mode;
    k.g = params.g;
    k.beta = nonzero_exponent(params, rng);
    k.h = powmod(params.g, k.beta, params.p);
    if (mode == DualMode::Binding) {
        k.alpha1 = rng.below(params.q);
        do k.alpha2 = rng.below(params.q);
        while (k.alpha2 == k.alpha1);
        k.u = powmod(k.g, k.alpha1, params.p);
        k.v = powmod(k.h, k.alpha2, params.p);
    } else {
        uint64_t a = rng.below(params.q);
        k.alpha1 = k.alpha2 = a;
        k.trapdoor = a;
        k.u = powmod(k.g, a, params.p);
        k.v = powmod(k.h, a, params.p);
    }
    k.build_tables();
    return k;
}

DualKey dual_from_elements(const GroupParams& params, uint64_t g, uint64_t h, uint64_t u, uint64_t v, DualMode mode) {
    DualKey k;
    k.params = params;
    k.g = g;
    k.h = h;
    k.u = u;
    k.v = v;
    k.mode = mode;
    k.build_tables();
    return k;
}

Commitment commit_dual(const DualKey& key, uint64_t m, uint64_t r) {
    const auto& gp = key.params;
    check_range(gp, m, r);
    if (key.tables) {
        const auto& t = *key.tables;
        return {mulmod(t[0].pow(r), t[2].pow(m), gp.p), mulmod(t[1].pow(r), t[3].pow(m), gp.p)};
    }
    return {mulmod(powmod(key.g, r, gp.p), powmod(key.u, m, gp.p), gp.p),
            mulmod(powmod(key.h, r, gp.p), powmod(key.v, m, gp.p), gp.p)};
}

bool verify_dual(const DualKey& key, const Commitment& com, const Opening& op) {
    if (op.message >= key.params.q || op.randomness >= key.params.q) return false;
    return commit_dual(key, op.message, op.randomness) == com;
}

Opening equivocate(const DualKey& key, const Commitment& com, const Opening& original, uint64_t target_m) {
    if (key.mode != DualMode::Hiding || !key.trapdoor) throw std::logic_error("equivocation needs a hiding key with trapdoor");
    const uint64_t q = key.params.q;
    if (target_m >= q) throw std::out_of_range("target message outside [0, q)");
    if (!verify_dual(key, com, original)) throw std::invalid_argument("original opening does not match commitment");
    // g^r u^m = g^{r + alpha m}: keep r + alpha m fixed.
    uint64_t diff = (original.message + q - target_m) % q;
    uint64_t r2 = (original.randomness + mulmod(*key.trapdoor, diff, q)) % q;
    return {target_m, r2};
}

std::vector<uint64_t> bytes_to_limbs(const std::vector<uint8_t>& bytes, int limb_bits) {
    std::vector<uint64_t> limbs;
    size_t nbits = bytes.size() * 8;
    for (size_t start = 0; start < nbits; start += (size_t)limb_bits) {
        uint64_t limb = 0;
        for (int j = 0; j < limb_bits && start + j < nbits; j++) {
            size_t bit = start + j;
            if ((bytes[bit / 8] >> (bit % 8)) & 1) limb |= uint64_t{1} << j;
        }
        limbs.push_back(limb);
    }
    return limbs;
}

std::vector<uint8_t> limbs_to_bytes(const std::vector<uint64_t>& limbs, int limb_bits, size_t num_bytes) {
    std::vector<uint8_t> out(num_bytes, 0);
    for (size_t bit = 0; bit < num_bytes * 8; bit++) {
        size_t li = bit / (size_t)limb_bits;
        if (li >= limbs.size()) break;
        if ((limbs[li] >> (bit % (size_t)limb_bits)) & 1) out[bit / 8] |= (uint8_t)(1u << (bit % 8));
    }
    return out;
}

CommittedBlock commit_message_block(const DualKey& key, const std::vector<uint8_t>& bytes, Rng& rng) {
    CommittedBlock b;
    for (uint64_t limb : bytes_to_limbs(bytes, key.params.limb_bits())) {
        uint64_t r = rng.below(key.params.q);
        b.coms.push_back(commit_dual(key, limb, r));
        b.openings.push_back({limb, r});
    }
    return b;
}

bool verify_message_block(const DualKey& key, const std::vector<Commitment>& coms, const std::vector<Opening>& openings,
                          const std::vector<uint8_t>& bytes) {
    auto limbs = bytes_to_limbs(bytes, key.params.limb_bits());
    if (coms.size() != limbs.size() || openings.size() != limbs.size()) return false;
    for (size_t i = 0; i < limbs.size(); i++) {
        if (openings[i].message != limbs[i]) return false;
        if (!verify_dual(key, coms[i], openings[i])) return false;
    }
    return true;
}

}  // namespace zkmitqh
