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

#include "zkmitqh/gf.hpp"

#include <stdexcept>

namespace zkmitqh {

static uint32_t modulus_for(int k) {
    switch (k) {
        case 1: return 0b11;
        case 2: return 0b111;
        case 3: return 0b1011;
        case 4: return 0b10011;
        case 5: return 0b100101;
        case 6: return 0b1000011;
        default: throw std::invalid_argument("unsupported extension degree");
    }
}

Gf2k::Gf2k(int k) : k_(k), mod_(modulus_for(k)) {
    uint32_t q = 1u << k;
    mul_.assign((size_t)q * q, 0);
    for (uint32_t a = 0; a < q; a++)
        for (uint32_t b = 0; b < q; b++) {
            uint32_t r = 0, x = a, y = b;
            while (y) {
                if (y & 1) r ^= x;
                y >>= 1;
                x <<= 1;
                if (x & q) x ^= mod_;
            }
            mul_[(a << k) | b] = r;
        }
    inv_.assign(q, 0);
    for (uint32_t a = 1; a < q; a++)
        for (uint32_t b = 1; b < q; b++)
            if (mul(a, b) == 1) inv_[a] = b;
}

Gf2k Gf2k::for_parties(int n) {
    int k = 1;
    while ((1 << k) < n + 2) k++;
    return Gf2k(k);
}

uint32_t Gf2k::inv(uint32_t a) const {
    if (a == 0 || a >= size()) throw std::domain_error("no inverse");
    return inv_[a];
}

uint32_t Gf2k::pow(uint32_t a, unsigned e) const {
    uint32_t r = 1;
    while (e--) r = mul(r, a);
    return r;
}

std::vector<uint32_t> Gf2k::lagrange_at_zero(const std::vector<uint32_t>& xs) const {
    std::vector<uint32_t> out(xs.size());
    for (size_t i = 0; i < xs.size(); i++) {
        uint32_t num = 1, den = 1;
        for (size_t j = 0; j < xs.size(); j++) {
            if (j == i) continue;
            num = mul(num, xs[j]);             // (0 - x_j) = x_j in char 2
            den = mul(den, xs[i] ^ xs[j]);
        }
        out[i] = mul(num, inv(den));
    }
    return out;
}

uint32_t Gf2k::eval_poly(const std::vector<uint32_t>& coeffs, uint32_t x) const {
    uint32_t acc = 0;
    for (size_t i = coeffs.size(); i-- > 0;) acc = mul(acc, x) ^ coeffs[i];
    return acc;
}

}  // namespace zkmitqh
