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

#ifndef ZKMITQH_GF_HPP
#define ZKMITQH_GF_HPP

#include <cstdint>
#include <vector>

namespace zkmitqh {

// GF(2^k) with a fixed irreducible modulus per k, table driven.
class Gf2k {
   public:
    Gf2k() : Gf2k(2) {}
    explicit Gf2k(int k);
    static Gf2k for_parties(int n);  // k = ceil(log2(n + 2))

    int k() const { return k_; }
    uint32_t size() const { return 1u << k_; }
    uint32_t modulus() const { return mod_; }
    uint32_t add(uint32_t a, uint32_t b) const { return a ^ b; }
    uint32_t mul(uint32_t a, uint32_t b) const { return mul_[(a << k_) | b]; }
    uint32_t inv(uint32_t a) const;
    uint32_t pow(uint32_t a, unsigned e) const;
    bool operator==(const Gf2k& o) const { return k_ == o.k_; }

    // Lagrange coefficients at 0 for distinct points xs.
    std::vector<uint32_t> lagrange_at_zero(const std::vector<uint32_t>& xs) const;
    // Evaluate sum coeffs[i] x^i.
    uint32_t eval_poly(const std::vector<uint32_t>& coeffs, uint32_t x) const;

   private:
    int k_;
    uint32_t mod_;
    std::vector<uint32_t> mul_;
    std::vector<uint32_t> inv_;
};

}  // namespace zkmitqh

#endif
