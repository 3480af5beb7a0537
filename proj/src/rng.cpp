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

#include "zkmitqh/rng.hpp"

namespace zkmitqh {

static inline uint64_t splitmix_final(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

uint64_t prf_word(uint64_t key, uint64_t stream, uint64_t counter) {
    uint64_t z = splitmix_final(key + 0x9e3779b97f4a7c15ULL);
    z = splitmix_final(z ^ (stream * 0xd1b54a32d192ed03ULL + 0x632be59bd9b4e019ULL));
    return splitmix_final(z + counter * 0x9e3779b97f4a7c15ULL);
}

uint64_t Rng::next() { return prf_word(key_, stream_, ctr_++); }

uint64_t Rng::below(uint64_t n) {
    if (n == 0) return next();
    if ((n & (n - 1)) == 0) return next() & (n - 1);
    // reject the top partial block
    uint64_t rem = (UINT64_MAX % n + 1) % n;  // 2^64 mod n
    uint64_t limit = UINT64_MAX - rem;
    while (true) {
        uint64_t x = next();
        if (x <= limit) return x % n;
    }
}

double Rng::uniform() { return (double)(next() >> 11) * 0x1.0p-53; }

Rng Rng::fork(uint64_t label) const {
    return Rng(key_, prf_word(key_ ^ 0x5bd1e995ULL, stream_, label ^ 0xa5a5a5a5deadbeefULL));
}

}  // namespace zkmitqh
