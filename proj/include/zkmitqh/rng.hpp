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

#ifndef ZKMITQH_RNG_HPP
#define ZKMITQH_RNG_HPP

#include <cstdint>
#include <vector>

namespace zkmitqh {

// Counter-mode PRF: word(key, stream, counter) is SplitMix64 finalization over a
// mix of the three inputs. Streams give independent substreams for sub-tasks.
uint64_t prf_word(uint64_t key, uint64_t stream, uint64_t counter);

class Rng {
   public:
    explicit Rng(uint64_t seed, uint64_t stream = 0) : key_(seed), stream_(stream) {}

    uint64_t next();
    // Uniform in [0, n). n == 0 is treated as 2^64.
    uint64_t below(uint64_t n);
    bool bit() { return next() & 1; }
    // Uniform double in [0, 1) with 53 bits.
    double uniform();
    // Child generator on a derived stream; does not advance this one.
    Rng fork(uint64_t label) const;

    uint64_t key() const { return key_; }
    uint64_t stream() const { return stream_; }
    uint64_t counter() const { return ctr_; }

   private:
    uint64_t key_;
    uint64_t stream_;
    uint64_t ctr_ = 0;
};

}  // namespace zkmitqh

#endif
