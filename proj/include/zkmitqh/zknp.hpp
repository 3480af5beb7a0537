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

#ifndef ZKMITQH_ZKNP_HPP
#define ZKMITQH_ZKNP_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "zkmitqh/circuit.hpp"
#include "zkmitqh/commit.hpp"
#include "zkmitqh/mpc.hpp"
#include "zkmitqh/rng.hpp"
#include "zkmitqh/sharing.hpp"

namespace zkmitqh {

struct NpRelation {
    std::string name;
    int witness_bits = 0;
    int instance_bits = 0;
    std::function<bool(const Bits& x, const Bits& w)> holds;
    // Emits gates computing the accept bit from witness wires and public instance wires.
    std::function<int(CircuitBuilder& b, const std::vector<int>& w, const std::vector<int>& x)> build;
};

// F_j(w) = w_j + w_{j+1} w_{j+2} (indices mod bits); x = F(w).
NpRelation chi_relation(int bits = 8);
Bits chi_map(const Bits& w);
// x (one bit) = parity of w. Linear, used where exact view distributions are needed.
NpRelation parity_relation(int bits = 3);

struct NpParams {
    int n = 13;
    int t = 4;
    int lambda = 4;  // bits of randomness for the CRS commitment
    GroupParams group = GroupParams::default31();
    NpRelation relation = chi_relation();

    static NpParams desk();
    static NpParams toy();  // n=5, t=2, lambda=0, q=83, parity relation
    int challenge_size() const { return t / 2; }
    void validate() const;
};

struct CrsNp {
    DualKey dual;
    PlainKey plain;
    Commitment c;
    // test-only
    uint64_t c_message = 0;
    uint64_t c_randomness = 0;
};

CrsNp setup(const NpParams& p, uint64_t seed);
// Any mode / committed bit; hybrids and the simulator use this.
CrsNp setup_with(const NpParams& p, DualMode mode, uint64_t c_message, uint64_t seed);

// Randomness r < 2^lambda with Com(ck, 1; r) = c, found by enumeration.
std::optional<uint64_t> opening_to_one(const NpParams& p, const CrsNp& crs);

// Circuit for R'((x, c), (w, r)) = R(x, w) or [Com(ck, 1; r) = c]. Every party holds
// an xor share of (w, r); public inputs are the instance bits.
MpcContext relation_context(const NpParams& p, const CrsNp& crs, const Bits& x);

struct PartyOpening {
    View view;
    std::vector<Opening> openings;
};

struct FirstMessageNp {
    std::vector<std::vector<Commitment>> alpha;  // one block per party
};

struct ProverState {
    std::vector<PartyOpening> zeta;  // index i-1 for party i
};

using ChallengeNp = PartySet;

struct ResponseNp {
    std::vector<std::pair<int, PartyOpening>> gamma;
};

struct SuperpositionChallenge {
    std::vector<std::pair<ChallengeNp, cplx>> terms;
    double norm2() const;
};

struct LabeledState {
    std::vector<std::string> labels;
    std::vector<cplx> amp;
    double norm2() const;
};

// Shares (w || r) and emulates; the pair of input views is what a prover commits to.
MpcTranscript emulate_relation(const MpcContext& ctx, const Bits& w, const Bits& r, Rng& rng);
std::pair<FirstMessageNp, ProverState> commit_views(const CrsNp& crs, const std::vector<View>& views, Rng& rng);

// throws std::invalid_argument if (x, w) is not in the relation
std::pair<FirstMessageNp, ProverState> prover_commit(const NpParams& p, const CrsNp& crs, const Bits& x, const Bits& w,
                                                     uint64_t seed);
ChallengeNp verifier_challenge(const NpParams& p, Rng& rng);
std::vector<ChallengeNp> all_challenges(const NpParams& p);
ResponseNp prover_respond(const ProverState& st, const ChallengeNp& beta);
std::string response_label(const ChallengeNp& beta, const ResponseNp& r);
LabeledState respond_superposition(const ProverState& st, const SuperpositionChallenge& q);
bool verifier_check(const NpParams& p, const CrsNp& crs, const Bits& x, const FirstMessageNp& alpha,
                    const ChallengeNp& beta, const ResponseNp& gamma);
// Name of the first failing check ("shape", "challenge", "openings", "output",
// "consistency", "format"), empty when all pass.
std::string verifier_failure(const NpParams& p, const CrsNp& crs, const Bits& x, const FirstMessageNp& alpha,
                             const ChallengeNp& beta, const ResponseNp& gamma);

struct SimulatedNp {
    CrsNp crs;
    FirstMessageNp alpha;
    ProverState zeta;
};
SimulatedNp simulate(const NpParams& p, const Bits& x, uint64_t seed);

struct SoundnessBound {
    double p_low = 0;
    double p_high = 0;
    bool degenerate = false;
};
SoundnessBound soundness_bound(int n, int t);

// Cheating prover for a false instance: emulates on a fake witness and rewrites
// the broadcast logs of the corrupted set so those views output 1.
std::pair<FirstMessageNp, ProverState> cheating_commit(const NpParams& p, const CrsNp& crs, const Bits& x,
                                                       const PartySet& corrupted, uint64_t seed);
// An instance with no witness (exhaustive search), if one exists.
std::optional<Bits> find_false_instance(const NpRelation& r);

// --- hybrids ---
enum class HybridId { H0, H1, H2, H3, H4, H5 };
HybridId parse_hybrid(const std::string& s);  // "H0".."H5", throws std::invalid_argument
std::string hybrid_name(HybridId id);

struct HybridRun {
    HybridId id = HybridId::H0;
    CrsNp crs;
    FirstMessageNp alpha;
    ProverState zeta;    // what the response unitary is hardcoded with
    LabeledState state;  // sum_beta a_beta |beta>|gamma_beta>
};
// One execution with all classical coins drawn from seed; the adversary is a superposition challenge.
HybridRun run_hybrid(HybridId id, const NpParams& p, const Bits& x, const Bits& w, const SuperpositionChallenge& query,
                     uint64_t seed);
// Openings in a run all verify and opened views are consistent (format check).
bool hybrid_well_formed(const NpParams& p, const Bits& x, const HybridRun& run);

struct HybridDistance {
    double distance = 0;
    bool exact = true;
    std::string method;
};
// Exact joint-density distance for the adjacent pairs (H2,H3), (H3,H4), (H4,H5).
HybridDistance hybrid_distance(HybridId a, HybridId b, const NpParams& p, const Bits& x, const Bits& w,
                               const std::vector<SuperpositionChallenge>& queries);
// Per-limb check: (Com(m; r), r) vs (Com(0; r'), equivocated opening to m), all m, all r.
double equivocation_limb_distance(const DualKey& hiding_key);
// View sources for the two sides of H3/H4.
ViewSource real_view_source(const NpParams& p, const CrsNp& crs, const Bits& x, const Bits& w);
ViewSource simulated_view_source(const NpParams& p, const CrsNp& crs, const Bits& x);

}  // namespace zkmitqh

#endif
