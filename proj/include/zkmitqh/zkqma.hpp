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


#ifndef ZKMITQH_ZKQMA_HPP
#define ZKMITQH_ZKQMA_HPP

#include <string>
#include <utility>
#include <vector>

#include "zkmitqh/c2h.hpp"
#include "zkmitqh/commit.hpp"
#include "zkmitqh/mpqc.hpp"
#include "zkmitqh/zknp.hpp"

namespace zkmitqh {

struct QmaParams {
    int n = 3;
    int lambda = 1;  // bits of the CRS commitment randomness
    GroupParams group = GroupParams::micro();

    static QmaParams desk();   // three parties
    static QmaParams micro();  // two parties, used by the hybrid experiments
    void validate() const;
};

// Same shape as the NP reference string: (dual key, plain key, c).
using CrsQma = CrsNp;
CrsQma setup_qma(const QmaParams& p, uint64_t seed);
CrsQma setup_qma_with(const QmaParams& p, DualMode mode, uint64_t c_message, uint64_t seed);
// Truth table of [Com(ck, 1; r) = c] over r < 2^lambda.
std::vector<uint8_t> r_accept_table(const QmaParams& p, const CrsQma& crs);
std::optional<uint64_t> qma_opening_to_one(const QmaParams& p, const CrsQma& crs);

struct QmaInstance {
    std::string name;
    QCircuit verifier;  // qubits 0..m-1 hold the witness
    int m = 1;
};
QmaInstance desk_yes_instance();  // accepts the witness |1>
QmaInstance desk_no_instance();   // output is an untouched ancilla: accepts nothing

struct QmaCompiled {
    int n = 0;
    MpqcSpec spec;
    RelationLayout layout;
    GlobalCircuit global;
    LocalHamiltonian h;
    RescaledHamiltonian hp;  // identity sampled as a term
    PartyAssignment owners;  // data qubits then clock, clock owned by n+1

    int num_qubits() const { return h.num_qubits; }
    // Qubits whose keys a party set reveals, the clock always included.
    std::vector<int> revealed_qubits(const PartySet& beta) const;
};
QmaCompiled compile_qma(const QmaParams& p, const CrsQma& crs, const QmaInstance& inst,
                        int qubit_cap = kDefaultQubitCap);

// Share / Reconstruct view of the first three prover steps.
struct QuantumShares {
    StateVector public_state;  // padded history state
    OtpKey hist_key;           // one (a', b') pair per qubit
    std::vector<OtpKey> party_keys;  // index i-1 for party i = 1..n+1, in qubit order
    std::vector<uint64_t> a, b, r;   // classical shares fed to the relation circuit
    OtpKey witness_key;              // (a, b) padding the witness
    StateVector input;               // relation-circuit input
    StateVector history;             // unpadded
};
QuantumShares share_quantum(const QmaCompiled& cc, const StateVector& witness, Rng& rng);
// Witness-free variant: the witness register is a pad of |0>, the r shares xor to rstar.
QuantumShares share_trapdoor(const QmaCompiled& cc, uint64_t rstar, Rng& rng);
// What a key subset learns: public padded state plus the keys of `parties`
// (n+1 is the clock), averaged over the sharing coins. Returned on the
// revealed qubits; everything else is maximally mixed by the pads.
CMat share_view(const QmaCompiled& cc, const StateVector& witness, const PartySet& parties);
StateVector reconstruct_quantum(const QmaCompiled& cc, const StateVector& public_state, const OtpKey& hist_key);

struct FirstMessageQma {
    StateVector psi_hist;
    // n+1 blocks (clock last); two commitments (a', b') per owned qubit
    std::vector<std::vector<Commitment>> alpha;
};

struct QmaPartyOpening {
    int party = 0;
    std::vector<uint8_t> a, b;       // keys of the party's qubits, qubit order
    std::vector<Opening> openings;   // a'_0, b'_0, a'_1, b'_1, ...
};

struct QmaProverState {
    OtpKey key;
    std::vector<QmaPartyOpening> zeta;  // index i-1
};

struct ChallengeQma {
    PauliString s;
    int sign = 1;
    size_t index = 0;
    PartySet beta;
};

struct ResponseQma {
    std::vector<QmaPartyOpening> gamma;
};

// Commits to an arbitrary state on the compiled register (padded, keys committed).
std::pair<FirstMessageQma, QmaProverState> commit_state(const CrsQma& crs, const QmaCompiled& cc,
                                                        const StateVector& state, Rng& rng);
// Throws "witness rejected" unless the verification circuit accepts the witness.
std::pair<FirstMessageQma, QmaProverState> prover_commit(const CrsQma& crs, const QmaCompiled& cc,
                                                         const QmaInstance& inst, const StateVector& witness,
                                                         uint64_t seed);
PartySet challenge_parties(const QmaCompiled& cc, const PauliString& s);
ChallengeQma verifier_challenge(const QmaCompiled& cc, Rng& rng);
ResponseQma prover_respond(const QmaProverState& st, const ChallengeQma& ch);
std::string response_label(const ChallengeQma& ch, const ResponseQma& r);
// Sum over challenges a_beta |beta>|gamma_beta>; labels are response_label strings.
LabeledState respond_superposition(const QmaProverState& st, const std::vector<std::pair<ChallengeQma, cplx>>& query);

bool openings_verify(const CrsQma& crs, const QmaCompiled& cc, const FirstMessageQma& alpha,
                     const ChallengeQma& ch, const ResponseQma& r);
// Measures the challenged term on the un-padded state; returns 0 on malformed input.
bool verifier_check(const CrsQma& crs, const QmaCompiled& cc, const FirstMessageQma& alpha,
                    const ChallengeQma& ch, const ResponseQma& r, Rng& rng);
// Exact acceptance with honest openings, over every term and outcome.
// First failing classical check ("shape", "challenge", "openings", "format") or empty.
std::string qma_verifier_failure(const CrsQma& crs, const QmaCompiled& cc, const FirstMessageQma& alpha,
                                 const ChallengeQma& ch, const ResponseQma& r);
// Probability that the term measurement accepts given this challenge; 0 if a check fails.
double conditional_acceptance(const CrsQma& crs, const QmaCompiled& cc, const FirstMessageQma& alpha,
                              const ChallengeQma& ch, const ResponseQma& r);
double exact_acceptance(const QmaCompiled& cc, const FirstMessageQma& alpha, const QmaProverState& st);

// Per-repetition gap from the exact spectrum: lambda_min / (2 sum |d_S|).
struct QmaGap {
    double lambda_min = 0;
    double norm1 = 0;
    double delta = 0;
    StateVector ground;
};
QmaGap qma_gap(const QmaCompiled& cc);

struct QmaRun {
    int reps = 0;
    int accepted = 0;
    double threshold = 0;
    bool verdict = false;
    bool degenerate = false;  // threshold <= 0 accepts anything
    double fraction() const { return reps ? (double)accepted / reps : 0; }
};
// Honest prover, a fresh witness copy per repetition.
QmaRun run_protocol(const CrsQma& crs, const QmaCompiled& cc, const QmaInstance& inst, const StateVector& witness,
                    int reps, double threshold, uint64_t seed);
// Prover bound to one fixed state on the compiled register.
QmaRun run_protocol_fixed(const CrsQma& crs, const QmaCompiled& cc, const StateVector& state, int reps,
                          double threshold, uint64_t seed);

struct SimulatedQma {
    CrsQma crs;
    QmaCompiled compiled;
    FirstMessageQma alpha;
    QmaProverState state;
};
SimulatedQma simulate(const QmaParams& p, const QmaInstance& inst, uint64_t seed);

// Teleports the challenged qubits of phi_hist into committed EPR halves and
// equivocates commitments to 0 into the teleportation keys.
struct EquivocatedRun {
    FirstMessageQma alpha;      // psi_hist holds the teleported halves on challenged qubits
    ResponseQma response;
    OtpKey teleport_keys;       // per revealed qubit
    std::vector<int> revealed;
};
EquivocatedRun equivocate_teleport(const CrsQma& crs, const QmaCompiled& cc, const StateVector& phi_hist,
                                   const ChallengeQma& ch, Rng& rng);

// --- hybrids, micro instance, classical challenge sets ---
enum class QmaHybridId { H0, H1, H2, H3, H4, H5, H6, H7 };
QmaHybridId parse_qma_hybrid(const std::string& s);
std::string qma_hybrid_name(QmaHybridId id);

// Adversary output for one challenge set, keyed by the revealed pad labels k:
// sigma_k = P_k core P_k^dag / 4^|Q| on the revealed qubits, unrevealed ones
// maximally mixed. covariance_error measures how far the computed path is from
// that form (teleportation branches are checked one by one).
struct QmaHybridView {
    QmaHybridId id = QmaHybridId::H0;
    PartySet beta;
    std::vector<int> revealed;
    CMat core;
    double covariance_error = 0;
    std::string path;  // "otp" or "teleport"
};
QmaHybridView qma_hybrid_view(QmaHybridId id, const QmaParams& p, const QmaInstance& inst, const StateVector& witness,
                              const PartySet& beta, uint64_t seed);
// Explicit label-by-label block list (small revealed sets only), for cross-checks.
std::vector<CMat> qma_hybrid_blocks(const QmaHybridView& v);

struct QmaHybridDistance {
    double distance = 0;
    std::string method;
    std::vector<std::pair<PartySet, double>> per_query;
};
// Exact distance between the adversary outputs. Computational steps throw.
QmaHybridDistance qma_hybrid_distance(QmaHybridId a, QmaHybridId b, const QmaParams& p, const QmaInstance& inst,
                                      const StateVector& witness, const std::vector<PartySet>& queries,
                                      uint64_t seed);
// Distinct challenge sets with their probabilities under the term distribution.
std::vector<std::pair<PartySet, double>> challenge_sets(const QmaCompiled& cc);

}  // namespace zkmitqh

#endif
