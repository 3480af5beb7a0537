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

#ifndef ZKMITQH_SHARING_HPP
#define ZKMITQH_SHARING_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "zkmitqh/qmath.hpp"
#include "zkmitqh/rng.hpp"

namespace zkmitqh {

using Bits = std::vector<uint8_t>;  // one 0/1 entry per bit
using PartySet = std::vector<int>;  // sorted, 1-based

std::string bits_to_string(const Bits& b);

// A randomized map from uniform random bits to per-party views of fixed length.
struct ViewSource {
    int n = 0;
    int rand_bits = 0;
    std::function<std::vector<Bits>(const Bits& r)> views;
};

struct SharingScheme {
    std::string name;
    int n = 0;
    int secret_bits = 0;
    int rand_bits = 0;  // randomness space is {0,1}^rand_bits, uniform
    std::function<std::vector<Bits>(uint64_t secret, const Bits& r)> share_views;

    std::vector<Bits> views(uint64_t s, const Bits& r) const { return share_views(s, r); }
    Bits view_of(uint64_t s, const Bits& r, const PartySet& a) const;  // concatenation in party order
    ViewSource source(uint64_t s) const;
};

std::vector<Bits> share_xor(const Bits& secret, int n, Rng& rng);
Bits reconstruct_xor(const std::vector<Bits>& shares);
// n-out-of-n XOR sharing of a secret_bits-bit secret as a scheme.
SharingScheme xor_scheme(int n, int secret_bits);
// Shamir sharing of one GF(2^k) element with threshold t, party i gets f(i).
SharingScheme shamir_scheme(int n, int t, int k);

struct AdversaryStructure {
    std::vector<PartySet> family;

    static AdversaryStructure subsets_up_to(int n, int size);
    static AdversaryStructure singletons(int n, bool with_empty = true);
    bool contains(const PartySet& a) const;
    AdversaryStructure closure() const;  // downward closure
    // F^2 = { A u B : A, B in F }
    AdversaryStructure squared() const;
};

struct QueryTerm {
    uint32_t env = 0;
    PartySet set;
    Bits mask;
    cplx amp;
};

struct QueryState {
    std::vector<QueryTerm> terms;
    double norm2() const;
    void normalize();
};

// Basis queries (one per set, zero mask) and seeded random superpositions.
std::vector<QueryState> basis_queries(const SharingScheme& s, const AdversaryStructure& f);
std::vector<QueryState> random_queries(const SharingScheme& s, const AdversaryStructure& f, int count, uint64_t seed,
                                       int max_terms = 4);

// Sparse labeled density: basis labels are canonical strings "x|A|bits".
struct LabeledDensity {
    std::vector<std::string> labels;
    Eigen::SparseMatrix<cplx> m;
    double trace() const;
    CMat dense() const { return CMat(m); }
};

LabeledDensity adversary_state(const SharingScheme& scheme, const QueryState& query, uint64_t secret,
                               uint64_t cap = uint64_t{1} << 16);
// Exact trace distance; block-decomposes over label components.
double trace_distance(const LabeledDensity& a, const LabeledDensity& b);

// GF(2)-affine description of a view source: v(r) = offset + sum_j r_j cols[j].
struct AffineModel {
    int n = 0;
    std::vector<size_t> view_len;  // bits per party
    std::vector<Bits> offset;      // per party
    std::vector<std::vector<Bits>> cols;  // cols[j][party]
};
// Probes at 0 and unit vectors and checks affinity on `checks` random points.
std::optional<AffineModel> probe_affine(const ViewSource& src, int checks, uint64_t seed);

struct MarginalComparison {
    bool equal = false;
    double tv = 0;  // total variation between the two marginals (exact)
};
// Compares the distributions of v_U under two affine sources, U a party set.
MarginalComparison compare_marginals(const AffineModel& a, const AffineModel& b, const PartySet& u);

struct AffineDistance {
    double distance = 0;
    bool exact = true;
};
// Trace distance between adversary states of two affine sources for a query.
// Exact when every queried pair has equal marginals (distance 0) or when the
// query is a single term (distance = tv). Otherwise flagged inexact.
AffineDistance affine_query_distance(const AffineModel& a, const AffineModel& b, const QueryState& q);

struct SecurityReport {
    double max_distance = 0;
    std::string witness;  // description of the query achieving the max
    uint64_t secret_a = 0, secret_b = 0;
    bool exact = true;
    std::string engine;
    int queries = 0;
};

struct SecurityOptions {
    uint64_t cap = uint64_t{1} << 16;
    int random_queries = 32;
    uint64_t seed = 1;
    bool force_affine = false;
};

SecurityReport check_superposition_security(const SharingScheme& scheme, const AdversaryStructure& f,
                                            const std::vector<uint64_t>& secrets, const SecurityOptions& opt = {});

// Quantum side: a pure state whose qubits are partitioned among parties;
// qubits not listed for any party form an environment nobody captures.
struct QuantumSharing {
    int n = 0;
    int secret_qubits = 1;
    std::vector<std::vector<int>> registers;  // registers[i-1] = qubits of party i
    std::function<StateVector(const StateVector& secret)> share;
};

struct CaptureQuery {
    std::vector<std::pair<PartySet, cplx>> terms;
};

// Reduced density on (corruption-set register, capture slots) after the capture
// isometry |v>|A>|bot..> -> |v_{A-bar}>|A>|v_A>. Block ordering follows query order.
CMat capture_attack_state(const QuantumSharing& scheme, const StateVector& shared, const CaptureQuery& q);
// Norm of the isometry output before tracing (1 for normalized input).
double capture_output_norm(const QuantumSharing& scheme, const StateVector& shared, const CaptureQuery& q);
SecurityReport check_capture_security(const QuantumSharing& scheme, const AdversaryStructure& f, int random_queries = 8,
                                      uint64_t seed = 1);
std::vector<StateVector> spanning_qubit_states();  // |0>, |1>, |+>, |+i>

}  // namespace zkmitqh

#endif
