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


#ifndef ZKMITQH_C2H_HPP
#define ZKMITQH_C2H_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "zkmitqh/qmath.hpp"
#include "zkmitqh/rng.hpp"

namespace zkmitqh {

struct QGate {
    std::string name;
    CMat u;
    std::vector<int> targets;  // first target is the most significant qubit of u
};

// Classical side condition on computational-basis qubits. The circuit accepts
// when the output qubit is 1 or the basis value of `qubits` is in `accept`.
struct AltAccept {
    std::vector<int> qubits;
    std::vector<uint8_t> accept;  // truth table, index = bits of `qubits` MSB first
    bool empty() const;
};

struct QCircuit {
    int num_data_qubits = 0;
    std::vector<QGate> gates;
    int output = 0;
    std::vector<int> witness;  // qubits not forced to |0> at time 0
    AltAccept alt;

    int depth() const { return (int)gates.size(); }
    void validate() const;  // throws std::invalid_argument
    bool is_witness(int q) const;
    QGate& add(const std::string& name, std::vector<int> targets);  // named gate
    QGate& add(CMat u, std::vector<int> targets, std::string name = "U");
};

CMat named_gate(const std::string& name);  // I X Y Z H S T CNOT CX CZ SWAP
StateVector run_circuit(const QCircuit& c, const StateVector& input, int upto = -1);
// Projector onto accepting basis states of the data register (diagonal).
std::vector<double> accept_mask(const QCircuit& c);
double acceptance_probability(const QCircuit& c, const StateVector& input);
QCircuit pad_identities(const QCircuit& c, int count, bool at_front = false);

// Text form, one directive per line:
//   qubits N | witness q.. | output q | alt q.. : b..  | gate NAME q..
QCircuit parse_qcircuit(const std::string& text);
std::string format_qcircuit(const QCircuit& c);

struct LocalTerm {
    std::string kind;  // in clock prop out const
    std::vector<int> support;
    CMat op;  // on the support, first support qubit most significant
};

struct LocalHamiltonian {
    int num_qubits = 0;
    int num_data_qubits = 0;
    std::vector<int> clock;  // c_0 .. c_T; empty if not compiled from a circuit
    std::vector<LocalTerm> terms;

    int locality() const;
    CMat dense() const;  // small sizes only
};

constexpr int kDefaultQubitCap = 14;

// Unary clock: time t is c_0..c_t = 1, rest 0. Data qubits come first.
LocalHamiltonian compile(const QCircuit& c, int qubit_cap = kDefaultQubitCap);
uint64_t clock_index(int T, int t);  // clock bits of time t, c_0 most significant
StateVector history_state(const QCircuit& c, const StateVector& input);
LocalHamiltonian add_constant(LocalHamiltonian h, double c);

double energy(const LocalHamiltonian& h, const StateVector& s);
CVec apply(const LocalHamiltonian& h, const CVec& v);

struct PauliTerm {
    double d = 0;
    PauliString s;
};
// Merged over all terms; entries below 1e-14 dropped, sorted by string.
std::vector<PauliTerm> pauli_decompose(const LocalHamiltonian& h);
std::vector<PauliTerm> pauli_decompose_local(const CMat& op, const std::vector<int>& support, int num_qubits);
CMat pauli_sum(const std::vector<PauliTerm>& terms);

enum class IdentityMode { Offset, AsTerm };

struct RescaledTerm {
    double p = 0;
    int sign = 1;
    PauliString s;
};

struct RescaledHamiltonian {
    std::vector<RescaledTerm> terms;
    double offset = 0;  // identity coefficient not sampled (Offset mode)
    double norm1 = 0;   // sum of |d_S| over sampled terms
    IdentityMode mode = IdentityMode::Offset;
};

RescaledHamiltonian rescale(const std::vector<PauliTerm>& decomposed, IdentityMode mode = IdentityMode::Offset);

struct SampledTerm {
    PauliString s;
    int sign = 1;
    size_t index = 0;
};
SampledTerm sample_term(const RescaledHamiltonian& hp, Rng& rng);
// Measures {(I±S)/2}; accepts iff the outcome equals -sign.
bool check_term(StateVector& state, const PauliString& s, int sign, Rng& rng);
double accept_given_term(const StateVector& state, const PauliString& s, int sign);

// Exact averages over terms and outcomes.
double acceptance(const RescaledHamiltonian& hp, const StateVector& s);
double acceptance(const RescaledHamiltonian& hp, const DensityMatrix& rho);
double h_prime_expectation(const RescaledHamiltonian& hp, const StateVector& s);
double h_prime_expectation(const RescaledHamiltonian& hp, const DensityMatrix& rho);

struct GroundState {
    double energy = 0;
    StateVector state;
    bool clock_reduced = false;
};
GroundState ground_energy(const LocalHamiltonian& h, int qubit_cap = kDefaultQubitCap);

struct ToyCircuit {
    std::string name;
    QCircuit circuit;
    StateVector input;  // best witness with ancillas at |0>
    double accept = 0;  // acceptance probability on `input`
};
std::vector<ToyCircuit> toy_accepting_circuits();
std::vector<ToyCircuit> toy_rejecting_circuits();

// `coeff pauli-string support-indices`, one term per line.
std::string format_pauli_terms(const std::vector<PauliTerm>& terms);
std::vector<PauliTerm> parse_pauli_terms(const std::string& text, int num_qubits);

}  // namespace zkmitqh

#endif
