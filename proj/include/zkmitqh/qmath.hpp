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

#ifndef ZKMITQH_QMATH_HPP
#define ZKMITQH_QMATH_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "zkmitqh/rng.hpp"

namespace zkmitqh {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

// Qubit 0 is the most significant bit of the amplitude index.
inline uint64_t qubit_mask(int num_qubits, int q) { return uint64_t{1} << (num_qubits - 1 - q); }

struct StateVector {
    int num_qubits = 0;
    CVec amp;

    StateVector() = default;
    StateVector(int n, CVec a);
    static StateVector basis(int n, uint64_t index);
    static StateVector zeros(int n) { return basis(n, 0); }
    double norm2() const { return amp.squaredNorm(); }
    StateVector tensor(const StateVector& other) const;  // this ⊗ other
};

struct DensityMatrix {
    int num_qubits = 0;
    CMat m;

    DensityMatrix() = default;
    DensityMatrix(int n, CMat mat);
    static DensityMatrix from_pure(const StateVector& s);
    static DensityMatrix maximally_mixed(int n);
    cplx trace() const { return m.trace(); }
    DensityMatrix tensor(const DensityMatrix& other) const;
};

struct PauliString {
    std::string letters;  // one of I X Y Z per qubit

    PauliString() = default;
    explicit PauliString(std::string s);
    static PauliString identity(int n) { return PauliString(std::string(n, 'I')); }
    int size() const { return (int)letters.size(); }
    std::vector<int> support() const;
    bool is_identity() const;
    bool operator==(const PauliString& o) const { return letters == o.letters; }
    bool operator<(const PauliString& o) const { return letters < o.letters; }
};

struct OtpKey {
    std::vector<uint8_t> a;
    std::vector<uint8_t> b;
    size_t size() const { return a.size(); }
    static OtpKey random(size_t m, Rng& rng);
};

namespace gates {
CMat I2();
CMat X();
CMat Y();
CMat Z();
CMat H();
CMat S();
CMat CNOT();  // control is the first target
CMat CZ();
CMat SWAP();
}  // namespace gates

bool is_unitary(const CMat& u, double tol = 1e-10);
CMat kron(const CMat& a, const CMat& b);

// In-place kernels: the amplitude vector is modified directly.
void apply_unitary_inplace(CVec& amp, int num_qubits, const CMat& u, const std::vector<int>& targets);
StateVector apply_unitary(const StateVector& state, const CMat& u, const std::vector<int>& targets);
DensityMatrix apply_unitary(const DensityMatrix& rho, const CMat& u, const std::vector<int>& targets);

// X^a Z^b on each target: Z^b first, then X^a.
StateVector otp_encrypt(const StateVector& state, const OtpKey& key, const std::vector<int>& targets);
// Z^b X^a on each target, which undoes otp_encrypt up to nothing (exact inverse).
StateVector otp_decrypt(const StateVector& state, const OtpKey& key, const std::vector<int>& targets);
void otp_apply_inplace(CVec& amp, int num_qubits, const OtpKey& key, const std::vector<int>& targets,
                       bool decrypt);

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);
// Reduced density of a pure state, without forming the full outer product.
DensityMatrix reduced_density(const StateVector& state, const std::vector<int>& keep);

// S|psi> computed by bit manipulation.
CVec apply_pauli(const CVec& amp, int num_qubits, const PauliString& s);
CMat pauli_matrix(const PauliString& s);
double expectation(const StateVector& state, const PauliString& s);
double expectation(const DensityMatrix& rho, const PauliString& s);

struct TermMeasurement {
    double p_plus = 0;
    double p_minus = 0;
    StateVector post_plus;   // empty when p_plus == 0
    StateVector post_minus;  // empty when p_minus == 0
};
TermMeasurement measure_term(const StateVector& state, const PauliString& s);
// Samples an outcome in {+1, -1} and collapses.
int measure_term_sample(StateVector& state, const PauliString& s, Rng& rng);

StateVector make_epr();  // (|00> + |11>)/sqrt2

struct TeleportBranch {
    uint8_t a = 0;  // X exponent of the key
    uint8_t b = 0;  // Z exponent of the key
    double prob = 0;
    StateVector residual;  // psi and A collapsed to their outcomes, B holds X^a Z^b psi
};
// Teleports qubit psi into B through the EPR pair (A, B). All four branches.
std::vector<TeleportBranch> teleport_branches(const StateVector& source, int psi, int reg_a, int reg_b);
struct TeleportResult {
    OtpKey keys;  // one-qubit key (a, b)
    StateVector residual;
};
TeleportResult teleport(const StateVector& source, int psi, int reg_a, int reg_b, Rng& rng);

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);
double trace_distance(const CMat& rho, const CMat& sigma);
double fidelity(const StateVector& a, const StateVector& b);  // |<a|b>|^2
double fidelity(const StateVector& pure, const DensityMatrix& rho);

}  // namespace zkmitqh

#endif
