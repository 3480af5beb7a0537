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

#include "zkmitqh/qmath.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <set>
#include <stdexcept>

namespace zkmitqh {

StateVector::StateVector(int n, CVec a) : num_qubits(n), amp(std::move(a)) {
    if (n < 0 || amp.size() != (Eigen::Index)(uint64_t{1} << n))
        throw std::invalid_argument("state vector length is not 2^num_qubits");
}

StateVector StateVector::basis(int n, uint64_t index) {
    CVec a = CVec::Zero((Eigen::Index)(uint64_t{1} << n));
    if (index >= (uint64_t)a.size()) throw std::invalid_argument("basis index out of range");
    a[(Eigen::Index)index] = 1.0;
    return StateVector(n, std::move(a));
}

StateVector StateVector::tensor(const StateVector& other) const {
    CVec out((Eigen::Index)(amp.size() * other.amp.size()));
    for (Eigen::Index i = 0; i < amp.size(); i++)
        out.segment(i * other.amp.size(), other.amp.size()) = amp[i] * other.amp;
    return StateVector(num_qubits + other.num_qubits, std::move(out));
}

DensityMatrix::DensityMatrix(int n, CMat mat) : num_qubits(n), m(std::move(mat)) {
    Eigen::Index d = (Eigen::Index)(uint64_t{1} << n);
    if (m.rows() != d || m.cols() != d) throw std::invalid_argument("density matrix has wrong shape");
}

DensityMatrix DensityMatrix::from_pure(const StateVector& s) {
    return DensityMatrix(s.num_qubits, s.amp * s.amp.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int n) {
    Eigen::Index d = (Eigen::Index)(uint64_t{1} << n);
    return DensityMatrix(n, CMat::Identity(d, d) / (double)d);
}

DensityMatrix DensityMatrix::tensor(const DensityMatrix& other) const {
    return DensityMatrix(num_qubits + other.num_qubits, kron(m, other.m));
}

PauliString::PauliString(std::string s) : letters(std::move(s)) {
    for (char c : letters)
        if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') throw std::invalid_argument("bad Pauli letter");
}

std::vector<int> PauliString::support() const {
    std::vector<int> out;
    for (int i = 0; i < (int)letters.size(); i++)
        if (letters[i] != 'I') out.push_back(i);
    return out;
}

bool PauliString::is_identity() const {
    for (char c : letters)
        if (c != 'I') return false;
    return true;
}

OtpKey OtpKey::random(size_t m, Rng& rng) {
    OtpKey k;
    k.a.resize(m);
    k.b.resize(m);
    for (size_t i = 0; i < m; i++) {
        k.a[i] = rng.bit();
        k.b[i] = rng.bit();
    }
    return k;
}

namespace gates {
CMat I2() { return CMat::Identity(2, 2); }
CMat X() {
    CMat m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}
CMat Y() {
    CMat m(2, 2);
    m << 0, cplx(0, -1), cplx(0, 1), 0;
    return m;
}
CMat Z() {
    CMat m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}
CMat H() {
    CMat m(2, 2);
    double s = 1.0 / std::sqrt(2.0);
    m << s, s, s, -s;
    return m;
}
CMat S() {
    CMat m(2, 2);
    m << 1, 0, 0, cplx(0, 1);
    return m;
}
CMat CNOT() {
    CMat m = CMat::Zero(4, 4);
    m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
    return m;
}
CMat CZ() {
    CMat m = CMat::Identity(4, 4);
    m(3, 3) = -1;
    return m;
}
CMat SWAP() {
    CMat m = CMat::Zero(4, 4);
    m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1;
    return m;
}
}  // namespace gates

bool is_unitary(const CMat& u, double tol) {
    if (u.rows() != u.cols()) return false;
    return ((u.adjoint() * u) - CMat::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

CMat kron(const CMat& a, const CMat& b) {
    CMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); i++)
        for (Eigen::Index j = 0; j < a.cols(); j++)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

static void check_targets(int num_qubits, const std::vector<int>& targets) {
    std::set<int> seen;
    for (int t : targets) {
        if (t < 0 || t >= num_qubits) throw std::invalid_argument("target qubit out of range");
        if (!seen.insert(t).second) throw std::invalid_argument("duplicate target qubit");
    }
}

void apply_unitary_inplace(CVec& amp, int num_qubits, const CMat& u, const std::vector<int>& targets) {
    int k = (int)targets.size();
    uint64_t local = uint64_t{1} << k;
    if ((uint64_t)u.rows() != local || (uint64_t)u.cols() != local)
        throw std::invalid_argument("unitary size does not match target count");
    std::vector<uint64_t> offs(local, 0);
    uint64_t tmask = 0;
    for (uint64_t l = 0; l < local; l++)
        for (int j = 0; j < k; j++)
            if (l & (uint64_t{1} << (k - 1 - j))) offs[l] |= qubit_mask(num_qubits, targets[j]);
    for (int t : targets) tmask |= qubit_mask(num_qubits, t);
    uint64_t dim = uint64_t{1} << num_qubits;
    std::vector<cplx> buf(local), out(local);
    for (uint64_t base = 0; base < dim; base++) {
        if (base & tmask) continue;
        for (uint64_t l = 0; l < local; l++) buf[l] = amp[(Eigen::Index)(base | offs[l])];
        for (uint64_t r = 0; r < local; r++) {
            cplx acc = 0;
            for (uint64_t c = 0; c < local; c++) acc += u((Eigen::Index)r, (Eigen::Index)c) * buf[c];
            out[r] = acc;
        }
        for (uint64_t l = 0; l < local; l++) amp[(Eigen::Index)(base | offs[l])] = out[l];
    }
}

StateVector apply_unitary(const StateVector& state, const CMat& u, const std::vector<int>& targets) {
    check_targets(state.num_qubits, targets);
    if (!is_unitary(u)) throw std::invalid_argument("matrix is not unitary");
    StateVector out = state;
    apply_unitary_inplace(out.amp, out.num_qubits, u, targets);
    return out;
}

DensityMatrix apply_unitary(const DensityMatrix& rho, const CMat& u, const std::vector<int>& targets) {
    check_targets(rho.num_qubits, targets);
    if (!is_unitary(u)) throw std::invalid_argument("matrix is not unitary");
    CMat m = rho.m;
    for (Eigen::Index c = 0; c < m.cols(); c++) {
        CVec col = m.col(c);
        apply_unitary_inplace(col, rho.num_qubits, u, targets);
        m.col(c) = col;
    }
    CMat mt = m.adjoint();
    for (Eigen::Index c = 0; c < mt.cols(); c++) {
        CVec col = mt.col(c);
        apply_unitary_inplace(col, rho.num_qubits, u, targets);
        mt.col(c) = col;
    }
    return DensityMatrix(rho.num_qubits, mt.adjoint());
}

void otp_apply_inplace(CVec& amp, int num_qubits, const OtpKey& key, const std::vector<int>& targets,
                       bool decrypt) {
    if (key.a.size() != targets.size() || key.b.size() != targets.size())
        throw std::invalid_argument("OTP key length does not match target count");
    uint64_t xmask = 0, zmask = 0;
    for (size_t i = 0; i < targets.size(); i++) {
        if (key.a[i]) xmask |= qubit_mask(num_qubits, targets[i]);
        if (key.b[i]) zmask |= qubit_mask(num_qubits, targets[i]);
    }
    uint64_t dim = uint64_t{1} << num_qubits;
    CVec out(amp.size());
    // encrypt: X^a Z^b |j> = (-1)^{b.j} |j ^ a>; decrypt: Z^b X^a |j> = (-1)^{b.(j^a)} |j ^ a>
    for (uint64_t j = 0; j < dim; j++) {
        uint64_t phase_bits = decrypt ? ((j ^ xmask) & zmask) : (j & zmask);
        double sgn = (__builtin_popcountll(phase_bits) & 1) ? -1.0 : 1.0;
        out[(Eigen::Index)(j ^ xmask)] = sgn * amp[(Eigen::Index)j];
    }
    amp = std::move(out);
}

StateVector otp_encrypt(const StateVector& state, const OtpKey& key, const std::vector<int>& targets) {
    check_targets(state.num_qubits, targets);
    StateVector out = state;
    otp_apply_inplace(out.amp, out.num_qubits, key, targets, false);
    return out;
}

StateVector otp_decrypt(const StateVector& state, const OtpKey& key, const std::vector<int>& targets) {
    check_targets(state.num_qubits, targets);
    StateVector out = state;
    otp_apply_inplace(out.amp, out.num_qubits, key, targets, true);
    return out;
}

namespace {
struct Split {
    std::vector<uint64_t> kpat, rpat;
};
Split split_patterns(int n, const std::vector<int>& keep) {
    check_targets(n, keep);
    std::vector<int> rest;
    std::set<int> ks(keep.begin(), keep.end());
    for (int q = 0; q < n; q++)
        if (!ks.count(q)) rest.push_back(q);
    auto pats = [&](const std::vector<int>& qs) {
        int k = (int)qs.size();
        std::vector<uint64_t> p(uint64_t{1} << k, 0);
        for (uint64_t l = 0; l < p.size(); l++)
            for (int j = 0; j < k; j++)
                if (l & (uint64_t{1} << (k - 1 - j))) p[l] |= qubit_mask(n, qs[j]);
        return p;
    };
    return {pats(keep), pats(rest)};
}
}  // namespace

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
    Split sp = split_patterns(rho.num_qubits, keep);
    Eigen::Index dk = (Eigen::Index)sp.kpat.size();
    CMat out = CMat::Zero(dk, dk);
    for (Eigen::Index i = 0; i < dk; i++)
        for (Eigen::Index j = 0; j < dk; j++) {
            cplx acc = 0;
            for (uint64_t r : sp.rpat) acc += rho.m((Eigen::Index)(sp.kpat[i] | r), (Eigen::Index)(sp.kpat[j] | r));
            out(i, j) = acc;
        }
    return DensityMatrix((int)keep.size(), std::move(out));
}

DensityMatrix reduced_density(const StateVector& state, const std::vector<int>& keep) {
    Split sp = split_patterns(state.num_qubits, keep);
    CMat m(sp.kpat.size(), sp.rpat.size());
    for (size_t i = 0; i < sp.kpat.size(); i++)
        for (size_t r = 0; r < sp.rpat.size(); r++)
            m((Eigen::Index)i, (Eigen::Index)r) = state.amp[(Eigen::Index)(sp.kpat[i] | sp.rpat[r])];
    return DensityMatrix((int)keep.size(), m * m.adjoint());
}

CVec apply_pauli(const CVec& amp, int num_qubits, const PauliString& s) {
    if (s.size() != num_qubits) throw std::invalid_argument("Pauli string length mismatch");
    uint64_t xm = 0, zm = 0;
    int ny = 0;
    for (int q = 0; q < num_qubits; q++) {
        char c = s.letters[q];
        uint64_t m = qubit_mask(num_qubits, q);
        if (c == 'X' || c == 'Y') xm |= m;
        if (c == 'Z' || c == 'Y') zm |= m;
        if (c == 'Y') ny++;
    }
    // Y = i X Z, so the string equals i^{ny} X^{xm} Z^{zm}.
    static const cplx ipow[4] = {1.0, cplx(0, 1), -1.0, cplx(0, -1)};
    cplx glob = ipow[ny & 3];
    CVec out(amp.size());
    uint64_t dim = uint64_t{1} << num_qubits;
    for (uint64_t j = 0; j < dim; j++) {
        double sgn = (__builtin_popcountll(j & zm) & 1) ? -1.0 : 1.0;
        out[(Eigen::Index)(j ^ xm)] = glob * sgn * amp[(Eigen::Index)j];
    }
    return out;
}

CMat pauli_matrix(const PauliString& s) {
    CMat m = CMat::Ones(1, 1);
    for (char c : s.letters) {
        CMat p = c == 'I' ? gates::I2() : c == 'X' ? gates::X() : c == 'Y' ? gates::Y() : gates::Z();
        m = kron(m, p);
    }
    return m;
}

double expectation(const StateVector& state, const PauliString& s) {
    return state.amp.dot(apply_pauli(state.amp, state.num_qubits, s)).real();
}

double expectation(const DensityMatrix& rho, const PauliString& s) {
    // Tr[S rho] = sum over columns of <e_c| S rho |e_c>
    double acc = 0;
    for (Eigen::Index c = 0; c < rho.m.cols(); c++) {
        CVec col = rho.m.col(c);
        acc += apply_pauli(col, rho.num_qubits, s)[c].real();
    }
    return acc;
}

TermMeasurement measure_term(const StateVector& state, const PauliString& s) {
    CVec sp = apply_pauli(state.amp, state.num_qubits, s);
    CVec plus = 0.5 * (state.amp + sp);
    CVec minus = 0.5 * (state.amp - sp);
    TermMeasurement tm;
    tm.p_plus = plus.squaredNorm();
    tm.p_minus = minus.squaredNorm();
    if (tm.p_plus > 0) tm.post_plus = StateVector(state.num_qubits, plus / std::sqrt(tm.p_plus));
    if (tm.p_minus > 0) tm.post_minus = StateVector(state.num_qubits, minus / std::sqrt(tm.p_minus));
    return tm;
}

int measure_term_sample(StateVector& state, const PauliString& s, Rng& rng) {
    TermMeasurement tm = measure_term(state, s);
    double tot = tm.p_plus + tm.p_minus;
    if (rng.uniform() * tot < tm.p_plus) {
        state = tm.post_plus;
        return +1;
    }
    state = tm.post_minus;
    return -1;
}

StateVector make_epr() {
    CVec a = CVec::Zero(4);
    a[0] = a[3] = 1.0 / std::sqrt(2.0);
    return StateVector(2, a);
}

std::vector<TeleportBranch> teleport_branches(const StateVector& source, int psi, int reg_a, int reg_b) {
    check_targets(source.num_qubits, {psi, reg_a, reg_b});
    // (A, B) must be a maximally entangled pair in the |Phi+> form.
    DensityMatrix ab = reduced_density(source, {reg_a, reg_b});
    StateVector epr = make_epr();
    if (std::abs(fidelity(epr, ab) - 1.0) > 1e-9) throw std::invalid_argument("registers A,B do not hold an EPR pair");
    StateVector s = source;
    apply_unitary_inplace(s.amp, s.num_qubits, gates::CNOT(), {psi, reg_a});
    apply_unitary_inplace(s.amp, s.num_qubits, gates::H(), {psi});
    uint64_t mp = qubit_mask(s.num_qubits, psi), ma = qubit_mask(s.num_qubits, reg_a);
    std::vector<TeleportBranch> out;
    for (int m1 = 0; m1 < 2; m1++)
        for (int m2 = 0; m2 < 2; m2++) {
            CVec proj = CVec::Zero(s.amp.size());
            for (Eigen::Index j = 0; j < s.amp.size(); j++) {
                bool bp = (uint64_t)j & mp, ba = (uint64_t)j & ma;
                if ((int)bp == m1 && (int)ba == m2) proj[j] = s.amp[j];
            }
            TeleportBranch br;
            br.b = (uint8_t)m1;
            br.a = (uint8_t)m2;
            br.prob = proj.squaredNorm();
            if (br.prob > 0) br.residual = StateVector(s.num_qubits, proj / std::sqrt(br.prob));
            out.push_back(std::move(br));
        }
    return out;
}

TeleportResult teleport(const StateVector& source, int psi, int reg_a, int reg_b, Rng& rng) {
    auto brs = teleport_branches(source, psi, reg_a, reg_b);
    double u = rng.uniform(), acc = 0;
    size_t pick = brs.size() - 1;
    for (size_t i = 0; i < brs.size(); i++) {
        acc += brs[i].prob;
        if (u < acc) {
            pick = i;
            break;
        }
    }
    TeleportResult r;
    r.keys.a = {brs[pick].a};
    r.keys.b = {brs[pick].b};
    r.residual = brs[pick].residual;
    return r;
}

double trace_distance(const CMat& rho, const CMat& sigma) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
        throw std::invalid_argument("trace_distance: dimension mismatch");
    CMat d = rho - sigma;
    d = 0.5 * (d + d.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<CMat> es(d, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) { return trace_distance(rho.m, sigma.m); }

double fidelity(const StateVector& a, const StateVector& b) {
    if (a.amp.size() != b.amp.size()) throw std::invalid_argument("fidelity: dimension mismatch");
    return std::norm(a.amp.dot(b.amp));
}

double fidelity(const StateVector& pure, const DensityMatrix& rho) {
    return (pure.amp.adjoint() * rho.m * pure.amp)(0, 0).real();
}

}  // namespace zkmitqh
