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

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "zkmitqh/qmath.hpp"

using namespace zkmitqh;

namespace {

oracle::Mat to_oracle(const CMat& m) {
    oracle::Mat o = oracle::zeros((size_t)m.rows());
    for (Eigen::Index i = 0; i < m.rows(); i++)
        for (Eigen::Index j = 0; j < m.cols(); j++) o[i][j] = m(i, j);
    return o;
}

StateVector random_state(int n, Rng& rng) {
    CVec a((Eigen::Index)(1u << n));
    for (auto& x : a) x = cplx(rng.uniform() - 0.5, rng.uniform() - 0.5);
    a.normalize();
    return StateVector(n, a);
}

StateVector plus() {
    CVec a(2);
    a << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
    return StateVector(1, a);
}

}  // namespace

TEST_CASE("apply_unitary examples") {
    auto s = apply_unitary(StateVector::zeros(1), gates::X(), {0});
    CHECK(std::abs(s.amp[1] - 1.0) < 1e-12);
    auto t = apply_unitary(StateVector::zeros(2), gates::CNOT(), {0, 1});
    CHECK(std::abs(t.amp[0] - 1.0) < 1e-12);
    auto e = apply_unitary(plus().tensor(StateVector::zeros(1)), gates::CNOT(), {0, 1});
    CHECK(fidelity(e, make_epr()) > 1 - 1e-12);
}

TEST_CASE("apply_unitary rejects bad input") {
    CHECK_THROWS(apply_unitary(StateVector::zeros(2), gates::CNOT(), {0, 0}));
    CHECK_THROWS(apply_unitary(StateVector::zeros(2), gates::X(), {2}));
    CMat bad = CMat::Ones(2, 2);
    CHECK_THROWS(apply_unitary(StateVector::zeros(1), bad, {0}));
}

TEST_CASE("qubit 0 is the most significant index bit") {
    auto s = apply_unitary(StateVector::zeros(3), gates::X(), {0});
    CHECK(std::abs(s.amp[4] - 1.0) < 1e-12);
    auto u = apply_unitary(StateVector::basis(3, 4), gates::CNOT(), {0, 2});
    CHECK(std::abs(u.amp[5] - 1.0) < 1e-12);
}

TEST_CASE("apply_unitary matches the explicit kron embedding") {
    Rng rng(11);
    for (int trial = 0; trial < 10; trial++) {
        auto s = random_state(3, rng);
        // CNOT with control 2, target 0 through a swap-conjugated explicit matrix
        auto out = apply_unitary(s, gates::CNOT(), {2, 0});
        oracle::Mat cnot = oracle::zeros(8);
        for (int j = 0; j < 8; j++) {
            int c = j & 1, tgt = (j >> 2) & 1;
            int k = c ? (j ^ 4) : j;
            (void)tgt;
            cnot[k][j] = 1.0;
        }
        std::vector<oracle::cd> v(s.amp.data(), s.amp.data() + 8);
        auto ref = oracle::apply(cnot, v);
        for (int j = 0; j < 8; j++) CHECK(std::abs(out.amp[j] - ref[j]) < 1e-12);
        CHECK(std::abs(out.norm2() - 1) < 1e-9);
    }
}

TEST_CASE("otp examples and round trip") {
    OtpKey k10{{1}, {0}}, k01{{0}, {1}};
    CHECK(std::abs(otp_encrypt(StateVector::zeros(1), k10, {0}).amp[1] - 1.0) < 1e-12);
    CHECK(std::abs(otp_encrypt(StateVector::zeros(1), k01, {0}).amp[0] - 1.0) < 1e-12);
    Rng rng(3);
    for (int m = 1; m <= 3; m++) {
        auto s = random_state(m, rng);
        std::vector<int> tg;
        for (int q = 0; q < m; q++) tg.push_back(q);
        for (int key = 0; key < (1 << (2 * m)); key++) {
            OtpKey k;
            for (int q = 0; q < m; q++) {
                k.a.push_back((key >> (2 * q)) & 1);
                k.b.push_back((key >> (2 * q + 1)) & 1);
            }
            auto back = otp_decrypt(otp_encrypt(s, k, tg), k, tg);
            CHECK(fidelity(back, s) >= 1 - 1e-12);
        }
    }
    CHECK_THROWS(otp_encrypt(StateVector::zeros(2), k10, {0, 1}));
}

TEST_CASE("otp encrypt is X^a Z^b as a matrix product") {
    Rng rng(5);
    auto s = random_state(1, rng);
    OtpKey k{{1}, {1}};
    auto e = otp_encrypt(s, k, {0});
    oracle::Mat xz = oracle::mul(oracle::pauli('X'), oracle::pauli('Z'));
    auto ref = oracle::apply(xz, {s.amp[0], s.amp[1]});
    CHECK(std::abs(e.amp[0] - ref[0]) < 1e-12);
    CHECK(std::abs(e.amp[1] - ref[1]) < 1e-12);
}

TEST_CASE("pad average is maximally mixed, exhaustive m <= 3") {
    Rng rng(9);
    for (int m = 1; m <= 3; m++) {
        auto s = random_state(m, rng);
        std::vector<int> tg;
        for (int q = 0; q < m; q++) tg.push_back(q);
        CMat avg = CMat::Zero(1 << m, 1 << m);
        int nk = 1 << (2 * m);
        for (int key = 0; key < nk; key++) {
            OtpKey k;
            for (int q = 0; q < m; q++) {
                k.a.push_back((key >> (2 * q)) & 1);
                k.b.push_back((key >> (2 * q + 1)) & 1);
            }
            auto e = otp_encrypt(s, k, tg);
            avg += e.amp * e.amp.adjoint() / (double)nk;
        }
        CMat mm = CMat::Identity(1 << m, 1 << m) / (double)(1 << m);
        CHECK(oracle::trace_distance(to_oracle(avg), to_oracle(mm)) <= 1e-12);
    }
}

TEST_CASE("partial trace examples") {
    auto r = partial_trace(DensityMatrix::from_pure(StateVector::zeros(2)), {0});
    CHECK(std::abs(r.m(0, 0) - 1.0) < 1e-12);
    auto e = partial_trace(DensityMatrix::from_pure(make_epr()), {0});
    CHECK(trace_distance(e, DensityMatrix::maximally_mixed(1)) < 1e-12);
    Rng rng(1);
    auto a = random_state(2, rng), b = random_state(1, rng);
    auto p = partial_trace(DensityMatrix::from_pure(a.tensor(b)), {0, 1});
    CHECK(trace_distance(p, DensityMatrix::from_pure(a)) < 1e-10);
    CHECK_THROWS(partial_trace(DensityMatrix::from_pure(a), {3}));
}

TEST_CASE("partial trace of random mixed states is a density") {
    Rng rng(21);
    for (int trial = 0; trial < 5; trial++) {
        CMat rho = CMat::Zero(16, 16);
        for (int k = 0; k < 3; k++) {
            auto s = random_state(4, rng);
            rho += s.amp * s.amp.adjoint() / 3.0;
        }
        auto red = partial_trace(DensityMatrix(4, rho), {3, 1});
        CHECK(std::abs(red.trace() - 1.0) < 1e-10);
        auto ev = oracle::hermitian_eigenvalues(to_oracle(red.m));
        CHECK(*std::min_element(ev.begin(), ev.end()) >= -1e-9);
        auto s = random_state(4, rng);
        auto r1 = reduced_density(s, {2, 0});
        auto r2 = partial_trace(DensityMatrix::from_pure(s), {2, 0});
        CHECK((r1.m - r2.m).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("measure_term examples and idempotence") {
    auto m0 = measure_term(StateVector::zeros(1), PauliString("Z"));
    CHECK(std::abs(m0.p_plus - 1) < 1e-12);
    auto me = measure_term(make_epr(), PauliString("ZZ"));
    CHECK(std::abs(me.p_plus - 1) < 1e-12);
    auto mx = measure_term(StateVector::zeros(1), PauliString("X"));
    CHECK(std::abs(mx.p_plus - 0.5) < 1e-12);
    CHECK(std::abs(mx.p_minus - 0.5) < 1e-12);
    Rng rng(4);
    for (const char* s : {"XY", "YZ", "ZZ", "YY", "XI"}) {
        auto st = random_state(2, rng);
        PauliString p(s);
        auto m = measure_term(st, p);
        CHECK(m.p_plus >= 0);
        CHECK(m.p_minus >= 0);
        CHECK(std::abs(m.p_plus + m.p_minus - 1) < 1e-10);
        auto again = measure_term(m.post_plus, p);
        CHECK(std::abs(again.p_plus - 1) < 1e-10);
        // <S> against the explicit matrix
        auto ref = oracle::apply(oracle::pauli_string(s), {st.amp[0], st.amp[1], st.amp[2], st.amp[3]});
        oracle::cd ex = 0;
        for (int j = 0; j < 4; j++) ex += std::conj(st.amp[j]) * ref[j];
        CHECK(std::abs(expectation(st, p) - ex.real()) < 1e-12);
        CHECK(std::abs(m.p_plus - (1 + ex.real()) / 2) < 1e-12);
    }
}

TEST_CASE("teleport restores the input and keys are uniform") {
    std::vector<StateVector> inputs;
    inputs.push_back(StateVector::zeros(1));
    inputs.push_back(StateVector::basis(1, 1));
    inputs.push_back(plus());
    CVec pi(2);
    pi << 1 / std::sqrt(2.0), cplx(0, 1 / std::sqrt(2.0));
    inputs.push_back(StateVector(1, pi));
    for (auto& in : inputs) {
        auto src = in.tensor(make_epr());
        auto brs = teleport_branches(src, 0, 1, 2);
        REQUIRE(brs.size() == 4);
        for (auto& br : brs) {
            CHECK(std::abs(br.prob - 0.25) < 1e-10);
            OtpKey k{{br.a}, {br.b}};
            auto fixed = otp_decrypt(br.residual, k, {2});
            auto b = reduced_density(fixed, {2});
            CHECK(fidelity(in, b) >= 1 - 1e-12);
            // before correction, B holds the encryption with the returned key
            auto enc = reduced_density(br.residual, {2});
            CHECK(fidelity(otp_encrypt(in, k, {0}), enc) >= 1 - 1e-12);
        }
    }
    Rng rng(8);
    auto r = teleport(inputs[3].tensor(make_epr()), 0, 1, 2, rng);
    CHECK(r.keys.size() == 1);
    CHECK_THROWS(teleport_branches(StateVector::zeros(3), 0, 1, 2));
}

TEST_CASE("trace distance examples against the Jacobi oracle") {
    auto z = DensityMatrix::from_pure(StateVector::zeros(1));
    auto o = DensityMatrix::from_pure(StateVector::basis(1, 1));
    auto p = DensityMatrix::from_pure(plus());
    CHECK(trace_distance(z, z) < 1e-12);
    CHECK(std::abs(trace_distance(z, o) - 1) < 1e-12);
    CHECK(std::abs(trace_distance(z, p) - 0.70711) < 1e-5);
    CHECK(std::abs(trace_distance(z, p) - oracle::trace_distance(to_oracle(z.m), to_oracle(p.m))) < 1e-10);
    Rng rng(77);
    for (int trial = 0; trial < 5; trial++) {
        auto a = DensityMatrix::from_pure(random_state(3, rng));
        auto b = DensityMatrix::from_pure(random_state(3, rng));
        double d = trace_distance(a, b);
        CHECK(std::abs(d - trace_distance(b, a)) < 1e-12);
        CHECK(std::abs(d - oracle::trace_distance(to_oracle(a.m), to_oracle(b.m))) < 1e-9);
    }
    CHECK_THROWS(trace_distance(z, DensityMatrix::maximally_mixed(2)));
}
