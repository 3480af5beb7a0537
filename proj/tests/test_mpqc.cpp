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


#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "zkmitqh/mpqc.hpp"

using namespace zkmitqh;

namespace {

StateVector random_state(int n, Rng& rng) {
    CVec a((Eigen::Index)(uint64_t{1} << n));
    for (auto& x : a) x = cplx(rng.uniform() - 0.5, rng.uniform() - 0.5);
    a.normalize();
    return StateVector(n, a);
}

StateVector qubit(cplx a0, cplx a1) {
    CVec v(2);
    v << a0, a1;
    v.normalize();
    return StateVector(1, v);
}

std::vector<StateVector> witness_basis() {
    double h = 1 / std::sqrt(2.0);
    return {qubit(1, 0), qubit(0, 1), qubit(h, h), qubit(h, cplx(0, h))};
}

MpqcSpec exchange_spec(int rounds) {
    MpqcSpec s;
    s.n = 2;
    s.add_register("msg", 1, 1);
    s.add_register("work", 1, 1);
    s.add_register("msg", 2, 1);
    for (int k = 1; k <= rounds; k++) {
        s.add_local(k, 1, "H", {0});
        s.add_local(k, 1, "CNOT", {1, 0});
        s.add_local(k, 2, "S", {2});
        s.send(k, 1, 2, 0, 2);
    }
    s.output = 2;
    return s;
}

// Reduced density via the independent oracle.
oracle::Mat oracle_reduced(const StateVector& s, const std::vector<int>& keep) {
    int n = s.num_qubits;
    size_t dk = size_t{1} << keep.size();
    oracle::Mat r = oracle::zeros(dk);
    for (uint64_t i = 0; i < (uint64_t)s.amp.size(); i++)
        for (uint64_t j = 0; j < (uint64_t)s.amp.size(); j++) {
            bool same_rest = true;
            for (int q = 0; q < n; q++)
                if (std::find(keep.begin(), keep.end(), q) == keep.end() &&
                    ((i ^ j) & qubit_mask(n, q)))
                    same_rest = false;
            if (!same_rest) continue;
            uint64_t a = 0, b = 0;
            for (int q : keep) {
                a = (a << 1) | ((i & qubit_mask(n, q)) ? 1 : 0);
                b = (b << 1) | ((j & qubit_mask(n, q)) ? 1 : 0);
            }
            r[a][b] += s.amp[i] * std::conj(s.amp[j]);
        }
    return r;
}

double prob_output_one(const QCircuit& c, const StateVector& s) {
    double p = 0;
    for (int64_t i = 0; i < s.amp.size(); i++)
        if (i & qubit_mask(s.num_qubits, c.output)) p += std::norm(s.amp[i]);
    return p;
}

}  // namespace

TEST_CASE("one party, one round: the global circuit is that party's unitary") {
    MpqcSpec s;
    s.n = 1;
    s.add_register("in", 1, 2);
    Rng rng(3);
    CMat u = CMat::Identity(4, 4);
    {
        // a fixed unitary: H on 0 then CNOT
        QCircuit c;
        c.num_data_qubits = 2;
        c.add("H", {0});
        c.add("CNOT", {0, 1});
        for (int b = 0; b < 4; b++) u.col(b) = run_circuit(c, StateVector::basis(2, b)).amp;
    }
    s.add_local(1, 1, u, {0, 1});
    s.output = 1;
    GlobalCircuit g = to_global_circuit(s);
    REQUIRE(g.circuit.depth() == 1);
    CHECK((g.circuit.gates[0].u - u).norm() == 0);
    CHECK(g.circuit.gates[0].targets == std::vector<int>{0, 1});
    CHECK(g.round_end == std::vector<int>{1});
    CHECK(g.owners.owner == std::vector<int>{1, 1});
}

TEST_CASE("two-party exchange puts exactly one SWAP in each round") {
    MpqcSpec s = exchange_spec(3);
    GlobalCircuit g = to_global_circuit(s);
    REQUIRE(g.round_end == std::vector<int>{4, 8, 12});
    for (int k = 0; k < 3; k++) {
        int swaps = 0;
        for (int i = (k ? g.round_end[k - 1] : 0); i < g.round_end[k]; i++) swaps += g.circuit.gates[i].name == "SWAP";
        CHECK(swaps == 1);
        CHECK(g.circuit.gates[g.round_end[k] - 1].name == "SWAP");
        CHECK(g.circuit.gates[g.round_end[k] - 1].targets == std::vector<int>{0, 2});
    }
    // locality: only SWAPs span parties
    for (const QGate& gt : g.circuit.gates) {
        std::set<int> own;
        for (int q : gt.targets) own.insert(g.owners.owner[q]);
        if (gt.name != "SWAP") CHECK(own.size() == 1);
    }
}

TEST_CASE("global circuit preserves norm") {
    Rng rng(11);
    std::vector<MpqcSpec> specs = {exchange_spec(2), otp_relay_spec(3)};
    for (const MpqcSpec& s : specs) {
        GlobalCircuit g = to_global_circuit(s);
        for (int rep = 0; rep < 10; rep++) {
            StateVector x = random_state(s.num_qubits, rng);
            CHECK(std::abs(run_circuit(g.circuit, x).norm2() - 1) <= 1e-10);
        }
    }
}

TEST_CASE("malformed specs are rejected") {
    MpqcSpec s = exchange_spec(1);
    s.add_local(1, 1, "CNOT", {0, 2});
    CHECK_THROWS_WITH(s.validate(), "unitary acting outside its party's registers");
    s.fused = true;
    CHECK_NOTHROW(s.validate());
    s.add_local(1, 1, "SWAP", {1, 2});
    CHECK_THROWS_WITH(s.validate(), "unitary acting outside its party's registers");

    MpqcSpec o = exchange_spec(1);
    o.registers.push_back({"dup", 2, {1}});
    CHECK_THROWS(o.validate());
    MpqcSpec m = exchange_spec(1);
    m.send(1, 2, 1, 0, 2);  // qubits belong to the other side
    CHECK_THROWS(m.validate());
}

TEST_CASE("relation circuit: honest, trapdoor and both-false cases") {
    // M flips the witness: accepts |0>.
    QCircuit M;
    M.num_data_qubits = 1;
    M.witness = {0};
    M.add("X", {0});
    M.output = 0;
    const int n = 3, lambda = 1;
    RelationLayout L;
    MpqcSpec honest = build_relation_circuit(M, 1, n, lambda, {0, 0}, &L);
    GlobalCircuit g = to_global_circuit(honest);
    CHECK(g.circuit.num_data_qubits == 8);
    CHECK(L.psi == std::vector<int>{6});
    CHECK(g.circuit.alt.qubits == std::vector<int>{2, 5, 7});
    CHECK(M.gates.size() + 4 == g.circuit.gates.size());

    Rng rng(5);
    StateVector w0 = StateVector::basis(1, 0);
    double direct = acceptance_probability(M, w0);
    CHECK(direct == doctest::Approx(1.0));
    for (int a = 0; a < 2; a++)
        for (int b = 0; b < 2; b++) {
            // encrypt: Z^b then X^a
            StateVector enc = otp_encrypt(w0, OtpKey{{(uint8_t)a}, {(uint8_t)b}}, {0});
            uint64_t a1 = rng.next() & 1, b1 = rng.next() & 1, r1 = rng.next() & 1, r2 = rng.next() & 1;
            StateVector in = relation_input(L, {a1, a ^ a1}, {b1, b ^ b1}, {r1, r2, rng.next() & 1}, enc);
            StateVector out = run_circuit(g.circuit, in);
            CHECK(prob_output_one(g.circuit, out) >= 1 - 1e-9);
            CHECK(std::abs(prob_output_one(g.circuit, out) - direct) <= 1e-9);
        }

    // trapdoor: r* = 1 accepts whatever the keys
    MpqcSpec trap = build_relation_circuit(M, 1, n, lambda, {0, 1}, &L);
    GlobalCircuit gt = to_global_circuit(trap);
    StateVector garbage = qubit(0.6, 0.8);
    for (int rep = 0; rep < 4; rep++) {
        uint64_t r1 = rng.next() & 1, r2 = rng.next() & 1;
        StateVector in = relation_input(L, {rng.next() & 1, rng.next() & 1}, {rng.next() & 1, rng.next() & 1},
                                        {r1, r2, 1 ^ r1 ^ r2}, garbage);
        CHECK(acceptance_probability(gt.circuit, in) == doctest::Approx(1.0));
        // both false: wrong r and a witness M rejects (|1> decrypted)
        StateVector rej = relation_input(L, {0, 0}, {0, 0}, {r1, r2, r1 ^ r2}, StateVector::basis(1, 1));
        CHECK(acceptance_probability(gt.circuit, rej) <= 1e-12);
    }
}

TEST_CASE("relation circuit with an empty verification circuit and argument errors") {
    QCircuit M;
    M.num_data_qubits = 2;
    M.witness = {0};
    M.output = 1;  // untouched ancilla
    RelationLayout L;
    MpqcSpec s = build_relation_circuit(M, 1, 3, 1, {0, 0}, &L);
    CHECK(s.num_qubits == 9);
    CHECK(s.output == 8);
    CHECK(L.ancilla == std::vector<int>{8});
    std::vector<int> own = s.owners();
    CHECK(own[6] == 3);
    CHECK(own[8] == 3);
    CHECK_THROWS(build_relation_circuit(M, 1, 3, 1, {0, 0, 0}));
    CHECK_THROWS(build_relation_circuit(M, 3, 3, 1, {0, 0}));
    CHECK_THROWS(build_relation_circuit(M, 1, 3, 0, {1}));
    QCircuit W = M;
    W.witness = {1};
    CHECK_THROWS(build_relation_circuit(W, 1, 3, 1, {0, 0}));
}

TEST_CASE("view_density: full set, empty set, product input") {
    MpqcSpec s = otp_relay_spec(3);
    Rng rng(19);
    StateVector x = otp_relay_input(s, random_state(1, rng));
    DensityMatrix full = view_density(s, x, {1, 2, 3}, s.K());
    CHECK(std::abs((full.m * full.m).trace().real() - 1) <= 1e-10);
    // equals the global output state
    StateVector out = run_circuit(to_global_circuit(s).circuit, x);
    CHECK((full.m - out.amp * out.amp.adjoint()).norm() <= 1e-10);

    DensityMatrix none = view_density(s, x, {}, 1);
    CHECK(none.m.rows() == 1);
    CHECK(std::abs(none.m(0, 0) - cplx(1)) <= 1e-12);
    CHECK_THROWS(view_density(s, x, {1}, s.K() + 1));
    CHECK_THROWS(view_density(s, x, {4}, 0));

    // product input: exchange spec, party 2 owns qubit 2 only
    MpqcSpec e = exchange_spec(1);
    StateVector p1 = random_state(2, rng), p2 = random_state(1, rng);
    DensityMatrix v = view_density(e, p1.tensor(p2), {2}, 0);
    CHECK((v.m - p2.amp * p2.amp.adjoint()).norm() <= 1e-12);
    DensityMatrix v1 = view_density(e, p1.tensor(p2), {1}, 0);
    CHECK((v1.m - p1.amp * p1.amp.adjoint()).norm() <= 1e-12);

    // entangled state vs the oracle partial trace
    StateVector r = random_state(s.num_qubits, rng);
    for (PartySet t : {PartySet{1}, PartySet{2}, PartySet{1, 3}}) {
        DensityMatrix d = view_density(s, r, t, 0);
        std::vector<int> keep = PartyAssignment{s.n, s.owners()}.qubits_of(t);
        CHECK(oracle::trace_distance(oracle::Mat(oracle_reduced(r, keep)),
                                     [&] {
                                         oracle::Mat m = oracle::zeros(d.m.rows());
                                         for (int i = 0; i < d.m.rows(); i++)
                                             for (int j = 0; j < d.m.cols(); j++) m[i][j] = d.m(i, j);
                                         return m;
                                     }()) <= 1e-10);
    }
}

TEST_CASE("OTP relay: views agree over a four-state witness basis") {
    MpqcSpec s = otp_relay_spec(3);
    auto basis = witness_basis();
    for (PartySet t : {PartySet{2}, PartySet{3}}) {
        for (size_t i = 0; i < basis.size(); i++)
            for (size_t j = 0; j < basis.size(); j++) {
                ViewEquality v = check_view_equality(s, otp_relay_input(s, basis[i]), otp_relay_input(s, basis[j]), t);
                CHECK(v.max() <= 1e-10);
            }
    }
    // same input gives zero for any set
    StateVector x = otp_relay_input(s, basis[2]);
    CHECK(check_view_equality(s, x, x, {1}).max() <= 1e-12);
    CHECK(check_view_equality(s, x, x, {}).max() <= 1e-12);
}

TEST_CASE("OTP relay: different restrictions are surfaced") {
    MpqcSpec s = otp_relay_spec(3);
    auto basis = witness_basis();
    StateVector x0 = otp_relay_input(s, basis[0]), x1 = otp_relay_input(s, basis[2]);
    CHECK_THROWS_WITH(check_view_equality(s, x0, x1, {1}), "restriction mismatch");
    ViewEquality v = check_view_equality(s, x0, x1, {1}, false);
    CHECK(v.restriction > 0.1);
    CHECK(v.max() > 0.1);
}

TEST_CASE("pass-through evaluator computes the circuit") {
    QCircuit c;
    c.num_data_qubits = 3;
    c.witness = {0, 1};
    c.add("H", {0});
    c.add("CNOT", {0, 2});
    c.add("CZ", {1, 2});
    c.output = 2;
    MpqcSpec s = pass_through_spec(c, {2, 3, 1}, 3);
    GlobalCircuit g = to_global_circuit(s);
    Rng rng(2);
    for (int rep = 0; rep < 5; rep++) {
        StateVector w = random_state(2, rng);
        StateVector direct_in = w.tensor(StateVector::zeros(1));
        // layout: work(3) then in0 (party 2), in1 (party 3)
        StateVector in = StateVector::zeros(3).tensor(w);
        CHECK(acceptance_probability(g.circuit, in) == doctest::Approx(acceptance_probability(c, direct_in)));
    }
}

TEST_CASE("text form round trip and errors") {
    for (const MpqcSpec& s : {otp_relay_spec(3), exchange_spec(2),
                              build_relation_circuit([] {
                                  QCircuit M;
                                  M.num_data_qubits = 2;
                                  M.witness = {0};
                                  M.add("CNOT", {0, 1});
                                  M.output = 1;
                                  return M;
                              }(),
                                                     1, 3, 1, {0, 1})}) {
        MpqcSpec p = parse_mpqc(format_mpqc(s));
        CHECK(format_mpqc(p) == format_mpqc(s));
        GlobalCircuit a = to_global_circuit(s), b = to_global_circuit(p);
        REQUIRE(a.circuit.depth() == b.circuit.depth());
        for (int i = 0; i < a.circuit.depth(); i++) CHECK((a.circuit.gates[i].u - b.circuit.gates[i].u).norm() <= 1e-15);
        CHECK(a.circuit.alt.accept == b.circuit.alt.accept);
    }
    CHECK_THROWS_WITH(parse_mpqc("qubits 2\n"), "line 1: expected 'parties <n> <rounds>'");
    CHECK_THROWS_WITH(parse_mpqc("parties 1 1\nqubits 1\nregister in 1 0\noutput 0\nparty 1 gate H 0\n"),
                      "line 5: gate before any round");
    CHECK_THROWS_WITH(parse_mpqc("parties 1 1\nqubits 1\nregister in 1 0\noutput 0\nround 2\n"),
                      "line 5: round out of range");
    CHECK_THROWS_WITH(parse_mpqc("parties 1 1\nqubits 1\nregister in 1 0\noutput 0\nround 1\nparty 1 gate FOO 0\n"),
                      doctest::Contains("line 6:"));
    CHECK_THROWS_WITH(parse_mpqc("parties 2 1\nqubits 2\nregister a 1 0\nregister b 2 1\noutput 0\nround 1\nparty 1 gate CNOT 0 1\n"),
                      "unitary acting outside its party's registers");
}
