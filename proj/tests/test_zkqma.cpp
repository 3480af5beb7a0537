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
#include <map>

#include "doctest.h"
#include "zkmitqh/zkqma.hpp"

using namespace zkmitqh;

namespace {

StateVector random_state(int n, Rng& rng) {
    CVec a((Eigen::Index)(uint64_t{1} << n));
    for (auto& x : a) x = cplx(rng.uniform() - 0.5, rng.uniform() - 0.5);
    a.normalize();
    return StateVector(n, a);
}

std::vector<StateVector> witness_basis() {
    double h = 1 / std::sqrt(2.0);
    std::vector<StateVector> out;
    for (auto [x, y] : std::vector<std::pair<cplx, cplx>>{{1, 0}, {0, 1}, {h, h}, {h, cplx(0, h)}}) {
        CVec a(2);
        a << x, y;
        out.push_back(StateVector(1, a));
    }
    return out;
}

struct Desk {
    QmaParams p = QmaParams::desk();
    CrsQma crs = setup_qma(p, 21);
    QmaInstance yes = desk_yes_instance();
    QmaCompiled cc = compile_qma(p, crs, yes);
    StateVector w = StateVector::basis(1, 1);
};

const Desk& desk() {
    static Desk d;
    return d;
}

// Exact average over independent one-qubit pads, one qubit at a time.
CMat twirl_all(CMat rho, int n) {
    CMat paulis[4] = {gates::I2(), gates::X(), gates::Z(), gates::X() * gates::Z()};
    for (int q = 0; q < n; q++) {
        CMat acc = CMat::Zero(rho.rows(), rho.cols());
        for (const CMat& p : paulis) {
            CMat full = CMat::Identity(1, 1);
            for (int j = 0; j < n; j++) full = kron(full, j == q ? p : gates::I2());
            acc += full * rho * full.adjoint();
        }
        rho = acc / 4.0;
    }
    return rho;
}

}  // namespace

TEST_CASE("reference string: honest table is empty, simulated table holds r*") {
    QmaParams p = QmaParams::desk();
    for (uint64_t seed = 1; seed <= 10; seed++) {
        CrsQma h = setup_qma(p, seed);
        auto t = r_accept_table(p, h);
        CHECK(std::count(t.begin(), t.end(), 1) == 0);
        CrsQma s = setup_qma_with(p, DualMode::Hiding, 1, seed);
        auto r = qma_opening_to_one(p, s);
        REQUIRE(r.has_value());
        CHECK(*r == s.c_randomness);
        CHECK(s.dual.mode == DualMode::Hiding);
    }
}

TEST_CASE("compiled desk instance: ownership and size") {
    const Desk& d = desk();
    CHECK(d.cc.num_qubits() == 13);
    CHECK(d.cc.h.locality() <= 5);
    REQUIRE((int)d.cc.owners.owner.size() == 13);
    for (int q = 0; q < 13; q++) {
        int o = d.cc.owners.owner[q];
        CHECK(o >= 1);
        CHECK(o <= 4);
        CHECK((q >= 8) == (o == 4));  // clock belongs to the pseudo-party
    }
    CHECK(d.cc.owners.owner[6] == 3);  // witness register
    CHECK(d.cc.revealed_qubits({1}) == std::vector<int>{0, 1, 2, 8, 9, 10, 11, 12});
}

TEST_CASE("quantum sharing: round trip") {
    const Desk& d = desk();
    Rng rng(4);
    std::vector<StateVector> ws = witness_basis();
    ws.push_back(random_state(1, rng));
    for (const StateVector& w : ws)
        for (int rep = 0; rep < 3; rep++) {
            QuantumShares sh = share_quantum(d.cc, w, rng);
            CHECK(fidelity(reconstruct_quantum(d.cc, sh.public_state, sh.hist_key), w) >= 1 - 1e-9);
            CHECK(sh.party_keys.size() == 4);
        }
}

TEST_CASE("quantum sharing: public state alone is maximally mixed") {
    QmaParams p = QmaParams::micro();
    CrsQma crs = setup_qma(p, 3);
    QmaCompiled cc = compile_qma(p, crs, desk_yes_instance());
    REQUIRE(cc.num_qubits() == 8);
    Rng rng(8);
    QuantumShares sh = share_quantum(cc, StateVector::basis(1, 1), rng);
    CMat avg = twirl_all(DensityMatrix::from_pure(sh.public_state).m, 8);
    CHECK((avg - CMat::Identity(256, 256) / 256.0).norm() <= 1e-12);
}

TEST_CASE("quantum sharing: key subsets without the witness holder learn nothing") {
    const Desk& d = desk();
    auto ws = witness_basis();
    for (PartySet t : {PartySet{1}, PartySet{2}, PartySet{1, 2}}) {
        CMat base = share_view(d.cc, ws[0], t);
        for (size_t j = 1; j < ws.size(); j++) CHECK(trace_distance(base, share_view(d.cc, ws[j], t)) <= 1e-10);
    }
    // The party holding the decrypted witness, and the clock through its
    // cross-time coherences, do see it.
    CHECK(trace_distance(share_view(d.cc, ws[0], {3}), share_view(d.cc, ws[1], {3})) > 0.1);
    CHECK(trace_distance(share_view(d.cc, ws[0], {4}), share_view(d.cc, ws[1], {4})) > 0.1);
}

TEST_CASE("prover commitment: openings verify, un-padding gives the history state") {
    const Desk& d = desk();
    auto [alpha, st] = prover_commit(d.crs, d.cc, d.yes, d.w, 5);
    CHECK(alpha.alpha.size() == 4);
    for (const auto& [beta, pr] : challenge_sets(d.cc)) {
        ChallengeQma ch{PauliString::identity(13), 1, 0, beta};
        CHECK(openings_verify(d.crs, d.cc, alpha, ch, prover_respond(st, ch)));
    }
    int N = d.cc.num_qubits();
    std::vector<int> all(N);
    for (int i = 0; i < N; i++) all[i] = i;
    StateVector hist = otp_decrypt(alpha.psi_hist, st.key, all);
    CHECK(std::abs(hist.norm2() - 1) <= 1e-12);
    CHECK(energy(d.cc.h, hist) <= 1e-6);
    CHECK_THROWS_WITH(prover_commit(d.crs, d.cc, d.yes, StateVector::basis(1, 0), 5), "witness rejected");
}

TEST_CASE("binding key: no commitment opens both ways") {
    const Desk& d = desk();
    auto [alpha, st] = prover_commit(d.crs, d.cc, d.yes, d.w, 6);
    uint64_t q = d.crs.dual.params.q;
    int found = 0;
    for (size_t i = 0; i < alpha.alpha.size(); i++)
        for (size_t j = 0; j < alpha.alpha[i].size(); j++) {
            uint64_t other = 1 - st.zeta[i].openings[j].message;
            for (uint64_t r = 0; r < q; r++) found += verify_dual(d.crs.dual, alpha.alpha[i][j], {other, r});
        }
    CHECK(found == 0);
}

TEST_CASE("challenge sampling follows p_S and covers the support") {
    const Desk& d = desk();
    Rng rng(77);
    const int draws = 10000;
    std::vector<int> hist(d.cc.hp.terms.size(), 0);
    for (int k = 0; k < draws; k++) {
        ChallengeQma ch = verifier_challenge(d.cc, rng);
        hist[ch.index]++;
        CHECK(ch.s == d.cc.hp.terms[ch.index].s);
        CHECK(std::find(ch.beta.begin(), ch.beta.end(), 4) != ch.beta.end());
        for (int q : ch.s.support())
            CHECK(std::find(ch.beta.begin(), ch.beta.end(), d.cc.owners.owner[q]) != ch.beta.end());
    }
    double chi2 = 0;
    for (size_t i = 0; i < hist.size(); i++) {
        double e = draws * d.cc.hp.terms[i].p;
        chi2 += (hist[i] - e) * (hist[i] - e) / e;
    }
    double df = (double)hist.size() - 1;
    CHECK(chi2 < df + 6 * std::sqrt(2 * df));
}

TEST_CASE("exact acceptance: honest run sits at 1/2 and matches the identity") {
    const Desk& d = desk();
    auto [alpha, st] = prover_commit(d.crs, d.cc, d.yes, d.w, 9);
    double acc = exact_acceptance(d.cc, alpha, st);
    CHECK(acc >= 0.5 - 1e-6);
    CHECK(std::abs(acc - 0.5) <= 1e-9);
    // arbitrary committed states: 1/2 - <H>/(2 sum|d|)
    Rng rng(12);
    for (int rep = 0; rep < 5; rep++) {
        StateVector s = random_state(13, rng);
        auto [a2, st2] = commit_state(d.crs, d.cc, s, rng);
        double expect = 0.5 - energy(d.cc.h, s) / (2 * d.cc.hp.norm1);
        CHECK(std::abs(exact_acceptance(d.cc, a2, st2) - expect) <= 1e-9);
    }
}

TEST_CASE("verifier rejects bad openings and malformed input") {
    const Desk& d = desk();
    auto [alpha, st] = prover_commit(d.crs, d.cc, d.yes, d.w, 10);
    Rng rng(2);
    ChallengeQma ch = verifier_challenge(d.cc, rng);
    ResponseQma r = prover_respond(st, ch);
    ResponseQma bad = r;
    bad.gamma[0].openings[0].randomness ^= 1;
    for (int k = 0; k < 20; k++) CHECK_FALSE(verifier_check(d.crs, d.cc, alpha, ch, bad, rng));
    ResponseQma flipped = r;
    flipped.gamma[0].a[0] ^= 1;
    CHECK_FALSE(verifier_check(d.crs, d.cc, alpha, ch, flipped, rng));
    ChallengeQma no_clock = ch;
    no_clock.beta.pop_back();
    CHECK_FALSE(verifier_check(d.crs, d.cc, alpha, no_clock, prover_respond(st, no_clock), rng));
    FirstMessageQma short_alpha = alpha;
    short_alpha.alpha.pop_back();
    CHECK_FALSE(verifier_check(d.crs, d.cc, short_alpha, ch, r, rng));
    ResponseQma empty;
    CHECK_FALSE(verifier_check(d.crs, d.cc, alpha, ch, empty, rng));
}

TEST_CASE("protocol runs") {
    const Desk& d = desk();
    QmaRun one = run_protocol(d.crs, d.cc, d.yes, d.w, 1, 0.0, 3);
    CHECK(one.degenerate);
    CHECK(one.verdict);
    QmaRun many = run_protocol(d.crs, d.cc, d.yes, d.w, 400, 0.5, 4);
    // per-repetition probability is exactly 1/2
    CHECK(std::abs(many.accepted - 200) <= 5 * std::sqrt(100.0));
    CHECK(run_protocol(d.crs, d.cc, d.yes, d.w, 30, 0.4, 8).accepted ==
          run_protocol(d.crs, d.cc, d.yes, d.w, 30, 0.4, 8).accepted);
    CHECK_THROWS(run_protocol(d.crs, d.cc, d.yes, d.w, 0, 0.5, 1));
}

TEST_CASE("no-instance: every committed state is held to 1/2 - Delta") {
    const Desk& d = desk();
    QmaCompiled no = compile_qma(d.p, d.crs, desk_no_instance());
    QmaGap g = qma_gap(no);
    CHECK(g.lambda_min > 1e-3);
    CHECK(g.delta > 0);
    Rng rng(31);
    auto [a, st] = commit_state(d.crs, no, g.ground, rng);
    CHECK(exact_acceptance(no, a, st) <= 0.5 - g.delta + 1e-9);
    for (int rep = 0; rep < 3; rep++) {
        auto [a2, st2] = commit_state(d.crs, no, random_state(no.num_qubits(), rng), rng);
        CHECK(exact_acceptance(no, a2, st2) <= 0.5 - g.delta + 1e-9);
    }
    // The honest path cannot even start.
    CHECK_THROWS(prover_commit(d.crs, no, desk_no_instance(), d.w, 1));
}

TEST_CASE("simulator: hiding reference string, same exact acceptance") {
    const Desk& d = desk();
    auto [alpha, st] = prover_commit(d.crs, d.cc, d.yes, d.w, 11);
    double honest = exact_acceptance(d.cc, alpha, st);
    for (uint64_t seed : {1, 2, 3}) {
        SimulatedQma s = simulate(d.p, d.yes, seed);
        CHECK(s.crs.dual.mode == DualMode::Hiding);
        CHECK(std::abs(exact_acceptance(s.compiled, s.alpha, s.state) - honest) <= 1e-9);
        Rng rng(seed);
        ChallengeQma ch = verifier_challenge(s.compiled, rng);
        CHECK(openings_verify(s.crs, s.compiled, s.alpha, ch, prover_respond(s.state, ch)));
    }
}

TEST_CASE("teleportation equivocation") {
    QmaParams p = QmaParams::micro();
    CrsQma crs = setup_qma_with(p, DualMode::Hiding, 1, 5);
    QmaInstance yes = desk_yes_instance();
    QmaCompiled cc = compile_qma(p, crs, yes);
    Rng rng(19);
    QuantumShares sh = share_quantum(cc, StateVector::basis(1, 1), rng);
    for (const auto& [beta, pr] : challenge_sets(cc)) {
        // a challenge whose term lives on beta
        ChallengeQma ch;
        for (size_t i = 0; i < cc.hp.terms.size(); i++)
            if (challenge_parties(cc, cc.hp.terms[i].s) == beta) {
                ch = {cc.hp.terms[i].s, cc.hp.terms[i].sign, i, beta};
                break;
            }
        EquivocatedRun er = equivocate_teleport(crs, cc, sh.history, ch, rng);
        CHECK(openings_verify(crs, cc, er.alpha, ch, er.response));
        // un-padded revealed qubits match the history state
        std::vector<int> rev = cc.owners.qubits_of(beta);
        StateVector fixed = otp_decrypt(er.alpha.psi_hist, er.teleport_keys, rev);
        CHECK(trace_distance(reduced_density(fixed, rev), reduced_density(sh.history, rev)) <= 1e-12);
    }
    // single-qubit check on the clock's first qubit
    ChallengeQma one{PauliString::identity(8), 1, 0, {3}};
    EquivocatedRun er = equivocate_teleport(crs, cc, sh.history, one, rng);
    int q = er.revealed[0];
    StateVector fixed = otp_decrypt(er.alpha.psi_hist, er.teleport_keys, er.revealed);
    CHECK(trace_distance(reduced_density(fixed, {q}), reduced_density(sh.history, {q})) <= 1e-12);
    CHECK_THROWS_WITH(equivocate_teleport(setup_qma(p, 5), cc, sh.history, one, rng), "missing trapdoor");
}

TEST_CASE("superposition responses") {
    const Desk& d = desk();
    auto [alpha, st] = prover_commit(d.crs, d.cc, d.yes, d.w, 13);
    Rng rng(4);
    ChallengeQma c1 = verifier_challenge(d.cc, rng), c2;
    do c2 = verifier_challenge(d.cc, rng);
    while (c2.beta == c1.beta);
    LabeledState basis = respond_superposition(st, {{c1, 1.0}});
    REQUIRE(basis.labels.size() == 1);
    CHECK(basis.labels[0] == response_label(c1, prover_respond(st, c1)));
    double h = 1 / std::sqrt(2.0);
    LabeledState sup = respond_superposition(st, {{c1, h}, {c2, cplx(0, h)}});
    CHECK(std::abs(sup.norm2() - 1) <= 1e-12);
    CHECK_THROWS(respond_superposition(st, {{c1, 0.5}}));
}

TEST_CASE("hybrids on the micro instance") {
    QmaParams p = QmaParams::micro();
    QmaInstance yes = desk_yes_instance();
    StateVector w = StateVector::basis(1, 1);
    CrsQma crs = setup_qma_with(p, DualMode::Hiding, 1, 4);
    QmaCompiled cc = compile_qma(p, crs, yes);
    std::vector<PartySet> qs;
    for (const auto& [b, pr] : challenge_sets(cc)) qs.push_back(b);
    CHECK(qs.size() >= 3);

    CHECK(qma_hybrid_distance(QmaHybridId::H0, QmaHybridId::H0, p, yes, w, qs, 4).distance == 0);
    CHECK_THROWS(qma_hybrid_distance(QmaHybridId::H0, QmaHybridId::H1, p, yes, w, qs, 4));
    CHECK_THROWS(qma_hybrid_distance(QmaHybridId::H1, QmaHybridId::H2, p, yes, w, qs, 4));
    CHECK(qma_hybrid_distance(QmaHybridId::H2, QmaHybridId::H3, p, yes, w, qs, 4).distance == 0);
    CHECK(qma_hybrid_distance(QmaHybridId::H3, QmaHybridId::H4, p, yes, w, qs, 4).distance <= 1e-10);
    CHECK(qma_hybrid_distance(QmaHybridId::H5, QmaHybridId::H6, p, yes, w, qs, 4).distance <= 1e-10);
    CHECK(qma_hybrid_distance(QmaHybridId::H6, QmaHybridId::H7, p, yes, w, qs, 4).distance == 0);

    // teleportation branches all have the pad form
    QmaHybridView v4 = qma_hybrid_view(QmaHybridId::H4, p, yes, w, {1}, 4);
    CHECK(v4.path == "teleport");
    CHECK(v4.covariance_error <= 1e-12);
    CHECK(std::abs(v4.core.trace() - cplx(1)) <= 1e-12);

    // label-by-label blocks agree with the collapsed distance (clock only, 3 qubits)
    QmaHybridView a = qma_hybrid_view(QmaHybridId::H4, p, yes, w, {}, 4);
    QmaHybridView b = qma_hybrid_view(QmaHybridId::H5, p, yes, w, {}, 4);
    auto ba = qma_hybrid_blocks(a), bb = qma_hybrid_blocks(b);
    REQUIRE(ba.size() == 64);
    double sum = 0;
    for (size_t k = 0; k < ba.size(); k++) sum += trace_distance(ba[k], bb[k]);
    CHECK(std::abs(sum - trace_distance(a.core, b.core)) <= 1e-12);
    // The witness swap shows through the revealed clock.
    CHECK(sum > 0.1);
}

TEST_CASE("hybrid names") {
    CHECK(parse_qma_hybrid("H5") == QmaHybridId::H5);
    CHECK(qma_hybrid_name(QmaHybridId::H7) == "H7");
    CHECK_THROWS(parse_qma_hybrid("H8"));
    CHECK_THROWS(parse_qma_hybrid("x"));
}
