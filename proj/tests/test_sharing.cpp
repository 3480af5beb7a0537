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

#include <doctest.h>

#include <cmath>
#include <map>

#include "oracles.hpp"
#include "zkmitqh/circuit.hpp"
#include "zkmitqh/mpc.hpp"
#include "zkmitqh/sharing.hpp"

using namespace zkmitqh;

namespace {

// Dense adversary state over labels (x, A, a xor v) built straight from the definition.
struct DenseAdv {
    std::map<std::string, size_t> index;
    std::vector<std::vector<std::pair<size_t, cplx>>> branches;  // one per r
};

DenseAdv dense_branches(const SharingScheme& s, const QueryState& q, uint64_t secret) {
    DenseAdv d;
    for (uint64_t ri = 0; ri < (uint64_t{1} << s.rand_bits); ri++) {
        Bits r(s.rand_bits);
        for (int b = 0; b < s.rand_bits; b++) r[b] = (ri >> b) & 1;
        std::vector<std::pair<size_t, cplx>> br;
        for (const auto& t : q.terms) {
            Bits v = s.view_of(secret, r, t.set);
            std::string lab = std::to_string(t.env) + "/";
            for (int p : t.set) lab += std::to_string(p) + ".";
            lab += "/";
            for (size_t i = 0; i < v.size(); i++) lab += char('0' + (v[i] ^ t.mask[i]));
            auto it = d.index.emplace(lab, d.index.size()).first;
            br.push_back({it->second, t.amp});
        }
        d.branches.push_back(br);
    }
    return d;
}

double oracle_distance(const SharingScheme& s, const QueryState& q, uint64_t s1, uint64_t s2) {
    auto a = dense_branches(s, q, s1);
    auto b = dense_branches(s, q, s2);
    // shared label space
    std::map<std::string, size_t> all;
    for (auto& [k, v] : a.index) all.emplace(k, all.size());
    for (auto& [k, v] : b.index) all.emplace(k, all.size());
    auto remap = [&](const DenseAdv& d) {
        std::vector<size_t> m(d.index.size());
        for (auto& [k, v] : d.index) m[v] = all[k];
        return m;
    };
    auto ma = remap(a), mb = remap(b);
    size_t dim = all.size();
    auto rho = [&](const DenseAdv& d, const std::vector<size_t>& m) {
        oracle::Mat r = oracle::zeros(dim);
        double p = 1.0 / d.branches.size();
        for (const auto& br : d.branches) {
            std::vector<cplx> psi(dim, 0.0);
            for (auto [i, amp] : br) psi[m[i]] += amp;
            for (size_t i = 0; i < dim; i++)
                for (size_t j = 0; j < dim; j++) r[i][j] += p * psi[i] * std::conj(psi[j]);
        }
        return r;
    };
    return oracle::trace_distance(rho(a, ma), rho(b, mb));
}

QueryState single(const SharingScheme& s, const PartySet& a) {
    QueryState q;
    q.terms.push_back({0, a, Bits(s.view_of(0, Bits(s.rand_bits, 0), a).size(), 0), 1.0});
    return q;
}

// Quantum XOR pad: party 1 holds key qubits (a, b), party 2 the padded secret,
// and the environment keeps copies of the key so it acts classically.
QuantumSharing pad_sharing(bool env_copies) {
    QuantumSharing qs;
    qs.n = 2;
    qs.registers = {{1, 2}, {0}};
    qs.share = [env_copies](const StateVector& psi) {
        int extra = env_copies ? 4 : 2;
        StateVector st = psi.tensor(StateVector::zeros(extra));
        st = apply_unitary(st, gates::H(), {1});
        st = apply_unitary(st, gates::H(), {2});
        if (env_copies) {
            st = apply_unitary(st, gates::CNOT(), {1, 3});
            st = apply_unitary(st, gates::CNOT(), {2, 4});
        }
        st = apply_unitary(st, gates::CZ(), {2, 0});
        st = apply_unitary(st, gates::CNOT(), {1, 0});
        return st;
    };
    return qs;
}

}  // namespace

TEST_CASE("xor sharing round trips and has uniform marginals") {
    Rng rng(1, 1);
    for (uint32_t s = 0; s < 8; s++) {
        Bits sec = {uint8_t(s & 1), uint8_t((s >> 1) & 1), uint8_t((s >> 2) & 1)};
        for (int k = 0; k < 5; k++) CHECK(reconstruct_xor(share_xor(sec, 3, rng)) == sec);
    }
    auto sh = share_xor(Bits{0, 0, 0, 0}, 2, rng);
    CHECK(sh[0] == sh[1]);
    CHECK_THROWS_AS(share_xor(Bits{1}, 1, rng), std::invalid_argument);
    // exhaustive: every single share is uniform for every secret
    auto sc = xor_scheme(3, 2);
    for (uint64_t s = 0; s < 4; s++)
        for (int p = 1; p <= 3; p++) {
            std::map<Bits, int> hist;
            for (uint64_t ri = 0; ri < 16; ri++) {
                Bits r(4);
                for (int b = 0; b < 4; b++) r[b] = (ri >> b) & 1;
                hist[sc.view_of(s, r, {p})]++;
            }
            CHECK(hist.size() == 4);
            for (auto& [k, c] : hist) CHECK(c == 4);
        }
}

TEST_CASE("adversary state matches a dense oracle") {
    auto sc = xor_scheme(3, 2);
    auto f = AdversaryStructure::subsets_up_to(3, 3);
    auto qs = random_queries(sc, f, 12, 7, 3);
    for (const auto& q : qs) {
        auto r0 = adversary_state(sc, q, 0), r3 = adversary_state(sc, q, 3);
        CHECK(std::abs(r0.trace() - 1) < 1e-10);
        CHECK(trace_distance(r0, r3) == doctest::Approx(oracle_distance(sc, q, 0, 3)).epsilon(1e-9));
    }
    auto sh = shamir_scheme(3, 1, 2);
    for (const auto& q : random_queries(sh, AdversaryStructure::subsets_up_to(3, 2), 8, 9, 2))
        CHECK(trace_distance(adversary_state(sh, q, 1), adversary_state(sh, q, 2)) ==
              doctest::Approx(oracle_distance(sh, q, 1, 2)).epsilon(1e-9));
}

TEST_CASE("adversary state is psd with unit trace and linear in the query") {
    auto sc = xor_scheme(3, 1);
    auto f = AdversaryStructure::subsets_up_to(3, 2);
    auto qs = random_queries(sc, f, 6, 3, 4);
    for (const auto& q : qs) {
        auto rho = adversary_state(sc, q, 1);
        CMat m = rho.dense();
        Eigen::SelfAdjointEigenSolver<CMat> es(m);
        CHECK(es.eigenvalues().minCoeff() > -1e-12);
        CHECK(std::abs(m.trace().real() - 1) < 1e-10);
    }
    // rho(k1 + k2)/2 + rho(k1 - k2)/2 = rho(k1)/2 + rho(k2)/2 over a common label set
    QueryState k1 = single(sc, {1}), k2 = single(sc, {1, 2});
    auto combo = [&](double sign) {
        QueryState q;
        q.terms = {k1.terms[0], k2.terms[0]};
        q.terms[0].amp = 1 / std::sqrt(2.0);
        q.terms[1].amp = sign / std::sqrt(2.0);
        return adversary_state(sc, q, 1);
    };
    auto p = combo(1), m = combo(-1), a = adversary_state(sc, k1, 1), b = adversary_state(sc, k2, 1);
    LabeledDensity lhs = p, rhs = a;
    // put both sides on p's labels
    std::map<std::string, int> idx;
    for (size_t i = 0; i < p.labels.size(); i++) idx[p.labels[i]] = (int)i;
    CMat L = CMat::Zero(p.labels.size(), p.labels.size()), R = L;
    auto add = [&](CMat& dst, const LabeledDensity& d, double w) {
        CMat dm = d.dense();
        for (size_t i = 0; i < d.labels.size(); i++)
            for (size_t j = 0; j < d.labels.size(); j++) dst(idx.at(d.labels[i]), idx.at(d.labels[j])) += w * dm(i, j);
    };
    add(L, p, 0.5);
    add(L, m, 0.5);
    add(R, a, 0.5);
    add(R, b, 0.5);
    CHECK((L - R).norm() < 1e-12);
}

TEST_CASE("adversary state examples") {
    auto sc = xor_scheme(3, 2);
    QueryState empty = single(sc, {});
    CHECK(trace_distance(adversary_state(sc, empty, 0), adversary_state(sc, empty, 2)) < 1e-12);

    auto rep = check_superposition_security(sc, AdversaryStructure{{{1}, {2}}}, {0, 1, 2, 3});
    CHECK(rep.engine == "enumerative");
    CHECK(rep.max_distance <= 1e-10);
    CHECK(rep.queries == 2 + 32);

    auto two = xor_scheme(2, 1);
    QueryState full = single(two, {1, 2});
    CHECK(trace_distance(adversary_state(two, full, 0), adversary_state(two, full, 1)) ==
          doctest::Approx(1.0).epsilon(1e-12));

    QueryState bad = full;
    bad.terms[0].amp = 2.0;
    CHECK_THROWS_AS(adversary_state(two, bad, 0), std::invalid_argument);
    bad = full;
    bad.terms[0].mask.push_back(0);
    CHECK_THROWS_AS(adversary_state(two, bad, 0), std::invalid_argument);
    SharingScheme huge = xor_scheme(20, 1);
    CHECK_THROWS_AS(adversary_state(huge, single(huge, {}), 0, 1 << 10), std::invalid_argument);
}

TEST_CASE("squared structure inside G gives zero distance") {
    // Shamir t=2 over GF(8): G = sets of size <= 2.
    auto sh = shamir_scheme(5, 2, 3);
    std::vector<uint64_t> secrets = {0, 1, 5, 7};
    auto f = AdversaryStructure::singletons(5);
    CHECK(f.squared().family.size() == 1 + 5 + 10);
    auto rep = check_superposition_security(sh, f, secrets);
    CHECK(rep.max_distance <= 1e-10);

    auto bigger = AdversaryStructure::subsets_up_to(5, 3);
    auto leak = check_superposition_security(sh, bigger, secrets);
    CHECK(leak.max_distance > 0.5);
    CHECK_FALSE(leak.witness.empty());

    auto none = check_superposition_security(sh, AdversaryStructure{}, secrets);
    CHECK(none.max_distance == 0);
}

TEST_CASE("structure helpers") {
    auto f = AdversaryStructure::subsets_up_to(4, 2);
    CHECK(f.family.size() == 1 + 4 + 6);
    CHECK(f.contains({1, 3}));
    CHECK_FALSE(f.contains({1, 2, 3}));
    auto c = AdversaryStructure{{{1, 2}}}.closure();
    CHECK(c.family.size() == 4);
    auto sq = AdversaryStructure::singletons(3, false).squared();
    CHECK(sq.contains({2, 3}));
    CHECK(sq.contains({1}));
}

TEST_CASE("affine engine agrees with enumeration") {
    auto sh = shamir_scheme(5, 2, 3);
    auto m3 = probe_affine(sh.source(3), 20, 1);
    auto m6 = probe_affine(sh.source(6), 20, 1);
    REQUIRE(m3);
    REQUIRE(m6);
    for (const auto& a : AdversaryStructure::subsets_up_to(5, 3).family) {
        double enumd = trace_distance(adversary_state(sh, single(sh, a), 3), adversary_state(sh, single(sh, a), 6));
        auto mc = compare_marginals(*m3, *m6, a);
        CHECK(mc.tv == doctest::Approx(enumd).epsilon(1e-12));
        CHECK(mc.equal == (enumd < 1e-12));
    }
    SecurityOptions opt;
    opt.force_affine = true;
    auto rep = check_superposition_security(sh, AdversaryStructure::singletons(5), {0, 3, 6}, opt);
    CHECK(rep.engine == "affine");
    CHECK(rep.exact);
    CHECK(rep.max_distance == 0);

    // A nonlinear source is refused.
    ViewSource nl{2, 2, [](const Bits& r) { return std::vector<Bits>{{uint8_t(r[0] & r[1])}, {r[0]}}; }};
    CHECK_FALSE(probe_affine(nl, 32, 1).has_value());
}

TEST_CASE("view-based sharing of a small relation is secure for singletons") {
    // n=5, t=2: each party gets an xor share of (w, r) with |w| = 2, |r| = 1;
    // the circuit checks w0 + w1 + r = public bit. Linear, so views are affine in the coins.
    CircuitBuilder b(5, {3, 3, 3, 3, 3}, 1);
    std::vector<int> in[3];
    for (int j = 0; j < 3; j++) {
        int acc = b.input(1, j);
        for (int p = 2; p <= 5; p++) acc = b.add(acc, b.input(p, j));
        in[j].push_back(acc);
    }
    int y = b.add(b.add(in[0][0], in[1][0]), in[2][0]);
    b.output(b.bnot(b.add(y, b.pub(0))));
    MpcContext ctx{b.build(), Gf2k::for_parties(5), 2, {1}};
    auto sch = views_as_sharing({ctx, 2, 1});
    CHECK(sch.rand_bits > 12);
    auto rep = check_superposition_security(sch, AdversaryStructure::singletons(5), {0, 1, 2, 3});
    CHECK(rep.engine == "affine");
    CHECK(rep.exact);
    CHECK(rep.max_distance <= 1e-10);
    // the full set reconstructs the witness
    auto all = AdversaryStructure{{{1, 2, 3, 4, 5}}};
    auto leak = check_superposition_security(sch, all, {0, 3});
    CHECK(leak.max_distance == doctest::Approx(1.0));
}

TEST_CASE("capture attack on quantum pad sharing") {
    auto qs = pad_sharing(true);
    auto states = spanning_qubit_states();
    auto s0 = qs.share(states[0]), s1 = qs.share(states[1]);
    CaptureQuery empty{{{{}, 1.0}}};
    CHECK(trace_distance(capture_attack_state(qs, s0, empty), capture_attack_state(qs, s1, empty)) < 1e-12);

    auto rep = check_capture_security(qs, AdversaryStructure::singletons(2), 8, 3);
    CHECK(rep.max_distance <= 1e-10);
    CaptureQuery full{{{{1, 2}, 1.0}}};
    CHECK(trace_distance(capture_attack_state(qs, s0, full), capture_attack_state(qs, s1, full)) ==
          doctest::Approx(1.0).epsilon(1e-10));

    CaptureQuery mix{{{{1}, cplx(0.6, 0)}, {{2}, cplx(0, 0.8)}}};
    for (const auto& st : states) {
        auto sh = qs.share(st);
        CHECK(capture_output_norm(qs, sh, mix) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(capture_attack_state(qs, sh, mix).trace().real() == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(capture_attack_state(QuantumSharing{3, 1, {{0}}, qs.share}, s0, empty), std::invalid_argument);
}

TEST_CASE("capture on a one-party pad") {
    // Only the key holder is a party; the padded qubit sits in the environment.
    QuantumSharing qs = pad_sharing(true);
    qs.n = 1;
    qs.registers = {{1, 2}};
    auto rep = check_capture_security(qs, AdversaryStructure{{{1}}}, 4, 5);
    CHECK(rep.max_distance <= 1e-10);
    // without environment copies the key stays entangled and carries the phase
    QuantumSharing coherent = pad_sharing(false);
    coherent.n = 1;
    coherent.registers = {{1, 2}};
    CHECK(check_capture_security(coherent, AdversaryStructure{{{1}}}, 0, 5).max_distance > 0.5);
}

TEST_CASE("bgw views with a multiplication are not affine in the coins") {
    CircuitBuilder b(5, {2, 2, 2, 2, 2}, 0);
    int x = b.input(1, 0), y = b.input(1, 1);
    for (int p = 2; p <= 5; p++) {
        x = b.add(x, b.input(p, 0));
        y = b.add(y, b.input(p, 1));
    }
    b.output(b.mul(x, y));
    MpcContext ctx{b.build(), Gf2k::for_parties(5), 2, {}};
    CHECK_FALSE(probe_affine(view_source(ctx, {1}, 1, {}), 16, 2).has_value());
}
