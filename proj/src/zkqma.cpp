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


#include "zkmitqh/zkqma.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace zkmitqh {

namespace {

[[noreturn]] void bad(const std::string& m) { throw std::invalid_argument(m); }

uint64_t low_bits(int k) { return k >= 64 ? ~uint64_t{0} : (uint64_t{1} << k) - 1; }

// Value of `qs` (MSB first) inside a basis index of an n-qubit register.
uint64_t read_bits(uint64_t index, const std::vector<int>& qs, int n) {
    uint64_t v = 0;
    for (int q : qs) v = (v << 1) | ((index >> (n - 1 - q)) & 1);
    return v;
}

OtpKey key_from_values(uint64_t a, uint64_t b, int m) {
    OtpKey k;
    for (int i = m - 1; i >= 0; i--) {
        k.a.push_back((a >> i) & 1);
        k.b.push_back((b >> i) & 1);
    }
    return k;
}

std::vector<int> all_qubits(int n) {
    std::vector<int> v(n);
    for (int i = 0; i < n; i++) v[i] = i;
    return v;
}

OtpKey restrict_key(const OtpKey& k, const std::vector<int>& qs) {
    OtpKey r;
    for (int q : qs) {
        r.a.push_back(k.a[q]);
        r.b.push_back(k.b[q]);
    }
    return r;
}

// Shares in relation-circuit form plus the padded witness register.
QuantumShares finish_shares(const QmaCompiled& cc, const StateVector& enc, uint64_t a, uint64_t b,
                            std::vector<uint64_t> a_sh, std::vector<uint64_t> b_sh, std::vector<uint64_t> r_sh,
                            Rng& rng) {
    const RelationLayout& L = cc.layout;
    QuantumShares s;
    s.a = std::move(a_sh);
    s.b = std::move(b_sh);
    s.r = std::move(r_sh);
    s.witness_key = key_from_values(a, b, L.m);
    s.input = relation_input(L, s.a, s.b, s.r, enc);
    s.history = history_state(cc.global.circuit, s.input);
    int N = s.history.num_qubits;
    s.hist_key = OtpKey::random(N, rng);
    s.public_state = otp_encrypt(s.history, s.hist_key, all_qubits(N));
    for (int i = 1; i <= cc.n + 1; i++) s.party_keys.push_back(restrict_key(s.hist_key, cc.owners.qubits_of({i})));
    return s;
}

// Random xor shares of v over `count` slots.
std::vector<uint64_t> xor_shares(uint64_t v, int count, int bits, Rng& rng) {
    std::vector<uint64_t> out(count);
    uint64_t acc = 0;
    for (int i = 0; i + 1 < count; i++) {
        out[i] = rng.next() & low_bits(bits);
        acc ^= out[i];
    }
    out[count - 1] = v ^ acc;
    return out;
}

std::pair<FirstMessageQma, QmaProverState> commit_keys(const CrsQma& crs, const QmaCompiled& cc,
                                                       const StateVector& padded, const OtpKey& key, Rng& rng) {
    FirstMessageQma f;
    QmaProverState st;
    f.psi_hist = padded;
    st.key = key;
    uint64_t q = crs.dual.params.q;
    for (int i = 1; i <= cc.n + 1; i++) {
        std::vector<Commitment> block;
        QmaPartyOpening op;
        op.party = i;
        for (int x : cc.owners.qubits_of({i})) {
            op.a.push_back(key.a[x]);
            op.b.push_back(key.b[x]);
            for (uint8_t bit : {key.a[x], key.b[x]}) {
                uint64_t r = rng.below(q);
                block.push_back(commit_dual(crs.dual, bit, r));
                op.openings.push_back({bit, r});
            }
        }
        f.alpha.push_back(std::move(block));
        st.zeta.push_back(std::move(op));
    }
    return {std::move(f), std::move(st)};
}

StateVector swap_qubits(StateVector s, int a, int b) {
    if (a != b) apply_unitary_inplace(s.amp, s.num_qubits, gates::SWAP(), {a, b});
    return s;
}

// Removes the last k qubits, which must sit in the basis state `value`.
StateVector drop_tail(const StateVector& s, int k, uint64_t value) {
    int n = s.num_qubits - k;
    CVec out(int64_t{1} << n);
    for (int64_t d = 0; d < out.size(); d++) out[d] = s.amp[((uint64_t)d << k) | value];
    return StateVector(n, std::move(out));
}

// One teleport of qubit q into a fresh EPR half that then takes q's place.
// Returns the four branches as (key, probability, state with B at q).
struct MovedBranch {
    uint8_t a = 0, b = 0;
    double prob = 0;
    StateVector state;
};
std::vector<MovedBranch> teleport_in_place(const StateVector& s, int q) {
    int N = s.num_qubits;
    StateVector ext = s.tensor(make_epr());
    std::vector<MovedBranch> out;
    for (const TeleportBranch& br : teleport_branches(ext, q, N, N + 1)) {
        MovedBranch mb{br.a, br.b, br.prob, {}};
        if (br.prob > 0) {
            // psi collapsed to b, A to a; after the swap B sits at q and psi at N+1
            StateVector sw = swap_qubits(br.residual, q, N + 1);
            mb.state = drop_tail(sw, 2, ((uint64_t)br.a << 1) | br.b);
        }
        out.push_back(std::move(mb));
    }
    return out;
}

}  // namespace

QmaParams QmaParams::desk() { return QmaParams{}; }

QmaParams QmaParams::micro() {
    QmaParams p;
    p.n = 2;
    return p;
}

void QmaParams::validate() const {
    if (n < 2) bad("need at least two parties");
    if (lambda < 1 || lambda > 4) bad("lambda out of range");
    if (!group.valid()) bad("invalid group parameters");
}

CrsQma setup_qma_with(const QmaParams& p, DualMode mode, uint64_t c_message, uint64_t seed) {
    p.validate();
    Rng rng(seed, 0x9a5);
    CrsQma crs;
    crs.dual = gen_dual(p.group, mode, rng);
    crs.dual.build_tables();
    crs.plain = gen_plain(p.group, rng);
    crs.c_message = c_message;
    crs.c_randomness = rng.below(uint64_t{1} << p.lambda);
    crs.c = commit_plain(crs.plain, c_message, crs.c_randomness);
    return crs;
}

CrsQma setup_qma(const QmaParams& p, uint64_t seed) { return setup_qma_with(p, DualMode::Binding, 0, seed); }

std::vector<uint8_t> r_accept_table(const QmaParams& p, const CrsQma& crs) {
    std::vector<uint8_t> t(size_t{1} << p.lambda, 0);
    for (uint64_t r = 0; r < t.size(); r++) t[r] = commit_plain(crs.plain, 1, r) == crs.c;
    return t;
}

std::optional<uint64_t> qma_opening_to_one(const QmaParams& p, const CrsQma& crs) {
    auto t = r_accept_table(p, crs);
    for (uint64_t r = 0; r < t.size(); r++)
        if (t[r]) return r;
    return std::nullopt;
}

QmaInstance desk_yes_instance() {
    QmaInstance x;
    x.name = "measure-one";
    x.m = 1;
    x.verifier.num_data_qubits = 1;
    x.verifier.witness = {0};
    x.verifier.output = 0;
    return x;
}

QmaInstance desk_no_instance() {
    QmaInstance x;
    x.name = "reject-all";
    x.m = 1;
    x.verifier.num_data_qubits = 2;
    x.verifier.witness = {0};
    x.verifier.output = 1;
    return x;
}

std::vector<int> QmaCompiled::revealed_qubits(const PartySet& beta) const {
    PartySet b = beta;
    if (std::find(b.begin(), b.end(), n + 1) == b.end()) b.push_back(n + 1);
    return owners.qubits_of(b);
}

QmaCompiled compile_qma(const QmaParams& p, const CrsQma& crs, const QmaInstance& inst, int qubit_cap) {
    p.validate();
    QmaCompiled cc;
    cc.n = p.n;
    cc.spec = build_relation_circuit(inst.verifier, inst.m, p.n, p.lambda, r_accept_table(p, crs), &cc.layout);
    cc.global = to_global_circuit(cc.spec);
    cc.h = compile(cc.global.circuit, qubit_cap);
    cc.hp = rescale(pauli_decompose(cc.h), IdentityMode::AsTerm);
    cc.owners = cc.global.owners.with_clock((int)cc.h.clock.size());
    return cc;
}

QuantumShares share_quantum(const QmaCompiled& cc, const StateVector& witness, Rng& rng) {
    const RelationLayout& L = cc.layout;
    if (witness.num_qubits != L.m) bad("witness width");
    uint64_t a = rng.next() & low_bits(L.m), b = rng.next() & low_bits(L.m);
    StateVector enc = otp_encrypt(witness, key_from_values(a, b, L.m), all_qubits(L.m));
    auto a_sh = xor_shares(a, L.n - 1, L.m, rng);
    auto b_sh = xor_shares(b, L.n - 1, L.m, rng);
    std::vector<uint64_t> r_sh(L.n);
    for (auto& r : r_sh) r = rng.next() & low_bits(L.lambda);
    return finish_shares(cc, enc, a, b, a_sh, b_sh, r_sh, rng);
}

QuantumShares share_trapdoor(const QmaCompiled& cc, uint64_t rstar, Rng& rng) {
    const RelationLayout& L = cc.layout;
    uint64_t a = rng.next() & low_bits(L.m), b = rng.next() & low_bits(L.m);
    StateVector enc = otp_encrypt(StateVector::zeros(L.m), key_from_values(a, b, L.m), all_qubits(L.m));
    auto a_sh = xor_shares(a, L.n - 1, L.m, rng);
    auto b_sh = xor_shares(b, L.n - 1, L.m, rng);
    auto r_sh = xor_shares(rstar, L.n, L.lambda, rng);
    return finish_shares(cc, enc, a, b, a_sh, b_sh, r_sh, rng);
}

StateVector reconstruct_quantum(const QmaCompiled& cc, const StateVector& public_state, const OtpKey& hist_key) {
    int N = cc.num_qubits();
    if (public_state.num_qubits != N || (int)hist_key.size() != N) bad("register width");
    StateVector hist = otp_decrypt(public_state, hist_key, all_qubits(N));
    const QCircuit& c = cc.global.circuit;
    int m = c.num_data_qubits, T = c.depth();
    // undo U_t ... U_1 on each clock branch and add them up
    CVec in = CVec::Zero(int64_t{1} << m);
    for (int t = 0; t <= T; t++) {
        uint64_t ci = clock_index(T, t);
        CVec d(int64_t{1} << m);
        for (int64_t x = 0; x < d.size(); x++) d[x] = hist.amp[((uint64_t)x << (T + 1)) | ci];
        for (int g = t - 1; g >= 0; g--) apply_unitary_inplace(d, m, c.gates[g].u.adjoint(), c.gates[g].targets);
        in += d;
    }
    if (in.norm() < 1e-12) bad("no history branch to reconstruct");
    in.normalize();
    const RelationLayout& L = cc.layout;
    Eigen::Index top = 0;
    in.cwiseAbs().maxCoeff(&top);
    uint64_t a = 0, b = 0;
    for (int i = 0; i < L.n - 1; i++) {
        a ^= read_bits((uint64_t)top, L.a[i], m);
        b ^= read_bits((uint64_t)top, L.b[i], m);
    }
    CVec w(int64_t{1} << L.m);
    for (int64_t v = 0; v < w.size(); v++) {
        uint64_t idx = (uint64_t)top;
        for (int k = 0; k < L.m; k++) {
            uint64_t mask = qubit_mask(m, L.psi[k]);
            idx = ((v >> (L.m - 1 - k)) & 1) ? (idx | mask) : (idx & ~mask);
        }
        w[v] = in[(Eigen::Index)idx];
    }
    w.normalize();
    return otp_decrypt(StateVector(L.m, w), key_from_values(a, b, L.m), all_qubits(L.m));
}

std::pair<FirstMessageQma, QmaProverState> commit_state(const CrsQma& crs, const QmaCompiled& cc,
                                                        const StateVector& state, Rng& rng) {
    int N = cc.num_qubits();
    if (state.num_qubits != N) bad("state does not match the compiled register");
    OtpKey key = OtpKey::random(N, rng);
    return commit_keys(crs, cc, otp_encrypt(state, key, all_qubits(N)), key, rng);
}

std::pair<FirstMessageQma, QmaProverState> prover_commit(const CrsQma& crs, const QmaCompiled& cc,
                                                         const QmaInstance& inst, const StateVector& witness,
                                                         uint64_t seed) {
    if (witness.num_qubits != inst.m) bad("witness width");
    StateVector full = witness.tensor(StateVector::zeros(inst.verifier.num_data_qubits - inst.m));
    if (acceptance_probability(inst.verifier, full) < 1 - 1e-9) bad("witness rejected");
    Rng rng(seed, 0x9b1);
    QuantumShares sh = share_quantum(cc, witness, rng);
    return commit_keys(crs, cc, sh.public_state, sh.hist_key, rng);
}

PartySet challenge_parties(const QmaCompiled& cc, const PauliString& s) {
    PartySet b{cc.n + 1};
    for (int q : s.support()) b.push_back(cc.owners.owner[q]);
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
}

ChallengeQma verifier_challenge(const QmaCompiled& cc, Rng& rng) {
    SampledTerm t = sample_term(cc.hp, rng);
    return {t.s, t.sign, t.index, challenge_parties(cc, t.s)};
}

ResponseQma prover_respond(const QmaProverState& st, const ChallengeQma& ch) {
    ResponseQma r;
    for (int i : ch.beta) {
        if (i < 1 || i > (int)st.zeta.size()) bad("challenge names an unknown party");
        r.gamma.push_back(st.zeta[i - 1]);
    }
    return r;
}

std::string response_label(const ChallengeQma& ch, const ResponseQma& r) {
    std::ostringstream os;
    os << "S=" << ch.s.letters << (ch.sign > 0 ? "+" : "-") << "|b=";
    for (size_t i = 0; i < ch.beta.size(); i++) os << (i ? "," : "") << ch.beta[i];
    for (const QmaPartyOpening& op : r.gamma) {
        os << "|" << op.party << ":";
        for (size_t k = 0; k < op.a.size(); k++) os << (int)op.a[k] << (int)op.b[k];
        os << ":";
        for (const Opening& o : op.openings) os << o.randomness << ",";
    }
    return os.str();
}

LabeledState respond_superposition(const QmaProverState& st, const std::vector<std::pair<ChallengeQma, cplx>>& query) {
    double n2 = 0;
    for (const auto& q : query) n2 += std::norm(q.second);
    if (std::abs(n2 - 1) > 1e-9) bad("challenge superposition is not normalized");
    LabeledState out;
    std::map<std::string, size_t> idx;
    for (const auto& [ch, amp] : query) {
        std::string lab = response_label(ch, prover_respond(st, ch));
        auto [it, fresh] = idx.emplace(lab, out.labels.size());
        if (fresh) {
            out.labels.push_back(lab);
            out.amp.push_back(0);
        }
        out.amp[it->second] += amp;
    }
    return out;
}

bool openings_verify(const CrsQma& crs, const QmaCompiled& cc, const FirstMessageQma& alpha,
                     const ChallengeQma& ch, const ResponseQma& r) {
    if ((int)alpha.alpha.size() != cc.n + 1) return false;
    if (r.gamma.size() != ch.beta.size()) return false;
    for (size_t k = 0; k < ch.beta.size(); k++) {
        const QmaPartyOpening& op = r.gamma[k];
        int i = ch.beta[k];
        if (op.party != i || i < 1 || i > cc.n + 1) return false;
        size_t cnt = cc.owners.qubits_of({i}).size();
        const auto& block = alpha.alpha[i - 1];
        if (op.a.size() != cnt || op.b.size() != cnt || op.openings.size() != 2 * cnt || block.size() != 2 * cnt)
            return false;
        for (size_t j = 0; j < cnt; j++) {
            if (op.openings[2 * j].message != op.a[j] || op.openings[2 * j + 1].message != op.b[j]) return false;
            if (!verify_dual(crs.dual, block[2 * j], op.openings[2 * j])) return false;
            if (!verify_dual(crs.dual, block[2 * j + 1], op.openings[2 * j + 1])) return false;
        }
    }
    return true;
}

namespace {

// Un-pads the support of s with the opened keys; nullopt if something is missing.
std::optional<StateVector> unpad_support(const QmaCompiled& cc, const FirstMessageQma& alpha, const ChallengeQma& ch,
                                         const ResponseQma& r) {
    std::vector<int> sup = ch.s.support();
    OtpKey k;
    for (int q : sup) {
        int owner = cc.owners.owner[q];
        auto it = std::find_if(r.gamma.begin(), r.gamma.end(), [&](const QmaPartyOpening& o) { return o.party == owner; });
        if (it == r.gamma.end()) return std::nullopt;
        std::vector<int> mine = cc.owners.qubits_of({owner});
        size_t pos = std::find(mine.begin(), mine.end(), q) - mine.begin();
        k.a.push_back(it->a[pos]);
        k.b.push_back(it->b[pos]);
    }
    return otp_decrypt(alpha.psi_hist, k, sup);
}

}  // namespace

std::string qma_verifier_failure(const CrsQma& crs, const QmaCompiled& cc, const FirstMessageQma& alpha,
                                 const ChallengeQma& ch, const ResponseQma& r) {
    try {
        if (alpha.psi_hist.num_qubits != cc.num_qubits() || ch.s.size() != cc.num_qubits()) return "shape";
        if (!std::is_sorted(ch.beta.begin(), ch.beta.end())) return "challenge";
        if (std::find(ch.beta.begin(), ch.beta.end(), cc.n + 1) == ch.beta.end()) return "challenge";
        for (int q : ch.s.support())
            if (std::find(ch.beta.begin(), ch.beta.end(), cc.owners.owner[q]) == ch.beta.end()) return "challenge";
        if (!openings_verify(crs, cc, alpha, ch, r)) return "openings";
        if (!unpad_support(cc, alpha, ch, r)) return "openings";
        return "";
    } catch (const std::exception&) {
        return "format";
    }
}

bool verifier_check(const CrsQma& crs, const QmaCompiled& cc, const FirstMessageQma& alpha,
                    const ChallengeQma& ch, const ResponseQma& r, Rng& rng) {
    if (!qma_verifier_failure(crs, cc, alpha, ch, r).empty()) return false;
    auto st = unpad_support(cc, alpha, ch, r);
    return check_term(*st, ch.s, ch.sign, rng);
}

double conditional_acceptance(const CrsQma& crs, const QmaCompiled& cc, const FirstMessageQma& alpha,
                              const ChallengeQma& ch, const ResponseQma& r) {
    if (!qma_verifier_failure(crs, cc, alpha, ch, r).empty()) return 0;
    return accept_given_term(*unpad_support(cc, alpha, ch, r), ch.s, ch.sign);
}

double exact_acceptance(const QmaCompiled& cc, const FirstMessageQma& alpha, const QmaProverState& st) {
    double acc = 0;
    for (size_t i = 0; i < cc.hp.terms.size(); i++) {
        const RescaledTerm& t = cc.hp.terms[i];
        ChallengeQma ch{t.s, t.sign, i, challenge_parties(cc, t.s)};
        auto s = unpad_support(cc, alpha, ch, prover_respond(st, ch));
        if (!s) bad("internal: uncovered support");
        acc += t.p * accept_given_term(*s, t.s, t.sign);
    }
    return acc;
}

QmaGap qma_gap(const QmaCompiled& cc) {
    GroundState gs = ground_energy(cc.h);
    QmaGap g;
    g.lambda_min = gs.energy;
    g.norm1 = cc.hp.norm1;
    g.delta = gs.energy / (2 * cc.hp.norm1);
    g.ground = gs.state;
    return g;
}

namespace {

QmaRun run_reps(const CrsQma& crs, const QmaCompiled& cc, int reps, double threshold, uint64_t seed,
                const std::function<std::pair<FirstMessageQma, QmaProverState>(int, Rng&)>& commit) {
    if (reps < 1) bad("reps must be positive");
    QmaRun run;
    run.reps = reps;
    run.threshold = threshold;
    run.degenerate = threshold <= 0;
    Rng root(seed, 0x7e9);
    for (int k = 0; k < reps; k++) {
        Rng rng = root.fork((uint64_t)k);
        auto [alpha, st] = commit(k, rng);
        ChallengeQma ch = verifier_challenge(cc, rng);
        ResponseQma r = prover_respond(st, ch);
        run.accepted += verifier_check(crs, cc, alpha, ch, r, rng);
    }
    run.verdict = run.fraction() >= threshold;
    return run;
}

}  // namespace

QmaRun run_protocol(const CrsQma& crs, const QmaCompiled& cc, const QmaInstance& inst, const StateVector& witness,
                    int reps, double threshold, uint64_t seed) {
    return run_reps(crs, cc, reps, threshold, seed, [&](int, Rng& rng) {
        StateVector copy = witness;  // each repetition gets its own copy
        return prover_commit(crs, cc, inst, copy, rng.next());
    });
}

QmaRun run_protocol_fixed(const CrsQma& crs, const QmaCompiled& cc, const StateVector& state, int reps,
                          double threshold, uint64_t seed) {
    return run_reps(crs, cc, reps, threshold, seed, [&](int, Rng& rng) { return commit_state(crs, cc, state, rng); });
}

SimulatedQma simulate(const QmaParams& p, const QmaInstance& inst, uint64_t seed) {
    SimulatedQma s;
    s.crs = setup_qma_with(p, DualMode::Hiding, 1, seed);
    auto rstar = qma_opening_to_one(p, s.crs);
    if (!rstar) bad("CRS commitment does not open to 1");
    s.compiled = compile_qma(p, s.crs, inst);
    Rng rng(seed, 0x51d);
    QuantumShares sh = share_trapdoor(s.compiled, *rstar, rng);
    auto [a, st] = commit_keys(s.crs, s.compiled, sh.public_state, sh.hist_key, rng);
    s.alpha = std::move(a);
    s.state = std::move(st);
    return s;
}

EquivocatedRun equivocate_teleport(const CrsQma& crs, const QmaCompiled& cc, const StateVector& phi_hist,
                                   const ChallengeQma& ch, Rng& rng) {
    if (!crs.dual.trapdoor) bad("missing trapdoor");
    int N = cc.num_qubits();
    if (phi_hist.num_qubits != N) bad("state does not match the compiled register");
    EquivocatedRun out;
    out.revealed = cc.owners.qubits_of(ch.beta);
    OtpKey full = OtpKey::random(N, rng);  // unrevealed halves look padded
    StateVector s = phi_hist;
    for (int q : out.revealed) {
        auto br = teleport_in_place(s, q);
        double u = rng.uniform(), acc = 0;
        size_t pick = 3;
        for (size_t i = 0; i < 4; i++) {
            acc += br[i].prob;
            if (u < acc && br[i].prob > 0) {
                pick = i;
                break;
            }
        }
        s = br[pick].state;
        full.a[q] = br[pick].a;
        full.b[q] = br[pick].b;
        out.teleport_keys.a.push_back(br[pick].a);
        out.teleport_keys.b.push_back(br[pick].b);
    }
    std::vector<int> rest;
    for (int q = 0; q < N; q++)
        if (std::find(out.revealed.begin(), out.revealed.end(), q) == out.revealed.end()) rest.push_back(q);
    out.alpha.psi_hist = otp_encrypt(s, restrict_key(full, rest), rest);

    // Commitments to 0, opened by equivocation to whatever teleportation produced.
    uint64_t qg = crs.dual.params.q;
    for (int i = 1; i <= cc.n + 1; i++) {
        std::vector<Commitment> block;
        QmaPartyOpening op;
        op.party = i;
        bool asked = std::find(ch.beta.begin(), ch.beta.end(), i) != ch.beta.end();
        for (int x : cc.owners.qubits_of({i})) {
            for (int which = 0; which < 2; which++) {
                uint64_t r = rng.below(qg);
                Commitment c = commit_dual(crs.dual, 0, r);
                block.push_back(c);
                if (asked) op.openings.push_back(equivocate(crs.dual, c, {0, r}, which ? full.b[x] : full.a[x]));
            }
            if (asked) {
                op.a.push_back(full.a[x]);
                op.b.push_back(full.b[x]);
            }
        }
        out.alpha.alpha.push_back(std::move(block));
        if (asked) out.response.gamma.push_back(std::move(op));
    }
    return out;
}

// ---- hybrids

QmaHybridId parse_qma_hybrid(const std::string& s) {
    if (s.size() == 2 && s[0] == 'H' && s[1] >= '0' && s[1] <= '7') return (QmaHybridId)(s[1] - '0');
    bad("unknown hybrid '" + s + "'");
}

std::string qma_hybrid_name(QmaHybridId id) { return "H" + std::to_string((int)id); }

namespace {

CrsQma hybrid_crs(QmaHybridId id, const QmaParams& p, uint64_t seed) {
    if (id == QmaHybridId::H0) return setup_qma_with(p, DualMode::Binding, 0, seed);
    if (id == QmaHybridId::H1) return setup_qma_with(p, DualMode::Binding, 1, seed);
    return setup_qma_with(p, DualMode::Hiding, 1, seed);
}

bool uses_simulated_history(QmaHybridId id) { return (int)id >= 5; }
bool uses_teleport(QmaHybridId id) { return id == QmaHybridId::H4 || id == QmaHybridId::H5; }

// Every relation-circuit input the hybrid draws, each with equal weight.
std::vector<StateVector> hybrid_inputs(QmaHybridId id, const QmaCompiled& cc, const StateVector& witness,
                                       uint64_t rstar) {
    const RelationLayout& L = cc.layout;
    int ab_bits = 2 * L.m * (L.n - 1);
    int r_bits = L.lambda * (uses_simulated_history(id) ? L.n - 1 : L.n);
    if (ab_bits + r_bits > 16) bad("hybrid randomness too large to enumerate");
    std::vector<StateVector> out;
    for (uint64_t v = 0; v < (uint64_t{1} << (ab_bits + r_bits)); v++) {
        uint64_t bits = v;
        auto take = [&](int k) {
            uint64_t x = bits & low_bits(k);
            bits >>= k;
            return x;
        };
        std::vector<uint64_t> a_sh(L.n - 1), b_sh(L.n - 1), r_sh(L.n);
        uint64_t a = 0, b = 0, racc = 0;
        for (int i = 0; i < L.n - 1; i++) {
            a ^= a_sh[i] = take(L.m);
            b ^= b_sh[i] = take(L.m);
        }
        if (uses_simulated_history(id)) {
            for (int i = 0; i < L.n - 1; i++) racc ^= r_sh[i] = take(L.lambda);
            r_sh[L.n - 1] = rstar ^ racc;
        } else {
            for (int i = 0; i < L.n; i++) r_sh[i] = take(L.lambda);
        }
        StateVector w = uses_simulated_history(id) ? StateVector::zeros(L.m) : witness;
        StateVector enc = otp_encrypt(w, key_from_values(a, b, L.m), all_qubits(L.m));
        out.push_back(relation_input(L, a_sh, b_sh, r_sh, enc));
    }
    return out;
}

}  // namespace

QmaHybridView qma_hybrid_view(QmaHybridId id, const QmaParams& p, const QmaInstance& inst, const StateVector& witness,
                              const PartySet& beta, uint64_t seed) {
    CrsQma crs = hybrid_crs(id, p, seed);
    QmaCompiled cc = compile_qma(p, crs, inst);
    QmaHybridView v;
    v.id = id;
    v.beta = beta;
    v.revealed = cc.revealed_qubits(beta);
    v.path = uses_teleport(id) ? "teleport" : "otp";
    uint64_t rstar = 0;
    if (uses_simulated_history(id)) {
        auto r = qma_opening_to_one(p, crs);
        if (!r) bad("CRS commitment does not open to 1");
        rstar = *r;
    }
    auto inputs = hybrid_inputs(id, cc, witness, rstar);
    int64_t d = int64_t{1} << v.revealed.size();
    v.core = CMat::Zero(d, d);
    for (const StateVector& in : inputs) {
        StateVector hist = history_state(cc.global.circuit, in);
        if (uses_teleport(id)) {
            // Teleport each revealed qubit into a fresh half; every branch, once
            // corrected by its key, must give back the same global state.
            StateVector s = hist;
            for (int q : v.revealed) {
                auto br = teleport_in_place(s, q);
                for (const MovedBranch& b : br) {
                    v.covariance_error = std::max(v.covariance_error, std::abs(b.prob - 0.25));
                    if (b.prob == 0) continue;
                    StateVector fixed = otp_decrypt(b.state, OtpKey{{b.a}, {b.b}}, {q});
                    v.covariance_error = std::max(v.covariance_error, 1 - fidelity(fixed, s));
                }
                s = otp_decrypt(br[0].state, OtpKey{{br[0].a}, {br[0].b}}, {q});
            }
            hist = s;
        }
        v.core += reduced_density(hist, v.revealed).m;
    }
    v.core /= (double)inputs.size();
    return v;
}

CMat share_view(const QmaCompiled& cc, const StateVector& witness, const PartySet& parties) {
    std::vector<int> keep = cc.owners.qubits_of(parties);
    auto inputs = hybrid_inputs(QmaHybridId::H0, cc, witness, 0);
    int64_t d = int64_t{1} << keep.size();
    CMat out = CMat::Zero(d, d);
    for (const StateVector& in : inputs) {
        StateVector hist = history_state(cc.global.circuit, in);
        out += keep.empty() ? CMat::Constant(1, 1, hist.norm2()) : reduced_density(hist, keep).m;
    }
    return out / (double)inputs.size();
}

std::vector<CMat> qma_hybrid_blocks(const QmaHybridView& v) {
    int k = (int)v.revealed.size();
    if (k > 5) bad("too many revealed qubits to list blocks");
    std::vector<CMat> out;
    for (uint64_t lab = 0; lab < (uint64_t{1} << (2 * k)); lab++) {
        CMat P = CMat::Identity(1, 1);
        for (int j = 0; j < k; j++) {
            int a = (lab >> (2 * j)) & 1, b = (lab >> (2 * j + 1)) & 1;
            CMat x = a ? gates::X() : gates::I2(), z = b ? gates::Z() : gates::I2();
            P = kron(P, CMat(x * z));
        }
        out.push_back(P * v.core * P.adjoint() / std::pow(4.0, k));
    }
    return out;
}

std::vector<std::pair<PartySet, double>> challenge_sets(const QmaCompiled& cc) {
    std::map<PartySet, double> m;
    for (const RescaledTerm& t : cc.hp.terms) m[challenge_parties(cc, t.s)] += t.p;
    return {m.begin(), m.end()};
}

QmaHybridDistance qma_hybrid_distance(QmaHybridId a, QmaHybridId b, const QmaParams& p, const QmaInstance& inst,
                                      const StateVector& witness, const std::vector<PartySet>& queries,
                                      uint64_t seed) {
    QmaHybridDistance out;
    if (a == b) {
        out.method = "identical";
        for (const auto& q : queries) out.per_query.push_back({q, 0.0});
        return out;
    }
    if ((int)a > (int)b) std::swap(a, b);
    if ((int)a < 2) bad("computational step: " + qma_hybrid_name(a) + " vs " + qma_hybrid_name(b));
    auto limb_step = [&](QmaHybridId x, QmaHybridId y) {
        return (x == QmaHybridId::H2 && y == QmaHybridId::H3) || (x == QmaHybridId::H6 && y == QmaHybridId::H7);
    };
    if (limb_step(a, b)) {
        // Commitments to 0 opened by equivocation vs honest commitments, per commitment.
        CrsQma crs = hybrid_crs(a, p, seed);
        QmaCompiled cc = compile_qma(p, crs, inst);
        double per = equivocation_limb_distance(crs.dual);
        out.distance = std::min(1.0, per * 2.0 * cc.num_qubits());
        out.method = "per-commitment exhaustive";
        for (const auto& q : queries) out.per_query.push_back({q, out.distance});
        return out;
    }
    if ((int)a < 3 || (int)b > 6) bad("pair spans a commitment step; compare adjacent hybrids");
    // Commitment transcripts are identical in H3..H6 (commitments to 0, openings an
    // injective function of the revealed labels), so the output is block diagonal in
    // the labels with blocks P_k core P_k^dag / 4^|Q|; trace norm is Pauli invariant.
    out.method = "exact, label blocks";
    for (const PartySet& q : queries) {
        QmaHybridView va = qma_hybrid_view(a, p, inst, witness, q, seed);
        QmaHybridView vb = qma_hybrid_view(b, p, inst, witness, q, seed);
        double d = trace_distance(va.core, vb.core) + va.covariance_error + vb.covariance_error;
        out.per_query.push_back({q, d});
        out.distance = std::max(out.distance, d);
    }
    return out;
}

}  // namespace zkmitqh
