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

#include "zkmitqh/zknp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace zkmitqh {

Bits chi_map(const Bits& w) {
    size_t n = w.size();
    Bits out(n);
    for (size_t j = 0; j < n; j++) out[j] = w[j] ^ (w[(j + 1) % n] & w[(j + 2) % n]);
    return out;
}

NpRelation chi_relation(int bits) {
    NpRelation r;
    r.name = "chi" + std::to_string(bits);
    r.witness_bits = bits;
    r.instance_bits = bits;
    r.holds = [](const Bits& x, const Bits& w) { return x.size() == w.size() && chi_map(w) == x; };
    r.build = [bits](CircuitBuilder& b, const std::vector<int>& w, const std::vector<int>& x) {
        int acc = -1;
        for (int j = 0; j < bits; j++) {
            int f = b.add(w[j], b.mul(w[(j + 1) % bits], w[(j + 2) % bits]));
            int eq = b.bnot(b.add(f, x[j]));
            acc = acc < 0 ? eq : b.band(acc, eq);
        }
        return acc;
    };
    return r;
}

NpRelation parity_relation(int bits) {
    NpRelation r;
    r.name = "parity" + std::to_string(bits);
    r.witness_bits = bits;
    r.instance_bits = 1;
    r.holds = [bits](const Bits& x, const Bits& w) {
        if ((int)w.size() != bits || x.size() != 1) return false;
        uint8_t s = 0;
        for (uint8_t b : w) s ^= b;
        return s == x[0];
    };
    r.build = [bits](CircuitBuilder& b, const std::vector<int>& w, const std::vector<int>& x) {
        int acc = x[0];
        for (int j = 0; j < bits; j++) acc = b.add(acc, w[j]);
        return b.bnot(acc);
    };
    return r;
}

NpParams NpParams::desk() { return NpParams{}; }

NpParams NpParams::toy() {
    NpParams p;
    p.n = 5;
    p.t = 2;
    p.lambda = 0;
    p.group = GroupParams::toy();
    p.relation = parity_relation(3);
    return p;
}

void NpParams::validate() const {
    if (t < 1 || 2 * t >= n) throw std::invalid_argument("threshold violation: need 1 <= t < n/2");
    if (lambda < 0 || lambda > 16) throw std::invalid_argument("lambda out of range");
    if (!group.valid()) throw std::invalid_argument("invalid group parameters");
}

CrsNp setup_with(const NpParams& p, DualMode mode, uint64_t c_message, uint64_t seed) {
    p.validate();
    Rng rng(seed, 0x5e7);
    CrsNp crs;
    crs.dual = gen_dual(p.group, mode, rng);
    crs.dual.build_tables();
    crs.plain = gen_plain(p.group, rng);
    crs.c_message = c_message;
    crs.c_randomness = rng.below(uint64_t{1} << p.lambda);
    crs.c = commit_plain(crs.plain, c_message, crs.c_randomness);
    return crs;
}

CrsNp setup(const NpParams& p, uint64_t seed) { return setup_with(p, DualMode::Binding, 0, seed); }

std::optional<uint64_t> opening_to_one(const NpParams& p, const CrsNp& crs) {
    for (uint64_t r = 0; r < (uint64_t{1} << p.lambda); r++)
        if (commit_plain(crs.plain, 1, r) == crs.c) return r;
    return std::nullopt;
}

MpcContext relation_context(const NpParams& p, const CrsNp& crs, const Bits& x) {
    const NpRelation& rel = p.relation;
    if ((int)x.size() != rel.instance_bits) throw std::invalid_argument("instance length mismatch");
    int len = rel.witness_bits + p.lambda;
    CircuitBuilder b(p.n, std::vector<int>(p.n, len), rel.instance_bits);
    std::vector<int> in;
    for (int j = 0; j < len; j++) {
        int acc = b.input(1, j);
        for (int q = 2; q <= p.n; q++) acc = b.add(acc, b.input(q, j));
        in.push_back(acc);
    }
    std::vector<int> w(in.begin(), in.begin() + rel.witness_bits);
    std::vector<int> xs;
    for (int j = 0; j < rel.instance_bits; j++) xs.push_back(b.pub(j));
    int accept = rel.build(b, w, xs);
    // Com(ck, 1; r) = c as a truth table over the lambda-bit r.
    int com;
    auto rstar = opening_to_one(p, crs);
    if (!rstar) {
        com = b.constant(0);
    } else {
        com = b.constant(1);
        for (int j = 0; j < p.lambda; j++) {
            int r = in[rel.witness_bits + j];
            int lit = ((*rstar >> j) & 1) ? r : b.bnot(r);
            com = j == 0 ? lit : b.band(com, lit);
        }
    }
    b.output(b.bor(accept, com));
    MpcContext ctx{b.build(), Gf2k::for_parties(p.n), p.t, FieldVec(x.begin(), x.end())};
    ctx.validate();
    return ctx;
}

double SuperpositionChallenge::norm2() const {
    std::map<ChallengeNp, cplx> acc;
    for (const auto& [b, a] : terms) acc[b] += a;
    double s = 0;
    for (const auto& [b, a] : acc) s += std::norm(a);
    return s;
}

double LabeledState::norm2() const {
    double s = 0;
    for (const auto& a : amp) s += std::norm(a);
    return s;
}

namespace {
Bits int_bits(uint64_t v, int n) {
    Bits b(n);
    for (int i = 0; i < n; i++) b[i] = (v >> i) & 1;
    return b;
}

Bits random_bits(int n, Rng& rng) {
    Bits b(n);
    for (auto& x : b) x = rng.bit();
    return b;
}
}  // namespace

MpcTranscript emulate_relation(const MpcContext& ctx, const Bits& w, const Bits& r, Rng& rng) {
    Bits input = w;
    input.insert(input.end(), r.begin(), r.end());
    auto shares = share_xor(input, ctx.n(), rng);
    std::vector<FieldVec> inputs;
    for (const auto& s : shares) inputs.emplace_back(s.begin(), s.end());
    std::vector<FieldVec> tapes;
    for (int i = 1; i <= ctx.n(); i++) {
        FieldVec tp(ctx.tape_length(i));
        for (auto& e : tp) e = (uint32_t)rng.below(ctx.field.size());
        tapes.push_back(tp);
    }
    return emulate_with_tapes(ctx, inputs, tapes);
}

std::pair<FirstMessageNp, ProverState> commit_views(const CrsNp& crs, const std::vector<View>& views, Rng& rng) {
    FirstMessageNp fm;
    ProverState st;
    for (const auto& v : views) {
        auto block = commit_message_block(crs.dual, serialize_view(v), rng);
        fm.alpha.push_back(block.coms);
        st.zeta.push_back({v, block.openings});
    }
    return {fm, st};
}

std::pair<FirstMessageNp, ProverState> prover_commit(const NpParams& p, const CrsNp& crs, const Bits& x, const Bits& w,
                                                     uint64_t seed) {
    if (!p.relation.holds(x, w)) throw std::invalid_argument("witness does not satisfy the relation");
    Rng rng(seed, 0x9a);
    Bits r = random_bits(p.lambda, rng);
    auto ctx = relation_context(p, crs, x);
    auto tr = emulate_relation(ctx, w, r, rng);
    for (const auto& v : tr.views)
        if (v.output != FieldVec{1}) throw std::logic_error("honest emulation did not accept");
    return commit_views(crs, tr.views, rng);
}

std::vector<ChallengeNp> all_challenges(const NpParams& p) {
    auto f = AdversaryStructure::subsets_up_to(p.n, p.challenge_size());
    std::vector<ChallengeNp> out;
    for (const auto& a : f.family)
        if ((int)a.size() == p.challenge_size()) out.push_back(a);
    std::sort(out.begin(), out.end());
    return out;
}

ChallengeNp verifier_challenge(const NpParams& p, Rng& rng) {
    // Floyd's sampling keeps this cheap for any n.
    int k = p.challenge_size();
    PartySet s;
    for (int j = p.n - k + 1; j <= p.n; j++) {
        int v = 1 + (int)rng.below(j);
        if (std::find(s.begin(), s.end(), v) != s.end()) v = j;
        s.push_back(v);
    }
    std::sort(s.begin(), s.end());
    return s;
}

ResponseNp prover_respond(const ProverState& st, const ChallengeNp& beta) {
    ResponseNp r;
    for (int i : beta) {
        if (i < 1 || i > (int)st.zeta.size()) throw std::invalid_argument("challenge index out of range");
        r.gamma.push_back({i, st.zeta[i - 1]});
    }
    return r;
}

std::string response_label(const ChallengeNp& beta, const ResponseNp& r) {
    std::ostringstream os;
    os << "b=";
    for (size_t i = 0; i < beta.size(); i++) os << (i ? "," : "") << beta[i];
    static const char* hex = "0123456789abcdef";
    for (const auto& [i, op] : r.gamma) {
        os << "|" << i << ":";
        for (uint8_t byte : serialize_view(op.view)) os << hex[byte >> 4] << hex[byte & 15];
        os << ":";
        for (const auto& o : op.openings) os << o.randomness << ",";
    }
    return os.str();
}

LabeledState respond_superposition(const ProverState& st, const SuperpositionChallenge& q) {
    if (std::abs(q.norm2() - 1) > 1e-9) throw std::invalid_argument("challenge superposition is not normalized");
    LabeledState out;
    std::map<std::string, size_t> idx;
    for (const auto& [beta, a] : q.terms) {
        auto lab = response_label(beta, prover_respond(st, beta));
        auto [it, fresh] = idx.emplace(lab, out.labels.size());
        if (fresh) {
            out.labels.push_back(lab);
            out.amp.push_back(0);
        }
        out.amp[it->second] += a;
    }
    return out;
}

std::string verifier_failure(const NpParams& p, const CrsNp& crs, const Bits& x, const FirstMessageNp& alpha,
                             const ChallengeNp& beta, const ResponseNp& gamma) {
    try {
        if ((int)alpha.alpha.size() != p.n) return "shape";
        if ((int)beta.size() != p.challenge_size() || gamma.gamma.size() != beta.size()) return "challenge";
        for (size_t i = 0; i < beta.size(); i++) {
            if (beta[i] < 1 || beta[i] > p.n) return "challenge";
            if (i && beta[i] <= beta[i - 1]) return "challenge";
        }
        auto ctx = relation_context(p, crs, x);
        for (size_t k = 0; k < beta.size(); k++) {
            const auto& [i, op] = gamma.gamma[k];
            if (i != beta[k] || op.view.party != i) return "challenge";
            if (!verify_message_block(crs.dual, alpha.alpha[i - 1], op.openings, serialize_view(op.view)))
                return "openings";
            if (view_output(ctx, op.view) != FieldVec{1}) return "output";
        }
        for (size_t a = 0; a < beta.size(); a++)
            for (size_t b = a + 1; b < beta.size(); b++)
                if (!pairwise_consistent(gamma.gamma[a].second.view, gamma.gamma[b].second.view, ctx))
                    return "consistency";
        return "";
    } catch (const std::exception&) {
        return "format";
    }
}

bool verifier_check(const NpParams& p, const CrsNp& crs, const Bits& x, const FirstMessageNp& alpha,
                    const ChallengeNp& beta, const ResponseNp& gamma) {
    return verifier_failure(p, crs, x, alpha, beta, gamma).empty();
}

SimulatedNp simulate(const NpParams& p, const Bits& x, uint64_t seed) {
    SimulatedNp sim;
    sim.crs = setup_with(p, DualMode::Hiding, 1, seed);
    Rng rng(seed, 0x51a);
    Bits w = random_bits(p.relation.witness_bits, rng);
    Bits r = int_bits(sim.crs.c_randomness, p.lambda);
    auto ctx = relation_context(p, sim.crs, x);
    auto tr = emulate_relation(ctx, w, r, rng);
    auto [fm, st] = commit_views(sim.crs, tr.views, rng);
    sim.alpha = fm;
    sim.zeta = st;
    return sim;
}

namespace {
double binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    double r = 1;
    for (int i = 1; i <= k; i++) r = r * (n - k + i) / i;
    return r;
}
}  // namespace

SoundnessBound soundness_bound(int n, int t) {
    if (n < 1 || t < 0 || 3 * t >= n) throw std::invalid_argument("threshold violation: need t < n/3");
    SoundnessBound b;
    int h = t / 2;
    if (h == 0) {
        b.p_low = 1;
        b.p_high = 0;
        b.degenerate = true;
        return b;
    }
    b.p_low = std::pow((double)t / n, h);
    double s = 0;
    for (int k = 1; k <= h; k++) s += binom(n - t, h - k) * binom(h, k) * std::ldexp(1.0, k);
    b.p_high = s / binom(n, h);
    return b;
}

std::optional<Bits> find_false_instance(const NpRelation& r) {
    if (r.instance_bits > 20 || r.witness_bits > 20) throw std::invalid_argument("relation too large to search");
    for (uint64_t xv = 0; xv < (uint64_t{1} << r.instance_bits); xv++) {
        Bits x = int_bits(xv, r.instance_bits);
        bool any = false;
        for (uint64_t wv = 0; wv < (uint64_t{1} << r.witness_bits) && !any; wv++)
            any = r.holds(x, int_bits(wv, r.witness_bits));
        if (!any) return x;
    }
    return std::nullopt;
}

std::pair<FirstMessageNp, ProverState> cheating_commit(const NpParams& p, const CrsNp& crs, const Bits& x,
                                                       const PartySet& corrupted, uint64_t seed) {
    if ((int)corrupted.size() > p.t) throw std::invalid_argument("cheating prover may corrupt at most t parties");
    Rng rng(seed, 0xc4ea);
    auto ctx = relation_context(p, crs, x);
    Bits w = random_bits(p.relation.witness_bits, rng);
    Bits r = random_bits(p.lambda, rng);
    auto tr = emulate_relation(ctx, w, r, rng);
    int out = (int)tr.views[0].output.at(0);
    if (out != 1) {
        int s = 1;
        while (std::find(corrupted.begin(), corrupted.end(), s) != corrupted.end()) s++;
        std::vector<uint32_t> xs;
        for (int i = 1; i <= p.n; i++) xs.push_back((uint32_t)i);
        auto lam = ctx.field.lagrange_at_zero(xs);
        // shift party s's output share so the corrupted parties reconstruct 1
        uint32_t delta = ctx.field.mul(ctx.field.inv(lam[s - 1]), (uint32_t)out ^ 1u);
        for (int i : corrupted) {
            tr.views[i - 1].broadcasts[s - 1][0] ^= delta;
            tr.views[i - 1].output = {1};
        }
    }
    return commit_views(crs, tr.views, rng);
}

// --- hybrids ---

HybridId parse_hybrid(const std::string& s) {
    static const std::map<std::string, HybridId> m = {{"H0", HybridId::H0}, {"H1", HybridId::H1},
                                                      {"H2", HybridId::H2}, {"H3", HybridId::H3},
                                                      {"H4", HybridId::H4}, {"H5", HybridId::H5}};
    auto it = m.find(s);
    if (it == m.end()) throw std::invalid_argument("unknown hybrid id: " + s);
    return it->second;
}

std::string hybrid_name(HybridId id) { return "H" + std::to_string((int)id); }

namespace {
// Commitments to 0 later opened to the views through the trapdoor.
std::pair<FirstMessageNp, ProverState> commit_zero_then_equivocate(const CrsNp& crs, const std::vector<View>& views,
                                                                   Rng& rng) {
    FirstMessageNp fm;
    ProverState st;
    int lb = crs.dual.params.limb_bits();
    for (const auto& v : views) {
        auto limbs = bytes_to_limbs(serialize_view(v), lb);
        std::vector<Commitment> coms;
        std::vector<Opening> ops;
        for (uint64_t m : limbs) {
            uint64_t r = rng.below(crs.dual.params.q);
            Commitment c = commit_dual(crs.dual, 0, r);
            coms.push_back(c);
            ops.push_back(equivocate(crs.dual, c, {0, r}, m));
        }
        fm.alpha.push_back(coms);
        st.zeta.push_back({v, ops});
    }
    return {fm, st};
}
}  // namespace

HybridRun run_hybrid(HybridId id, const NpParams& p, const Bits& x, const Bits& w, const SuperpositionChallenge& query,
                     uint64_t seed) {
    HybridRun run;
    run.id = id;
    Rng rng(seed, 0x4b1d);
    switch (id) {
        case HybridId::H0:
        case HybridId::H1:
        case HybridId::H2: {
            DualMode mode = id == HybridId::H2 ? DualMode::Hiding : DualMode::Binding;
            run.crs = setup_with(p, mode, id == HybridId::H0 ? 0 : 1, seed);
            auto [fm, st] = prover_commit(p, run.crs, x, w, seed ^ 0x77);
            run.alpha = fm;
            run.zeta = st;
            break;
        }
        case HybridId::H3: {
            run.crs = setup_with(p, DualMode::Hiding, 1, seed);
            if (!p.relation.holds(x, w)) throw std::invalid_argument("witness does not satisfy the relation");
            auto ctx = relation_context(p, run.crs, x);
            auto tr = emulate_relation(ctx, w, random_bits(p.lambda, rng), rng);
            std::tie(run.alpha, run.zeta) = commit_zero_then_equivocate(run.crs, tr.views, rng);
            break;
        }
        case HybridId::H4:
        case HybridId::H5: {
            auto sim = simulate(p, x, seed);
            run.crs = sim.crs;
            if (id == HybridId::H5) {
                run.alpha = sim.alpha;
                run.zeta = sim.zeta;
            } else {
                std::vector<View> views;
                for (const auto& z : sim.zeta.zeta) views.push_back(z.view);
                std::tie(run.alpha, run.zeta) = commit_zero_then_equivocate(run.crs, views, rng);
            }
            break;
        }
    }
    run.state = respond_superposition(run.zeta, query);
    return run;
}

bool hybrid_well_formed(const NpParams& p, const Bits& x, const HybridRun& run) {
    if (std::abs(run.state.norm2() - 1) > 1e-9) return false;
    for (const auto& beta : all_challenges(p))
        if (!verifier_check(p, run.crs, x, run.alpha, beta, prover_respond(run.zeta, beta))) return false;
    return true;
}

double equivocation_limb_distance(const DualKey& key) {
    if (key.mode != DualMode::Hiding) throw std::invalid_argument("equivocation needs a hiding key");
    uint64_t q = key.params.q;
    if (q > 4096) throw std::invalid_argument("group too large for exhaustive limb comparison");
    double worst = 0;
    for (uint64_t m = 0; m < (uint64_t{1} << key.params.limb_bits()); m++) {
        std::map<std::pair<Commitment, uint64_t>, long> diff;
        for (uint64_t r = 0; r < q; r++) {
            diff[{commit_dual(key, m, r), r}]++;
            Commitment c0 = commit_dual(key, 0, r);
            Opening op = equivocate(key, c0, {0, r}, m);
            if (!verify_dual(key, c0, op)) return 1.0;
            diff[{c0, op.randomness}]--;
        }
        long s = 0;
        for (const auto& [k, d] : diff) s += std::labs(d);
        worst = std::max(worst, 0.5 * (double)s / (double)q);
    }
    return worst;
}

ViewSource real_view_source(const NpParams& p, const CrsNp& crs, const Bits& x, const Bits& w) {
    return view_source(relation_context(p, crs, x), w, p.lambda, {});
}

ViewSource simulated_view_source(const NpParams& p, const CrsNp& crs, const Bits& x) {
    auto rstar = opening_to_one(p, crs);
    if (!rstar) throw std::invalid_argument("CRS commitment does not open to 1");
    return view_source(relation_context(p, crs, x), {}, p.relation.witness_bits, int_bits(*rstar, p.lambda));
}

HybridDistance hybrid_distance(HybridId a, HybridId b, const NpParams& p, const Bits& x, const Bits& w,
                               const std::vector<SuperpositionChallenge>& queries) {
    if ((int)a > (int)b) std::swap(a, b);
    HybridDistance out;
    if (a == b) {
        out.method = "identical experiment";
        return out;
    }
    auto crs = setup_with(p, DualMode::Hiding, 1, 1);
    if ((a == HybridId::H2 && b == HybridId::H3) || (a == HybridId::H4 && b == HybridId::H5)) {
        // Views have the same law on both sides; each limb's (commitment, opening) pair is
        // drawn independently, so the per-limb distance bounds the joint one.
        auto ctx = relation_context(p, crs, x);
        Rng rng(3, 3);
        auto tr = emulate_relation(ctx, Bits(p.relation.witness_bits, 0), Bits(p.lambda, 0), rng);
        size_t limbs = 0;
        for (const auto& v : tr.views) limbs += bytes_to_limbs(serialize_view(v), p.group.limb_bits()).size();
        out.distance = std::min(1.0, equivocation_limb_distance(crs.dual) * (double)limbs);
        out.exact = out.distance == 0;
        out.method = "per-limb exhaustive";
        return out;
    }
    if (a == HybridId::H3 && b == HybridId::H4) {
        // Commitments to 0 and the equivocation map are common to both; only the view source differs.
        auto real = probe_affine(real_view_source(p, crs, x, w), 16, 5);
        auto sim = probe_affine(simulated_view_source(p, crs, x), 16, 5);
        out.method = "affine view marginals";
        if (!real || !sim) {
            out.distance = 1;
            out.exact = false;
            out.method = "view source not affine";
            return out;
        }
        for (const auto& q : queries) {
            QueryState qs;
            for (const auto& [beta, amp] : q.terms) {
                size_t len = 0;
                for (int i : beta) len += real->view_len[i - 1];
                qs.terms.push_back({0, beta, Bits(len, 0), amp});
            }
            auto d = affine_query_distance(*real, *sim, qs);
            out.distance = std::max(out.distance, d.distance);
            if (!d.exact) out.exact = false;
        }
        return out;
    }
    throw std::invalid_argument("only adjacent statistical pairs (H2,H3), (H3,H4), (H4,H5) are compared");
}

}  // namespace zkmitqh
