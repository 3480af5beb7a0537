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

#include "zkmitqh/sharing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include <Eigen/Eigenvalues>

#include "zkmitqh/gf.hpp"

namespace zkmitqh {

std::string bits_to_string(const Bits& b) {
    std::string s(b.size(), '0');
    for (size_t i = 0; i < b.size(); i++) s[i] = b[i] ? '1' : '0';
    return s;
}

Bits SharingScheme::view_of(uint64_t s, const Bits& r, const PartySet& a) const {
    auto vs = views(s, r);
    Bits out;
    for (int i : a) out.insert(out.end(), vs[i - 1].begin(), vs[i - 1].end());
    return out;
}

ViewSource SharingScheme::source(uint64_t s) const {
    ViewSource src;
    src.n = n;
    src.rand_bits = rand_bits;
    auto fn = share_views;
    src.views = [fn, s](const Bits& r) { return fn(s, r); };
    return src;
}

std::vector<Bits> share_xor(const Bits& secret, int n, Rng& rng) {
    if (n < 2) throw std::invalid_argument("xor sharing needs at least two parties");
    std::vector<Bits> shares(n, Bits(secret.size(), 0));
    Bits last = secret;
    for (int i = 0; i < n - 1; i++)
        for (size_t j = 0; j < secret.size(); j++) {
            shares[i][j] = rng.bit();
            last[j] ^= shares[i][j];
        }
    shares[n - 1] = last;
    return shares;
}

Bits reconstruct_xor(const std::vector<Bits>& shares) {
    if (shares.empty()) return {};
    Bits out(shares[0].size(), 0);
    for (const auto& s : shares) {
        if (s.size() != out.size()) throw std::invalid_argument("share lengths differ");
        for (size_t j = 0; j < out.size(); j++) out[j] ^= s[j];
    }
    return out;
}

SharingScheme xor_scheme(int n, int secret_bits) {
    if (n < 2) throw std::invalid_argument("xor sharing needs at least two parties");
    SharingScheme s;
    s.name = "xor";
    s.n = n;
    s.secret_bits = secret_bits;
    s.rand_bits = (n - 1) * secret_bits;
    s.share_views = [n, secret_bits](uint64_t secret, const Bits& r) {
        std::vector<Bits> v(n, Bits(secret_bits, 0));
        for (int j = 0; j < secret_bits; j++) v[n - 1][j] = (secret >> j) & 1;
        for (int i = 0; i < n - 1; i++)
            for (int j = 0; j < secret_bits; j++) {
                v[i][j] = r[i * secret_bits + j];
                v[n - 1][j] ^= v[i][j];
            }
        return v;
    };
    return s;
}

SharingScheme shamir_scheme(int n, int t, int k) {
    Gf2k f(k);
    if ((int)f.size() <= n) throw std::invalid_argument("field too small for the party count");
    SharingScheme s;
    s.name = "shamir";
    s.n = n;
    s.secret_bits = k;
    s.rand_bits = t * k;
    s.share_views = [n, t, k, f](uint64_t secret, const Bits& r) {
        std::vector<uint32_t> coeffs(t + 1);
        coeffs[0] = (uint32_t)secret & (f.size() - 1);
        for (int l = 0; l < t; l++)
            for (int b = 0; b < k; b++) coeffs[1 + l] |= (uint32_t)r[l * k + b] << b;
        std::vector<Bits> v(n, Bits(k, 0));
        for (int i = 1; i <= n; i++) {
            uint32_t y = f.eval_poly(coeffs, (uint32_t)i);
            for (int b = 0; b < k; b++) v[i - 1][b] = (y >> b) & 1;
        }
        return v;
    };
    return s;
}

// --- adversary structures ---

namespace {
void subsets_rec(int n, int size, int from, PartySet& cur, std::vector<PartySet>& out) {
    out.push_back(cur);
    if ((int)cur.size() == size) return;
    for (int i = from; i <= n; i++) {
        cur.push_back(i);
        subsets_rec(n, size, i + 1, cur, out);
        cur.pop_back();
    }
}
}  // namespace

AdversaryStructure AdversaryStructure::subsets_up_to(int n, int size) {
    AdversaryStructure f;
    PartySet cur;
    subsets_rec(n, size, 1, cur, f.family);
    std::sort(f.family.begin(), f.family.end(),
              [](const PartySet& a, const PartySet& b) { return a.size() != b.size() ? a.size() < b.size() : a < b; });
    return f;
}

AdversaryStructure AdversaryStructure::singletons(int n, bool with_empty) {
    AdversaryStructure f;
    if (with_empty) f.family.push_back({});
    for (int i = 1; i <= n; i++) f.family.push_back({i});
    return f;
}

bool AdversaryStructure::contains(const PartySet& a) const {
    return std::find(family.begin(), family.end(), a) != family.end();
}

AdversaryStructure AdversaryStructure::closure() const {
    std::vector<PartySet> out;
    for (const auto& a : family) {
        for (uint64_t m = 0; m < (uint64_t{1} << a.size()); m++) {
            PartySet sub;
            for (size_t i = 0; i < a.size(); i++)
                if ((m >> i) & 1) sub.push_back(a[i]);
            out.push_back(sub);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return AdversaryStructure{out};
}

AdversaryStructure AdversaryStructure::squared() const {
    std::vector<PartySet> out;
    for (const auto& a : family)
        for (const auto& b : family) {
            PartySet u;
            std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(u));
            out.push_back(u);
        }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return AdversaryStructure{out};
}

// --- queries ---

double QueryState::norm2() const {
    // terms with equal keys add coherently
    std::map<std::tuple<uint32_t, PartySet, Bits>, cplx> acc;
    for (const auto& t : terms) acc[{t.env, t.set, t.mask}] += t.amp;
    double s = 0;
    for (const auto& [k, a] : acc) s += std::norm(a);
    return s;
}

void QueryState::normalize() {
    double n2 = norm2();
    if (n2 <= 0) throw std::invalid_argument("zero query");
    double inv = 1.0 / std::sqrt(n2);
    for (auto& t : terms) t.amp *= inv;
}

namespace {
size_t view_length(const SharingScheme& s, const PartySet& a) {
    return s.view_of(0, Bits(s.rand_bits, 0), a).size();
}

std::string set_string(const PartySet& a) {
    std::string s = "{";
    for (size_t i = 0; i < a.size(); i++) s += (i ? "," : "") + std::to_string(a[i]);
    return s + "}";
}

cplx gaussian_amp(Rng& rng) {
    double u1 = std::max(rng.uniform(), 1e-300), u2 = rng.uniform();
    double rad = std::sqrt(-2 * std::log(u1));
    return {rad * std::cos(2 * M_PI * u2), rad * std::sin(2 * M_PI * u2)};
}
}  // namespace

std::vector<QueryState> basis_queries(const SharingScheme& s, const AdversaryStructure& f) {
    std::vector<QueryState> out;
    for (const auto& a : f.family) {
        QueryState q;
        q.terms.push_back({0, a, Bits(view_length(s, a), 0), 1.0});
        out.push_back(q);
    }
    return out;
}

std::vector<QueryState> random_queries(const SharingScheme& s, const AdversaryStructure& f, int count, uint64_t seed,
                                       int max_terms) {
    std::vector<QueryState> out;
    if (f.family.empty()) return out;
    std::vector<size_t> lens;
    for (const auto& a : f.family) lens.push_back(view_length(s, a));
    Rng rng(seed, 0x51);
    for (int c = 0; c < count; c++) {
        QueryState q;
        int nt = 1 + (int)rng.below(max_terms);
        for (int j = 0; j < nt; j++) {
            size_t idx = rng.below(f.family.size());
            Bits mask(lens[idx]);
            for (auto& b : mask) b = rng.bit();
            q.terms.push_back({(uint32_t)rng.below(2), f.family[idx], mask, gaussian_amp(rng)});
        }
        q.normalize();
        out.push_back(q);
    }
    return out;
}

// --- enumerative engine ---

double LabeledDensity::trace() const {
    cplx s = 0;
    for (int k = 0; k < m.outerSize(); ++k)
        for (Eigen::SparseMatrix<cplx>::InnerIterator it(m, k); it; ++it)
            if (it.row() == it.col()) s += it.value();
    return s.real();
}

LabeledDensity adversary_state(const SharingScheme& scheme, const QueryState& query, uint64_t secret, uint64_t cap) {
    if (std::abs(query.norm2() - 1) > 1e-9) throw std::invalid_argument("query is not normalized");
    if (scheme.rand_bits >= 63 || (uint64_t{1} << scheme.rand_bits) > cap)
        throw std::invalid_argument("randomness space exceeds the enumeration cap");
    std::vector<std::string> prefix;
    for (const auto& t : query.terms) {
        if (t.mask.size() != view_length(scheme, t.set)) throw std::invalid_argument("mask length mismatch");
        prefix.push_back(std::to_string(t.env) + "|" + set_string(t.set) + "|");
    }
    uint64_t count = uint64_t{1} << scheme.rand_bits;
    double p = 1.0 / (double)count;
    std::unordered_map<std::string, int> index;
    LabeledDensity out;
    std::map<std::pair<int, int>, cplx> acc;
    Bits r(scheme.rand_bits);
    for (uint64_t ri = 0; ri < count; ri++) {
        for (int b = 0; b < scheme.rand_bits; b++) r[b] = (ri >> b) & 1;
        auto vs = scheme.views(secret, r);
        std::map<int, cplx> psi;
        for (size_t j = 0; j < query.terms.size(); j++) {
            const auto& t = query.terms[j];
            std::string lab = prefix[j];
            size_t pos = 0;
            for (int party : t.set)
                for (uint8_t bit : vs[party - 1]) lab.push_back((char)('0' + (bit ^ t.mask[pos++])));
            auto [it, fresh] = index.emplace(lab, (int)out.labels.size());
            if (fresh) out.labels.push_back(lab);
            psi[it->second] += t.amp;
        }
        for (const auto& [i, ai] : psi)
            for (const auto& [j, aj] : psi) acc[{i, j}] += p * ai * std::conj(aj);
    }
    std::vector<Eigen::Triplet<cplx>> trips;
    for (const auto& [ij, v] : acc) trips.emplace_back(ij.first, ij.second, v);
    out.m.resize((int)out.labels.size(), (int)out.labels.size());
    out.m.setFromTriplets(trips.begin(), trips.end());
    return out;
}

namespace {
struct UnionFind {
    std::vector<int> p;
    explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
    void unite(int a, int b) { p[find(a)] = find(b); }
};
}  // namespace

double trace_distance(const LabeledDensity& a, const LabeledDensity& b) {
    std::unordered_map<std::string, int> idx;
    std::vector<int> ma(a.labels.size()), mb(b.labels.size());
    for (size_t i = 0; i < a.labels.size(); i++) ma[i] = idx.emplace(a.labels[i], (int)idx.size()).first->second;
    for (size_t i = 0; i < b.labels.size(); i++) mb[i] = idx.emplace(b.labels[i], (int)idx.size()).first->second;
    int dim = (int)idx.size();
    std::map<std::pair<int, int>, cplx> diff;
    for (int k = 0; k < a.m.outerSize(); ++k)
        for (Eigen::SparseMatrix<cplx>::InnerIterator it(a.m, k); it; ++it)
            diff[{ma[it.row()], ma[it.col()]}] += it.value();
    for (int k = 0; k < b.m.outerSize(); ++k)
        for (Eigen::SparseMatrix<cplx>::InnerIterator it(b.m, k); it; ++it)
            diff[{mb[it.row()], mb[it.col()]}] -= it.value();
    UnionFind uf(dim);
    for (const auto& [ij, v] : diff)
        if (std::abs(v) > 1e-15) uf.unite(ij.first, ij.second);
    std::map<int, std::vector<int>> comps;
    for (int i = 0; i < dim; i++) comps[uf.find(i)].push_back(i);
    std::vector<int> local(dim);
    for (auto& [root, members] : comps)
        for (size_t j = 0; j < members.size(); j++) local[members[j]] = (int)j;
    std::map<int, CMat> blocks;
    for (auto& [root, members] : comps) {
        if (members.size() > 4096) throw std::runtime_error("label component too large for dense diagonalization");
        blocks[root] = CMat::Zero(members.size(), members.size());
    }
    for (const auto& [ij, v] : diff) {
        int root = uf.find(ij.first);
        if (root != uf.find(ij.second)) continue;  // below the linking threshold
        blocks[root](local[ij.first], local[ij.second]) += v;
    }
    double s = 0;
    for (auto& [root, m] : blocks) {
        if (m.rows() == 1) {
            s += std::abs(m(0, 0).real());
            continue;
        }
        CMat h = (m + m.adjoint()) / 2.0;
        Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
        s += es.eigenvalues().cwiseAbs().sum();
    }
    return s / 2;
}

// --- affine engine ---

namespace {

using Words = std::vector<uint64_t>;

Words pack(const std::vector<const Bits*>& parts) {
    size_t len = 0;
    for (auto* p : parts) len += p->size();
    Words w((len + 63) / 64, 0);
    size_t pos = 0;
    for (auto* p : parts)
        for (uint8_t b : *p) {
            if (b) w[pos / 64] |= uint64_t{1} << (pos % 64);
            pos++;
        }
    return w;
}

bool is_zero(const Words& w) {
    for (auto x : w)
        if (x) return false;
    return true;
}

void xor_into(Words& a, const Words& b) {
    for (size_t i = 0; i < a.size(); i++) a[i] ^= b[i];
}

int lowest_bit(const Words& w) {
    for (size_t i = 0; i < w.size(); i++)
        if (w[i]) return (int)(i * 64 + __builtin_ctzll(w[i]));
    return -1;
}

// Row-reduced basis keyed by pivot bit.
struct Basis {
    std::map<int, Words> rows;
    void reduce(Words& v) const {
        for (;;) {
            int lb = lowest_bit(v);
            if (lb < 0) return;
            auto it = rows.find(lb);
            if (it == rows.end()) return;
            xor_into(v, it->second);
        }
    }
    bool insert(Words v) {
        reduce(v);
        int lb = lowest_bit(v);
        if (lb < 0) return false;
        rows[lb] = v;
        return true;
    }
    bool contains(Words v) const {
        reduce(v);
        return is_zero(v);
    }
    int dim() const { return (int)rows.size(); }
};

struct Coset {
    Words offset;
    Basis span;
};

Coset restrict_to(const AffineModel& m, const PartySet& u) {
    Coset c;
    std::vector<const Bits*> parts;
    for (int i : u) parts.push_back(&m.offset[i - 1]);
    c.offset = pack(parts);
    for (const auto& col : m.cols) {
        parts.clear();
        for (int i : u) parts.push_back(&col[i - 1]);
        c.span.insert(pack(parts));
    }
    return c;
}

}  // namespace

std::optional<AffineModel> probe_affine(const ViewSource& src, int checks, uint64_t seed) {
    AffineModel m;
    m.n = src.n;
    Bits r(src.rand_bits, 0);
    auto v0 = src.views(r);
    if ((int)v0.size() != src.n) throw std::invalid_argument("view source returned the wrong party count");
    m.offset = v0;
    for (const auto& v : v0) m.view_len.push_back(v.size());
    for (int j = 0; j < src.rand_bits; j++) {
        r[j] = 1;
        auto vj = src.views(r);
        r[j] = 0;
        for (int i = 0; i < src.n; i++) {
            if (vj[i].size() != v0[i].size()) return std::nullopt;
            for (size_t b = 0; b < vj[i].size(); b++) vj[i][b] ^= v0[i][b];
        }
        m.cols.push_back(std::move(vj));
    }
    Rng rng(seed, 0xaf);
    for (int c = 0; c < checks; c++) {
        for (auto& b : r) b = rng.bit();
        auto got = src.views(r);
        for (int i = 0; i < src.n; i++) {
            if (got[i].size() != v0[i].size()) return std::nullopt;
            Bits want = m.offset[i];
            for (int j = 0; j < src.rand_bits; j++)
                if (r[j])
                    for (size_t b = 0; b < want.size(); b++) want[b] ^= m.cols[j][i][b];
            if (want != got[i]) return std::nullopt;
        }
    }
    return m;
}

MarginalComparison compare_marginals(const AffineModel& a, const AffineModel& b, const PartySet& u) {
    MarginalComparison out;
    for (int i : u)
        if (a.view_len[i - 1] != b.view_len[i - 1]) {
            out.tv = 1;
            return out;
        }
    Coset ca = restrict_to(a, u), cb = restrict_to(b, u);
    Words delta = ca.offset;
    xor_into(delta, cb.offset);
    Basis sum = ca.span;
    for (const auto& [k, row] : cb.span.rows) sum.insert(row);
    int da = ca.span.dim(), db = cb.span.dim(), ds = sum.dim();
    bool meet = sum.contains(delta);
    if (!meet) {
        out.tv = 1;
        return out;
    }
    int dint = da + db - ds;
    // uniform on cosets of sizes 2^da, 2^db meeting in 2^dint points
    out.tv = 1.0 - std::ldexp(1.0, dint - std::max(da, db));
    out.equal = (da == db && db == ds);
    if (out.equal) out.tv = 0;
    return out;
}

AffineDistance affine_query_distance(const AffineModel& a, const AffineModel& b, const QueryState& q) {
    AffineDistance out;
    double worst = 0;
    bool all_equal = true;
    for (size_t i = 0; i < q.terms.size(); i++)
        for (size_t j = i; j < q.terms.size(); j++) {
            PartySet u;
            std::set_union(q.terms[i].set.begin(), q.terms[i].set.end(), q.terms[j].set.begin(), q.terms[j].set.end(),
                           std::back_inserter(u));
            auto mc = compare_marginals(a, b, u);
            if (!mc.equal) {
                all_equal = false;
                worst = std::max(worst, mc.tv);
            }
        }
    if (all_equal) return out;
    // one distinct (env, set, mask) key: the state is classical over labels
    bool single = true;
    for (const auto& t : q.terms)
        if (t.env != q.terms[0].env || t.set != q.terms[0].set || t.mask != q.terms[0].mask) single = false;
    out.distance = worst;
    out.exact = single;
    return out;
}

SecurityReport check_superposition_security(const SharingScheme& scheme, const AdversaryStructure& f,
                                            const std::vector<uint64_t>& secrets, const SecurityOptions& opt) {
    SecurityReport rep;
    auto qs = basis_queries(scheme, f);
    auto rq = random_queries(scheme, f, opt.random_queries, opt.seed);
    size_t nbasis = qs.size();
    qs.insert(qs.end(), rq.begin(), rq.end());
    rep.queries = (int)qs.size();
    auto describe = [&](size_t k) {
        if (k < nbasis) return "basis query on " + set_string(qs[k].terms[0].set);
        return "random query " + std::to_string(k - nbasis) + " (seed " + std::to_string(opt.seed) + ")";
    };
    bool enumerable = scheme.rand_bits < 63 && (uint64_t{1} << scheme.rand_bits) <= opt.cap;
    if (enumerable && !opt.force_affine) {
        rep.engine = "enumerative";
        for (size_t k = 0; k < qs.size(); k++) {
            std::vector<LabeledDensity> rhos;
            for (uint64_t s : secrets) rhos.push_back(adversary_state(scheme, qs[k], s, opt.cap));
            for (size_t i = 0; i < secrets.size(); i++)
                for (size_t j = i + 1; j < secrets.size(); j++) {
                    double d = trace_distance(rhos[i], rhos[j]);
                    if (d > rep.max_distance) {
                        rep.max_distance = d;
                        rep.witness = describe(k);
                        rep.secret_a = secrets[i];
                        rep.secret_b = secrets[j];
                    }
                }
        }
        return rep;
    }
    rep.engine = "affine";
    std::vector<AffineModel> models;
    for (uint64_t s : secrets) {
        auto m = probe_affine(scheme.source(s), 16, opt.seed);
        if (!m) throw std::invalid_argument("randomness space exceeds the cap and the scheme is not GF(2)-affine");
        models.push_back(std::move(*m));
    }
    for (size_t k = 0; k < qs.size(); k++)
        for (size_t i = 0; i < secrets.size(); i++)
            for (size_t j = i + 1; j < secrets.size(); j++) {
                auto d = affine_query_distance(models[i], models[j], qs[k]);
                if (!d.exact) rep.exact = false;
                if (d.distance > rep.max_distance) {
                    rep.max_distance = d.distance;
                    rep.witness = describe(k);
                    rep.secret_a = secrets[i];
                    rep.secret_b = secrets[j];
                }
            }
    return rep;
}

// --- quantum capture ---

namespace {

struct CaptureLayout {
    int total_qubits = 0;
    std::vector<int> env;  // qubits held by nobody
    std::vector<int> dims; // 1 + 2^{|register|}
};

CaptureLayout layout_of(const QuantumSharing& s, int total_qubits) {
    if ((int)s.registers.size() != s.n) throw std::invalid_argument("register list does not match the party count");
    CaptureLayout l;
    l.total_qubits = total_qubits;
    std::vector<int> owner(total_qubits, 0);
    for (int i = 0; i < s.n; i++) {
        for (int q : s.registers[i]) {
            if (q < 0 || q >= total_qubits || owner[q]) throw std::invalid_argument("register mismatch");
            owner[q] = i + 1;
        }
        l.dims.push_back(1 + (1 << s.registers[i].size()));
    }
    for (int q = 0; q < total_qubits; q++)
        if (!owner[q]) l.env.push_back(q);
    return l;
}

uint64_t extract(uint64_t index, int nq, const std::vector<int>& qubits) {
    uint64_t v = 0;
    for (int q : qubits) v = (v << 1) | ((index & qubit_mask(nq, q)) ? 1 : 0);
    return v;
}

// Output amplitudes grouped by the traced-out configuration (positions + environment).
using Groups = std::map<std::pair<uint64_t, uint64_t>, std::map<uint64_t, cplx>>;

Groups capture_groups(const QuantumSharing& s, const StateVector& shared, const CaptureQuery& q, uint64_t* slot_dim) {
    auto l = layout_of(s, shared.num_qubits);
    uint64_t sd = 1;
    for (int d : l.dims) sd *= d;
    *slot_dim = sd;
    Groups g;
    for (size_t k = 0; k < q.terms.size(); k++) {
        std::vector<bool> in(s.n + 1, false);
        for (int i : q.terms[k].first) {
            if (i < 1 || i > s.n) throw std::invalid_argument("query set names an unknown party");
            in[i] = true;
        }
        for (uint64_t b = 0; b < (uint64_t)shared.amp.size(); b++) {
            cplx a = shared.amp[b];
            if (a == cplx(0)) continue;
            uint64_t pos = 0, slot = 0;
            for (int i = 1; i <= s.n; i++) {
                uint64_t v = 1 + extract(b, shared.num_qubits, s.registers[i - 1]);
                pos = pos * l.dims[i - 1] + (in[i] ? 0 : v);
                slot = slot * l.dims[i - 1] + (in[i] ? v : 0);
            }
            uint64_t envv = extract(b, shared.num_qubits, l.env);
            g[{pos, envv}][k * sd + slot] += q.terms[k].second * a;
        }
    }
    return g;
}

}  // namespace

CMat capture_attack_state(const QuantumSharing& scheme, const StateVector& shared, const CaptureQuery& q) {
    uint64_t sd = 0;
    auto g = capture_groups(scheme, shared, q, &sd);
    uint64_t dim = sd * q.terms.size();
    if (dim > 8192) throw std::invalid_argument("capture output too large");
    CMat rho = CMat::Zero(dim, dim);
    for (const auto& [key, vec] : g)
        for (const auto& [i, ai] : vec)
            for (const auto& [j, aj] : vec) rho(i, j) += ai * std::conj(aj);
    return rho;
}

double capture_output_norm(const QuantumSharing& scheme, const StateVector& shared, const CaptureQuery& q) {
    uint64_t sd = 0;
    auto g = capture_groups(scheme, shared, q, &sd);
    double s = 0;
    for (const auto& [key, vec] : g)
        for (const auto& [i, a] : vec) s += std::norm(a);
    return std::sqrt(s);
}

std::vector<StateVector> spanning_qubit_states() {
    double h = 1 / std::sqrt(2.0);
    return {StateVector(1, (CVec(2) << 1, 0).finished()), StateVector(1, (CVec(2) << 0, 1).finished()),
            StateVector(1, (CVec(2) << h, h).finished()), StateVector(1, (CVec(2) << h, cplx(0, h)).finished())};
}

SecurityReport check_capture_security(const QuantumSharing& scheme, const AdversaryStructure& f, int random_queries,
                                      uint64_t seed) {
    SecurityReport rep;
    rep.engine = "capture";
    auto base = spanning_qubit_states();
    std::vector<StateVector> secrets = {StateVector(0, CVec::Ones(1))};
    for (int q = 0; q < scheme.secret_qubits; q++) {
        std::vector<StateVector> next;
        for (const auto& s : secrets)
            for (const auto& b : base) next.push_back(q == 0 ? b : s.tensor(b));
        secrets = next;
    }
    std::vector<CaptureQuery> qs;
    for (const auto& a : f.family) qs.push_back(CaptureQuery{{{a, 1.0}}});
    size_t nbasis = qs.size();
    Rng rng(seed, 0xca);
    for (int c = 0; c < random_queries && !f.family.empty(); c++) {
        CaptureQuery q;
        double n2 = 0;
        for (const auto& a : f.family) {
            cplx z = gaussian_amp(rng);
            q.terms.push_back({a, z});
            n2 += std::norm(z);
        }
        for (auto& t : q.terms) t.second /= std::sqrt(n2);
        qs.push_back(q);
    }
    rep.queries = (int)qs.size();
    std::vector<StateVector> shared;
    for (const auto& s : secrets) shared.push_back(scheme.share(s));
    for (size_t k = 0; k < qs.size(); k++) {
        std::vector<CMat> rhos;
        for (const auto& sh : shared) rhos.push_back(capture_attack_state(scheme, sh, qs[k]));
        for (size_t i = 0; i < rhos.size(); i++)
            for (size_t j = i + 1; j < rhos.size(); j++) {
                double d = trace_distance(rhos[i], rhos[j]);
                if (d > rep.max_distance) {
                    rep.max_distance = d;
                    rep.witness = k < nbasis ? "basis query on " + set_string(qs[k].terms[0].first)
                                             : "random query " + std::to_string(k - nbasis);
                    rep.secret_a = i;
                    rep.secret_b = j;
                }
            }
    }
    return rep;
}

}  // namespace zkmitqh
