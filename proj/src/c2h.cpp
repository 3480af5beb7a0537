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


#include "zkmitqh/c2h.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

namespace zkmitqh {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw std::invalid_argument(msg); }

CMat proj(int bit) {
    CMat p = CMat::Zero(2, 2);
    p(bit, bit) = 1;
    return p;
}

CMat ket_bra(int k, uint64_t row, uint64_t col) {
    CMat m = CMat::Zero(int64_t{1} << k, int64_t{1} << k);
    m(row, col) = 1;
    return m;
}

uint64_t extract(uint64_t idx, int n, const std::vector<int>& support) {
    uint64_t v = 0;
    for (int q : support) v = (v << 1) | ((idx & qubit_mask(n, q)) ? 1 : 0);
    return v;
}

uint64_t deposit(uint64_t idx, int n, const std::vector<int>& support, uint64_t v) {
    int k = (int)support.size();
    for (int j = 0; j < k; j++) {
        uint64_t m = qubit_mask(n, support[j]);
        if (v & (uint64_t{1} << (k - 1 - j)))
            idx |= m;
        else
            idx &= ~m;
    }
    return idx;
}

// H restricted to span{basis}. `leak` collects weight that falls outside.
CMat build_block(const LocalHamiltonian& h, const std::vector<uint64_t>& basis, double* leak) {
    int n = h.num_qubits;
    std::vector<int32_t> pos(size_t{1} << n, -1);
    for (size_t i = 0; i < basis.size(); i++) pos[basis[i]] = (int32_t)i;
    CMat m = CMat::Zero(basis.size(), basis.size());
    double lk = 0;
    for (const LocalTerm& t : h.terms) {
        uint64_t local = uint64_t{1} << t.support.size();
        for (size_t c = 0; c < basis.size(); c++) {
            uint64_t j = basis[c];
            uint64_t lj = extract(j, n, t.support);
            for (uint64_t li = 0; li < local; li++) {
                cplx v = t.op(li, lj);
                if (v == cplx(0)) continue;
                uint64_t i = deposit(j, n, t.support, li);
                if (pos[i] < 0)
                    lk += std::norm(v);
                else
                    m(pos[i], c) += v;
            }
        }
    }
    if (leak) *leak = lk;
    return m;
}

CMat gate_t() {
    CMat m = CMat::Identity(2, 2);
    m(1, 1) = std::polar(1.0, M_PI / 4);
    return m;
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string w;
    while (is >> w) out.push_back(w);
    return out;
}

int parse_int(const std::string& s, int line) {
    try {
        size_t used = 0;
        int v = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        bad("line " + std::to_string(line) + ": expected integer, got '" + s + "'");
    }
}

}  // namespace

bool AltAccept::empty() const { return qubits.empty(); }

CMat named_gate(const std::string& name) {
    if (name == "I") return gates::I2();
    if (name == "X") return gates::X();
    if (name == "Y") return gates::Y();
    if (name == "Z") return gates::Z();
    if (name == "H") return gates::H();
    if (name == "S") return gates::S();
    if (name == "T") return gate_t();
    if (name == "CNOT" || name == "CX") return gates::CNOT();
    if (name == "CZ") return gates::CZ();
    if (name == "SWAP") return gates::SWAP();
    bad("unknown gate '" + name + "'");
}

bool QCircuit::is_witness(int q) const { return std::find(witness.begin(), witness.end(), q) != witness.end(); }

QGate& QCircuit::add(const std::string& name, std::vector<int> targets) {
    gates.push_back({name, named_gate(name), std::move(targets)});
    return gates.back();
}

QGate& QCircuit::add(CMat u, std::vector<int> targets, std::string name) {
    gates.push_back({std::move(name), std::move(u), std::move(targets)});
    return gates.back();
}

void QCircuit::validate() const {
    int m = num_data_qubits;
    if (m < 1) bad("circuit needs at least one data qubit");
    if (gates.empty()) bad("circuit needs at least one gate");
    auto in_range = [m](int q) { return q >= 0 && q < m; };
    auto distinct = [](std::vector<int> v) {
        std::sort(v.begin(), v.end());
        return std::adjacent_find(v.begin(), v.end()) == v.end();
    };
    for (size_t g = 0; g < gates.size(); g++) {
        const QGate& gt = gates[g];
        std::string where = "gate " + std::to_string(g + 1) + " (" + gt.name + "): ";
        if (gt.targets.empty() || gt.targets.size() > 2) bad(where + "acts on 1 or 2 qubits");
        for (int q : gt.targets)
            if (!in_range(q)) bad(where + "target out of range");
        if (!distinct(gt.targets)) bad(where + "repeated target");
        int64_t d = int64_t{1} << gt.targets.size();
        if (gt.u.rows() != d || gt.u.cols() != d) bad(where + "matrix size");
        if (!is_unitary(gt.u, 1e-9)) bad(where + "not unitary");
    }
    if (!in_range(output)) bad("output qubit out of range");
    for (int q : witness)
        if (!in_range(q)) bad("witness qubit out of range");
    if (!distinct(witness)) bad("repeated witness qubit");
    for (int q : alt.qubits) {
        if (!in_range(q)) bad("alt qubit out of range");
        if (q == output) bad("alt qubits must not include the output");
    }
    if (!distinct(alt.qubits)) bad("repeated alt qubit");
    if (!alt.qubits.empty() && alt.accept.size() != (size_t{1} << alt.qubits.size()))
        bad("alt truth table size");
}

StateVector run_circuit(const QCircuit& c, const StateVector& input, int upto) {
    if (input.num_qubits != c.num_data_qubits) bad("input does not match the data register");
    if (upto < 0 || upto > c.depth()) upto = c.depth();
    CVec a = input.amp;
    for (int g = 0; g < upto; g++) apply_unitary_inplace(a, c.num_data_qubits, c.gates[g].u, c.gates[g].targets);
    return StateVector(c.num_data_qubits, std::move(a));
}

std::vector<double> accept_mask(const QCircuit& c) {
    int m = c.num_data_qubits;
    std::vector<double> mask(size_t{1} << m, 0.0);
    for (uint64_t i = 0; i < mask.size(); i++) {
        bool ok = i & qubit_mask(m, c.output);
        if (!ok && !c.alt.empty()) ok = c.alt.accept[extract(i, m, c.alt.qubits)] != 0;
        mask[i] = ok ? 1.0 : 0.0;
    }
    return mask;
}

double acceptance_probability(const QCircuit& c, const StateVector& input) {
    StateVector out = run_circuit(c, input);
    std::vector<double> mask = accept_mask(c);
    double p = 0;
    for (uint64_t i = 0; i < mask.size(); i++) p += mask[i] * std::norm(out.amp[i]);
    return p;
}

QCircuit pad_identities(const QCircuit& c, int count, bool at_front) {
    QCircuit out = c;
    std::vector<QGate> pad(count, QGate{"I", gates::I2(), {c.output}});
    if (at_front)
        out.gates.insert(out.gates.begin(), pad.begin(), pad.end());
    else
        out.gates.insert(out.gates.end(), pad.begin(), pad.end());
    return out;
}

QCircuit parse_qcircuit(const std::string& text) {
    QCircuit c;
    std::istringstream is(text);
    std::string raw;
    int line = 0;
    bool have_qubits = false, have_output = false;
    while (std::getline(is, raw)) {
        line++;
        std::string s = raw.substr(0, raw.find('#'));
        std::vector<std::string> w = split_ws(s);
        if (w.empty()) continue;
        std::string at = "line " + std::to_string(line) + ": ";
        const std::string& d = w[0];
        if (d == "qubits") {
            if (w.size() != 2) bad(at + "qubits takes one count");
            c.num_data_qubits = parse_int(w[1], line);
            have_qubits = true;
        } else if (d == "output") {
            if (w.size() != 2) bad(at + "output takes one qubit");
            c.output = parse_int(w[1], line);
            have_output = true;
        } else if (d == "witness") {
            for (size_t i = 1; i < w.size(); i++) c.witness.push_back(parse_int(w[i], line));
        } else if (d == "alt") {
            auto colon = std::find(w.begin(), w.end(), ":");
            if (colon == w.end()) bad(at + "alt needs ':' before accepted patterns");
            for (auto it = w.begin() + 1; it != colon; ++it) c.alt.qubits.push_back(parse_int(*it, line));
            c.alt.accept.assign(size_t{1} << c.alt.qubits.size(), 0);
            for (auto it = colon + 1; it != w.end(); ++it) {
                if (it->size() != c.alt.qubits.size()) bad(at + "pattern width");
                uint64_t v = 0;
                for (char ch : *it) {
                    if (ch != '0' && ch != '1') bad(at + "pattern must be binary");
                    v = (v << 1) | (uint64_t)(ch - '0');
                }
                c.alt.accept[v] = 1;
            }
        } else if (d == "gate") {
            if (w.size() < 3) bad(at + "gate needs a name and targets");
            std::vector<int> t;
            for (size_t i = 2; i < w.size(); i++) t.push_back(parse_int(w[i], line));
            try {
                c.add(w[1], t);
            } catch (const std::invalid_argument& e) {
                bad(at + e.what());
            }
        } else if (d == "unitary") {
            auto colon = std::find(w.begin(), w.end(), ":");
            if (colon == w.end()) bad(at + "unitary needs ':' before entries");
            std::vector<int> t;
            for (auto it = w.begin() + 1; it != colon; ++it) t.push_back(parse_int(*it, line));
            int64_t dim = int64_t{1} << t.size();
            if (colon + 1 + dim * dim != w.end()) bad(at + "unitary entry count");
            CMat u(dim, dim);
            auto it = colon + 1;
            for (int64_t r = 0; r < dim; r++)
                for (int64_t k = 0; k < dim; k++, ++it) {
                    double re = 0, im = 0;
                    if (std::sscanf(it->c_str(), "%lf,%lf", &re, &im) != 2) bad(at + "entry must be re,im");
                    u(r, k) = cplx(re, im);
                }
            c.add(u, t);
        } else {
            bad(at + "unknown directive '" + d + "'");
        }
    }
    if (!have_qubits) bad("missing 'qubits' line");
    if (!have_output) bad("missing 'output' line");
    c.validate();
    return c;
}

std::string format_qcircuit(const QCircuit& c) {
    std::ostringstream os;
    os << "qubits " << c.num_data_qubits << "\n";
    os << "output " << c.output << "\n";
    os << "witness";
    for (int q : c.witness) os << " " << q;
    os << "\n";
    if (!c.alt.empty()) {
        os << "alt";
        for (int q : c.alt.qubits) os << " " << q;
        os << " :";
        int k = (int)c.alt.qubits.size();
        for (uint64_t v = 0; v < c.alt.accept.size(); v++) {
            if (!c.alt.accept[v]) continue;
            os << " ";
            for (int j = k - 1; j >= 0; j--) os << ((v >> j) & 1);
        }
        os << "\n";
    }
    char buf[64];
    for (const QGate& g : c.gates) {
        bool named = false;
        try {
            named = (named_gate(g.name) - g.u).norm() == 0;
        } catch (const std::invalid_argument&) {
        }
        if (named) {
            os << "gate " << g.name;
            for (int q : g.targets) os << " " << q;
        } else {
            os << "unitary";
            for (int q : g.targets) os << " " << q;
            os << " :";
            for (int64_t r = 0; r < g.u.rows(); r++)
                for (int64_t k = 0; k < g.u.cols(); k++) {
                    std::snprintf(buf, sizeof buf, " %.17g,%.17g", g.u(r, k).real(), g.u(r, k).imag());
                    os << buf;
                }
        }
        os << "\n";
    }
    return os.str();
}

int LocalHamiltonian::locality() const {
    int k = 0;
    for (const LocalTerm& t : terms) k = std::max(k, (int)t.support.size());
    return k;
}

CMat LocalHamiltonian::dense() const {
    if (num_qubits > 12) bad("dense matrix limited to 12 qubits");
    std::vector<uint64_t> all(size_t{1} << num_qubits);
    for (uint64_t i = 0; i < all.size(); i++) all[i] = i;
    return build_block(*this, all, nullptr);
}

uint64_t clock_index(int T, int t) { return ((uint64_t{1} << (t + 1)) - 1) << (T - t); }

LocalHamiltonian compile(const QCircuit& c, int qubit_cap) {
    c.validate();
    int m = c.num_data_qubits, T = c.depth();
    if (m + T + 1 > qubit_cap)
        bad("oversized circuit: " + std::to_string(m + T + 1) + " qubits exceeds cap " + std::to_string(qubit_cap));
    if (c.alt.qubits.size() > 3) bad("alt condition on more than 3 qubits breaks 5-locality");
    LocalHamiltonian h;
    h.num_qubits = m + T + 1;
    h.num_data_qubits = m;
    for (int j = 0; j <= T; j++) h.clock.push_back(m + j);
    const std::vector<int>& ck = h.clock;

    h.terms.push_back({"in", {ck[0]}, proj(0)});
    CMat time0 = kron(proj(1), proj(0));
    for (int q = 0; q < m; q++)
        if (!c.is_witness(q)) h.terms.push_back({"in", {q, ck[0], ck[1]}, kron(proj(1), time0)});

    CMat bad_pair = kron(proj(0), proj(1));
    for (int j = 0; j < T; j++) h.terms.push_back({"clock", {ck[j], ck[j + 1]}, bad_pair});

    for (int t = 1; t <= T; t++) {
        const QGate& g = c.gates[t - 1];
        std::vector<int> sup;
        CMat p, x;
        if (t < T) {
            sup = {ck[t - 1], ck[t], ck[t + 1]};
            p = kron(kron(proj(1), gates::I2()), proj(0));
            x = ket_bra(3, 0b110, 0b100);
        } else {
            sup = {ck[t - 1], ck[t]};
            p = kron(proj(1), gates::I2());
            x = ket_bra(2, 0b11, 0b10);
        }
        sup.insert(sup.end(), g.targets.begin(), g.targets.end());
        CMat id = CMat::Identity(g.u.rows(), g.u.cols());
        CMat xu = kron(x, g.u);
        CMat op = 0.5 * (kron(p, id) - xu - CMat(xu.adjoint()));
        h.terms.push_back({"prop", sup, op});
    }

    std::vector<int> sup = {c.output};
    CMat mid = CMat::Identity(1, 1);
    if (!c.alt.empty()) {
        sup.insert(sup.end(), c.alt.qubits.begin(), c.alt.qubits.end());
        mid = CMat::Zero(c.alt.accept.size(), c.alt.accept.size());
        for (size_t v = 0; v < c.alt.accept.size(); v++) mid(v, v) = c.alt.accept[v] ? 0.0 : 1.0;
    }
    sup.push_back(ck[T]);
    if (mid.norm() > 0) h.terms.push_back({"out", sup, kron(kron(proj(0), mid), proj(1))});
    return h;
}

StateVector history_state(const QCircuit& c, const StateVector& input) {
    c.validate();
    if (input.num_qubits != c.num_data_qubits) bad("input does not match the data register");
    int m = c.num_data_qubits, T = c.depth();
    CVec out = CVec::Zero(int64_t{1} << (m + T + 1));
    CVec a = input.amp / std::sqrt(input.norm2());
    double w = 1.0 / std::sqrt((double)(T + 1));
    for (int t = 0; t <= T; t++) {
        if (t > 0) apply_unitary_inplace(a, m, c.gates[t - 1].u, c.gates[t - 1].targets);
        uint64_t ci = clock_index(T, t);
        for (int64_t d = 0; d < a.size(); d++) out[((uint64_t)d << (T + 1)) | ci] += w * a[d];
    }
    return StateVector(m + T + 1, std::move(out));
}

LocalHamiltonian add_constant(LocalHamiltonian h, double c) {
    h.terms.push_back({"const", {}, CMat::Constant(1, 1, c)});
    return h;
}

CVec apply(const LocalHamiltonian& h, const CVec& v) {
    int n = h.num_qubits;
    if (v.size() != (int64_t{1} << n)) bad("vector does not match the Hamiltonian");
    CVec out = CVec::Zero(v.size());
    for (const LocalTerm& t : h.terms) {
        uint64_t local = uint64_t{1} << t.support.size();
        for (int64_t j = 0; j < v.size(); j++) {
            if (v[j] == cplx(0)) continue;
            uint64_t lj = extract(j, n, t.support);
            for (uint64_t li = 0; li < local; li++) {
                cplx e = t.op(li, lj);
                if (e != cplx(0)) out[deposit(j, n, t.support, li)] += e * v[j];
            }
        }
    }
    return out;
}

double energy(const LocalHamiltonian& h, const StateVector& s) { return s.amp.dot(zkmitqh::apply(h, s.amp)).real(); }

std::vector<PauliTerm> pauli_decompose_local(const CMat& op, const std::vector<int>& support, int num_qubits) {
    int k = (int)support.size();
    uint64_t local = uint64_t{1} << k;
    std::vector<PauliTerm> out;
    static const char kL[4] = {'I', 'X', 'Y', 'Z'};
    uint64_t nstr = uint64_t{1} << (2 * k);
    for (uint64_t code = 0; code < nstr; code++) {
        std::string letters(k, 'I');
        uint64_t xmask = 0;
        for (int j = 0; j < k; j++) {
            letters[j] = kL[(code >> (2 * (k - 1 - j))) & 3];
            if (letters[j] == 'X' || letters[j] == 'Y') xmask |= uint64_t{1} << (k - 1 - j);
        }
        // Tr[P op] = sum_r P(r, r^x) op(r^x, r)
        cplx tr = 0;
        for (uint64_t r = 0; r < local; r++) {
            cplx ph = 1;
            for (int j = 0; j < k; j++) {
                int bit = (r >> (k - 1 - j)) & 1;
                if (letters[j] == 'Y') ph *= bit ? cplx(0, 1) : cplx(0, -1);
                if (letters[j] == 'Z' && bit) ph = -ph;
            }
            tr += ph * op(r ^ xmask, r);
        }
        tr /= (double)local;
        if (std::abs(tr.imag()) > 1e-9) bad("term is not Hermitian");
        if (std::abs(tr.real()) < 1e-14) continue;
        std::string full(num_qubits, 'I');
        for (int j = 0; j < k; j++) full[support[j]] = letters[j];
        out.push_back({tr.real(), PauliString(full)});
    }
    return out;
}

std::vector<PauliTerm> pauli_decompose(const LocalHamiltonian& h) {
    std::map<std::string, double> acc;
    for (const LocalTerm& t : h.terms)
        for (const PauliTerm& p : pauli_decompose_local(t.op, t.support, h.num_qubits)) acc[p.s.letters] += p.d;
    std::vector<PauliTerm> out;
    for (const auto& [s, d] : acc)
        if (std::abs(d) >= 1e-14) out.push_back({d, PauliString(s)});
    return out;
}

CMat pauli_sum(const std::vector<PauliTerm>& terms) {
    if (terms.empty()) bad("empty Pauli sum");
    int n = terms[0].s.size();
    CMat m = CMat::Zero(int64_t{1} << n, int64_t{1} << n);
    for (const PauliTerm& t : terms) m += t.d * pauli_matrix(t.s);
    return m;
}

RescaledHamiltonian rescale(const std::vector<PauliTerm>& decomposed, IdentityMode mode) {
    RescaledHamiltonian hp;
    hp.mode = mode;
    bool nontrivial = false;
    for (const PauliTerm& t : decomposed) {
        if (t.d == 0) continue;
        if (t.s.is_identity()) {
            if (mode == IdentityMode::Offset) {
                hp.offset += t.d;
                continue;
            }
        } else {
            nontrivial = true;
        }
        hp.terms.push_back({std::abs(t.d), t.d > 0 ? 1 : -1, t.s});
        hp.norm1 += std::abs(t.d);
    }
    if (!nontrivial) bad("Hamiltonian has no non-identity term");
    for (RescaledTerm& t : hp.terms) t.p /= hp.norm1;
    return hp;
}

SampledTerm sample_term(const RescaledHamiltonian& hp, Rng& rng) {
    double u = rng.uniform(), acc = 0;
    for (size_t i = 0; i < hp.terms.size(); i++) {
        acc += hp.terms[i].p;
        if (u < acc) return {hp.terms[i].s, hp.terms[i].sign, i};
    }
    size_t last = hp.terms.size() - 1;
    return {hp.terms[last].s, hp.terms[last].sign, last};
}

bool check_term(StateVector& state, const PauliString& s, int sign, Rng& rng) {
    return measure_term_sample(state, s, rng) == -sign;
}

double accept_given_term(const StateVector& state, const PauliString& s, int sign) {
    TermMeasurement tm = measure_term(state, s);
    return sign > 0 ? tm.p_minus : tm.p_plus;
}

double acceptance(const RescaledHamiltonian& hp, const StateVector& s) {
    double acc = 0;
    for (const RescaledTerm& t : hp.terms) acc += t.p * accept_given_term(s, t.s, t.sign);
    return acc;
}

double acceptance(const RescaledHamiltonian& hp, const DensityMatrix& rho) {
    // Accepting projector (I - sign S)/2 applied column by column.
    double acc = 0;
    int n = rho.num_qubits;
    for (const RescaledTerm& t : hp.terms) {
        double tr = 0;
        for (int64_t j = 0; j < rho.m.cols(); j++) {
            CVec col = rho.m.col(j);
            CVec sc = apply_pauli(col, n, t.s);
            tr += 0.5 * (col[j] - (double)t.sign * sc[j]).real();
        }
        acc += t.p * tr;
    }
    return acc;
}

double h_prime_expectation(const RescaledHamiltonian& hp, const StateVector& s) {
    double e = 0;
    for (const RescaledTerm& t : hp.terms) e += t.p * 0.5 * (1.0 + t.sign * expectation(s, t.s));
    return e;
}

double h_prime_expectation(const RescaledHamiltonian& hp, const DensityMatrix& rho) {
    double tr = rho.m.trace().real();
    double e = 0;
    for (const RescaledTerm& t : hp.terms) e += t.p * 0.5 * (tr + t.sign * expectation(rho, t.s));
    return e;
}

GroundState ground_energy(const LocalHamiltonian& h, int qubit_cap) {
    int n = h.num_qubits;
    if (n > qubit_cap) bad("ground_energy: " + std::to_string(n) + " qubits exceeds cap");
    GroundState gs;
    auto solve = [&](const std::vector<uint64_t>& basis) {
        CMat m = build_block(h, basis, nullptr);
        Eigen::SelfAdjointEigenSolver<CMat> es(m);
        CVec full = CVec::Zero(int64_t{1} << n);
        for (size_t i = 0; i < basis.size(); i++) full[basis[i]] = es.eigenvectors()(i, 0);
        gs.energy = es.eigenvalues()(0);
        gs.state = StateVector(n, std::move(full));
    };

    if (!h.clock.empty()) {
        // Legal clock states span an invariant subspace. On its complement the
        // diagonal clock penalty is at least `pen`, the other terms at least `rest`.
        int T = (int)h.clock.size() - 1;
        int m = h.num_data_qubits;
        std::vector<uint64_t> basis;
        for (uint64_t d = 0; d < (uint64_t{1} << m); d++)
            for (int t = 0; t <= T; t++) basis.push_back((d << (T + 1)) | clock_index(T, t));
        double leak = 0;
        build_block(h, basis, &leak);
        if (leak < 1e-20) {
            auto clock_only = [&](const LocalTerm& t) {
                if (t.support.empty()) return false;
                for (int q : t.support)
                    if (std::find(h.clock.begin(), h.clock.end(), q) == h.clock.end()) return false;
                return (t.op - CMat(t.op.diagonal().asDiagonal())).norm() == 0;
            };
            double rest = 0;
            std::vector<const LocalTerm*> pen_terms;
            for (const LocalTerm& t : h.terms) {
                if (clock_only(t)) {
                    pen_terms.push_back(&t);
                } else {
                    Eigen::SelfAdjointEigenSolver<CMat> es(t.op, Eigen::EigenvaluesOnly);
                    rest += std::min(0.0, es.eigenvalues()(0));
                }
            }
            double pen = INFINITY;
            std::vector<bool> legal(size_t{1} << (T + 1), false);
            for (int t = 0; t <= T; t++) legal[clock_index(T, t)] = true;
            for (uint64_t cv = 0; cv < legal.size(); cv++) {
                if (legal[cv]) continue;
                uint64_t idx = cv;  // data bits zero; penalty terms ignore them
                double s = 0;
                for (const LocalTerm* t : pen_terms) {
                    uint64_t l = extract(idx, n, t->support);
                    s += t->op(l, l).real();
                }
                pen = std::min(pen, s);
            }
            solve(basis);
            if (gs.energy < pen + rest - 1e-9) {
                gs.clock_reduced = true;
                return gs;
            }
        }
    }
    if (n > 12) bad("ground_energy: no clock reduction and more than 12 qubits");
    std::vector<uint64_t> all(size_t{1} << n);
    for (uint64_t i = 0; i < all.size(); i++) all[i] = i;
    solve(all);
    return gs;
}

std::string format_pauli_terms(const std::vector<PauliTerm>& terms) {
    std::ostringstream os;
    char buf[64];
    for (const PauliTerm& t : terms) {
        std::snprintf(buf, sizeof buf, "%.17g", t.d);
        os << buf << " ";
        std::vector<int> sup = t.s.support();
        if (sup.empty()) {
            os << "I -\n";
            continue;
        }
        for (int q : sup) os << t.s.letters[q];
        os << " ";
        for (size_t i = 0; i < sup.size(); i++) os << (i ? "," : "") << sup[i];
        os << "\n";
    }
    return os.str();
}

std::vector<PauliTerm> parse_pauli_terms(const std::string& text, int num_qubits) {
    std::vector<PauliTerm> out;
    std::istringstream is(text);
    std::string raw;
    int line = 0;
    while (std::getline(is, raw)) {
        line++;
        std::vector<std::string> w = split_ws(raw.substr(0, raw.find('#')));
        if (w.empty()) continue;
        std::string at = "line " + std::to_string(line) + ": ";
        if (w.size() != 3) bad(at + "expected 'coeff letters support'");
        double d = 0;
        try {
            d = std::stod(w[0]);
        } catch (const std::exception&) {
            bad(at + "bad coefficient");
        }
        std::string full(num_qubits, 'I');
        if (w[1] != "I" || w[2] != "-") {
            std::vector<int> sup;
            std::istringstream ss(w[2]);
            std::string tok;
            while (std::getline(ss, tok, ',')) sup.push_back(parse_int(tok, line));
            if (sup.size() != w[1].size()) bad(at + "support length differs from letters");
            for (size_t i = 0; i < sup.size(); i++) {
                if (sup[i] < 0 || sup[i] >= num_qubits) bad(at + "support index out of range");
                char ch = w[1][i];
                if (ch != 'X' && ch != 'Y' && ch != 'Z') bad(at + "letters must be X, Y or Z");
                full[sup[i]] = ch;
            }
        }
        out.push_back({d, PauliString(full)});
    }
    return out;
}

namespace {

ToyCircuit toy(std::string name, QCircuit c, uint64_t input_index) {
    StateVector in = StateVector::basis(c.num_data_qubits, input_index);
    double p = acceptance_probability(c, in);
    return {std::move(name), std::move(c), std::move(in), p};
}

}  // namespace

std::vector<ToyCircuit> toy_accepting_circuits() {
    std::vector<ToyCircuit> out;
    {
        QCircuit c;
        c.num_data_qubits = 1;
        c.witness = {0};
        c.output = 0;
        c.add("X", {0});
        out.push_back(toy("flip", c, 0b0));
    }
    {
        QCircuit c;
        c.num_data_qubits = 3;
        c.witness = {0};
        c.output = 2;
        c.add("H", {1});
        c.add("H", {1});
        c.add("CNOT", {0, 2});
        out.push_back(toy("copy", c, 0b100));
    }
    {
        QCircuit c;
        c.num_data_qubits = 6;
        c.witness = {0, 1};
        c.output = 5;
        c.add("H", {2});
        c.add("CNOT", {0, 5});
        c.add("CNOT", {1, 5});
        c.add("H", {2});
        out.push_back(toy("parity", c, 0b100000));
    }
    return out;
}

std::vector<ToyCircuit> toy_rejecting_circuits() {
    std::vector<ToyCircuit> out;
    {
        QCircuit c;
        c.num_data_qubits = 2;
        c.witness = {0};
        c.output = 1;
        c.add("Z", {0});
        out.push_back(toy("idle", c, 0b10));
    }
    {
        QCircuit c;
        c.num_data_qubits = 2;
        c.witness = {0};
        c.output = 1;
        c.add("H", {0});
        c.add("CZ", {0, 1});
        out.push_back(toy("phase", c, 0b10));
    }
    {
        QCircuit c;
        c.num_data_qubits = 3;
        c.witness = {0};
        c.output = 2;
        c.add("H", {1});
        c.add("CNOT", {1, 2});
        c.add("CZ", {0, 2});
        out.push_back(toy("coin", c, 0b000));
    }
    return out;
}

}  // namespace zkmitqh
