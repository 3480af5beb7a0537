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


#include "zkmitqh/mpqc.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace zkmitqh {

namespace {

[[noreturn]] void bad(const std::string& m) { throw std::invalid_argument(m); }

bool fusable(const QGate& g) {
    return g.targets.size() == 2 && (g.name == "CNOT" || g.name == "CX" || g.name == "CZ");
}

// Simulates one round in place.
void run_round(const MpqcRound& r, StateVector& s) {
    for (const PartyGate& pg : r.local) apply_unitary_inplace(s.amp, s.num_qubits, pg.gate.u, pg.gate.targets);
    std::vector<MessageSwap> m = r.messages;
    std::stable_sort(m.begin(), m.end(), [](const MessageSwap& a, const MessageSwap& b) {
        return std::make_pair(std::min(a.from, a.to), std::max(a.from, a.to)) <
               std::make_pair(std::min(b.from, b.to), std::max(b.from, b.to));
    });
    CMat sw = gates::SWAP();
    for (const MessageSwap& x : m) apply_unitary_inplace(s.amp, s.num_qubits, sw, {x.q_from, x.q_to});
}

// Rows indexed by the kept qubits (in the given order), columns by the rest.
CMat split_matrix(const StateVector& s, const std::vector<int>& keep) {
    int n = s.num_qubits;
    std::vector<char> kept(n, 0);
    for (int q : keep) kept[q] = 1;
    std::vector<int> rest;
    for (int q = 0; q < n; q++)
        if (!kept[q]) rest.push_back(q);
    int64_t dk = int64_t{1} << keep.size(), dr = int64_t{1} << rest.size();
    CMat m = CMat::Zero(dk, dr);
    for (uint64_t i = 0; i < (uint64_t)s.amp.size(); i++) {
        if (s.amp[i] == cplx(0)) continue;
        uint64_t r = 0, c = 0;
        for (int q : keep) r = (r << 1) | ((i >> (n - 1 - q)) & 1);
        for (int q : rest) c = (c << 1) | ((i >> (n - 1 - q)) & 1);
        m(r, c) = s.amp[i];
    }
    return m;
}

void check_parties(const MpqcSpec& spec, const PartySet& t) {
    for (int p : t)
        if (p < 1 || p > spec.n) bad("party set outside 1..n");
}

}  // namespace

std::vector<int> MpqcSpec::owners() const {
    std::vector<int> o(num_qubits, 0);
    for (const MpqcRegister& r : registers)
        for (int q : r.qubits) {
            if (q < 0 || q >= num_qubits) bad("register " + r.name + " out of range");
            if (o[q] != 0) bad("registers overlap on qubit " + std::to_string(q));
            o[q] = r.party;
        }
    for (int q = 0; q < num_qubits; q++)
        if (o[q] == 0) bad("qubit " + std::to_string(q) + " has no owner");
    return o;
}

void MpqcSpec::validate() const {
    if (n < 1) bad("need at least one party");
    for (const MpqcRegister& r : registers)
        if (r.party < 1 || r.party > n) bad("register " + r.name + " has a bad party");
    std::vector<int> o = owners();
    for (const MpqcRound& rd : rounds) {
        for (const PartyGate& pg : rd.local) {
            if (pg.party < 1 || pg.party > n) bad("gate for unknown party");
            const QGate& g = pg.gate;
            int64_t dim = int64_t{1} << g.targets.size();
            if (g.targets.empty() || g.u.rows() != dim || g.u.cols() != dim) bad("gate shape");
            std::set<int> seen;
            bool touches_own = false, foreign = false;
            for (int q : g.targets) {
                if (q < 0 || q >= num_qubits || !seen.insert(q).second) bad("bad gate target");
                (o[q] == pg.party ? touches_own : foreign) = true;
            }
            if (foreign && !(fused && fusable(g) && touches_own))
                bad("unitary acting outside its party's registers");
        }
        for (const MessageSwap& m : rd.messages) {
            if (m.q_from < 0 || m.q_from >= num_qubits || m.q_to < 0 || m.q_to >= num_qubits) bad("bad message qubit");
            if (o[m.q_from] != m.from || o[m.q_to] != m.to || m.from == m.to)
                bad("message qubits must belong to sender and receiver");
        }
    }
    if (output < 0 || output >= num_qubits) bad("output out of range");
    for (int q : witness)
        if (q < 0 || q >= num_qubits) bad("witness out of range");
}

static void ensure_round(MpqcSpec& s, int round) {
    if (round < 1) bad("rounds are numbered from 1");
    if ((int)s.rounds.size() < round) s.rounds.resize(round);
}

void MpqcSpec::add_local(int round, int party, const std::string& gate, std::vector<int> targets) {
    add_local(round, party, named_gate(gate), std::move(targets), gate);
}

void MpqcSpec::add_local(int round, int party, CMat u, std::vector<int> targets, std::string name) {
    ensure_round(*this, round);
    rounds[round - 1].local.push_back({party, QGate{std::move(name), std::move(u), std::move(targets)}});
}

void MpqcSpec::send(int round, int from, int to, int q_from, int q_to) {
    ensure_round(*this, round);
    rounds[round - 1].messages.push_back({from, to, q_from, q_to});
}

int MpqcSpec::add_register(const std::string& name, int party, int size) {
    MpqcRegister r{name, party, {}};
    for (int i = 0; i < size; i++) r.qubits.push_back(num_qubits + i);
    int first = num_qubits;
    num_qubits += size;
    registers.push_back(std::move(r));
    return first;
}

std::vector<int> PartyAssignment::qubits_of(const PartySet& parties) const {
    std::vector<int> out;
    for (int q = 0; q < (int)owner.size(); q++)
        if (std::find(parties.begin(), parties.end(), owner[q]) != parties.end()) out.push_back(q);
    return out;
}

PartyAssignment PartyAssignment::with_clock(int clock_qubits) const {
    PartyAssignment a = *this;
    a.owner.insert(a.owner.end(), clock_qubits, clock_party());
    return a;
}

GlobalCircuit to_global_circuit(const MpqcSpec& spec) {
    spec.validate();
    GlobalCircuit g;
    g.owners.n = spec.n;
    g.owners.owner = spec.owners();
    QCircuit& c = g.circuit;
    c.num_data_qubits = spec.num_qubits;
    c.output = spec.output;
    c.witness = spec.witness;
    c.alt = spec.alt;
    for (const MpqcRound& r : spec.rounds) {
        for (const PartyGate& pg : r.local) c.gates.push_back(pg.gate);
        std::vector<MessageSwap> m = r.messages;
        std::stable_sort(m.begin(), m.end(), [](const MessageSwap& a, const MessageSwap& b) {
            return std::make_pair(std::min(a.from, a.to), std::max(a.from, a.to)) <
                   std::make_pair(std::min(b.from, b.to), std::max(b.from, b.to));
        });
        for (const MessageSwap& x : m) c.add("SWAP", {x.q_from, x.q_to});
        g.round_end.push_back(c.depth());
    }
    c.validate();
    return g;
}

MpqcSpec build_relation_circuit(const QCircuit& verifier, int m, int n, int lambda,
                                const std::vector<uint8_t>& r_accept, RelationLayout* layout) {
    {
        QCircuit chk = verifier;  // an empty verification circuit is fine here
        if (chk.gates.empty()) chk.add("I", {0});
        chk.validate();
    }
    if (n < 2) bad("relation circuit needs at least two parties");
    if (m < 1 || m > verifier.num_data_qubits) bad("width mismatch: witness register");
    for (int q : verifier.witness)
        if (q >= m) bad("width mismatch: verifier witness outside the first m qubits");
    if (!verifier.alt.empty()) bad("verifier may not carry its own side condition");
    if (lambda < 0 || r_accept.size() != (size_t{1} << lambda)) bad("width mismatch: r table");

    RelationLayout L;
    L.n = n;
    L.m = m;
    L.lambda = lambda;
    MpqcSpec s;
    s.n = n;
    s.fused = true;
    for (int i = 1; i < n; i++) {
        auto reg = [&](const std::string& nm, int w) {
            int f = s.add_register(nm + std::to_string(i), i, w);
            std::vector<int> v;
            for (int k = 0; k < w; k++) v.push_back(f + k);
            return v;
        };
        L.a.push_back(reg("a", m));
        L.b.push_back(reg("b", m));
        L.r.push_back(reg("r", lambda));
    }
    int f = s.add_register("psi", n, m);
    for (int k = 0; k < m; k++) L.psi.push_back(f + k);
    f = s.add_register("r" + std::to_string(n), n, lambda);
    std::vector<int> rn;
    for (int k = 0; k < lambda; k++) rn.push_back(f + k);
    L.r.push_back(rn);
    int anc = verifier.num_data_qubits - m;
    f = s.add_register("anc", n, anc);
    for (int k = 0; k < anc; k++) L.ancilla.push_back(f + k);

    // Every share register is prover-supplied.
    for (int i = 0; i < n - 1; i++) {
        for (int q : L.a[i]) s.witness.push_back(q);
        for (int q : L.b[i]) s.witness.push_back(q);
    }
    for (int i = 0; i < n; i++)
        for (int q : L.r[i]) s.witness.push_back(q);
    for (int q : L.psi) s.witness.push_back(q);
    std::sort(s.witness.begin(), s.witness.end());

    // round 1: fold a, b shares into party n-1
    int last = n - 1;
    for (int i = 1; i < last; i++)
        for (int k = 0; k < m; k++) {
            s.add_local(1, last, "CNOT", {L.a[i - 1][k], L.a[last - 1][k]});
            s.add_local(1, last, "CNOT", {L.b[i - 1][k], L.b[last - 1][k]});
        }
    // round 2: Z^b X^a on psi
    for (int k = 0; k < m; k++) s.add_local(2, n, "CX", {L.a[last - 1][k], L.psi[k]});
    for (int k = 0; k < m; k++) s.add_local(2, n, "CZ", {L.b[last - 1][k], L.psi[k]});
    // round 3: the verification circuit on (psi, ancillas)
    auto map_q = [&](int q) { return q < m ? L.psi[q] : L.ancilla[q - m]; };
    s.rounds.resize(3);
    for (const QGate& g : verifier.gates) {
        std::vector<int> t;
        for (int q : g.targets) t.push_back(map_q(q));
        s.add_local(3, n, g.u, t, g.name);
    }
    s.output = L.output = map_q(verifier.output);

    // r = xor of all shares, accepted through the side condition
    for (int i = 0; i < n; i++)
        for (int q : L.r[i]) s.alt.qubits.push_back(q);
    if (!s.alt.qubits.empty()) {
        int w = (int)s.alt.qubits.size();
        s.alt.accept.assign(size_t{1} << w, 0);
        for (uint64_t v = 0; v < s.alt.accept.size(); v++) {
            uint64_t r = 0;
            for (int i = 0; i < n; i++) r ^= (v >> ((n - 1 - i) * lambda)) & ((uint64_t{1} << lambda) - 1);
            s.alt.accept[v] = r_accept[r];
        }
    } else if (r_accept[0]) {
        bad("lambda = 0 with an accepting r table makes the relation trivial");
    }
    s.validate();
    if (layout) *layout = L;
    return s;
}

StateVector relation_input(const RelationLayout& L, const std::vector<uint64_t>& a_shares,
                           const std::vector<uint64_t>& b_shares, const std::vector<uint64_t>& r_shares,
                           const StateVector& psi) {
    if ((int)a_shares.size() != L.n - 1 || (int)b_shares.size() != L.n - 1 || (int)r_shares.size() != L.n)
        bad("share count");
    if (psi.num_qubits != L.m) bad("width mismatch: psi");
    int total = L.psi.front() + L.m + L.lambda + (int)L.ancilla.size();
    uint64_t pre = 0;
    int pre_bits = L.psi.front();
    auto put = [&](const std::vector<int>& qs, uint64_t v) {
        for (size_t k = 0; k < qs.size(); k++)
            if ((v >> (qs.size() - 1 - k)) & 1) pre |= uint64_t{1} << (pre_bits - 1 - qs[k]);
    };
    for (int i = 0; i < L.n - 1; i++) {
        put(L.a[i], a_shares[i]);
        put(L.b[i], b_shares[i]);
        put(L.r[i], r_shares[i]);
    }
    int post_bits = L.lambda + (int)L.ancilla.size();
    uint64_t post = (r_shares[L.n - 1] & ((uint64_t{1} << L.lambda) - 1)) << L.ancilla.size();
    StateVector s = StateVector::basis(pre_bits, pre).tensor(psi).tensor(StateVector::basis(post_bits, post));
    if (s.num_qubits != total) bad("layout mismatch");
    return s;
}

MpqcSpec otp_relay_spec(int n) {
    if (n < 2) bad("relay needs two parties");
    MpqcSpec s;
    s.n = n;
    std::vector<int> msg(n + 1), key(n + 1);
    for (int i = 1; i <= n; i++) msg[i] = s.add_register("msg", i, 1);
    // x key, z key, step flag
    for (int i = 1; i < n; i++) key[i] = s.add_register("key", i, 3);
    // Each hop: x key to |+> and X^x on the message, z key to |+> while a
    // step flag flips, then Z^z. The flag keeps times on either side of it
    // orthogonal outside the holder's registers.
    CMat hx = named_gate("CX") * kron(gates::H(), gates::I2());
    CMat hz = kron(gates::H(), gates::X());
    for (int i = 1; i < n; i++) {
        s.add_local(i, i, hx, {key[i], msg[i]}, "PADX");
        s.add_local(i, i, hz, {key[i] + 1, key[i] + 2}, "KEYZ");
        s.add_local(i, i, "CZ", {key[i] + 1, msg[i]});
        s.send(i, i, i + 1, msg[i], msg[i + 1]);
    }
    s.witness = {msg[1]};
    s.output = msg[n];
    s.validate();
    return s;
}

StateVector otp_relay_input(const MpqcSpec& spec, const StateVector& psi) {
    if (psi.num_qubits != 1 || spec.num_qubits < 1) bad("relay input is one qubit");
    return psi.tensor(StateVector::zeros(spec.num_qubits - 1));
}

DensityMatrix view_density(const MpqcSpec& spec, const StateVector& input, const PartySet& t, int round) {
    spec.validate();
    check_parties(spec, t);
    if (round < 0 || round > spec.K()) bad("round beyond K");
    if (input.num_qubits != spec.num_qubits) bad("input width");
    StateVector s = input;
    for (int k = 0; k < round; k++) run_round(spec.rounds[k], s);
    PartyAssignment a{spec.n, spec.owners()};
    std::vector<int> keep = a.qubits_of(t);
    if (keep.empty()) return DensityMatrix(0, CMat::Constant(1, 1, s.norm2()));
    CMat m = split_matrix(s, keep);
    return DensityMatrix((int)keep.size(), m * m.adjoint());
}

namespace {

// Reduced history state on keep plus a (T+1)-level clock, clock-major.
CMat history_view(const QCircuit& c, const StateVector& input, const std::vector<int>& keep) {
    int T = c.depth();
    std::vector<CMat> ms;
    StateVector s = input;
    ms.push_back(split_matrix(s, keep));
    for (const QGate& g : c.gates) {
        apply_unitary_inplace(s.amp, s.num_qubits, g.u, g.targets);
        ms.push_back(split_matrix(s, keep));
    }
    int64_t d = ms[0].rows();
    CMat rho(d * (T + 1), d * (T + 1));
    for (int i = 0; i <= T; i++)
        for (int j = 0; j <= T; j++) rho.block(i * d, j * d, d, d) = ms[i] * ms[j].adjoint() / double(T + 1);
    return rho;
}

}  // namespace

ViewEquality check_view_equality(const MpqcSpec& spec, const StateVector& x0, const StateVector& x1,
                                 const PartySet& t, bool enforce_restriction) {
    spec.validate();
    check_parties(spec, t);
    ViewEquality out;
    double d0 = trace_distance(view_density(spec, x0, t, 0), view_density(spec, x1, t, 0));
    out.restriction = d0;
    if (enforce_restriction && d0 > 1e-9) bad("restriction mismatch");
    StateVector s0 = x0, s1 = x1;
    PartyAssignment a{spec.n, spec.owners()};
    std::vector<int> keep = a.qubits_of(t);
    out.rounds = d0;
    for (int k = 0; k < spec.K(); k++) {
        run_round(spec.rounds[k], s0);
        run_round(spec.rounds[k], s1);
        if (keep.empty()) continue;
        CMat m0 = split_matrix(s0, keep), m1 = split_matrix(s1, keep);
        out.rounds = std::max(out.rounds, trace_distance(CMat(m0 * m0.adjoint()), CMat(m1 * m1.adjoint())));
    }
    GlobalCircuit g = to_global_circuit(spec);
    out.history = trace_distance(history_view(g.circuit, x0, keep), history_view(g.circuit, x1, keep));
    return out;
}

MpqcSpec pass_through_spec(const QCircuit& c, const std::vector<int>& input_owner, int n) {
    c.validate();
    if ((int)input_owner.size() != c.num_data_qubits) bad("one owner per circuit qubit");
    MpqcSpec s;
    s.n = n;
    // party 1 holds a work copy of every qubit; others keep their own inputs
    int work = s.add_register("work", 1, c.num_data_qubits);
    std::vector<int> slot(c.num_data_qubits, -1);
    for (int q = 0; q < c.num_data_qubits; q++) {
        int p = input_owner[q];
        if (p < 1 || p > n) bad("owner outside 1..n");
        if (p != 1) slot[q] = s.add_register("in" + std::to_string(q), p, 1);
    }
    for (int q = 0; q < c.num_data_qubits; q++) {
        if (slot[q] >= 0) s.send(1, input_owner[q], 1, slot[q], work + q);
        if (c.is_witness(q)) s.witness.push_back(slot[q] >= 0 ? slot[q] : work + q);
    }
    s.rounds.resize(2);
    for (const QGate& g : c.gates) {
        std::vector<int> t;
        for (int q : g.targets) t.push_back(work + q);
        s.add_local(2, 1, g.u, t, g.name);
    }
    std::sort(s.witness.begin(), s.witness.end());
    s.output = work + c.output;
    s.validate();
    return s;
}

// ---- text form

namespace {

std::vector<std::string> words(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> w;
    std::string x;
    while (is >> x) w.push_back(x);
    return w;
}

int to_int(const std::string& s, const std::string& at) {
    try {
        size_t pos = 0;
        int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        bad(at + "expected an integer, got '" + s + "'");
    }
}

}  // namespace

MpqcSpec parse_mpqc(const std::string& text) {
    MpqcSpec s;
    std::istringstream is(text);
    std::string raw;
    int line = 0, round = 0, declared_rounds = -1;
    bool header = false, have_qubits = false, have_output = false;
    while (std::getline(is, raw)) {
        line++;
        std::string body = raw.substr(0, raw.find('#'));
        std::vector<std::string> w = words(body);
        if (w.empty()) continue;
        std::string at = "line " + std::to_string(line) + ": ";
        if (!header) {
            if (w.size() != 3 || w[0] != "parties") bad(at + "expected 'parties <n> <rounds>'");
            s.n = to_int(w[1], at);
            declared_rounds = to_int(w[2], at);
            if (declared_rounds < 0) bad(at + "negative round count");
            s.rounds.resize(declared_rounds);
            header = true;
            continue;
        }
        const std::string& d = w[0];
        if (d == "qubits") {
            if (w.size() != 2) bad(at + "qubits takes one count");
            s.num_qubits = to_int(w[1], at);
            have_qubits = true;
        } else if (d == "register") {
            if (w.size() < 4) bad(at + "register needs name, party and qubits");
            MpqcRegister r{w[1], to_int(w[2], at), {}};
            for (size_t i = 3; i < w.size(); i++) r.qubits.push_back(to_int(w[i], at));
            s.registers.push_back(std::move(r));
        } else if (d == "output") {
            if (w.size() != 2) bad(at + "output takes one qubit");
            s.output = to_int(w[1], at);
            have_output = true;
        } else if (d == "fused") {
            s.fused = true;
        } else if (d == "witness" || d == "alt") {
            QCircuit tmp = parse_qcircuit("qubits 64\noutput 0\ngate I 0\n" + body);
            if (d == "witness")
                s.witness = tmp.witness;
            else
                s.alt = tmp.alt;
        } else if (d == "round") {
            if (w.size() != 2) bad(at + "round takes one number");
            round = to_int(w[1], at);
            if (round < 1 || round > declared_rounds) bad(at + "round out of range");
        } else if (d == "party") {
            if (round == 0) bad(at + "gate before any round");
            if (w.size() < 4) bad(at + "party line needs a gate");
            int p = to_int(w[1], at);
            std::string rest = body.substr(body.find(w[2]));
            QCircuit tmp;
            try {
                tmp = parse_qcircuit("qubits 64\noutput 0\n" + rest);
            } catch (const std::invalid_argument& e) {
                std::string msg = e.what();
                auto colon = msg.find(": ");
                bad(at + (colon == std::string::npos ? msg : msg.substr(colon + 2)));
            }
            if (tmp.gates.size() != 1) bad(at + "expected one gate");
            s.rounds[round - 1].local.push_back({p, tmp.gates[0]});
        } else if (d == "send") {
            if (w.size() != 5) bad(at + "send takes from, to, q_from, q_to");
            if (round == 0) bad(at + "send before any round");
            s.rounds[round - 1].messages.push_back(
                {to_int(w[1], at), to_int(w[2], at), to_int(w[3], at), to_int(w[4], at)});
        } else {
            bad(at + "unknown directive '" + d + "'");
        }
    }
    if (!header) bad("missing header");
    if (!have_qubits) bad("missing qubits line");
    if (!have_output) bad("missing output line");
    s.validate();
    return s;
}

std::string format_mpqc(const MpqcSpec& s) {
    std::ostringstream os;
    os << "parties " << s.n << " " << s.K() << "\n";
    os << "qubits " << s.num_qubits << "\n";
    for (const MpqcRegister& r : s.registers) {
        os << "register " << r.name << " " << r.party;
        for (int q : r.qubits) os << " " << q;
        os << "\n";
    }
    QCircuit meta;
    meta.num_data_qubits = s.num_qubits;
    meta.output = s.output;
    meta.witness = s.witness;
    meta.alt = s.alt;
    std::string m = format_qcircuit(meta);
    os << m.substr(m.find('\n') + 1);  // output, witness, alt
    if (s.fused) os << "fused\n";
    for (int k = 0; k < s.K(); k++) {
        os << "round " << k + 1 << "\n";
        for (const PartyGate& pg : s.rounds[k].local) {
            QCircuit one;
            one.num_data_qubits = s.num_qubits;
            one.gates.push_back(pg.gate);
            std::string g = format_qcircuit(one);
            // last line is the gate
            g.pop_back();
            os << "party " << pg.party << " " << g.substr(g.rfind('\n') + 1) << "\n";
        }
        for (const MessageSwap& x : s.rounds[k].messages)
            os << "send " << x.from << " " << x.to << " " << x.q_from << " " << x.q_to << "\n";
    }
    return os.str();
}

}  // namespace zkmitqh
