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
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "zkmitqh/c2h.hpp"
#include "zkmitqh/sharing.hpp"
#include "zkmitqh/textio.hpp"
#include "zkmitqh/zknp.hpp"
#include "zkmitqh/zkqma.hpp"

using namespace zkmitqh;

namespace {

constexpr int kAccept = 0, kReject = 1, kUsage = 2;

// verifier coin streams, fixed so a transcript can be re-checked
constexpr uint64_t kChallengeStream = 0xc4a11;
constexpr uint64_t kMeasureStream = 0x3ea5;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v, int digits = 6) {
    if (std::abs(v) < 0.5 * std::pow(10.0, -digits)) v = 0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

// Preset name or a params file.
TextDoc params_doc(const std::string& arg, const std::string& fallback) {
    std::string v = arg.empty() ? fallback : arg;
    if (std::filesystem::exists(v)) return parse_doc(read_text(v));
    TextDoc d;
    d.kind = "params";
    d.set("preset", v);
    return d;
}

void emit(const std::string& out, const std::string& text) {
    if (out.empty() || out == "-")
        std::cout << text;
    else
        write_atomic(out, text);
}

TextDoc load_kind(const std::string& path, const std::string& kind) {
    TextDoc d = parse_doc(read_text(path));
    if (d.kind != kind) throw FormatError(path + ": expected kind " + kind + ", got '" + d.kind + "'");
    return d;
}

// --- NP ---

struct NpOpts {
    std::string params, instance, witness, out, in;
    uint64_t seed = 1;
};

int prove_np(const NpOpts& o) {
    TextDoc pd = params_doc(o.params, "desk");
    NpParams p = np_params_from(pd, "");
    Bits x = parse_bit_string(load_kind(o.instance, "np-instance").get("x"));
    Bits w = parse_bit_string(load_kind(o.witness, "np-witness").get("w"));
    if ((int)x.size() != p.relation.instance_bits || (int)w.size() != p.relation.witness_bits)
        throw UsageError("instance/witness length does not match relation " + p.relation.name);
    NpTranscript t;
    t.preset = pd.has("preset") ? pd.get("preset") : "desk";
    t.params = p;
    t.seed = o.seed;
    t.x = x;
    t.crs = setup(p, o.seed);
    auto [alpha, st] = prover_commit(p, t.crs, x, w, o.seed);
    Rng vr(o.seed, kChallengeStream);
    t.alpha = alpha;
    t.beta = verifier_challenge(p, vr);
    t.gamma = prover_respond(st, t.beta);
    emit(o.out, format_np_transcript(t));
    std::cerr << "challenge: " << format_party_set(t.beta) << "\n";
    return kAccept;
}

int verify_np(const NpOpts& o) {
    NpTranscript t = parse_np_transcript(read_text(o.in));
    std::string failed;
    if (!same_public_crs(t.crs, setup(t.params, t.seed))) failed = "crs";
    if (failed.empty()) {
        Rng vr(t.seed, kChallengeStream);
        if (verifier_challenge(t.params, vr) != t.beta) failed = "challenge";
    }
    if (failed.empty()) failed = verifier_failure(t.params, t.crs, t.x, t.alpha, t.beta, t.gamma);
    if (failed.empty()) {
        std::cout << "verdict: accept\n";
        return kAccept;
    }
    std::cout << "verdict: reject\ncheck: " << failed << "\n";
    return kReject;
}

// --- QMA ---

struct QmaOpts {
    std::string params, instance = "yes", witness, out, in;
    uint64_t seed = 1;
    int reps = 200;
    double delta = -1;
};

QmaInstance instance_named(const std::string& name) {
    if (name == "yes") return desk_yes_instance();
    if (name == "no") return desk_no_instance();
    throw UsageError("unknown instance '" + name + "' (yes or no)");
}

int prove_qma(const QmaOpts& o) {
    if (o.reps < 1) throw UsageError("--reps must be at least 1");
    TextDoc pd = params_doc(o.params, "desk");
    QmaParams p = qma_params_from(pd, "");
    QmaInstance inst = instance_named(o.instance);
    StateVector w = StateVector::basis(1, 1);
    if (!o.witness.empty()) {
        TextDoc wd = load_kind(o.witness, "qma-witness");
        w = decode_state(wd.get_int("qubits"), wd.get("amplitudes"));
        if (w.num_qubits != inst.m || std::abs(w.norm2() - 1) > 1e-9) throw UsageError("witness must be a normalized 1-qubit state");
    }
    QmaTranscript t;
    t.preset = pd.has("preset") ? pd.get("preset") : "desk";
    t.params = p;
    t.seed = o.seed;
    t.instance = o.instance;
    t.crs = setup_qma(p, o.seed);
    QmaCompiled cc = compile_qma(p, t.crs, inst);
    Rng root(o.seed, 0x9e0);
    Rng vr(o.seed, kChallengeStream);
    for (int k = 0; k < o.reps; k++) {
        Rng rng = root.fork((uint64_t)k);
        // A fresh witness copy per repetition. On a no-instance there is no
        // accepted witness, so the prover commits the history state anyway.
        QuantumShares sh = share_quantum(cc, w, rng);
        auto [alpha, st] = commit_state(t.crs, cc, sh.history, rng);
        ChallengeQma ch = verifier_challenge(cc, vr);
        t.reps.push_back({alpha, ch, prover_respond(st, ch)});
    }
    emit(o.out, format_qma_transcript(t));
    return kAccept;
}

int verify_qma(const QmaOpts& o) {
    QmaTranscript t = parse_qma_transcript(read_text(o.in));
    if (t.reps.empty()) throw FormatError("transcript has no repetitions");
    QmaInstance inst = instance_named(t.instance);
    if (!same_public_crs(t.crs, setup_qma(t.params, t.seed))) {
        std::cout << "verdict: reject\ncheck: crs\n";
        return kReject;
    }
    QmaCompiled cc = compile_qma(t.params, t.crs, inst);
    double delta = o.delta;
    if (delta < 0) {
        std::cerr << "computing the gap from the no-instance spectrum...\n";
        delta = qma_gap(compile_qma(t.params, t.crs, desk_no_instance())).delta;
    }
    double threshold = 0.5 - delta / 2;
    Rng vr(t.seed, kChallengeStream);
    Rng mr(t.seed, kMeasureStream);
    int accepted = 0;
    double expected = 0;
    std::string first_failure;
    for (size_t k = 0; k < t.reps.size(); k++) {
        const QmaRep& r = t.reps[k];
        ChallengeQma want = verifier_challenge(cc, vr);
        std::string failed;
        if (want.index != r.challenge.index || !(want.s == r.challenge.s) || want.sign != r.challenge.sign ||
            want.beta != r.challenge.beta)
            failed = "challenge";
        if (failed.empty()) failed = qma_verifier_failure(t.crs, cc, r.alpha, r.challenge, r.gamma);
        Rng rng = mr.fork(k);
        if (!failed.empty()) {
            if (first_failure.empty()) first_failure = "rep " + std::to_string(k) + ": " + failed;
            continue;
        }
        expected += conditional_acceptance(t.crs, cc, r.alpha, r.challenge, r.gamma);
        accepted += verifier_check(t.crs, cc, r.alpha, r.challenge, r.gamma, rng);
    }
    int reps = (int)t.reps.size();
    bool ok = accepted >= threshold * reps;
    std::cout << "reps: " << reps << "\naccepted: " << accepted << "\nthreshold: " << fmt(threshold, 9)
              << "\nexact_acceptance: " << fmt(expected / reps, 9) << "\n";
    if (!first_failure.empty()) std::cout << "check: " << first_failure << "\n";
    std::cout << "verdict: " << (ok ? "accept" : "reject") << "\n";
    return ok ? kAccept : kReject;
}

// --- attack ---

struct AttackOpts {
    std::string scheme = "shamir", family = "singletons";
    int n = 5, t = 2, k = 3, bits = 1, queries = 32;
    uint64_t seed = 1;
};

// singletons | subsets:K | empty | sets:1,2;3
AdversaryStructure family_of(const std::string& f, int n) {
    if (f == "empty") return AdversaryStructure{};
    if (f == "singletons") return AdversaryStructure::singletons(n);
    if (f.rfind("subsets:", 0) == 0) return AdversaryStructure::subsets_up_to(n, std::stoi(f.substr(8)));
    if (f.rfind("sets:", 0) == 0) {
        AdversaryStructure a;
        std::istringstream is(f.substr(5));
        for (std::string part; std::getline(is, part, ';');) {
            PartySet s = parse_party_set(part.empty() ? "-" : part);
            for (int i : s)
                if (i > n) throw UsageError("party " + std::to_string(i) + " out of range");
            a.family.push_back(s);
        }
        return a;
    }
    throw UsageError("unknown family '" + f + "'");
}

QuantumSharing pad_sharing() {
    QuantumSharing qs;
    qs.n = 2;
    qs.registers = {{1, 2}, {0}};
    qs.share = [](const StateVector& psi) {
        StateVector st = psi.tensor(StateVector::zeros(4));
        st = apply_unitary(st, gates::H(), {1});
        st = apply_unitary(st, gates::H(), {2});
        st = apply_unitary(st, gates::CNOT(), {1, 3});  // key copies decohere the pad
        st = apply_unitary(st, gates::CNOT(), {2, 4});
        st = apply_unitary(st, gates::CZ(), {2, 0});
        st = apply_unitary(st, gates::CNOT(), {1, 0});
        return st;
    };
    return qs;
}

int attack(const AttackOpts& o) {
    SecurityReport rep;
    if (o.scheme == "pad") {
        rep = check_capture_security(pad_sharing(), family_of(o.family, 2), o.queries, o.seed);
    } else {
        SharingScheme s;
        std::vector<uint64_t> secrets;
        if (o.scheme == "xor") {
            if (o.bits < 1 || o.bits > 4) throw UsageError("--bits must be 1..4");
            s = xor_scheme(o.n, o.bits);
            for (uint64_t v = 0; v < (uint64_t{1} << o.bits); v++) secrets.push_back(v);
        } else if (o.scheme == "shamir") {
            s = shamir_scheme(o.n, o.t, o.k);
            for (uint64_t v = 0; v < std::min<uint64_t>(uint64_t{1} << o.k, 8); v++) secrets.push_back(v);
        } else {
            throw UsageError("unknown scheme '" + o.scheme + "' (xor, shamir, pad)");
        }
        SecurityOptions opt;
        opt.random_queries = o.queries;
        opt.seed = o.seed;
        rep = check_superposition_security(s, family_of(o.family, o.n), secrets, opt);
    }
    std::cout << "max_trace_distance: " << fmt(rep.max_distance) << "\n";
    std::cout << "queries: " << rep.queries << "\n";
    if (!rep.witness.empty()) std::cout << "witness: " << rep.witness << "\n";
    return kAccept;
}

// --- stats / compile / hybrid ---

int stats(int n, int t) {
    SoundnessBound b = soundness_bound(n, t);
    std::cout << "p_low: " << fmt(b.p_low, 12) << "\np_high: " << fmt(b.p_high, 12) << "\n";
    if (b.degenerate) std::cout << "degenerate: challenge set is empty\n";
    return kAccept;
}

int compile_cmd(const std::string& in, const std::string& out) {
    QCircuit c;
    try {
        c = parse_qcircuit(read_text(in));
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("parse error: ") + e.what());
    }
    LocalHamiltonian h = compile(c);
    GroundState g = ground_energy(h);
    auto terms = pauli_decompose(h);
    std::cout << "qubits: " << h.num_qubits << "\nterms: " << terms.size() << "\nlambda_min: " << fmt(g.energy, 12)
              << "\n";
    if (!out.empty()) {
        TextDoc d;
        d.kind = "hamiltonian";
        d.set("qubits", std::to_string(h.num_qubits));
        d.set("lambda_min", fmt(g.energy, 15));
        std::vector<std::string> lines;
        std::istringstream is(format_pauli_terms(terms));
        for (std::string l; std::getline(is, l);) lines.push_back(l);
        d.add_block("terms", lines);
        write_atomic(out, format_doc(d));
    }
    return kAccept;
}

int hybrid(const std::string& protocol, const std::string& a, const std::string& b, uint64_t seed) {
    if (protocol == "np") {
        NpParams p = NpParams::toy();
        Bits w = {1, 0, 1}, x = {0};
        std::vector<SuperpositionChallenge> qs;
        SuperpositionChallenge all;
        auto cs = all_challenges(p);
        for (const auto& c : cs) all.terms.push_back({c, 1 / std::sqrt((double)cs.size())});
        qs.push_back(all);
        for (int i = 1; i <= p.n; i++) qs.push_back({{{{i}, 1.0}}});
        auto d = hybrid_distance(parse_hybrid(a), parse_hybrid(b), p, x, w, qs);
        std::cout << "distance: " << fmt(d.distance, 12) << "\nmethod: " << d.method << "\n";
        return kAccept;
    }
    if (protocol == "qma") {
        QmaParams p = QmaParams::micro();
        QmaInstance inst = desk_yes_instance();
        StateVector w = StateVector::basis(1, 1);
        QmaCompiled cc = compile_qma(p, setup_qma(p, seed), inst);
        std::vector<PartySet> qs;
        for (const auto& [beta, pr] : challenge_sets(cc)) qs.push_back(beta);
        auto d = qma_hybrid_distance(parse_qma_hybrid(a), parse_qma_hybrid(b), p, inst, w, qs, seed);
        std::cout << "distance: " << fmt(d.distance, 12) << "\nmethod: " << d.method << "\n";
        for (const auto& [beta, v] : d.per_query) std::cout << "  beta " << format_party_set(beta) << ": " << fmt(v, 12) << "\n";
        return kAccept;
    }
    throw UsageError("unknown protocol '" + protocol + "' (np or qma)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"zero-knowledge proofs secure against quantum superposition queries"};
    app.require_subcommand(1);

    NpOpts np;
    auto* pn = app.add_subcommand("prove-np", "commit, draw a challenge, respond; writes a transcript");
    pn->add_option("--params", np.params, "preset (desk, toy) or params file");
    pn->add_option("--seed", np.seed);
    pn->add_option("--instance", np.instance, "np-instance file")->required();
    pn->add_option("--witness", np.witness, "np-witness file")->required();
    pn->add_option("--out", np.out, "transcript path (stdout if absent)");
    auto* vn = app.add_subcommand("verify-np", "check an NP transcript");
    vn->add_option("transcript", np.in)->required();

    QmaOpts qo;
    auto* pq = app.add_subcommand("prove-qma", "run the repeated QMA protocol; writes a transcript");
    pq->add_option("--params", qo.params, "preset (desk, micro) or params file");
    pq->add_option("--seed", qo.seed);
    pq->add_option("--instance", qo.instance, "yes or no");
    pq->add_option("--witness", qo.witness, "qma-witness file (default |1>)");
    pq->add_option("--reps", qo.reps);
    pq->add_option("--out", qo.out);
    auto* vq = app.add_subcommand("verify-qma", "check a QMA transcript and take the threshold vote");
    vq->add_option("transcript", qo.in)->required();
    vq->add_option("--delta", qo.delta, "promise gap; computed from the spectrum if absent");

    AttackOpts ao;
    auto* at = app.add_subcommand("attack", "superposition / capture attack on a sharing scheme");
    at->add_option("--scheme", ao.scheme, "xor, shamir or pad");
    at->add_option("--family", ao.family, "singletons, empty, subsets:K or sets:1,2;3");
    at->add_option("--n", ao.n);
    at->add_option("--t", ao.t);
    at->add_option("--k", ao.k, "field bits (shamir)");
    at->add_option("--bits", ao.bits, "secret bits (xor)");
    at->add_option("--queries", ao.queries, "random superposition queries");
    at->add_option("--seed", ao.seed);

    int sn = 13, st = 4;
    auto* ss = app.add_subcommand("stats", "soundness bounds");
    ss->add_option("--n", sn);
    ss->add_option("--t", st);

    std::string cin_path, cout_path;
    auto* cc = app.add_subcommand("compile", "circuit to Hamiltonian, with its ground energy");
    cc->add_option("circuit", cin_path)->required();
    cc->add_option("--out", cout_path, "Hamiltonian dump");

    std::string hp = "np", ha, hb;
    uint64_t hseed = 1;
    auto* hy = app.add_subcommand("hybrid", "distance between two hybrids");
    hy->add_option("--protocol", hp, "np or qma");
    hy->add_option("from", ha)->required();
    hy->add_option("to", hb)->required();
    hy->add_option("--seed", hseed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*pn) return prove_np(np);
        if (*vn) return verify_np(np);
        if (*pq) return prove_qma(qo);
        if (*vq) return verify_qma(qo);
        if (*at) return attack(ao);
        if (*ss) return stats(sn, st);
        if (*cc) return compile_cmd(cin_path, cout_path);
        if (*hy) return hybrid(hp, ha, hb, hseed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
