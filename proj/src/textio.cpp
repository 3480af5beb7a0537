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


#include "zkmitqh/textio.hpp"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <boost/beast/core/detail/base64.hpp>

namespace zkmitqh {

static_assert(std::endian::native == std::endian::little, "state encoding assumes a little-endian host");

namespace {

[[noreturn]] void fail(const std::string& m) { throw FormatError(m); }

std::vector<std::string> words(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    for (std::string w; is >> w;) out.push_back(w);
    return out;
}

uint64_t to_u64(const std::string& s) {
    if (s.empty() || s.size() > 20 || s.find_first_not_of("0123456789") != std::string::npos)
        fail("expected unsigned integer, got '" + s + "'");
    try {
        return std::stoull(s);
    } catch (const std::exception&) {
        fail("integer out of range: '" + s + "'");
    }
}

std::pair<uint64_t, uint64_t> pair_of(const std::string& s) {
    auto c = s.find(':');
    if (c == std::string::npos) fail("expected a:b, got '" + s + "'");
    return {to_u64(s.substr(0, c)), to_u64(s.substr(c + 1))};
}

std::string com_str(const Commitment& c) { return std::to_string(c.c1) + ":" + std::to_string(c.c2); }
std::string open_str(const Opening& o) { return std::to_string(o.message) + ":" + std::to_string(o.randomness); }
Commitment com_of(const std::string& s) {
    auto [a, b] = pair_of(s);
    return {a, b};
}
Opening open_of(const std::string& s) {
    auto [a, b] = pair_of(s);
    return {a, b};
}

std::string bit_str(const std::vector<uint8_t>& b) { return b.empty() ? "-" : bits_to_string(b); }

}  // namespace

// --- TextDoc ---

void TextDoc::set(const std::string& key, const std::string& value) {
    if (key.empty() || key.find_first_of(": \t\n") != std::string::npos) fail("bad key '" + key + "'");
    if (value.find('\n') != std::string::npos) fail("newline in value of '" + key + "'");
    for (auto& [k, v] : fields)
        if (k == key) {
            v = value;
            return;
        }
    fields.emplace_back(key, value);
}

bool TextDoc::has(const std::string& key) const {
    for (const auto& [k, v] : fields)
        if (k == key) return true;
    return false;
}

const std::string& TextDoc::get(const std::string& key) const {
    for (const auto& [k, v] : fields)
        if (k == key) return v;
    fail("missing field '" + key + "'");
}

uint64_t TextDoc::get_u64(const std::string& key) const {
    try {
        return to_u64(get(key));
    } catch (const FormatError& e) {
        fail(key + ": " + e.what());
    }
}

int TextDoc::get_int(const std::string& key) const {
    uint64_t v = get_u64(key);
    if (v > 1u << 30) fail(key + ": value too large");
    return (int)v;
}

void TextDoc::add_block(const std::string& name, std::vector<std::string> lines) {
    if (name.empty() || name.find_first_of(" \t\n") != std::string::npos) fail("bad block name");
    if (has_block(name)) fail("duplicate block '" + name + "'");
    blocks.emplace_back(name, std::move(lines));
}

bool TextDoc::has_block(const std::string& name) const {
    for (const auto& [n, l] : blocks)
        if (n == name) return true;
    return false;
}

const std::vector<std::string>& TextDoc::block(const std::string& name) const {
    for (const auto& [n, l] : blocks)
        if (n == name) return l;
    fail("missing block '" + name + "'");
}

std::string format_doc(const TextDoc& d) {
    std::string out = std::string(kFormatTag) + "\nkind: " + d.kind + "\n";
    for (const auto& [k, v] : d.fields) out += k + ": " + v + "\n";
    for (const auto& [n, lines] : d.blocks) {
        out += "begin " + n + " " + std::to_string(lines.size()) + "\n";
        for (const auto& l : lines) out += l + "\n";
        out += "end " + n + "\n";
    }
    return out;
}

TextDoc parse_doc(const std::string& text) {
    std::istringstream is(text);
    std::string raw;
    int line = 0;
    auto at = [&](const std::string& m) { fail("line " + std::to_string(line) + ": " + m); };
    auto next = [&]() -> bool {
        if (!std::getline(is, raw)) return false;
        line++;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        return true;
    };
    TextDoc d;
    if (!next()) fail("line 1: empty document");
    if (raw != kFormatTag) at("expected version tag '" + std::string(kFormatTag) + "', got '" + raw + "'");
    if (!next() || raw.rfind("kind: ", 0) != 0) at("expected 'kind: ...'");
    d.kind = raw.substr(6);
    while (next()) {
        if (raw.empty()) continue;
        if (raw.rfind("begin ", 0) == 0) {
            auto w = words(raw);
            if (w.size() != 3) at("expected 'begin NAME COUNT'");
            uint64_t count;
            try {
                count = to_u64(w[2]);
            } catch (const FormatError& e) {
                at(e.what());
            }
            std::vector<std::string> lines;
            for (uint64_t i = 0; i < count; i++) {
                if (!next()) at("unterminated block '" + w[1] + "'");
                lines.push_back(raw);
            }
            if (!next() || raw != "end " + w[1]) at("expected 'end " + w[1] + "'");
            if (d.has_block(w[1])) at("duplicate block '" + w[1] + "'");
            d.blocks.emplace_back(w[1], std::move(lines));
            continue;
        }
        auto c = raw.find(": ");
        if (c == std::string::npos || c == 0) at("expected 'key: value'");
        std::string key = raw.substr(0, c);
        if (d.has(key)) at("duplicate key '" + key + "'");
        d.fields.emplace_back(key, raw.substr(c + 2));
    }
    return d;
}

// --- encodings ---

std::string base64_encode(const std::vector<uint8_t>& bytes) {
    namespace b64 = boost::beast::detail::base64;
    std::string out(b64::encoded_size(bytes.size()), '\0');
    out.resize(b64::encode(out.data(), bytes.data(), bytes.size()));
    return out;
}

std::vector<uint8_t> base64_decode(const std::string& s) {
    namespace b64 = boost::beast::detail::base64;
    if (s.size() % 4) fail("base64 length not a multiple of 4");
    size_t pad = 0;
    for (size_t i = 0; i < s.size(); i++) {
        char c = s[i];
        bool ok = std::isalnum((unsigned char)c) || c == '+' || c == '/';
        if (c == '=') {
            if (i + 2 < s.size()) fail("misplaced base64 padding");
            pad++;
        } else if (!ok || pad) {
            fail("invalid base64 character");
        }
    }
    std::vector<uint8_t> out(b64::decoded_size(s.size()));
    auto [written, read] = b64::decode(out.data(), s.data(), s.size());
    if (read != s.size() - pad) fail("invalid base64");
    out.resize(written);
    return out;
}

std::string encode_state(const StateVector& s) {
    std::vector<uint8_t> bytes;
    for (Eigen::Index i = 0; i < s.amp.size(); i++) {
        cplx a = s.amp[i];
        if (a == cplx(0)) continue;
        uint64_t idx = (uint64_t)i;
        double re = a.real(), im = a.imag();
        size_t at = bytes.size();
        bytes.resize(at + 24);
        std::memcpy(&bytes[at], &idx, 8);
        std::memcpy(&bytes[at + 8], &re, 8);
        std::memcpy(&bytes[at + 16], &im, 8);
    }
    return bytes.empty() ? "-" : base64_encode(bytes);
}

StateVector decode_state(int num_qubits, const std::string& s) {
    if (num_qubits < 0 || num_qubits > 20) fail("qubit count out of range");
    CVec amp = CVec::Zero((Eigen::Index)(uint64_t{1} << num_qubits));
    if (s != "-") {
        auto bytes = base64_decode(s);
        if (bytes.size() % 24) fail("amplitude record length");
        uint64_t prev = 0;
        for (size_t at = 0; at < bytes.size(); at += 24) {
            uint64_t idx;
            double re, im;
            std::memcpy(&idx, &bytes[at], 8);
            std::memcpy(&re, &bytes[at + 8], 8);
            std::memcpy(&im, &bytes[at + 16], 8);
            if (idx >= (uint64_t)amp.size()) fail("amplitude index out of range");
            if (at && idx <= prev) fail("amplitude indices not increasing");
            if (!std::isfinite(re) || !std::isfinite(im)) fail("non-finite amplitude");
            prev = idx;
            amp[(Eigen::Index)idx] = cplx(re, im);
        }
    }
    StateVector out;
    out.num_qubits = num_qubits;
    out.amp = amp;
    return out;
}

std::string read_text(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    if (f.bad()) throw IoError("read failed: '" + path + "'");
    return ss.str();
}

void write_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot write '" + tmp.string() + "'");
        f << content;
        f.flush();
        if (!f) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoError("write failed: '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot rename onto '" + path + "'");
    }
}

std::string format_party_set(const PartySet& s) {
    if (s.empty()) return "-";
    std::string out;
    for (size_t i = 0; i < s.size(); i++) out += (i ? "," : "") + std::to_string(s[i]);
    return out;
}

PartySet parse_party_set(const std::string& s) {
    PartySet out;
    if (s == "-") return out;
    std::istringstream is(s);
    for (std::string part; std::getline(is, part, ',');) {
        uint64_t v = to_u64(part);
        if (v < 1 || v > 64) fail("party out of range: " + part);
        if (!out.empty() && (int)v <= out.back()) fail("party set not strictly increasing");
        out.push_back((int)v);
    }
    return out;
}

Bits parse_bit_string(const std::string& s) {
    Bits b;
    if (s == "-") return b;
    for (char c : s) {
        if (c != '0' && c != '1') fail("expected bit string, got '" + s + "'");
        b.push_back((uint8_t)(c - '0'));
    }
    return b;
}

// --- parameters ---

NpRelation relation_by_name(const std::string& name) {
    auto num = [&](size_t skip) {
        uint64_t v = to_u64(name.substr(skip));
        if (v < 1 || v > 16) fail("relation size out of range: " + name);
        return (int)v;
    };
    if (name.rfind("chi", 0) == 0) return chi_relation(num(3));
    if (name.rfind("parity", 0) == 0) return parity_relation(num(6));
    fail("unknown relation '" + name + "'");
}

namespace {
GroupParams group_of(uint64_t q) {
    if (q < 5 || q >= (uint64_t{1} << 62)) fail("group order out of range");
    GroupParams g;
    try {
        g = GroupParams::safe_prime(q);
    } catch (const std::exception&) {
        fail("q=" + std::to_string(q) + " is not a safe-prime order");
    }
    if (!g.valid()) fail("q=" + std::to_string(q) + " is not a safe-prime order");
    return g;
}
}  // namespace

NpParams np_params_from(const TextDoc& d, const std::string& pre) {
    std::string preset = d.has(pre + "preset") ? d.get(pre + "preset") : "desk";
    NpParams p;
    if (preset == "toy")
        p = NpParams::toy();
    else if (preset != "desk")
        fail("unknown preset '" + preset + "'");
    if (d.has(pre + "n")) p.n = d.get_int(pre + "n");
    if (d.has(pre + "t")) p.t = d.get_int(pre + "t");
    if (d.has(pre + "lambda")) p.lambda = d.get_int(pre + "lambda");
    if (d.has(pre + "q")) p.group = group_of(d.get_u64(pre + "q"));
    if (d.has(pre + "relation")) p.relation = relation_by_name(d.get(pre + "relation"));
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        fail(e.what());
    }
    return p;
}

void np_params_to(TextDoc& d, const NpParams& p, const std::string& preset, const std::string& pre) {
    d.set(pre + "preset", preset);
    d.set(pre + "n", std::to_string(p.n));
    d.set(pre + "t", std::to_string(p.t));
    d.set(pre + "lambda", std::to_string(p.lambda));
    d.set(pre + "q", std::to_string(p.group.q));
    d.set(pre + "relation", p.relation.name);
}

QmaParams qma_params_from(const TextDoc& d, const std::string& pre) {
    std::string preset = d.has(pre + "preset") ? d.get(pre + "preset") : "desk";
    QmaParams p;
    if (preset == "micro")
        p = QmaParams::micro();
    else if (preset != "desk")
        fail("unknown preset '" + preset + "'");
    if (d.has(pre + "n")) p.n = d.get_int(pre + "n");
    if (d.has(pre + "lambda")) p.lambda = d.get_int(pre + "lambda");
    if (d.has(pre + "q")) p.group = group_of(d.get_u64(pre + "q"));
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        fail(e.what());
    }
    return p;
}

void qma_params_to(TextDoc& d, const QmaParams& p, const std::string& preset, const std::string& pre) {
    d.set(pre + "preset", preset);
    d.set(pre + "n", std::to_string(p.n));
    d.set(pre + "lambda", std::to_string(p.lambda));
    d.set(pre + "q", std::to_string(p.group.q));
}

void crs_to(TextDoc& d, const CrsNp& crs) {
    d.set("crs.mode", crs.dual.mode == DualMode::Binding ? "binding" : "hiding");
    d.set("crs.g", std::to_string(crs.dual.g));
    d.set("crs.h", std::to_string(crs.dual.h));
    d.set("crs.u", std::to_string(crs.dual.u));
    d.set("crs.v", std::to_string(crs.dual.v));
    d.set("crs.plain_h", std::to_string(crs.plain.h));
    d.set("crs.c", com_str(crs.c));
}

CrsNp crs_from(const TextDoc& d, const GroupParams& group) {
    const std::string& m = d.get("crs.mode");
    if (m != "binding" && m != "hiding") fail("crs.mode: expected binding or hiding");
    CrsNp crs;
    crs.dual = dual_from_elements(group, d.get_u64("crs.g"), d.get_u64("crs.h"), d.get_u64("crs.u"),
                                  d.get_u64("crs.v"), m == "binding" ? DualMode::Binding : DualMode::Hiding);
    crs.plain.params = group;
    crs.plain.h = d.get_u64("crs.plain_h");
    crs.c = com_of(d.get("crs.c"));
    return crs;
}

bool same_public_crs(const CrsNp& a, const CrsNp& b) {
    return a.dual.params == b.dual.params && a.dual.g == b.dual.g && a.dual.h == b.dual.h && a.dual.u == b.dual.u &&
           a.dual.v == b.dual.v && a.dual.mode == b.dual.mode && a.plain.h == b.plain.h && a.c == b.c;
}

// --- NP transcript ---

std::string format_np_transcript(const NpTranscript& t) {
    TextDoc d;
    d.kind = "np-transcript";
    d.set("seed", std::to_string(t.seed));
    np_params_to(d, t.params, t.preset);
    d.set("x", bit_str(t.x));
    crs_to(d, t.crs);
    d.set("beta", format_party_set(t.beta));
    std::vector<std::string> alpha;
    for (const auto& block : t.alpha.alpha) {
        std::string l;
        for (size_t j = 0; j < block.size(); j++) l += (j ? " " : "") + com_str(block[j]);
        alpha.push_back(l);
    }
    d.add_block("alpha", alpha);
    std::vector<std::string> gamma;
    for (const auto& [i, op] : t.gamma.gamma) {
        std::string l = std::to_string(i) + " " + base64_encode(serialize_view(op.view));
        for (const auto& o : op.openings) l += " " + open_str(o);
        gamma.push_back(l);
    }
    d.add_block("gamma", gamma);
    return format_doc(d);
}

NpTranscript parse_np_transcript(const std::string& text) {
    TextDoc d = parse_doc(text);
    if (d.kind != "np-transcript") fail("expected kind np-transcript, got '" + d.kind + "'");
    NpTranscript t;
    t.seed = d.get_u64("seed");
    t.preset = d.get("params.preset");
    t.params = np_params_from(d);
    t.x = parse_bit_string(d.get("x"));
    t.crs = crs_from(d, t.params.group);
    t.beta = parse_party_set(d.get("beta"));
    for (const auto& l : d.block("alpha")) {
        std::vector<Commitment> block;
        for (const auto& w : words(l)) block.push_back(com_of(w));
        t.alpha.alpha.push_back(block);
    }
    for (const auto& l : d.block("gamma")) {
        auto w = words(l);
        if (w.size() < 2) fail("gamma: expected 'party view openings...'");
        PartyOpening op;
        uint64_t i = to_u64(w[0]);
        if (i < 1 || i > 1024) fail("gamma: party out of range");
        try {
            op.view = parse_view(base64_decode(w[1]));
        } catch (const std::invalid_argument& e) {
            fail(std::string("gamma: ") + e.what());
        }
        for (size_t k = 2; k < w.size(); k++) op.openings.push_back(open_of(w[k]));
        t.gamma.gamma.emplace_back((int)i, op);
    }
    return t;
}

// --- QMA transcript ---

std::string format_qma_transcript(const QmaTranscript& t) {
    TextDoc d;
    d.kind = "qma-transcript";
    d.set("seed", std::to_string(t.seed));
    qma_params_to(d, t.params, t.preset);
    d.set("instance", t.instance);
    crs_to(d, t.crs);
    d.set("reps", std::to_string(t.reps.size()));
    for (size_t k = 0; k < t.reps.size(); k++) {
        const QmaRep& r = t.reps[k];
        std::vector<std::string> lines;
        lines.push_back("psi " + std::to_string(r.alpha.psi_hist.num_qubits) + " " + encode_state(r.alpha.psi_hist));
        lines.push_back("challenge " + r.challenge.s.letters + " " + std::to_string(r.challenge.sign) + " " +
                        std::to_string(r.challenge.index) + " " + format_party_set(r.challenge.beta));
        for (size_t i = 0; i < r.alpha.alpha.size(); i++) {
            std::string l = "alpha " + std::to_string(i + 1);
            for (const auto& c : r.alpha.alpha[i]) l += " " + com_str(c);
            lines.push_back(l);
        }
        for (const auto& op : r.gamma.gamma) {
            std::string l = "open " + std::to_string(op.party) + " " + bit_str(op.a) + " " + bit_str(op.b);
            for (const auto& o : op.openings) l += " " + open_str(o);
            lines.push_back(l);
        }
        d.add_block("rep." + std::to_string(k), lines);
    }
    return format_doc(d);
}

QmaTranscript parse_qma_transcript(const std::string& text) {
    TextDoc d = parse_doc(text);
    if (d.kind != "qma-transcript") fail("expected kind qma-transcript, got '" + d.kind + "'");
    QmaTranscript t;
    t.seed = d.get_u64("seed");
    t.preset = d.get("params.preset");
    t.params = qma_params_from(d);
    t.instance = d.get("instance");
    t.crs = crs_from(d, t.params.group);
    int reps = d.get_int("reps");
    for (int k = 0; k < reps; k++) {
        QmaRep r;
        std::string name = "rep." + std::to_string(k);
        bool psi = false, ch = false;
        for (const auto& l : d.block(name)) {
            auto w = words(l);
            auto need = [&](bool ok) {
                if (!ok) fail(name + ": malformed line '" + l.substr(0, 40) + "'");
            };
            need(!w.empty());
            if (w[0] == "psi") {
                need(w.size() == 3 && !psi);
                r.alpha.psi_hist = decode_state((int)to_u64(w[1]), w[2]);
                psi = true;
            } else if (w[0] == "challenge") {
                need(w.size() == 5 && !ch);
                need(w[1].find_first_not_of("IXYZ") == std::string::npos);
                r.challenge.s = PauliString(w[1]);
                need(w[2] == "1" || w[2] == "-1");
                r.challenge.sign = w[2] == "1" ? 1 : -1;
                r.challenge.index = to_u64(w[3]);
                r.challenge.beta = parse_party_set(w[4]);
                ch = true;
            } else if (w[0] == "alpha") {
                need(w.size() >= 2 && to_u64(w[1]) == r.alpha.alpha.size() + 1);
                std::vector<Commitment> block;
                for (size_t j = 2; j < w.size(); j++) block.push_back(com_of(w[j]));
                r.alpha.alpha.push_back(block);
            } else if (w[0] == "open") {
                need(w.size() >= 4);
                QmaPartyOpening op;
                uint64_t party = to_u64(w[1]);
                need(party >= 1 && party <= 64);
                op.party = (int)party;
                op.a = parse_bit_string(w[2]);
                op.b = parse_bit_string(w[3]);
                for (size_t j = 4; j < w.size(); j++) op.openings.push_back(open_of(w[j]));
                r.gamma.gamma.push_back(op);
            } else {
                need(false);
            }
        }
        if (!psi || !ch) fail(name + ": missing psi or challenge");
        t.reps.push_back(std::move(r));
    }
    return t;
}

}  // namespace zkmitqh
