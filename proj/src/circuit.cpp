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

#include "zkmitqh/circuit.hpp"

#include <sstream>

namespace zkmitqh {

int ArithCircuit::total_inputs() const {
    int s = 0;
    for (int a : input_arity) s += a;
    return s;
}

int ArithCircuit::input_wire(int party, int j) const {
    if (party < 1 || party > parties || j < 0 || j >= input_arity[party - 1])
        throw std::out_of_range("input wire out of range");
    int w = 0;
    for (int p = 1; p < party; p++) w += input_arity[p - 1];
    return w + j;
}

std::vector<bool> ArithCircuit::public_wires() const {
    std::vector<bool> pub(num_wires(), false);
    for (const auto& g : gates) {
        switch (g.op) {
            case GateOp::Const:
            case GateOp::Public: pub[g.out] = true; break;
            default: pub[g.out] = pub[g.a] && pub[g.b];
        }
    }
    return pub;
}

std::vector<int> ArithCircuit::interactive_muls() const {
    auto pub = public_wires();
    std::vector<int> out;
    for (int i = 0; i < (int)gates.size(); i++)
        if (gates[i].op == GateOp::Mul && !pub[gates[i].a] && !pub[gates[i].b]) out.push_back(i);
    return out;
}

void ArithCircuit::validate() const {
    if (parties < 1 || (int)input_arity.size() != parties) throw std::invalid_argument("party count mismatch");
    int defined = total_inputs();
    for (const auto& g : gates) {
        if (g.out != defined) throw std::invalid_argument("gate output must be the next fresh wire");
        if (g.op == GateOp::Add || g.op == GateOp::Mul) {
            if (g.a < 0 || g.a >= defined || g.b < 0 || g.b >= defined)
                throw std::invalid_argument("gate reads an undefined wire");
        }
        if (g.op == GateOp::Public && (int)g.value >= num_public)
            throw std::invalid_argument("public index out of range");
        defined++;
    }
    for (int o : outputs)
        if (o < 0 || o >= defined) throw std::invalid_argument("output wire undefined");
}

static int to_int(const std::string& tok, int line) {
    try {
        size_t pos = 0;
        long v = std::stol(tok, &pos);
        if (pos != tok.size() || v < 0) throw std::invalid_argument("");
        return (int)v;
    } catch (...) {
        throw ParseError(line, "expected a nonnegative integer, got '" + tok + "'");
    }
}

ArithCircuit parse_circuit(const std::string& text) {
    ArithCircuit c;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    bool have_parties = false, have_inputs = false;
    while (std::getline(in, raw)) {
        line++;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        std::istringstream ls(raw);
        std::vector<std::string> tok;
        for (std::string s; ls >> s;) tok.push_back(s);
        if (tok.empty()) continue;
        const std::string& kw = tok[0];
        if (kw == "parties") {
            if (tok.size() != 2) throw ParseError(line, "usage: parties N");
            c.parties = to_int(tok[1], line);
            have_parties = true;
        } else if (kw == "inputs") {
            if (!have_parties) throw ParseError(line, "inputs before parties");
            if ((int)tok.size() != c.parties + 1) throw ParseError(line, "need one arity per party");
            for (size_t i = 1; i < tok.size(); i++) c.input_arity.push_back(to_int(tok[i], line));
            have_inputs = true;
        } else if (kw == "public") {
            if (tok.size() != 2) throw ParseError(line, "usage: public M");
            c.num_public = to_int(tok[1], line);
        } else if (kw == "outputs") {
            for (size_t i = 1; i < tok.size(); i++) c.outputs.push_back(to_int(tok[i], line));
        } else if (kw == "ADD" || kw == "MUL" || kw == "CONST" || kw == "PUBLIC") {
            if (!have_inputs) throw ParseError(line, "gate before inputs header");
            Gate g;
            bool binary = kw == "ADD" || kw == "MUL";
            size_t want = binary ? 5 : 4;
            if (tok.size() != want || tok[want - 2] != "->") throw ParseError(line, "malformed gate");
            if (binary) {
                g.op = kw == "ADD" ? GateOp::Add : GateOp::Mul;
                g.a = to_int(tok[1], line);
                g.b = to_int(tok[2], line);
            } else {
                g.op = kw == "CONST" ? GateOp::Const : GateOp::Public;
                g.value = (uint32_t)to_int(tok[1], line);
            }
            g.out = to_int(tok[want - 1], line);
            int defined = c.total_inputs() + (int)c.gates.size();
            if (g.out != defined) throw ParseError(line, "gate output must be wire " + std::to_string(defined));
            if (binary && (g.a >= defined || g.b >= defined)) throw ParseError(line, "gate reads an undefined wire");
            c.gates.push_back(g);
        } else {
            throw ParseError(line, "unknown keyword '" + kw + "'");
        }
    }
    if (!have_parties || !have_inputs) throw ParseError(line, "missing parties/inputs header");
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(line, e.what());
    }
    return c;
}

std::string format_circuit(const ArithCircuit& c) {
    std::ostringstream o;
    o << "parties " << c.parties << "\ninputs";
    for (int a : c.input_arity) o << ' ' << a;
    o << "\npublic " << c.num_public << "\noutputs";
    for (int w : c.outputs) o << ' ' << w;
    o << '\n';
    for (const auto& g : c.gates) {
        switch (g.op) {
            case GateOp::Add: o << "ADD " << g.a << ' ' << g.b; break;
            case GateOp::Mul: o << "MUL " << g.a << ' ' << g.b; break;
            case GateOp::Const: o << "CONST " << g.value; break;
            case GateOp::Public: o << "PUBLIC " << g.value; break;
        }
        o << " -> " << g.out << '\n';
    }
    return o.str();
}

std::vector<uint32_t> eval_plain(const ArithCircuit& c, const Gf2k& f, const std::vector<uint32_t>& public_x,
                                 const std::vector<std::vector<uint32_t>>& inputs) {
    if ((int)inputs.size() != c.parties) throw std::invalid_argument("arity mismatch: party count");
    if ((int)public_x.size() != c.num_public) throw std::invalid_argument("arity mismatch: public input");
    std::vector<uint32_t> w;
    for (int p = 0; p < c.parties; p++) {
        if ((int)inputs[p].size() != c.input_arity[p]) throw std::invalid_argument("arity mismatch: party input");
        for (uint32_t v : inputs[p]) w.push_back(v);
    }
    for (const auto& g : c.gates) {
        switch (g.op) {
            case GateOp::Add: w.push_back(f.add(w[g.a], w[g.b])); break;
            case GateOp::Mul: w.push_back(f.mul(w[g.a], w[g.b])); break;
            case GateOp::Const: w.push_back(g.value); break;
            case GateOp::Public: w.push_back(public_x[g.value]); break;
        }
    }
    std::vector<uint32_t> out;
    for (int o : c.outputs) out.push_back(w[o]);
    return out;
}

CircuitBuilder::CircuitBuilder(int parties, std::vector<int> arity, int num_public) {
    c_.parties = parties;
    c_.input_arity = std::move(arity);
    c_.num_public = num_public;
    next_ = c_.total_inputs();
}

int CircuitBuilder::add(int a, int b) {
    c_.gates.push_back({GateOp::Add, a, b, 0, next_});
    return next_++;
}
int CircuitBuilder::mul(int a, int b) {
    c_.gates.push_back({GateOp::Mul, a, b, 0, next_});
    return next_++;
}
int CircuitBuilder::constant(uint32_t v) {
    c_.gates.push_back({GateOp::Const, -1, -1, v, next_});
    return next_++;
}
int CircuitBuilder::pub(int j) {
    c_.gates.push_back({GateOp::Public, -1, -1, (uint32_t)j, next_});
    return next_++;
}

ArithCircuit CircuitBuilder::build() const {
    c_.validate();
    return c_;
}

}  // namespace zkmitqh
