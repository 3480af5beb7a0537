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

#ifndef ZKMITQH_CIRCUIT_HPP
#define ZKMITQH_CIRCUIT_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "zkmitqh/gf.hpp"

namespace zkmitqh {

struct ParseError : std::runtime_error {
    int line;
    ParseError(int line_no, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + msg), line(line_no) {}
};

enum class GateOp { Add, Mul, Const, Public };

struct Gate {
    GateOp op = GateOp::Add;
    int a = -1;
    int b = -1;
    uint32_t value = 0;  // CONST value or PUBLIC index
    int out = -1;
};

// Wires 0.. hold party inputs in party order; every gate defines one new wire.
struct ArithCircuit {
    int parties = 0;
    std::vector<int> input_arity;
    int num_public = 0;
    std::vector<Gate> gates;
    std::vector<int> outputs;

    int total_inputs() const;
    int input_wire(int party, int j) const;  // party is 1-based
    int num_wires() const { return total_inputs() + (int)gates.size(); }
    // Static public-ness of every wire (constants, public inputs and gates over them).
    std::vector<bool> public_wires() const;
    // Shared x shared multiplications, in gate order (gate indices).
    std::vector<int> interactive_muls() const;
    void validate() const;  // throws std::invalid_argument
};

ArithCircuit parse_circuit(const std::string& text);
std::string format_circuit(const ArithCircuit& c);

std::vector<uint32_t> eval_plain(const ArithCircuit& c, const Gf2k& f, const std::vector<uint32_t>& public_x,
                                 const std::vector<std::vector<uint32_t>>& inputs);

// Small builder used by relation constructions.
class CircuitBuilder {
   public:
    CircuitBuilder(int parties, std::vector<int> arity, int num_public);
    int input(int party, int j) const { return c_.input_wire(party, j); }
    int add(int a, int b);
    int mul(int a, int b);
    int constant(uint32_t v);
    int pub(int j);
    int bxor(int a, int b) { return add(a, b); }
    int bnot(int a) { return add(a, constant(1)); }
    int band(int a, int b) { return mul(a, b); }
    int bor(int a, int b) { return add(add(a, b), mul(a, b)); }
    void output(int w) { c_.outputs.push_back(w); }
    ArithCircuit build() const;

   private:
    ArithCircuit c_;
    int next_;
};

}  // namespace zkmitqh

#endif
