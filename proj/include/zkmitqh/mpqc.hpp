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


#ifndef ZKMITQH_MPQC_HPP
#define ZKMITQH_MPQC_HPP

#include <string>
#include <vector>

#include "zkmitqh/c2h.hpp"
#include "zkmitqh/qmath.hpp"
#include "zkmitqh/sharing.hpp"

namespace zkmitqh {

struct MpqcRegister {
    std::string name;  // in, msg, out, key, ...
    int party = 0;     // 1-based
    std::vector<int> qubits;
};

struct PartyGate {
    int party = 0;
    QGate gate;
};

// One qubit handed from one party to another by a SWAP.
struct MessageSwap {
    int from = 0, to = 0;
    int q_from = 0, q_to = 0;
};

struct MpqcRound {
    std::vector<PartyGate> local;
    std::vector<MessageSwap> messages;
};

struct MpqcSpec {
    int n = 0;
    int num_qubits = 0;
    std::vector<MpqcRegister> registers;
    std::vector<MpqcRound> rounds;
    int output = 0;
    std::vector<int> witness;
    AltAccept alt;
    // Two-party CNOT/CZ gates standing for a send followed by a local
    // combine. Keeps the relation circuit inside the qubit cap.
    bool fused = false;

    int K() const { return (int)rounds.size(); }
    std::vector<int> owners() const;  // per qubit, throws if some qubit has none
    void validate() const;
    // Party-local gate, checked by validate().
    void add_local(int round, int party, const std::string& gate, std::vector<int> targets);
    void add_local(int round, int party, CMat u, std::vector<int> targets, std::string name = "U");
    void send(int round, int from, int to, int q_from, int q_to);
    int add_register(const std::string& name, int party, int size);  // returns first qubit
};

// Qubit ownership; clock qubits belong to pseudo-party n+1.
struct PartyAssignment {
    int n = 0;
    std::vector<int> owner;
    int clock_party() const { return n + 1; }
    std::vector<int> qubits_of(const PartySet& parties) const;
    PartyAssignment with_clock(int clock_qubits) const;
};

struct GlobalCircuit {
    QCircuit circuit;
    PartyAssignment owners;         // data qubits only
    std::vector<int> round_end;     // number of gates applied after each round
};

GlobalCircuit to_global_circuit(const MpqcSpec& spec);

// Relation circuit for the QMA protocol: parties 1..n-1 hold (a_i, b_i, r_i),
// party n holds (psi, r_n) and the ancillas of the verification circuit.
struct RelationLayout {
    int n = 0, m = 0, lambda = 0;
    std::vector<std::vector<int>> a, b;  // index i-1 for parties 1..n-1
    std::vector<std::vector<int>> r;     // index i-1 for parties 1..n
    std::vector<int> psi;
    std::vector<int> ancilla;
    int output = 0;
};

// verifier: qubits 0..m-1 are the witness, the rest ancillas; may have no gates.
// r_accept: truth table over r = xor of shares (2^lambda entries), from the commitment check.
MpqcSpec build_relation_circuit(const QCircuit& verifier, int m, int n, int lambda,
                                const std::vector<uint8_t>& r_accept, RelationLayout* layout = nullptr);

// Basis-state input for the relation circuit; psi given as a state on m qubits.
StateVector relation_input(const RelationLayout& L, const std::vector<uint64_t>& a_shares,
                           const std::vector<uint64_t>& b_shares, const std::vector<uint64_t>& r_shares,
                           const StateVector& psi);

// Toy private protocol: party 1's qubit is padded by every party in turn
// (coherent |+> keys in the padding party's registers) and passed along.
MpqcSpec otp_relay_spec(int n);
StateVector otp_relay_input(const MpqcSpec& spec, const StateVector& psi);

DensityMatrix view_density(const MpqcSpec& spec, const StateVector& input, const PartySet& t, int round);

struct ViewEquality {
    double restriction = 0;  // round-0 distance
    double rounds = 0;   // max over rounds 0..K
    double history = 0;  // reduced history state on T plus the clock
    double max() const { return std::max(rounds, history); }
};
// Throws "restriction mismatch" when the round-0 views differ, unless told
// to report instead.
ViewEquality check_view_equality(const MpqcSpec& spec, const StateVector& x0, const StateVector& x1,
                                 const PartySet& t, bool enforce_restriction = true);

// Everyone sends their inputs to party 1, which runs the circuit. Correct,
// not private.
MpqcSpec pass_through_spec(const QCircuit& c, const std::vector<int>& input_owner, int n);

// Text form: header `parties <n> <rounds>`, then qubits/register/output/
// witness/alt/fused lines, then `round k` sections with `party i gate ...`,
// `party i unitary ...` and `send from to q_from q_to` lines.
MpqcSpec parse_mpqc(const std::string& text);
std::string format_mpqc(const MpqcSpec& spec);

}  // namespace zkmitqh

#endif
