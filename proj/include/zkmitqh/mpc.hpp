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

#ifndef ZKMITQH_MPC_HPP
#define ZKMITQH_MPC_HPP

#include <cstdint>
#include <vector>

#include "zkmitqh/circuit.hpp"
#include "zkmitqh/gf.hpp"
#include "zkmitqh/rng.hpp"
#include "zkmitqh/sharing.hpp"

namespace zkmitqh {

using FieldVec = std::vector<uint32_t>;

// Public context shared by all parties: circuit, field, threshold, public input.
struct MpcContext {
    ArithCircuit circuit;
    Gf2k field;
    int t = 1;
    FieldVec public_x;

    int n() const { return circuit.parties; }
    // Message rounds: input dealing plus one per shared x shared MUL. The
    // output broadcast is a separate final round.
    int message_rounds() const;
    size_t tape_length(int party) const;  // field elements
    void validate() const;                // t < n/2, 2^k > n, arities
};

struct View {
    int party = 0;  // 1-based
    FieldVec input_share;
    FieldVec tape;
    // received[round][sender-1]; includes the party's own message to itself
    std::vector<std::vector<FieldVec>> received;
    // broadcasts[sender-1] = that sender's output shares
    std::vector<FieldVec> broadcasts;
    FieldVec output;

    bool operator==(const View& o) const;
};

struct MpcTranscript {
    std::vector<View> views;
    FieldVec public_input;
};

// Outgoing messages of one party for one round: to[recipient-1].
struct RoundMessages {
    std::vector<FieldVec> to;
};

struct PartyReplay {
    std::vector<RoundMessages> sent;  // per message round that could be computed
    FieldVec broadcast;               // own output shares (if reached)
    FieldVec output;                  // reconstructed from the broadcast log (if present)
    bool complete = false;
};

// Replays party i from its inputs and received messages. Rounds whose inputs
// are missing are not produced.
PartyReplay replay_party(const MpcContext& ctx, int party, const FieldVec& input_share, const FieldVec& tape,
                         const std::vector<std::vector<FieldVec>>& received,
                         const std::vector<FieldVec>& broadcasts);

// Messages of round j (0-based) given messages received in rounds < j. For
// j == message_rounds() the single broadcast vector is returned in to[0].
RoundMessages next_message(const MpcContext& ctx, int party, const FieldVec& input_share, const FieldVec& tape,
                           const std::vector<std::vector<FieldVec>>& received_so_far, int round);

std::vector<FieldVec> tapes_from_seed(const MpcContext& ctx, uint64_t seed);
MpcTranscript emulate_with_tapes(const MpcContext& ctx, const std::vector<FieldVec>& inputs,
                                 const std::vector<FieldVec>& tapes);
MpcTranscript emulate_all(const MpcContext& ctx, const std::vector<FieldVec>& inputs, uint64_t seed);

// Structural check that a view has the right shape for the context.
bool view_well_formed(const MpcContext& ctx, const View& v);
// Output recomputed from the view itself (empty if malformed).
FieldVec view_output(const MpcContext& ctx, const View& v);
bool pairwise_consistent(const View& vi, const View& vj, const MpcContext& ctx);

// Canonical byte encoding: u16 party, then length-prefixed (u32) lists of
// one-byte field elements.
std::vector<uint8_t> serialize_view(const View& v);
View parse_view(const std::vector<uint8_t>& bytes);  // throws std::invalid_argument

// The first two prover steps as a sharing scheme: the secret is w (bits), the
// relation-circuit randomness r (lambda bits) and every other coin come from
// the randomness string. Party inputs are XOR shares of (w || r).
struct ViewSharingParams {
    MpcContext ctx;
    int witness_bits = 0;
    int lambda = 0;
};
SharingScheme views_as_sharing(const ViewSharingParams& p);
// Generic form: the first `fixed.size()` input bits are fixed, the remaining
// `random_input_bits` come from randomness, in the order the circuit expects.
ViewSource view_source(const MpcContext& ctx, const Bits& fixed_prefix, int random_input_bits, const Bits& fixed_suffix);
// Inverse of the share step: XOR of the input shares recorded in all views.
Bits reconstruct_from_views(const std::vector<View>& views);
Bits view_to_bits(const View& v);

}  // namespace zkmitqh

#endif
