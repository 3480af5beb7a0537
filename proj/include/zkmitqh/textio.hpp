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


#ifndef ZKMITQH_TEXTIO_HPP
#define ZKMITQH_TEXTIO_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "zkmitqh/zknp.hpp"
#include "zkmitqh/zkqma.hpp"

namespace zkmitqh {

inline constexpr const char* kFormatTag = "zkmitqh/1";

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// "key: value" lines plus named blocks of raw lines, both kept in insertion order.
//
//   zkmitqh/1
//   kind: np-transcript
//   seed: 7
//   begin alpha 2
//   ...
//   end alpha
struct TextDoc {
    std::string kind;
    std::vector<std::pair<std::string, std::string>> fields;
    std::vector<std::pair<std::string, std::vector<std::string>>> blocks;

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;
    const std::string& get(const std::string& key) const;  // FormatError if absent
    uint64_t get_u64(const std::string& key) const;
    int get_int(const std::string& key) const;
    void add_block(const std::string& name, std::vector<std::string> lines);
    bool has_block(const std::string& name) const;
    const std::vector<std::string>& block(const std::string& name) const;
};

std::string format_doc(const TextDoc& d);
TextDoc parse_doc(const std::string& text);  // FormatError "line N: ..."

std::string base64_encode(const std::vector<uint8_t>& bytes);
std::vector<uint8_t> base64_decode(const std::string& s);  // strict, FormatError

// Nonzero amplitudes as (u64 index, f64 re, f64 im) little-endian records, base64.
std::string encode_state(const StateVector& s);
StateVector decode_state(int num_qubits, const std::string& s);

std::string read_text(const std::string& path);  // IoError
// temp file in the same directory, then rename
void write_atomic(const std::string& path, const std::string& content);

std::string format_party_set(const PartySet& s);  // "1,3", "-" when empty
PartySet parse_party_set(const std::string& s);
Bits parse_bit_string(const std::string& s);

// --- parameters ---
// Presets "desk" / "toy" plus overrides n, t, lambda, q, relation (e.g. chi8, parity3).
NpParams np_params_from(const TextDoc& d, const std::string& prefix = "params.");
void np_params_to(TextDoc& d, const NpParams& p, const std::string& preset, const std::string& prefix = "params.");
QmaParams qma_params_from(const TextDoc& d, const std::string& prefix = "params.");
void qma_params_to(TextDoc& d, const QmaParams& p, const std::string& preset, const std::string& prefix = "params.");
NpRelation relation_by_name(const std::string& name);

void crs_to(TextDoc& d, const CrsNp& crs);
CrsNp crs_from(const TextDoc& d, const GroupParams& group);
bool same_public_crs(const CrsNp& a, const CrsNp& b);

// --- transcripts ---
struct NpTranscript {
    std::string preset = "desk";
    NpParams params;
    uint64_t seed = 0;
    Bits x;
    CrsNp crs;
    FirstMessageNp alpha;
    ChallengeNp beta;
    ResponseNp gamma;
};
std::string format_np_transcript(const NpTranscript& t);
NpTranscript parse_np_transcript(const std::string& text);

struct QmaRep {
    FirstMessageQma alpha;
    ChallengeQma challenge;
    ResponseQma gamma;
};
struct QmaTranscript {
    std::string preset = "desk";
    QmaParams params;
    uint64_t seed = 0;
    std::string instance = "yes";
    CrsQma crs;
    std::vector<QmaRep> reps;
};
std::string format_qma_transcript(const QmaTranscript& t);
QmaTranscript parse_qma_transcript(const std::string& text);

}  // namespace zkmitqh

#endif
