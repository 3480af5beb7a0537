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

#include "zkmitqh/mpc.hpp"

#include <stdexcept>

namespace zkmitqh {

int MpcContext::message_rounds() const { return 1 + (int)circuit.interactive_muls().size(); }

size_t MpcContext::tape_length(int party) const {
    return (size_t)t * ((size_t)circuit.input_arity[party - 1] + circuit.interactive_muls().size());
}

void MpcContext::validate() const {
    circuit.validate();
    if (!(2 * t < n())) throw std::invalid_argument("threshold violation: need t < n/2");
    if (t < 1) throw std::invalid_argument("threshold must be at least 1");
    if ((int)field.size() <= n()) throw std::invalid_argument("field too small for the party count");
    if ((int)public_x.size() != circuit.num_public) throw std::invalid_argument("public input arity mismatch");
}

bool View::operator==(const View& o) const {
    return party == o.party && input_share == o.input_share && tape == o.tape && received == o.received &&
           broadcasts == o.broadcasts && output == o.output;
}

namespace {

// Executes one party round by round.
class PartyMachine {
   public:
    PartyMachine(const MpcContext& ctx, int party, const FieldVec& input, const FieldVec& tape)
        : ctx_(ctx), c_(ctx.circuit), f_(ctx.field), party_(party), input_(input), tape_(tape) {
        n_ = ctx.n();
        pub_ = c_.public_wires();
        muls_ = c_.interactive_muls();
        for (int i = 1; i <= n_; i++) xs_.push_back((uint32_t)i);
        lambda_ = f_.lagrange_at_zero(xs_);
        if ((int)input_.size() != c_.input_arity[party - 1]) throw std::invalid_argument("input share arity");
        if (tape_.size() != ctx.tape_length(party)) throw std::invalid_argument("tape length");
        for (uint32_t v : input_)
            if (v >= f_.size()) throw std::invalid_argument("input share outside field");
        for (uint32_t v : tape_)
            if (v >= f_.size()) throw std::invalid_argument("tape element outside field");
        val_.assign(c_.num_wires(), 0);
    }

    RoundMessages round0() {
        RoundMessages rm;
        rm.to.assign(n_, {});
        int t = ctx_.t;
        for (size_t j = 0; j < input_.size(); j++) {
            std::vector<uint32_t> coeffs(1 + t);
            coeffs[0] = input_[j];
            for (int l = 0; l < t; l++) coeffs[1 + l] = tape_[j * t + l];
            for (int k = 1; k <= n_; k++) rm.to[k - 1].push_back(f_.eval_poly(coeffs, (uint32_t)k));
        }
        return rm;
    }

    // Feeds the messages of `round`; fills either `next` (more rounds) or
    // `broadcast` (evaluation finished). Returns false on malformed input.
    bool feed(int round, const std::vector<FieldVec>& msgs, RoundMessages* next, FieldVec* broadcast, bool* done) {
        if ((int)msgs.size() != n_) return false;
        for (const auto& m : msgs)
            for (uint32_t v : m)
                if (v >= f_.size()) return false;
        if (round == 0) {
            for (int s = 1; s <= n_; s++) {
                if ((int)msgs[s - 1].size() != c_.input_arity[s - 1]) return false;
                for (int j = 0; j < c_.input_arity[s - 1]; j++) val_[c_.input_wire(s, j)] = msgs[s - 1][j];
            }
            gate_ = 0;
        } else {
            for (const auto& m : msgs)
                if (m.size() != 1) return false;
            const Gate& g = c_.gates[muls_[round - 1]];
            uint32_t acc = 0;
            for (int s = 0; s < n_; s++) acc ^= f_.mul(lambda_[s], msgs[s][0]);
            val_[g.out] = acc;
            gate_ = muls_[round - 1] + 1;
        }
        return run(round + 1, next, broadcast, done);
    }

    FieldVec reconstruct(const std::vector<FieldVec>& bc) const {
        FieldVec out(c_.outputs.size(), 0);
        for (size_t o = 0; o < out.size(); o++)
            for (int s = 0; s < n_; s++) out[o] ^= f_.mul(lambda_[s], bc[s][o]);
        return out;
    }

    int n() const { return n_; }

   private:
    bool run(int next_round, RoundMessages* next, FieldVec* broadcast, bool* done) {
        for (; gate_ < (int)c_.gates.size(); gate_++) {
            const Gate& g = c_.gates[gate_];
            switch (g.op) {
                case GateOp::Const: val_[g.out] = g.value; break;
                case GateOp::Public: val_[g.out] = ctx_.public_x[g.value]; break;
                case GateOp::Add: val_[g.out] = f_.add(val_[g.a], val_[g.b]); break;
                case GateOp::Mul:
                    if (pub_[g.a] || pub_[g.b]) {
                        val_[g.out] = f_.mul(val_[g.a], val_[g.b]);
                    } else {
                        int m = next_round - 1;  // index into interactive muls
                        int t = ctx_.t;
                        size_t off = (size_t)t * input_.size() + (size_t)m * t;
                        std::vector<uint32_t> coeffs(1 + t);
                        coeffs[0] = f_.mul(val_[g.a], val_[g.b]);
                        for (int l = 0; l < t; l++) coeffs[1 + l] = tape_[off + l];
                        next->to.assign(n_, {});
                        for (int k = 1; k <= n_; k++) next->to[k - 1] = {f_.eval_poly(coeffs, (uint32_t)k)};
                        *done = false;
                        return true;
                    }
                    break;
            }
        }
        broadcast->clear();
        for (int o : c_.outputs) broadcast->push_back(val_[o]);
        *done = true;
        return true;
    }

    const MpcContext& ctx_;
    const ArithCircuit& c_;
    const Gf2k& f_;
    int party_;
    int n_ = 0;
    FieldVec input_, tape_;
    std::vector<bool> pub_;
    std::vector<int> muls_;
    std::vector<uint32_t> xs_, lambda_;
    std::vector<uint32_t> val_;
    int gate_ = 0;
};

}  // namespace

PartyReplay replay_party(const MpcContext& ctx, int party, const FieldVec& input_share, const FieldVec& tape,
                         const std::vector<std::vector<FieldVec>>& received, const std::vector<FieldVec>& broadcasts) {
    PartyReplay pr;
    PartyMachine pm(ctx, party, input_share, tape);
    pr.sent.push_back(pm.round0());
    int rounds = ctx.message_rounds();
    for (int r = 0; r < rounds && r < (int)received.size(); r++) {
        RoundMessages next;
        FieldVec bc;
        bool done = false;
        if (!pm.feed(r, received[r], &next, &bc, &done)) throw std::invalid_argument("malformed received messages");
        if (done) {
            if (r != rounds - 1) throw std::logic_error("round schedule mismatch");
            pr.broadcast = bc;
            pr.complete = true;
            if ((int)broadcasts.size() == pm.n()) {
                for (const auto& b : broadcasts)
                    if (b.size() != ctx.circuit.outputs.size()) throw std::invalid_argument("malformed broadcast log");
                pr.output = pm.reconstruct(broadcasts);
            }
            break;
        }
        pr.sent.push_back(next);
    }
    return pr;
}

RoundMessages next_message(const MpcContext& ctx, int party, const FieldVec& input_share, const FieldVec& tape,
                           const std::vector<std::vector<FieldVec>>& received_so_far, int round) {
    int rounds = ctx.message_rounds();
    if (round < 0 || round > rounds || (int)received_so_far.size() < round)
        throw std::invalid_argument("malformed round structure");
    std::vector<std::vector<FieldVec>> prefix(received_so_far.begin(), received_so_far.begin() + round);
    PartyReplay pr = replay_party(ctx, party, input_share, tape, prefix, {});
    if (round == rounds) {
        RoundMessages rm;
        rm.to = {pr.broadcast};
        return rm;
    }
    return pr.sent[round];
}

std::vector<FieldVec> tapes_from_seed(const MpcContext& ctx, uint64_t seed) {
    std::vector<FieldVec> tapes;
    Rng base(seed, 0x7a9e);
    for (int i = 1; i <= ctx.n(); i++) {
        Rng r = base.fork((uint64_t)i);
        FieldVec tp(ctx.tape_length(i));
        for (auto& x : tp) x = (uint32_t)r.below(ctx.field.size());
        tapes.push_back(tp);
    }
    return tapes;
}

MpcTranscript emulate_with_tapes(const MpcContext& ctx, const std::vector<FieldVec>& inputs,
                                 const std::vector<FieldVec>& tapes) {
    ctx.validate();
    int n = ctx.n();
    if ((int)inputs.size() != n || (int)tapes.size() != n) throw std::invalid_argument("one input and tape per party");
    std::vector<PartyMachine> pms;
    pms.reserve(n);
    for (int i = 1; i <= n; i++) pms.emplace_back(ctx, i, inputs[i - 1], tapes[i - 1]);
    MpcTranscript tr;
    tr.public_input = ctx.public_x;
    tr.views.resize(n);
    for (int i = 1; i <= n; i++) {
        tr.views[i - 1].party = i;
        tr.views[i - 1].input_share = inputs[i - 1];
        tr.views[i - 1].tape = tapes[i - 1];
    }
    std::vector<RoundMessages> out(n);
    for (int i = 0; i < n; i++) out[i] = pms[i].round0();
    int rounds = ctx.message_rounds();
    std::vector<FieldVec> bc(n);
    for (int r = 0; r < rounds; r++) {
        std::vector<RoundMessages> nxt(n);
        for (int j = 0; j < n; j++) {
            std::vector<FieldVec> msgs(n);
            for (int i = 0; i < n; i++) msgs[i] = out[i].to[j];
            tr.views[j].received.push_back(msgs);
            bool done = false;
            if (!pms[j].feed(r, msgs, &nxt[j], &bc[j], &done)) throw std::logic_error("emulation produced malformed messages");
        }
        out = std::move(nxt);
    }
    for (int j = 0; j < n; j++) {
        tr.views[j].broadcasts = bc;
        tr.views[j].output = pms[j].reconstruct(bc);
    }
    return tr;
}

MpcTranscript emulate_all(const MpcContext& ctx, const std::vector<FieldVec>& inputs, uint64_t seed) {
    return emulate_with_tapes(ctx, inputs, tapes_from_seed(ctx, seed));
}

bool view_well_formed(const MpcContext& ctx, const View& v) {
    int n = ctx.n();
    if (v.party < 1 || v.party > n) return false;
    if ((int)v.input_share.size() != ctx.circuit.input_arity[v.party - 1]) return false;
    if (v.tape.size() != ctx.tape_length(v.party)) return false;
    if ((int)v.received.size() != ctx.message_rounds()) return false;
    for (int r = 0; r < (int)v.received.size(); r++) {
        if ((int)v.received[r].size() != n) return false;
        for (int s = 1; s <= n; s++) {
            size_t want = r == 0 ? (size_t)ctx.circuit.input_arity[s - 1] : 1;
            if (v.received[r][s - 1].size() != want) return false;
        }
    }
    if ((int)v.broadcasts.size() != n) return false;
    for (const auto& b : v.broadcasts)
        if (b.size() != ctx.circuit.outputs.size()) return false;
    if (v.output.size() != ctx.circuit.outputs.size()) return false;
    auto inside = [&](const FieldVec& xs) {
        for (uint32_t x : xs)
            if (x >= ctx.field.size()) return false;
        return true;
    };
    if (!inside(v.input_share) || !inside(v.tape) || !inside(v.output)) return false;
    for (const auto& rr : v.received)
        for (const auto& m : rr)
            if (!inside(m)) return false;
    for (const auto& b : v.broadcasts)
        if (!inside(b)) return false;
    return true;
}

FieldVec view_output(const MpcContext& ctx, const View& v) {
    if (!view_well_formed(ctx, v)) return {};
    try {
        auto pr = replay_party(ctx, v.party, v.input_share, v.tape, v.received, v.broadcasts);
        if (!pr.complete) return {};
        return pr.output;
    } catch (const std::exception&) {
        return {};
    }
}

bool pairwise_consistent(const View& vi, const View& vj, const MpcContext& ctx) {
    if (!view_well_formed(ctx, vi) || !view_well_formed(ctx, vj)) return false;
    PartyReplay ri, rj;
    try {
        ri = replay_party(ctx, vi.party, vi.input_share, vi.tape, vi.received, vi.broadcasts);
        rj = replay_party(ctx, vj.party, vj.input_share, vj.tape, vj.received, vj.broadcasts);
    } catch (const std::exception&) {
        return false;
    }
    if (!ri.complete || !rj.complete) return false;
    int i = vi.party, j = vj.party;
    for (int r = 0; r < ctx.message_rounds(); r++) {
        if (ri.sent[r].to[j - 1] != vj.received[r][i - 1]) return false;
        if (rj.sent[r].to[i - 1] != vi.received[r][j - 1]) return false;
    }
    if (vi.broadcasts != vj.broadcasts) return false;
    if (ri.broadcast != vi.broadcasts[i - 1] || rj.broadcast != vj.broadcasts[j - 1]) return false;
    if (ri.output != vi.output || rj.output != vj.output) return false;
    return true;
}

namespace {
void put_u16(std::vector<uint8_t>& out, uint32_t x) {
    out.push_back(x & 0xff);
    out.push_back((x >> 8) & 0xff);
}
void put_u32(std::vector<uint8_t>& out, uint32_t x) {
    for (int i = 0; i < 4; i++) out.push_back((x >> (8 * i)) & 0xff);
}
void put_list(std::vector<uint8_t>& out, const FieldVec& v) {
    put_u32(out, (uint32_t)v.size());
    for (uint32_t x : v) out.push_back((uint8_t)x);
}
struct Reader {
    const std::vector<uint8_t>& b;
    size_t pos = 0;
    uint32_t u(int width) {
        if (pos + width > b.size()) throw std::invalid_argument("truncated view encoding");
        uint32_t x = 0;
        for (int i = 0; i < width; i++) x |= (uint32_t)b[pos++] << (8 * i);
        return x;
    }
    FieldVec list() {
        uint32_t len = u(4);
        if (len > b.size() - pos) throw std::invalid_argument("list length exceeds encoding");
        FieldVec v(len);
        for (auto& x : v) x = b[pos++];
        return v;
    }
};
}  // namespace

std::vector<uint8_t> serialize_view(const View& v) {
    std::vector<uint8_t> out;
    put_u16(out, (uint32_t)v.party);
    put_list(out, v.input_share);
    put_list(out, v.tape);
    put_u32(out, (uint32_t)v.received.size());
    for (const auto& r : v.received) {
        put_u32(out, (uint32_t)r.size());
        for (const auto& m : r) put_list(out, m);
    }
    put_u32(out, (uint32_t)v.broadcasts.size());
    for (const auto& b : v.broadcasts) put_list(out, b);
    put_list(out, v.output);
    return out;
}

View parse_view(const std::vector<uint8_t>& bytes) {
    Reader rd{bytes};
    View v;
    v.party = (int)rd.u(2);
    v.input_share = rd.list();
    v.tape = rd.list();
    uint32_t rounds = rd.u(4);
    if (rounds > bytes.size()) throw std::invalid_argument("round count exceeds encoding");
    for (uint32_t r = 0; r < rounds; r++) {
        uint32_t senders = rd.u(4);
        if (senders > bytes.size()) throw std::invalid_argument("sender count exceeds encoding");
        std::vector<FieldVec> msgs;
        for (uint32_t s = 0; s < senders; s++) msgs.push_back(rd.list());
        v.received.push_back(msgs);
    }
    uint32_t nb = rd.u(4);
    if (nb > bytes.size()) throw std::invalid_argument("broadcast count exceeds encoding");
    for (uint32_t s = 0; s < nb; s++) v.broadcasts.push_back(rd.list());
    v.output = rd.list();
    if (rd.pos != bytes.size()) throw std::invalid_argument("trailing bytes in view encoding");
    return v;
}

Bits view_to_bits(const View& v) {
    auto bytes = serialize_view(v);
    Bits out;
    out.reserve(bytes.size() * 8);
    for (uint8_t b : bytes)
        for (int i = 0; i < 8; i++) out.push_back((b >> i) & 1);
    return out;
}

ViewSource view_source(const MpcContext& ctx, const Bits& fixed_prefix, int random_input_bits, const Bits& fixed_suffix) {
    ctx.validate();
    int n = ctx.n();
    int len = (int)fixed_prefix.size() + random_input_bits + (int)fixed_suffix.size();
    for (int a : ctx.circuit.input_arity)
        if (a != len) throw std::invalid_argument("every party must hold a share of the full input");
    int k = ctx.field.k();
    int tape_bits = 0;
    for (int i = 1; i <= n; i++) tape_bits += (int)ctx.tape_length(i) * k;
    ViewSource src;
    src.n = n;
    src.rand_bits = random_input_bits + (n - 1) * len + tape_bits;
    src.views = [ctx, fixed_prefix, fixed_suffix, random_input_bits, len, n, k](const Bits& r) {
        size_t pos = 0;
        Bits input = fixed_prefix;
        for (int i = 0; i < random_input_bits; i++) input.push_back(r[pos++]);
        input.insert(input.end(), fixed_suffix.begin(), fixed_suffix.end());
        std::vector<FieldVec> shares(n, FieldVec(len, 0));
        FieldVec last(input.begin(), input.end());
        for (int i = 0; i < n - 1; i++)
            for (int b = 0; b < len; b++) {
                shares[i][b] = r[pos++];
                last[b] ^= shares[i][b];
            }
        shares[n - 1] = last;
        std::vector<FieldVec> tapes;
        for (int i = 1; i <= n; i++) {
            FieldVec tp(ctx.tape_length(i));
            for (auto& x : tp) {
                uint32_t e = 0;
                for (int b = 0; b < k; b++) e |= (uint32_t)r[pos++] << b;
                x = e;
            }
            tapes.push_back(tp);
        }
        auto tr = emulate_with_tapes(ctx, shares, tapes);
        std::vector<Bits> out;
        for (const auto& v : tr.views) out.push_back(view_to_bits(v));
        return out;
    };
    return src;
}

SharingScheme views_as_sharing(const ViewSharingParams& p) {
    SharingScheme s;
    s.name = "views";
    s.n = p.ctx.n();
    s.secret_bits = p.witness_bits;
    ViewSource probe = view_source(p.ctx, Bits(p.witness_bits, 0), p.lambda, {});
    s.rand_bits = probe.rand_bits;
    s.share_views = [p](uint64_t secret, const Bits& r) {
        Bits w(p.witness_bits);
        for (int i = 0; i < p.witness_bits; i++) w[i] = (secret >> i) & 1;
        return view_source(p.ctx, w, p.lambda, {}).views(r);
    };
    return s;
}

Bits reconstruct_from_views(const std::vector<View>& views) {
    if (views.empty()) return {};
    Bits out(views[0].input_share.size(), 0);
    for (const auto& v : views) {
        if (v.input_share.size() != out.size()) throw std::invalid_argument("input share lengths differ");
        for (size_t i = 0; i < out.size(); i++) out[i] ^= (uint8_t)(v.input_share[i] & 1);
    }
    return out;
}

}  // namespace zkmitqh
