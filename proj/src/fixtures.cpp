#include "nlre/fixtures.hpp"

#include <json.hpp>

#include <algorithm>
#include <numeric>
#include <random>

namespace nlre {

const char* to_string(FixtureKind k) {
    switch (k) {
    case FixtureKind::Adder: return "adder";
    case FixtureKind::Subtractor: return "subtractor";
    case FixtureKind::CounterWithReset: return "counter-with-reset";
    case FixtureKind::ComparatorUnsigned: return "comparator-unsigned";
    case FixtureKind::ComparatorSigned: return "comparator-signed";
    case FixtureKind::ConstMul: return "const-mul";
    case FixtureKind::RegisterPipeline: return "register-pipeline";
    case FixtureKind::WordMuxFanout: return "word-mux-fanout";
    case FixtureKind::MacLoop: return "mac-loop";
    case FixtureKind::MixedSocSlice: return "mixed-soc-slice";
    }
    return "?";
}

FixtureKind fixture_kind_from_string(const std::string& s) {
    for (FixtureKind k :
         {FixtureKind::Adder, FixtureKind::Subtractor, FixtureKind::CounterWithReset,
          FixtureKind::ComparatorUnsigned, FixtureKind::ComparatorSigned, FixtureKind::ConstMul,
          FixtureKind::RegisterPipeline, FixtureKind::WordMuxFanout, FixtureKind::MacLoop,
          FixtureKind::MixedSocSlice})
        if (s == to_string(k))
            return k;
    throw NetlistError("unknown fixture kind '" + s + "'");
}

namespace {

struct Ctx {
    NetlistBuilder b;
    FixtureTruth truth;
    std::string arch;
    bool x7;

    explicit Ctx(const std::string& arch_name)
        : b(&builtin_library(arch_name)), arch(arch_name), x7(arch_name == "x7-like") {}

    std::vector<NetId> word(const std::string& prefix, size_t w, bool in = false, bool out = false) {
        std::vector<NetId> nets;
        for (size_t i = 0; i < w; i++)
            nets.push_back(b.add_net(prefix + std::to_string(i), in, out));
        return nets;
    }

    std::vector<std::string> names(const std::vector<NetId>& nets) {
        std::vector<std::string> out;
        for (NetId n : nets)
            out.push_back(b.net_name(n));
        return out;
    }

    // ice40 LUT4 tables for common shapes (unused inputs tied low).
    static constexpr uint64_t kXor3 = 0x9696; // I0 ^ I1 ^ I2
    static constexpr uint64_t kInv = 0x5555;  // !I0

    GateId lut(const std::string& name, const std::string& label, const std::vector<NetId>& inputs,
               uint64_t init_value, NetId out) {
        size_t k = x7 ? inputs.size() : 4;
        std::string type = x7 ? "LUT" + std::to_string(inputs.size()) : "LUT4";
        GateId g = b.add_gate(type, name);
        BitVec init(size_t(1) << k);
        for (size_t i = 0; i < init.width() && i < 64; i++)
            if ((init_value >> i) & 1)
                init.set(i, true);
        b.set_config(g, "INIT", init);
        for (size_t i = 0; i < k; i++)
            b.connect(g, "I" + std::to_string(i), i < inputs.size() ? inputs[i] : b.const_net(false));
        b.connect(g, "O", out);
        if (!label.empty())
            truth.labels[name] = label;
        return g;
    }

    NetId inv(const std::string& name, const std::string& label, NetId in) {
        NetId out = b.add_net(name + "_n");
        lut(name, label, {in}, x7 ? 0x1 : kInv, out);
        return out;
    }

    NetId buf_out(const std::string& name, const std::string& label, NetId in, const std::string& port) {
        NetId out = b.add_net(port, false, true);
        GateId g = b.add_gate("BUF", name);
        b.connect(g, "A", in);
        b.connect(g, "Y", out);
        if (!label.empty())
            truth.labels[name] = label;
        return out;
    }

    GateId ff(const std::string& name, const std::string& label, NetId d, NetId clk, NetId q,
              NetId enable = kInvalidId, NetId reset = kInvalidId) {
        GateId g;
        if (x7) {
            g = b.add_gate("FDRE", name);
            b.connect(g, "D", d);
            b.connect(g, "C", clk);
            b.connect(g, "CE", enable != kInvalidId ? enable : b.const_net(true));
            b.connect(g, "R", reset != kInvalidId ? reset : b.const_net(false));
            b.connect(g, "Q", q);
        } else {
            std::string type = enable != kInvalidId ? (reset != kInvalidId ? "DFFER" : "DFFE")
                                                    : (reset != kInvalidId ? "DFFR" : "DFF");
            g = b.add_gate(type, name);
            b.connect(g, "D", d);
            b.connect(g, "C", clk);
            if (enable != kInvalidId)
                b.connect(g, "E", enable);
            if (reset != kInvalidId)
                b.connect(g, "R", reset);
            b.connect(g, "Q", q);
        }
        if (!label.empty())
            truth.labels[name] = label;
        return g;
    }

    struct ChainIce {
        std::vector<NetId> carries; // carries[i] feeds position i; back() = carry out
        std::vector<GateId> gates;
    };

    ChainIce ice_chain(const std::string& name, const std::string& label, const std::vector<NetId>& i0,
                       const std::vector<NetId>& i1, bool carry_in) {
        ChainIce c;
        size_t w = i0.size();
        c.carries.push_back(b.const_net(carry_in));
        for (size_t i = 0; i < w; i++) {
            NetId co = b.add_net(name + "_c" + std::to_string(i + 1));
            GateId g = b.add_gate("CARRY", name + "_cy" + std::to_string(i));
            b.connect(g, "I0", i0[i]);
            b.connect(g, "I1", i1[i]);
            b.connect(g, "CI", c.carries.back());
            b.connect(g, "CO", co);
            c.carries.push_back(co);
            c.gates.push_back(g);
            if (!label.empty())
                truth.labels[name + "_cy" + std::to_string(i)] = label;
        }
        return c;
    }

    struct ChainX7 {
        std::vector<NetId> o;       // per-position XOR outputs
        std::vector<NetId> carries; // carries.back() = carry out
    };

    ChainX7 x7_chain(const std::string& name, const std::string& label, const std::vector<NetId>& s,
                     const std::vector<NetId>& di, bool carry_in) {
        ChainX7 c;
        size_t w = s.size();
        NetId ci = b.const_net(false);
        for (size_t base = 0; base < w; base += 4) {
            GateId g = b.add_gate("CARRY4", name + "_cy" + std::to_string(base / 4));
            if (!label.empty())
                truth.labels[name + "_cy" + std::to_string(base / 4)] = label;
            b.connect(g, "CI", base == 0 ? b.const_net(false) : ci);
            b.connect(g, "CYINIT", base == 0 ? b.const_net(carry_in) : b.const_net(false));
            for (size_t j = 0; j < 4; j++) {
                size_t i = base + j;
                b.connect(g, "S" + std::to_string(j), i < w ? s[i] : b.const_net(false));
                b.connect(g, "DI" + std::to_string(j), i < w ? di[i] : b.const_net(false));
                if (i < w) {
                    NetId o = b.add_net(name + "_o" + std::to_string(i));
                    b.connect(g, "O" + std::to_string(j), o);
                    c.o.push_back(o);
                    NetId co = b.add_net(name + "_c" + std::to_string(i + 1));
                    b.connect(g, "CO" + std::to_string(j), co);
                    c.carries.push_back(co);
                }
            }
            ci = c.carries.back();
        }
        return c;
    }

    struct AddResult {
        std::vector<NetId> sums;
        NetId carry_out = kInvalidId;
    };

    // a + b, or a - b via inverted second operand and carry-in 1.
    AddResult add_word(const std::string& name, const std::string& label, const std::vector<NetId>& a,
                       const std::vector<NetId>& bb, bool minus) {
        size_t w = a.size();
        AddResult r;
        std::vector<NetId> op2 = bb;
        if (minus)
            for (size_t i = 0; i < w; i++)
                op2[i] = inv(name + "_bi" + std::to_string(i), label, bb[i]);
        if (x7) {
            std::vector<NetId> s, di;
            for (size_t i = 0; i < w; i++) {
                NetId p = b.add_net(name + "_p" + std::to_string(i));
                lut(name + "_pl" + std::to_string(i), label, {a[i], op2[i]}, 0x6, p);
                s.push_back(p);
                di.push_back(a[i]);
            }
            ChainX7 c = x7_chain(name, label, s, di, minus);
            r.sums = c.o;
            r.carry_out = c.carries.back();
        } else {
            ChainIce c = ice_chain(name, label, a, op2, minus);
            for (size_t i = 0; i < w; i++) {
                NetId sum = b.add_net(name + "_s" + std::to_string(i));
                lut(name + "_sl" + std::to_string(i), label, {a[i], op2[i], c.carries[i]}, kXor3, sum);
                r.sums.push_back(sum);
            }
            r.carry_out = c.carries.back();
        }
        return r;
    }

    void expect_arith(const std::string& model, size_t w, int64_t param, const std::vector<NetId>& a,
                      const std::vector<NetId>& bb, const std::vector<NetId>& outs) {
        ExpectedArith e;
        e.model = model;
        e.width = w;
        e.param = param;
        for (size_t i = 0; i < w; i++) {
            std::vector<std::string> pos{b.net_name(a[i])};
            if (!bb.empty())
                pos.push_back(b.net_name(bb[i]));
            e.positions.push_back(std::move(pos));
        }
        for (NetId n : outs)
            e.outputs.push_back(b.net_name(n));
        truth.arithmetic.push_back(std::move(e));
    }

    // Gated increment counter: ice40 packs !rst & (q ^ c) into LUTs; x7 uses
    // the FDRE synchronous reset and raw q as carry4 propagate.
    std::vector<NetId> counter(const std::string& name, size_t w, NetId clk, NetId rst,
                               std::vector<NetId>* q_out) {
        auto q = word(name + "q", w);
        std::vector<NetId> incs;
        if (x7) {
            ChainX7 chain = x7_chain(name, name, q, std::vector<NetId>(w, b.const_net(false)), true);
            for (size_t i = 0; i < w; i++)
                ff(name + "_ff" + std::to_string(i), name, chain.o[i], clk, q[i], kInvalidId, rst);
            incs = chain.o;
        } else {
            ChainIce chain = ice_chain(name, name, q, std::vector<NetId>(w, b.const_net(false)), true);
            for (size_t i = 0; i < w; i++) {
                BitVec init(16);
                for (unsigned v = 0; v < 16; v++) {
                    bool r = v & 1, qq = (v >> 1) & 1, cc = (v >> 2) & 1;
                    if (!r && (qq != cc))
                        init.set(v, true);
                }
                NetId d = b.add_net(name + "d" + std::to_string(i));
                GateId g = b.add_gate("LUT4", name + "_dl" + std::to_string(i));
                b.set_config(g, "INIT", init);
                b.connect(g, "I0", rst);
                b.connect(g, "I1", q[i]);
                b.connect(g, "I2", chain.carries[i]);
                b.connect(g, "I3", b.const_net(false));
                b.connect(g, "O", d);
                truth.labels[name + "_dl" + std::to_string(i)] = name;
                ff(name + "_ff" + std::to_string(i), name, d, clk, q[i]);
                incs.push_back(d);
            }
        }
        expect_arith("counter", w, 1, q, {}, incs);
        truth.orders[name]["Q"] = names(q);
        *q_out = q;
        return incs;
    }
};

// Permutes gate and net ids under the seed, preserving names, connections,
// constants, and flags. Emulates the loss of construction order.
Netlist permute_ids(Netlist nl, uint64_t seed) {
    std::mt19937_64 rng(seed ^ 0xfeedfacecafebeefull);
    std::vector<size_t> net_order(nl.nets().size());
    std::iota(net_order.begin(), net_order.end(), 0);
    std::shuffle(net_order.begin(), net_order.end(), rng);
    std::vector<size_t> gate_order(nl.gates().size());
    std::iota(gate_order.begin(), gate_order.end(), 0);
    std::shuffle(gate_order.begin(), gate_order.end(), rng);

    NetlistBuilder b(&nl.library());
    std::vector<NetId> net_map(nl.nets().size());
    for (size_t idx : net_order) {
        const Net& n = nl.nets()[idx];
        NetId nn = b.add_net(n.name, n.is_global_input, n.is_global_output);
        if (nl.is_const_net(n.id))
            b.set_const_net(nn, nl.const_value(n.id));
        net_map[n.id] = nn;
    }
    for (size_t idx : gate_order) {
        const Gate& g = nl.gates()[idx];
        GateId ng = b.add_gate(g.type->name, g.name);
        for (const auto& [k, v] : g.config)
            b.set_config(ng, k, v);
        for (size_t p = 0; p < g.endpoints.size(); p++)
            if (g.endpoints[p] != kInvalidId)
                b.connect(ng, uint32_t(p), net_map[g.endpoints[p]]);
    }
    return std::move(b).build();
}

void build_adder(Ctx& c, const FixtureSpec& spec) {
    auto a = c.word("a", spec.width, true);
    auto bb = c.word("b", spec.width, true);
    auto r = c.add_word("add0", "add0", a, bb, false);
    for (size_t i = 0; i < spec.width; i++)
        c.buf_out("add0_ob" + std::to_string(i), "add0", r.sums[i], "s" + std::to_string(i));
    c.buf_out("add0_cb", "add0", r.carry_out, "cout");
    std::vector<NetId> outs = r.sums;
    outs.push_back(r.carry_out);
    c.expect_arith("addition", spec.width, 0, a, bb, outs);
}

void build_subtractor(Ctx& c, const FixtureSpec& spec) {
    auto a = c.word("a", spec.width, true);
    auto bb = c.word("b", spec.width, true);
    auto r = c.add_word("sub0", "sub0", a, bb, true);
    for (size_t i = 0; i < spec.width; i++)
        c.buf_out("sub0_ob" + std::to_string(i), "sub0", r.sums[i], "s" + std::to_string(i));
    c.expect_arith("subtraction", spec.width, 0, a, bb, r.sums);
}

void build_counter_fixture(Ctx& c, const FixtureSpec& spec) {
    NetId clk = c.b.add_net("clk", true);
    NetId rst = c.b.add_net("rst", true);
    std::vector<NetId> q;
    c.counter("ctr0", spec.width, clk, rst, &q);
    for (size_t i = 0; i < spec.width; i++)
        c.b.mark_global_output(q[i]);
}

void build_comparator(Ctx& c, const FixtureSpec& spec, bool is_signed) {
    size_t w = spec.width;
    auto a = c.word("a", w, true);
    auto bb = c.word("b", w, true);
    NetId lt = c.b.add_net("lt", false, true);
    std::string label = "cmp0";

    if (c.x7) {
        std::vector<NetId> s, di;
        for (size_t i = 0; i < w; i++) {
            NetId p = c.b.add_net("cmp0_p" + std::to_string(i));
            c.lut("cmp0_pl" + std::to_string(i), label, {a[i], bb[i]}, 0x9, p); // xnor
            s.push_back(p);
            if (is_signed && i == w - 1) {
                NetId g = c.b.add_net("cmp0_g" + std::to_string(i));
                c.lut("cmp0_gl" + std::to_string(i), label, {a[i], bb[i]}, 0x4, g); // !a & b
                di.push_back(g);
            } else {
                di.push_back(a[i]);
            }
        }
        Ctx::ChainX7 chain = c.x7_chain("cmp0", label, s, di, true);
        c.lut("cmp0_inv", label, {chain.carries.back()}, 0x1, lt);
    } else {
        std::vector<NetId> i0 = a, i1(w);
        for (size_t i = 0; i < w; i++)
            i1[i] = c.inv("cmp0_bi" + std::to_string(i), label, bb[i]);
        if (is_signed) {
            i0[w - 1] = c.inv("cmp0_ai", label, a[w - 1]);
            i1[w - 1] = bb[w - 1];
        }
        Ctx::ChainIce chain = c.ice_chain("cmp0", label, i0, i1, true);
        c.lut("cmp0_inv", label, {chain.carries.back()}, Ctx::kInv, lt);
    }
    ExpectedArith e;
    e.model = "comparator";
    e.width = w;
    e.param = is_signed ? 1 : 0;
    for (size_t i = 0; i < w; i++)
        e.positions.push_back({c.b.net_name(a[i]), c.b.net_name(bb[i])});
    e.outputs.push_back("lt");
    c.truth.arithmetic.push_back(std::move(e));
}

void build_const_mul(Ctx& c, const FixtureSpec& spec) {
    size_t w = spec.width;
    size_t shift = 0;
    for (size_t k = 1; k < 63; k++)
        if (spec.factor == 1 + (uint64_t(1) << k))
            shift = k;
    if (shift == 0 || shift >= w)
        throw NetlistError("const-mul factor must be 1 + 2^k with k < width");
    auto a = c.word("a", w, true);
    std::vector<NetId> shifted(w);
    for (size_t i = 0; i < w; i++)
        shifted[i] = i >= shift ? a[i - shift] : c.b.const_net(false);
    auto r = c.add_word("mul0", "mul0", a, shifted, false);
    for (size_t i = 0; i < w; i++)
        c.buf_out("mul0_ob" + std::to_string(i), "mul0", r.sums[i], "s" + std::to_string(i));
    ExpectedArith e;
    e.model = "const-mul";
    e.width = w;
    e.param = int64_t(spec.factor);
    for (size_t i = 0; i < w; i++)
        e.positions.push_back({c.b.net_name(a[i])});
    for (NetId n : r.sums)
        e.outputs.push_back(c.b.net_name(n));
    c.truth.arithmetic.push_back(std::move(e));
}

void build_pipeline(Ctx& c, const FixtureSpec& spec) {
    NetId clk = c.b.add_net("clk", true);
    auto x = c.word("x", spec.width, true);
    std::vector<NetId> cur = x;
    for (size_t s = 0; s < spec.stages; s++) {
        NetId en = c.b.add_net("en" + std::to_string(s), true);
        std::string label = "stage" + std::to_string(s);
        std::vector<NetId> q = c.word("st" + std::to_string(s) + "_q", spec.width, false, s + 1 == spec.stages);
        std::vector<std::string> dnames, qnames;
        for (size_t i = 0; i < spec.width; i++) {
            c.ff("st" + std::to_string(s) + "_ff" + std::to_string(i), label, cur[i], clk, q[i], en);
            dnames.push_back(c.b.net_name(cur[i]));
            qnames.push_back(c.b.net_name(q[i]));
        }
        c.truth.orders[label]["D"] = dnames;
        c.truth.orders[label]["Q"] = qnames;
        c.truth.unorderable.push_back(label); // no word-level neighbor with a known order
        cur = q;
    }
}

void build_word_mux(Ctx& c, const FixtureSpec& spec) {
    size_t w = spec.width;
    NetId clk = c.b.add_net("clk", true);
    NetId sel = c.b.add_net("sel", true);
    NetId en1 = c.b.add_net("en1", true);
    NetId en2 = c.b.add_net("en2", true);
    auto x = c.word("x", w, true);
    auto y = c.word("y", w, true);
    std::vector<NetId> m(w);
    for (size_t i = 0; i < w; i++) {
        m[i] = c.b.add_net("m" + std::to_string(i));
        GateId g = c.b.add_gate("MUX2", "mux0_g" + std::to_string(i));
        c.b.connect(g, "S", sel);
        c.b.connect(g, "A", x[i]);
        c.b.connect(g, "B", y[i]);
        c.b.connect(g, "Y", m[i]);
    }
    size_t half = w / 2;
    for (size_t r = 0; r < 2; r++) {
        std::string label = "reg" + std::to_string(r + 1);
        std::vector<std::string> qnames;
        for (size_t i = 0; i < half; i++) {
            size_t bit = r * half + i;
            NetId q = c.b.add_net(label + "_q" + std::to_string(i), false, true);
            c.ff(label + "_ff" + std::to_string(i), label, m[bit], clk, q, r == 0 ? en1 : en2);
            qnames.push_back(c.b.net_name(q));
        }
        c.truth.orders[label]["Q"] = qnames;
        c.truth.unorderable.push_back(label);
    }
}

void build_mac_loop(Ctx& c, const FixtureSpec& spec) {
    (void)spec;
    NetId clk = c.b.add_net("clk", true);
    NetId rst = c.b.add_net("rst", true);
    auto a = c.word("a", 16, true);
    auto bb = c.word("b", 16, true);
    auto o = c.word("o", 32, false, true);
    GateId mac = c.b.add_gate(c.x7 ? "DSP_MAC" : "MAC16", "mac0");
    c.truth.labels["mac0"] = "mac0";
    c.b.connect(mac, "CLK", clk);
    c.b.connect(mac, "CE", c.b.const_net(true));
    c.b.connect(mac, "RST", rst);
    for (size_t i = 0; i < 16; i++) {
        c.b.connect(mac, "A" + std::to_string(i), a[i]);
        c.b.connect(mac, "B" + std::to_string(i), bb[i]);
    }
    for (size_t i = 0; i < 32; i++)
        c.b.connect(mac, "O" + std::to_string(i), o[i]);
}

void build_mixed(Ctx& c, const FixtureSpec& spec) {
    size_t w = std::max<size_t>(spec.width, 8);
    NetId clk = c.b.add_net("clk", true);
    NetId rst = c.b.add_net("rst", true);
    NetId sel = c.b.add_net("sel", true);
    NetId en_a = c.b.add_net("en_a", true);
    NetId en_b = c.b.add_net("en_b", true);
    NetId en_d = c.b.add_net("en_d", true);
    NetId en_e = c.b.add_net("en_e", true);
    auto x = c.word("x", w, true);
    auto y = c.word("y", w, true);
    auto z = c.word("z", w, true);

    // Word mux x/y -> register A.
    std::vector<NetId> m(w);
    for (size_t i = 0; i < w; i++) {
        m[i] = c.b.add_net("m" + std::to_string(i));
        GateId g = c.b.add_gate("MUX2", "mux0_g" + std::to_string(i));
        c.b.connect(g, "S", sel);
        c.b.connect(g, "A", x[i]);
        c.b.connect(g, "B", y[i]);
        c.b.connect(g, "Y", m[i]);
    }
    auto rega_q = c.word("rega_q", w);
    for (size_t i = 0; i < w; i++)
        c.ff("rega_ff" + std::to_string(i), "rega", m[i], clk, rega_q[i], en_a);
    c.truth.orders["rega"]["D"] = c.names(m);
    c.truth.orders["rega"]["Q"] = c.names(rega_q);

    // Adder A + y -> register B.
    auto add = c.add_word("add0", "add0", rega_q, y, false);
    std::vector<NetId> outs_add = add.sums;
    outs_add.push_back(add.carry_out);
    c.expect_arith("addition", w, 0, rega_q, y, outs_add);
    auto regb_q = c.word("regb_q", w);
    for (size_t i = 0; i < w; i++)
        c.ff("regb_ff" + std::to_string(i), "regb", add.sums[i], clk, regb_q[i], en_b);
    c.truth.orders["regb"]["D"] = c.names(add.sums);
    c.truth.orders["regb"]["Q"] = c.names(regb_q);
    NetId addcout = c.buf_out("add0_cb", "add0", add.carry_out, "add_cout");
    (void)addcout;

    // Counter-addressed ROM feeding a MAC with register B.
    std::vector<NetId> ctrq;
    c.counter("ctr0", 4, clk, rst, &ctrq);

    GateId bram = c.b.add_gate(c.x7 ? "RAMB" : "BRAM", "rom0");
    c.truth.labels["rom0"] = "rom0";
    BitVec init(256 * 16);
    std::mt19937_64 rng(spec.seed ^ 0xb10c0);
    for (size_t i = 0; i < init.width(); i++)
        if (rng() & 1)
            init.set(i, true);
    c.b.set_config(bram, "INIT", init);
    c.b.connect(bram, "CLK", clk);
    c.b.connect(bram, "WE", c.b.const_net(false));
    for (size_t i = 0; i < 8; i++) {
        c.b.connect(bram, "WADDR" + std::to_string(i), c.b.const_net(false));
        c.b.connect(bram, "RADDR" + std::to_string(i), i < 4 ? ctrq[i] : c.b.const_net(false));
    }
    for (size_t i = 0; i < 16; i++)
        c.b.connect(bram, "WDATA" + std::to_string(i), c.b.const_net(false));
    auto rdata = c.word("romd", 16);
    for (size_t i = 0; i < 16; i++)
        c.b.connect(bram, "RDATA" + std::to_string(i), rdata[i]);

    GateId mac = c.b.add_gate(c.x7 ? "DSP_MAC" : "MAC16", "mac0");
    c.truth.labels["mac0"] = "mac0";
    c.b.connect(mac, "CLK", clk);
    c.b.connect(mac, "CE", c.b.const_net(true));
    c.b.connect(mac, "RST", rst);
    for (size_t i = 0; i < 16; i++) {
        c.b.connect(mac, "A" + std::to_string(i), rdata[i]);
        c.b.connect(mac, "B" + std::to_string(i), i < w ? regb_q[i] : c.b.const_net(false));
    }
    auto maco = c.word("maco", 16);
    for (size_t i = 0; i < 16; i++)
        c.b.connect(mac, "O" + std::to_string(i), maco[i]);

    std::vector<std::string> regd_q;
    for (size_t i = 0; i < 16; i++) {
        NetId q2 = c.b.add_net("regd_q" + std::to_string(i), false, true);
        c.ff("regd_ff" + std::to_string(i), "regd", maco[i], clk, q2, en_d);
        regd_q.push_back(c.b.net_name(q2));
    }
    c.truth.orders["regd"]["D"] = c.names(maco);
    c.truth.orders["regd"]["Q"] = regd_q;

    // Subtractor y - z, outputs exported directly.
    auto sub = c.add_word("sub0", "sub0", y, z, true);
    for (NetId n : sub.sums)
        c.b.mark_global_output(n);
    c.expect_arith("subtraction", w, 0, y, z, sub.sums);

    // Constant multiple 3*x.
    {
        std::vector<NetId> shifted(w);
        for (size_t i = 0; i < w; i++)
            shifted[i] = i >= 1 ? x[i - 1] : c.b.const_net(false);
        auto mul = c.add_word("mul0", "mul0", x, shifted, false);
        for (NetId n : mul.sums)
            c.b.mark_global_output(n);
        ExpectedArith e;
        e.model = "const-mul";
        e.width = w;
        e.param = 3;
        for (size_t i = 0; i < w; i++)
            e.positions.push_back({c.b.net_name(x[i])});
        for (NetId n : mul.sums)
            e.outputs.push_back(c.b.net_name(n));
        c.truth.arithmetic.push_back(std::move(e));
    }

    // Unsigned comparator x < y.
    {
        NetId lt = c.b.add_net("lt", false, true);
        std::vector<NetId> i1(w);
        for (size_t i = 0; i < w; i++)
            i1[i] = c.inv("cmp0_bi" + std::to_string(i), "cmp0", y[i]);
        if (c.x7) {
            std::vector<NetId> s, di;
            for (size_t i = 0; i < w; i++) {
                NetId p = c.b.add_net("cmp0_p" + std::to_string(i));
                c.lut("cmp0_pl" + std::to_string(i), "cmp0", {x[i], y[i]}, 0x9, p);
                s.push_back(p);
                di.push_back(x[i]);
            }
            Ctx::ChainX7 chain = c.x7_chain("cmp0", "cmp0", s, di, true);
            c.lut("cmp0_inv", "cmp0", {chain.carries.back()}, 0x1, lt);
        } else {
            Ctx::ChainIce chain = c.ice_chain("cmp0", "cmp0", x, i1, true);
            c.lut("cmp0_inv", "cmp0", {chain.carries.back()}, Ctx::kInv, lt);
        }
        ExpectedArith e;
        e.model = "comparator";
        e.width = w;
        e.param = 0;
        for (size_t i = 0; i < w; i++)
            e.positions.push_back({c.b.net_name(x[i]), c.b.net_name(y[i])});
        e.outputs.push_back("lt");
        c.truth.arithmetic.push_back(std::move(e));
    }

    // Two-stage pipeline E -> F on word z: no word-level neighbor carries a
    // known order, so both registers stay unordered.
    NetId en_f = c.b.add_net("en_f", true);
    std::vector<NetId> rege_q(w), regf_q(w);
    std::vector<std::string> rege_qn, regf_qn;
    for (size_t i = 0; i < w; i++) {
        rege_q[i] = c.b.add_net("rege_q" + std::to_string(i));
        c.ff("rege_ff" + std::to_string(i), "rege", z[i], clk, rege_q[i], en_e);
        rege_qn.push_back(c.b.net_name(rege_q[i]));
        regf_q[i] = c.b.add_net("regf_q" + std::to_string(i), false, true);
        c.ff("regf_ff" + std::to_string(i), "regf", rege_q[i], clk, regf_q[i], en_f);
        regf_qn.push_back(c.b.net_name(regf_q[i]));
    }
    c.truth.orders["rege"]["Q"] = rege_qn;
    c.truth.orders["regf"]["Q"] = regf_qn;
    c.truth.unorderable.push_back("rege");
    c.truth.unorderable.push_back("regf");
}

} // namespace

Fixture generate_fixture(const FixtureSpec& spec) {
    if (spec.width < 2)
        throw NetlistError("fixture width must be at least 2");
    if (spec.arch != "ice40-like" && spec.arch != "x7-like")
        throw NetlistError("unsupported fixture architecture '" + spec.arch + "'");
    Ctx c(spec.arch);
    Fixture fx;
    switch (spec.kind) {
    case FixtureKind::Adder: build_adder(c, spec); break;
    case FixtureKind::Subtractor: build_subtractor(c, spec); break;
    case FixtureKind::CounterWithReset:
        build_counter_fixture(c, spec);
        fx.clock = "clk";
        fx.reset = "rst";
        break;
    case FixtureKind::ComparatorUnsigned: build_comparator(c, spec, false); break;
    case FixtureKind::ComparatorSigned: build_comparator(c, spec, true); break;
    case FixtureKind::ConstMul: build_const_mul(c, spec); break;
    case FixtureKind::RegisterPipeline:
        build_pipeline(c, spec);
        fx.clock = "clk";
        break;
    case FixtureKind::WordMuxFanout:
        build_word_mux(c, spec);
        fx.clock = "clk";
        break;
    case FixtureKind::MacLoop:
        build_mac_loop(c, spec);
        fx.clock = "clk";
        fx.reset = "rst";
        break;
    case FixtureKind::MixedSocSlice:
        build_mixed(c, spec);
        fx.clock = "clk";
        fx.reset = "rst";
        break;
    }
    fx.truth = std::move(c.truth);
    fx.netlist = permute_ids(std::move(c.b).build(), spec.seed);
    return fx;
}

std::string write_truth_json(const FixtureTruth& truth) {
    nlohmann::json doc;
    doc["labels"] = truth.labels;
    nlohmann::json orders = nlohmann::json::object();
    for (const auto& [group, pgs] : truth.orders) {
        nlohmann::json o = nlohmann::json::object();
        for (const auto& [pg, nets] : pgs)
            o[pg] = nets;
        orders[group] = o;
    }
    doc["orders"] = orders;
    nlohmann::json arith = nlohmann::json::array();
    for (const ExpectedArith& e : truth.arithmetic) {
        nlohmann::json je;
        je["model"] = e.model;
        je["width"] = e.width;
        je["param"] = e.param;
        je["positions"] = e.positions;
        je["outputs"] = e.outputs;
        arith.push_back(je);
    }
    doc["arithmetic"] = arith;
    doc["unorderable"] = truth.unorderable;
    return doc.dump(2) + "\n";
}

FixtureTruth parse_truth_json(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text);
    FixtureTruth t;
    if (doc.contains("labels"))
        for (auto it = doc["labels"].begin(); it != doc["labels"].end(); ++it)
            t.labels[it.key()] = it.value().get<std::string>();
    if (doc.contains("orders"))
        for (auto g = doc["orders"].begin(); g != doc["orders"].end(); ++g)
            for (auto pg = g.value().begin(); pg != g.value().end(); ++pg)
                t.orders[g.key()][pg.key()] = pg.value().get<std::vector<std::string>>();
    if (doc.contains("arithmetic"))
        for (const auto& je : doc["arithmetic"]) {
            ExpectedArith e;
            e.model = je["model"].get<std::string>();
            e.width = je["width"].get<size_t>();
            e.param = je["param"].get<int64_t>();
            e.positions = je["positions"].get<std::vector<std::vector<std::string>>>();
            e.outputs = je["outputs"].get<std::vector<std::string>>();
            t.arithmetic.push_back(std::move(e));
        }
    if (doc.contains("unorderable"))
        t.unorderable = doc["unorderable"].get<std::vector<std::string>>();
    return t;
}

} // namespace nlre
