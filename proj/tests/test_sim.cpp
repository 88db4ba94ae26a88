#include "nlre/netfunc.hpp"
#include "nlre/sim.hpp"

#include "test_helpers.hpp"

#include <doctest.h>

#include <random>

using namespace nlre;

namespace {

// 8-bit counter with synchronous reset: DFFR state, carry-chain increment.
// D_i = (q_i ^ c_i) with c_0 = 1, c_{i+1} = q_i & c_i (CARRY with I1 = 0).
Netlist build_counter8() {
    const GateLibrary& lib = builtin_library("ice40-like");
    NetlistBuilder b(&lib);
    NetId clk = b.add_net("clk", true);
    NetId rst = b.add_net("rst", true);
    std::vector<NetId> q, d;
    for (int i = 0; i < 8; i++) {
        q.push_back(b.add_net("q" + std::to_string(i), false, true));
        d.push_back(b.add_net("d" + std::to_string(i)));
    }
    NetId carry = b.const_net(true);
    BitVec xor2 = BitVec::from_hex("0x6666", 16); // I0 ^ I1
    for (int i = 0; i < 8; i++) {
        GateId lut = b.add_gate("LUT4", "inc" + std::to_string(i));
        b.set_config(lut, "INIT", xor2);
        b.connect(lut, "I0", q[i]);
        b.connect(lut, "I1", carry);
        b.connect(lut, "I2", b.const_net(false));
        b.connect(lut, "I3", b.const_net(false));
        b.connect(lut, "O", d[i]);
        if (i < 7) {
            NetId next = b.add_net("c" + std::to_string(i + 1));
            GateId cg = b.add_gate("CARRY", "cc" + std::to_string(i));
            b.connect(cg, "I0", q[i]);
            b.connect(cg, "I1", b.const_net(false));
            b.connect(cg, "CI", carry);
            b.connect(cg, "CO", next);
            carry = next;
        }
        GateId ff = b.add_gate("DFFR", "ff" + std::to_string(i));
        b.connect(ff, "D", d[i]);
        b.connect(ff, "C", clk);
        b.connect(ff, "R", rst);
        b.connect(ff, "Q", q[i]);
    }
    return std::move(b).build();
}

unsigned read_word(const Waveform& w, const std::string& prefix, size_t width, size_t t) {
    unsigned v = 0;
    for (size_t i = 0; i < width; i++) {
        Val b = w.value(prefix + std::to_string(i), t);
        REQUIRE(b != Val::X);
        if (b == Val::One)
            v |= 1u << i;
    }
    return v;
}

} // namespace

TEST_CASE("8-bit counter follows the closed form for 300 cycles") {
    Netlist nl = build_counter8();
    Stimulus st;
    st.clock = "clk";
    st.inputs["rst"] = {Val::One, Val::One, Val::Zero};

    Waveform w = simulate(nl, st, 300);
    // Reset is observed by edges 0..2 (edge t samples the values recorded at
    // t-1), so the count leaves zero at sample 3.
    for (size_t t = 0; t < 300; t++) {
        unsigned expect = t <= 2 ? 0u : unsigned((t - 2) % 256);
        CHECK(read_word(w, "q", 8, t) == expect);
    }
}

TEST_CASE("enable gating holds state") {
    const GateLibrary& lib = builtin_library("ice40-like");
    NetlistBuilder b(&lib);
    NetId clk = b.add_net("clk", true);
    NetId en = b.add_net("en", true);
    NetId d = b.add_net("d", true);
    NetId q = b.add_net("q", false, true);
    GateId ff = b.add_gate("DFFE", "ff");
    b.connect(ff, "D", d);
    b.connect(ff, "C", clk);
    b.connect(ff, "E", en);
    b.connect(ff, "Q", q);
    Netlist nl = std::move(b).build();

    Stimulus st;
    st.clock = "clk";
    st.defaults["en"] = Val::Zero;
    st.defaults["d"] = Val::One;
    Waveform w = simulate(nl, st, 10);
    for (size_t t = 0; t < 10; t++)
        CHECK(w.value("q", t) == Val::X); // never enabled: stays uninitialized

    st.inputs["en"] = {Val::Zero, Val::Zero, Val::One, Val::Zero};
    Waveform w2 = simulate(nl, st, 10);
    CHECK(w2.value("q", 2) == Val::X);
    for (size_t t = 3; t < 10; t++)
        CHECK(w2.value("q", t) == Val::One); // captured once, then held
}

TEST_CASE("mac dsp accumulates a*b per enabled cycle") {
    const GateLibrary& lib = builtin_library("ice40-like");
    NetlistBuilder b(&lib);
    NetId clk = b.add_net("clk", true);
    NetId rst = b.add_net("rst", true);
    std::vector<NetId> a, bb;
    for (int i = 0; i < 16; i++) {
        a.push_back(b.add_net("a" + std::to_string(i), true));
        bb.push_back(b.add_net("b" + std::to_string(i), true));
    }
    std::vector<NetId> o;
    for (int i = 0; i < 32; i++)
        o.push_back(b.add_net("o" + std::to_string(i), false, true));
    GateId mac = b.add_gate("MAC16", "mac");
    b.connect(mac, "CLK", clk);
    b.connect(mac, "CE", b.const_net(true));
    b.connect(mac, "RST", rst);
    for (int i = 0; i < 16; i++) {
        b.connect(mac, "A" + std::to_string(i), a[i]);
        b.connect(mac, "B" + std::to_string(i), bb[i]);
    }
    for (int i = 0; i < 32; i++)
        b.connect(mac, "O" + std::to_string(i), o[i]);
    Netlist nl = std::move(b).build();

    const unsigned av = 37, bv = 113;
    Stimulus st;
    st.clock = "clk";
    st.inputs["rst"] = {Val::One, Val::Zero};
    for (int i = 0; i < 16; i++) {
        st.defaults["a" + std::to_string(i)] = from_bool((av >> i) & 1);
        st.defaults["b" + std::to_string(i)] = from_bool((bv >> i) & 1);
    }
    Waveform w = simulate(nl, st, 64);
    // Integer oracle: rst=1 is sampled by edges 0 and 1 (edge t reads the
    // values recorded at t-1), so the first accumulate lands at sample 2.
    uint64_t acc = 0;
    for (size_t t = 0; t < 64; t++) {
        if (t >= 2)
            acc = (acc + uint64_t(av) * bv) & 0xffffffffull;
        unsigned lo = read_word(w, "o", 16, t);
        unsigned hi = 0;
        for (int i = 16; i < 32; i++)
            if (w.value("o" + std::to_string(i), t) == Val::One)
                hi |= 1u << (i - 16);
        CHECK((uint64_t(hi) << 16 | lo) == acc);
    }
}

TEST_CASE("simulation agrees with cone functions") {
    std::mt19937 rng(3);
    Netlist nl = build_counter8();
    Stimulus st;
    st.clock = "clk";
    st.inputs["rst"] = {Val::One, Val::Zero};
    Waveform w = simulate(nl, st, 50);

    // Spot-check: combinational d-nets equal their cone function evaluated
    // on the frontier values of the same cycle.
    for (int check = 0; check < 100; check++) {
        size_t t = rng() % 50;
        NetId target = *nl.find_net("d" + std::to_string(rng() % 8));
        BoolFunc f = cone_func(nl, target);
        std::map<uint32_t, bool> asg;
        bool all_defined = true;
        for (uint32_t v : f.syntactic_support()) {
            Val val = w.value(nl.net(v).name, t);
            if (val == Val::X) {
                all_defined = false;
                break;
            }
            asg[v] = val == Val::One;
        }
        if (!all_defined)
            continue;
        Val simulated = w.value(nl.net(target).name, t);
        REQUIRE(simulated != Val::X);
        CHECK((simulated == Val::One) == f.evaluate(asg));
    }
}

TEST_CASE("vcd round trip") {
    Netlist nl = build_counter8();
    Stimulus st;
    st.clock = "clk";
    st.inputs["rst"] = {Val::One, Val::Zero};
    Waveform w = simulate(nl, st, 20);

    std::string text = write_vcd(w);
    VcdResult back = read_vcd(text);
    CHECK(back.warnings.empty());
    REQUIRE(back.waveform.cycles() == w.cycles());
    for (const Signal& s : w.signals)
        CHECK(back.waveform.values(s.name) == s.values);
    // Canonical-byte identity.
    CHECK(write_vcd(back.waveform) == text);
}

TEST_CASE("hand-written vcd with three signals") {
    const char* text =
        "$timescale 1ns $end\n"
        "$scope module top $end\n"
        "$var wire 1 ! a $end\n"
        "$var wire 1 \" b $end\n"
        "$var wire 1 # c $end\n"
        "$upscope $end\n"
        "$enddefinitions $end\n"
        "#0\n0!\n1\"\nx#\n"
        "#5\n1!\n"
        "#12\nz#\n";
    VcdResult r = read_vcd(text);
    REQUIRE(r.waveform.signals.size() == 3);
    CHECK(r.waveform.cycles() == 3); // timescale-normalized sample points
    CHECK(r.waveform.values("a") == std::vector<Val>{Val::Zero, Val::One, Val::One});
    CHECK(r.waveform.values("b") == std::vector<Val>{Val::One, Val::One, Val::One});
    CHECK(r.waveform.values("c") == std::vector<Val>{Val::X, Val::X, Val::X});
    REQUIRE(r.warnings.size() == 1); // Z mapped to X
}

TEST_CASE("unknown identifier rejected") {
    const char* text =
        "$enddefinitions $end\n"
        "#0\n1!\n";
    CHECK_THROWS_WITH_AS(read_vcd(text), doctest::Contains("unknown identifier"), SimError);
}

TEST_CASE("combinational cycle reported with gates") {
    const GateLibrary& lib = builtin_library("primitive");
    NetlistBuilder b(&lib);
    NetId clk = b.add_net("clk", true);
    (void)clk;
    NetId x = b.add_net("x");
    NetId y = b.add_net("y");
    GateId g1 = b.add_gate("INV", "loop1");
    b.connect(g1, "A", x);
    b.connect(g1, "Y", y);
    GateId g2 = b.add_gate("INV", "loop2");
    b.connect(g2, "A", y);
    b.connect(g2, "Y", x);
    Netlist nl = std::move(b).build();
    Stimulus st;
    st.clock = "clk";
    CHECK_THROWS_WITH_AS(simulate(nl, st, 4), doctest::Contains("combinational cycle"), SimError);
}
