#include "nlre/arith.hpp"

#include "nlre/netfunc.hpp"

#include "test_helpers.hpp"

#include <doctest.h>

using namespace nlre;

namespace {

// Counter over primitive gates in post-decomposition shape:
// d_i = !rst & (q_i ^ c_i), c_0 = 1, c_{i+1} = maj(q_i, 0, c_i).
Netlist build_counter(int width) {
    const GateLibrary& lib = builtin_library("ice40-like");
    NetlistBuilder b(&lib);
    NetId clk = b.add_net("clk", true);
    NetId rst = b.add_net("rst", true);
    NetId nrst = b.add_net("nrst");
    GateId inv = b.add_gate("INV", "rst_inv");
    b.connect(inv, "A", rst);
    b.connect(inv, "Y", nrst);
    std::vector<NetId> q;
    for (int i = 0; i < width; i++)
        q.push_back(b.add_net("q" + std::to_string(i), false, true));
    NetId carry = b.const_net(true);
    for (int i = 0; i < width; i++) {
        NetId x = b.add_net("x" + std::to_string(i));
        GateId xg = b.add_gate("XOR2", "xor" + std::to_string(i));
        b.connect(xg, "A", q[i]);
        b.connect(xg, "B", carry);
        b.connect(xg, "Y", x);
        NetId d = b.add_net("d" + std::to_string(i));
        GateId ag = b.add_gate("AND2", "gate" + std::to_string(i));
        b.connect(ag, "A", nrst);
        b.connect(ag, "B", x);
        b.connect(ag, "Y", d);
        if (i + 1 < width) {
            NetId next = b.add_net("c" + std::to_string(i + 1));
            GateId cg = b.add_gate("CARRY", "carry" + std::to_string(i));
            b.connect(cg, "I0", q[i]);
            b.connect(cg, "I1", b.const_net(false));
            b.connect(cg, "CI", carry);
            b.connect(cg, "CO", next);
            carry = next;
        }
        GateId ff = b.add_gate("DFF", "ff" + std::to_string(i));
        b.connect(ff, "D", d);
        b.connect(ff, "C", clk);
        b.connect(ff, "Q", q[i]);
    }
    return std::move(b).build();
}

// Ripple subtractor a - b with explicit operand-B inverters.
Netlist build_subtractor(int width) {
    const GateLibrary& lib = builtin_library("ice40-like");
    NetlistBuilder b(&lib);
    std::vector<NetId> a, bb, nb, s;
    for (int i = 0; i < width; i++) {
        a.push_back(b.add_net("a" + std::to_string(i), true));
        bb.push_back(b.add_net("b" + std::to_string(i), true));
        nb.push_back(b.add_net("nb" + std::to_string(i)));
        s.push_back(b.add_net("s" + std::to_string(i), false, true));
    }
    NetId carry = b.const_net(true);
    for (int i = 0; i < width; i++) {
        GateId inv = b.add_gate("INV", "binv" + std::to_string(i));
        b.connect(inv, "A", bb[i]);
        b.connect(inv, "Y", nb[i]);
        NetId x = b.add_net("x" + std::to_string(i));
        GateId x1 = b.add_gate("XOR2", "x1_" + std::to_string(i));
        b.connect(x1, "A", a[i]);
        b.connect(x1, "B", nb[i]);
        b.connect(x1, "Y", x);
        GateId x2 = b.add_gate("XOR2", "x2_" + std::to_string(i));
        b.connect(x2, "A", x);
        b.connect(x2, "B", carry);
        b.connect(x2, "Y", s[i]);
        if (i + 1 < width) {
            NetId next = b.add_net("c" + std::to_string(i + 1));
            GateId cg = b.add_gate("CARRY", "carry" + std::to_string(i));
            b.connect(cg, "I0", a[i]);
            b.connect(cg, "I1", nb[i]);
            b.connect(cg, "CI", carry);
            b.connect(cg, "CO", next);
            carry = next;
        }
    }
    return std::move(b).build();
}

// Unsigned less-than: borrow chain of a - b, output = NOT carry_out.
Netlist build_less_than(int width) {
    const GateLibrary& lib = builtin_library("ice40-like");
    NetlistBuilder b(&lib);
    std::vector<NetId> a, bb, nb;
    for (int i = 0; i < width; i++) {
        a.push_back(b.add_net("a" + std::to_string(i), true));
        bb.push_back(b.add_net("b" + std::to_string(i), true));
        nb.push_back(b.add_net("nb" + std::to_string(i)));
    }
    NetId lt = b.add_net("lt", false, true);
    NetId carry = b.const_net(true);
    for (int i = 0; i < width; i++) {
        GateId inv = b.add_gate("INV", "binv" + std::to_string(i));
        b.connect(inv, "A", bb[i]);
        b.connect(inv, "Y", nb[i]);
        NetId next = b.add_net("c" + std::to_string(i + 1));
        GateId cg = b.add_gate("CARRY", "carry" + std::to_string(i));
        b.connect(cg, "I0", a[i]);
        b.connect(cg, "I1", nb[i]);
        b.connect(cg, "CI", carry);
        b.connect(cg, "CO", next);
        carry = next;
    }
    GateId oinv = b.add_gate("INV", "out_inv");
    b.connect(oinv, "A", carry);
    b.connect(oinv, "Y", lt);
    return std::move(b).build();
}

} // namespace

TEST_CASE("carry chain discovery") {
    SUBCASE("linked carries form one chain") {
        auto fx = test::build_adder4();
        auto chains = find_carry_chains(fx.nl);
        REQUIRE(chains.size() == 1);
        CHECK(chains[0].gates == fx.carry_gates);
        CHECK(chains[0].positions.size() == 4);
    }

    SUBCASE("two disjoint pairs form two chains") {
        const GateLibrary& lib = builtin_library("ice40-like");
        NetlistBuilder b(&lib);
        for (int c = 0; c < 2; c++) {
            NetId i0 = b.add_net("i0_" + std::to_string(c), true);
            NetId i1 = b.add_net("i1_" + std::to_string(c), true);
            NetId mid = b.add_net("mid" + std::to_string(c));
            NetId out = b.add_net("co" + std::to_string(c), false, true);
            GateId g1 = b.add_gate("CARRY", "c" + std::to_string(c) + "_0");
            b.connect(g1, "I0", i0);
            b.connect(g1, "I1", i1);
            b.connect(g1, "CI", b.const_net(false));
            b.connect(g1, "CO", mid);
            GateId g2 = b.add_gate("CARRY", "c" + std::to_string(c) + "_1");
            b.connect(g2, "I0", i0);
            b.connect(g2, "I1", i1);
            b.connect(g2, "CI", mid);
            b.connect(g2, "CO", out);
        }
        auto chains = find_carry_chains(std::move(b).build());
        REQUIRE(chains.size() == 2);
        CHECK(chains[0].gates.size() == 2);
        CHECK(chains[1].gates.size() == 2);
    }

    SUBCASE("a carry4 block unrolls into four positions") {
        const GateLibrary& lib = builtin_library("x7-like");
        NetlistBuilder b(&lib);
        std::vector<NetId> s, o;
        for (int i = 0; i < 4; i++) {
            s.push_back(b.add_net("s" + std::to_string(i), true));
            o.push_back(b.add_net("o" + std::to_string(i), false, true));
        }
        GateId g = b.add_gate("CARRY4", "cc");
        b.connect(g, "CI", b.const_net(false));
        b.connect(g, "CYINIT", b.const_net(false));
        for (int i = 0; i < 4; i++) {
            b.connect(g, "S" + std::to_string(i), s[i]);
            b.connect(g, "DI" + std::to_string(i), b.const_net(false));
            b.connect(g, "O" + std::to_string(i), o[i]);
        }
        auto chains = find_carry_chains(std::move(b).build());
        REQUIRE(chains.size() == 1);
        CHECK(chains[0].gates.size() == 1);
        CHECK(chains[0].positions.size() == 4);
    }

    SUBCASE("primitive-only library has no carry architecture") {
        NetlistBuilder b(&builtin_library("primitive"));
        Netlist nl = std::move(b).build();
        CHECK_THROWS_WITH_AS(find_carry_chains(nl), doctest::Contains("unknown architecture"), NetlistError);
    }
}

TEST_CASE("structural candidates") {
    auto fx = test::build_adder4();
    ArithConfig cfg;
    auto chains = find_carry_chains(fx.nl);
    REQUIRE(chains.size() == 1);
    auto cands = build_structural_candidates(chains[0], 0, fx.nl, cfg);
    REQUIRE(!cands.empty());

    SUBCASE("a one-layer successor variant covers the sum luts") {
        bool found = false;
        for (const auto& c : cands) {
            if (c.pred_layers == 0 && c.succ_layers == 1) {
                found = true;
                for (GateId lut : fx.sum_luts)
                    CHECK(c.gates.count(lut));
            }
        }
        CHECK(found);
    }

    SUBCASE("variants deduplicate by gate set and stay within the cap") {
        std::set<std::set<GateId>> sets;
        for (const auto& c : cands)
            CHECK(sets.insert(c.gates).second);
        CHECK(cands.size() <= cfg.variant_cap);
    }

    SUBCASE("input mux variant includes the muxes") {
        // Same adder, but operand a arrives through MUX2s.
        const GateLibrary& lib = builtin_library("ice40-like");
        NetlistBuilder b(&lib);
        NetId sel = b.add_net("sel", true);
        std::vector<NetId> x, y, a, bb, s;
        for (int i = 0; i < 4; i++) {
            x.push_back(b.add_net("x" + std::to_string(i), true));
            y.push_back(b.add_net("y" + std::to_string(i), true));
            bb.push_back(b.add_net("b" + std::to_string(i), true));
            a.push_back(b.add_net("a" + std::to_string(i)));
            s.push_back(b.add_net("s" + std::to_string(i), false, true));
            GateId m = b.add_gate("MUX2", "mux" + std::to_string(i));
            b.connect(m, "S", sel);
            b.connect(m, "A", x[i]);
            b.connect(m, "B", y[i]);
            b.connect(m, "Y", a[i]);
        }
        NetId carry = b.const_net(false);
        for (int i = 0; i < 4; i++) {
            NetId ax = b.add_net("ax" + std::to_string(i));
            GateId x1 = b.add_gate("XOR2", "px" + std::to_string(i));
            b.connect(x1, "A", a[i]);
            b.connect(x1, "B", bb[i]);
            b.connect(x1, "Y", ax);
            GateId x2 = b.add_gate("XOR2", "sx" + std::to_string(i));
            b.connect(x2, "A", ax);
            b.connect(x2, "B", carry);
            b.connect(x2, "Y", s[i]);
            if (i < 3) {
                NetId next = b.add_net("c" + std::to_string(i + 1));
                GateId cg = b.add_gate("CARRY", "cc" + std::to_string(i));
                b.connect(cg, "I0", a[i]);
                b.connect(cg, "I1", bb[i]);
                b.connect(cg, "CI", carry);
                b.connect(cg, "CO", next);
                carry = next;
            }
        }
        Netlist nl = std::move(b).build();
        auto chains2 = find_carry_chains(nl);
        REQUIRE(chains2.size() == 1);
        auto cands2 = build_structural_candidates(chains2[0], 0, nl, cfg);
        bool mux_included = false;
        for (const auto& c : cands2) {
            size_t muxes = 0;
            for (GateId id : c.gates)
                if (nl.gate(id).type->name == "MUX2")
                    muxes++;
            if (muxes == 4)
                mux_included = true;
        }
        CHECK(mux_included);
        // The small variants still verify it as an addition over the mux
        // outputs, with no controls involved.
        auto result = classify_arithmetic(nl);
        REQUIRE(result.structures.size() == 1);
        CHECK(result.structures[0].model.kind == ModelKind::Addition);
    }
}

TEST_CASE("classify a clean 4-bit adder") {
    auto fx = test::build_adder4();
    auto result = classify_arithmetic(fx.nl);
    REQUIRE(result.structures.size() == 1);
    const ArithmeticStructure& s = result.structures[0];
    CHECK(s.model.kind == ModelKind::Addition);
    CHECK(s.model.width == 4);
    CHECK(s.model.carry_out);
    CHECK(s.status == VerifyStatus::Verified);
    REQUIRE(s.operands.size() == 2);
    // Per-position operand pairs match the construction.
    for (int i = 0; i < 4; i++) {
        std::set<NetId> got{s.operands[0][size_t(i)], s.operands[1][size_t(i)]};
        CHECK(got == std::set<NetId>{fx.a[size_t(i)], fx.b[size_t(i)]});
    }
    CHECK(s.outputs == std::vector<NetId>{fx.sum[0], fx.sum[1], fx.sum[2], fx.sum[3], fx.cout});
    CHECK(arithmetic_oracle_mismatches(s, fx.nl, 1000) == 0);
    CHECK(result.summary.chains_verified == 1);
    CHECK(result.summary.per_model.at("addition") == 1);
}

TEST_CASE("classify a 3-bit counter with synchronous reset") {
    Netlist nl = build_counter(3);
    auto result = classify_arithmetic(nl);
    REQUIRE(result.structures.size() == 1);
    const ArithmeticStructure& s = result.structures[0];
    CHECK(s.model.kind == ModelKind::Counter);
    CHECK(s.model.increment == 1);
    CHECK(s.status == VerifyStatus::Verified);
    // The reset (or its inverted form) acts as the control; under the other
    // polarity every output is constant zero, and that outcome is recorded.
    REQUIRE(s.control_assignment.size() == 1);
    bool const_outcome_seen = false;
    for (const ControlOutcome& o : s.outcomes)
        const_outcome_seen |= o.constant_outputs;
    CHECK(const_outcome_seen);
    CHECK(arithmetic_oracle_mismatches(s, nl, 1000) == 0);
}

TEST_CASE("classify an 8-bit ripple subtractor") {
    Netlist nl = build_subtractor(8);
    auto result = classify_arithmetic(nl);
    REQUIRE(result.structures.size() == 1);
    const ArithmeticStructure& s = result.structures[0];
    CHECK(s.model.kind == ModelKind::Subtraction);
    CHECK(s.model.width == 8);
    REQUIRE(s.operands.size() == 2);
    // Operand A must be the uninverted nets, B the subtrahend.
    for (int i = 0; i < 8; i++) {
        CHECK(nl.net(s.operands[0][size_t(i)]).name == "a" + std::to_string(i));
        CHECK(nl.net(s.operands[1][size_t(i)]).name == "b" + std::to_string(i));
    }
    // Independent integer oracle over all pairs via the structure check.
    CHECK(arithmetic_oracle_mismatches(s, nl, 1000) == 0);
}

TEST_CASE("classify a 4-bit unsigned less-than") {
    Netlist nl = build_less_than(4);
    auto result = classify_arithmetic(nl);
    REQUIRE(result.structures.size() == 1);
    const ArithmeticStructure& s = result.structures[0];
    CHECK(s.model.kind == ModelKind::Comparator);
    CHECK(s.model.cmp == CmpOp::Lt);
    CHECK(!s.model.cmp_is_signed);
    for (int i = 0; i < 4; i++) {
        CHECK(nl.net(s.operands[0][size_t(i)]).name == "a" + std::to_string(i));
        CHECK(nl.net(s.operands[1][size_t(i)]).name == "b" + std::to_string(i));
    }
    // Brute-force oracle over all 256 pairs.
    std::vector<BoolFunc> f;
    for (NetId o : s.outputs)
        f.push_back(subgraph_func(nl, o, s.gates));
    REQUIRE(f.size() == 1);
    for (unsigned av = 0; av < 16; av++)
        for (unsigned bv = 0; bv < 16; bv++) {
            std::map<uint32_t, bool> asg;
            for (int i = 0; i < 4; i++) {
                asg[*nl.find_net("a" + std::to_string(i))] = (av >> i) & 1;
                asg[*nl.find_net("b" + std::to_string(i))] = (bv >> i) & 1;
            }
            REQUIRE(f[0].evaluate(asg) == (av < bv));
        }
}

TEST_CASE("pure ff netlist yields no chains") {
    const GateLibrary& lib = builtin_library("ice40-like");
    NetlistBuilder b(&lib);
    NetId clk = b.add_net("clk", true);
    NetId d = b.add_net("d", true);
    NetId q = b.add_net("q", false, true);
    GateId ff = b.add_gate("DFF", "ff");
    b.connect(ff, "D", d);
    b.connect(ff, "C", clk);
    b.connect(ff, "Q", q);
    auto result = classify_arithmetic(std::move(b).build());
    CHECK(result.structures.empty());
    CHECK(result.summary.chains_total == 0);
}

TEST_CASE("commutativity: swapped operand labels also verify for additions") {
    auto fx = test::build_adder4();
    auto result = classify_arithmetic(fx.nl);
    REQUIRE(result.structures.size() == 1);
    ArithmeticStructure s = result.structures[0];
    std::swap(s.operands[0], s.operands[1]);
    CHECK(arithmetic_oracle_mismatches(s, fx.nl, 500) == 0);
}

TEST_CASE("determinism: identical runs produce identical structure lists") {
    Netlist nl = build_subtractor(6);
    auto r1 = classify_arithmetic(nl);
    auto r2 = classify_arithmetic(nl);
    REQUIRE(r1.structures.size() == r2.structures.size());
    for (size_t i = 0; i < r1.structures.size(); i++) {
        CHECK(r1.structures[i].gates == r2.structures[i].gates);
        CHECK(r1.structures[i].operands == r2.structures[i].operands);
        CHECK(r1.structures[i].outputs == r2.structures[i].outputs);
        CHECK(r1.structures[i].model.kind == r2.structures[i].model.kind);
    }
}
