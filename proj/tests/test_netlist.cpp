#include "nlre/netfunc.hpp"
#include "nlre/netlist.hpp"

#include "test_helpers.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace nlre;

TEST_CASE("build minimal netlist") {
    const GateLibrary& lib = builtin_library("ice40-like");
    NetlistBuilder b(&lib);
    NetId i0 = b.add_net("i0", true);
    NetId i1 = b.add_net("i1", true);
    NetId o = b.add_net("o", false, true);
    GateId g = b.add_gate("LUT4", "lut");
    b.set_config(g, "INIT", BitVec::from_hex("0x8000", 16));
    b.connect(g, "I0", i0);
    b.connect(g, "I1", i1);
    b.connect(g, "I2", i0);
    b.connect(g, "I3", i1);
    b.connect(g, "O", o);
    Netlist nl = std::move(b).build();
    CHECK(nl.gates().size() == 1);
    CHECK(nl.nets().size() == 3);
    CHECK(nl.dangling_nets().empty());
}

TEST_CASE("multi-driven net rejected") {
    const GateLibrary& lib = builtin_library("primitive");
    NetlistBuilder b(&lib);
    NetId a = b.add_net("a", true);
    NetId y = b.add_net("y");
    for (int i = 0; i < 2; i++) {
        GateId g = b.add_gate("INV", "inv" + std::to_string(i));
        b.connect(g, "A", a);
        b.connect(g, "Y", y);
    }
    CHECK_THROWS_WITH_AS(std::move(b).build(), doctest::Contains("multi-driven"), NetlistError);
}

TEST_CASE("sourceless net flagged dangling, not rejected") {
    const GateLibrary& lib = builtin_library("primitive");
    NetlistBuilder b(&lib);
    NetId ghost = b.add_net("ghost");
    NetId y = b.add_net("y", false, true);
    GateId g = b.add_gate("INV", "inv");
    b.connect(g, "A", ghost);
    b.connect(g, "Y", y);
    Netlist nl = std::move(b).build();
    REQUIRE(nl.dangling_nets().size() == 1);
    CHECK(nl.dangling_nets()[0] == ghost);
}

TEST_CASE("unknown gate type rejected") {
    const GateLibrary& lib = builtin_library("primitive");
    NetlistBuilder b(&lib);
    CHECK_THROWS(b.add_gate("NAND7", "g"));
}

TEST_CASE("fanin cone stops at sequential gates") {
    const GateLibrary& lib = builtin_library("ice40-like");
    NetlistBuilder b(&lib);
    NetId clk = b.add_net("clk", true);
    NetId d = b.add_net("d", true);
    NetId x = b.add_net("x", true);
    NetId q = b.add_net("q");
    NetId and_out = b.add_net("and_out");
    NetId target = b.add_net("target", false, true);

    GateId ff = b.add_gate("DFF", "ff");
    b.connect(ff, "D", d);
    b.connect(ff, "C", clk);
    b.connect(ff, "Q", q);
    GateId a = b.add_gate("AND2", "and");
    b.connect(a, "A", q);
    b.connect(a, "B", x);
    b.connect(a, "Y", and_out);
    GateId xo = b.add_gate("XOR2", "xor");
    b.connect(xo, "A", and_out);
    b.connect(xo, "B", x);
    b.connect(xo, "Y", target);
    Netlist nl = std::move(b).build();

    ConeResult cone = nl.combinational_fanin_cone(target);
    CHECK(cone.gates == std::vector<GateId>{a, xo});
    CHECK(cone.inputs == std::vector<NetId>{x, q}); // ascending net id

    ConeResult input_cone = nl.combinational_fanin_cone(d);
    CHECK(input_cone.gates.empty());
    CHECK(input_cone.inputs == std::vector<NetId>{d});
}

TEST_CASE("adder sum-bit cone covers lower carry logic") {
    auto fx = test::build_adder4();
    ConeResult cone = fx.nl.combinational_fanin_cone(fx.sum[2]);

    // Hand-enumerated reachability: s2's LUT, plus carry gates 0 and 1.
    std::set<GateId> expect{fx.sum_luts[2], fx.carry_gates[0], fx.carry_gates[1]};
    CHECK(std::set<GateId>(cone.gates.begin(), cone.gates.end()) == expect);
    std::set<NetId> inputs(cone.inputs.begin(), cone.inputs.end());
    CHECK(inputs == std::set<NetId>{fx.a[0], fx.b[0], fx.a[1], fx.b[1], fx.a[2], fx.b[2]});

    // Cone property: never contains a sequential gate, and cone + frontier
    // form a cut (every cone gate input is internal or frontier).
    for (GateId g : cone.gates)
        CHECK(is_combinational(fx.nl.gate(g).category()));
    std::set<GateId> cg(cone.gates.begin(), cone.gates.end());
    for (GateId g : cone.gates)
        for (size_t p = 0; p < fx.nl.gate(g).endpoints.size(); p++) {
            if (fx.nl.gate(g).type->pins[p].dir != PinDir::In)
                continue;
            NetId n = fx.nl.gate(g).endpoints[p];
            if (fx.nl.is_const_net(n))
                continue;
            bool internal = !fx.nl.net(n).sources.empty() && cg.count(fx.nl.net(n).sources[0].gate);
            CHECK((internal || inputs.count(n)));
        }
}

namespace {

// Brute-force oracle: gate-level reachability by repeated edge expansion.
std::set<std::pair<GateId, GateId>> reachable_pairs(const Netlist& nl) {
    size_t n = nl.gates().size();
    std::vector<std::set<GateId>> adj(n);
    for (const Gate& g : nl.gates())
        for (size_t p = 0; p < g.endpoints.size(); p++)
            if (g.type->pins[p].dir == PinDir::Out && g.endpoints[p] != kInvalidId)
                for (const Endpoint& d : nl.net(g.endpoints[p]).destinations)
                    adj[g.id].insert(d.gate);
    std::set<std::pair<GateId, GateId>> reach;
    for (GateId s = 0; s < n; s++) {
        std::vector<GateId> stack(adj[s].begin(), adj[s].end());
        std::set<GateId> seen;
        while (!stack.empty()) {
            GateId v = stack.back();
            stack.pop_back();
            if (!seen.insert(v).second)
                continue;
            reach.emplace(s, v);
            for (GateId w : adj[v])
                stack.push_back(w);
        }
    }
    return reach;
}

} // namespace

TEST_CASE("sequential sccs") {
    const GateLibrary& lib = builtin_library("ice40-like");

    SUBCASE("acyclic pipeline has none") {
        NetlistBuilder b(&lib);
        NetId clk = b.add_net("clk", true);
        NetId d = b.add_net("d", true);
        for (int i = 0; i < 3; i++) {
            NetId q = b.add_net("q" + std::to_string(i), false, i == 2);
            GateId ff = b.add_gate("DFF", "ff" + std::to_string(i));
            b.connect(ff, "D", d);
            b.connect(ff, "C", clk);
            b.connect(ff, "Q", q);
            d = q;
        }
        Netlist nl = std::move(b).build();
        CHECK(nl.sequential_sccs().empty());
    }

    SUBCASE("feedback loop forms one scc") {
        NetlistBuilder b(&lib);
        NetId clk = b.add_net("clk", true);
        NetId q = b.add_net("q", false, true);
        NetId inv_out = b.add_net("nq");
        GateId ff = b.add_gate("DFF", "ff");
        b.connect(ff, "D", inv_out);
        b.connect(ff, "C", clk);
        b.connect(ff, "Q", q);
        GateId inv = b.add_gate("INV", "inv");
        b.connect(inv, "A", q);
        b.connect(inv, "Y", inv_out);
        Netlist nl = std::move(b).build();
        auto sccs = nl.sequential_sccs();
        REQUIRE(sccs.size() == 1);
        CHECK(sccs[0] == std::vector<GateId>{ff, inv});
    }

    SUBCASE("cross-coupled pair plus self-loop yields two sccs") {
        NetlistBuilder b(&lib);
        NetId clk = b.add_net("clk", true);
        NetId q0 = b.add_net("q0");
        NetId q1 = b.add_net("q1", false, true);
        GateId f0 = b.add_gate("DFF", "f0");
        b.connect(f0, "D", q1);
        b.connect(f0, "C", clk);
        b.connect(f0, "Q", q0);
        GateId f1 = b.add_gate("DFF", "f1");
        b.connect(f1, "D", q0);
        b.connect(f1, "C", clk);
        b.connect(f1, "Q", q1);
        NetId q2 = b.add_net("q2", false, true);
        GateId f2 = b.add_gate("DFF", "f2");
        b.connect(f2, "D", q2);
        b.connect(f2, "C", clk);
        b.connect(f2, "Q", q2);
        Netlist nl = std::move(b).build();

        auto sccs = nl.sequential_sccs();
        REQUIRE(sccs.size() == 2);
        CHECK(sccs[0] == std::vector<GateId>{f0, f1});
        CHECK(sccs[1] == std::vector<GateId>{f2});

        // Oracle: brute-force reachability agrees on self-reach for every
        // reported member, and the sets are disjoint.
        auto reach = reachable_pairs(nl);
        std::set<GateId> all;
        for (const auto& scc : sccs)
            for (GateId g : scc) {
                CHECK(reach.count({g, g}));
                CHECK(all.insert(g).second);
            }
    }
}

TEST_CASE("replace buffer lut with net merge") {
    const GateLibrary& lib = builtin_library("ice40-like");
    NetlistBuilder b(&lib);
    NetId a = b.add_net("a", true);
    NetId w = b.add_net("w");
    NetId y = b.add_net("y", false, true);
    GateId buf = b.add_gate("LUT4", "buflut");
    // f = I0
    b.set_config(buf, "INIT", BitVec::from_hex("0xaaaa", 16));
    b.connect(buf, "I0", a);
    b.connect(buf, "I1", a);
    b.connect(buf, "I2", a);
    b.connect(buf, "I3", a);
    b.connect(buf, "O", w);
    GateId inv = b.add_gate("INV", "inv");
    b.connect(inv, "A", w);
    b.connect(inv, "Y", y);
    Netlist nl = std::move(b).build();

    // Fragment: one BUF wire from fa to fy; collapses into a direct merge.
    NetlistBuilder fb(&lib);
    NetId fa = fb.add_net("fa", true);
    NetId fy = fb.add_net("fy", false, true);
    GateId fbuf = fb.add_gate("BUF", "wire");
    fb.connect(fbuf, "A", fa);
    fb.connect(fbuf, "Y", fy);
    Netlist frag = std::move(fb).build();

    ReplaceOptions opts;
    opts.check_equivalence = true;
    Netlist out = replace_subcircuit(nl, {buf}, frag, {{fa, a}, {fy, w}}, opts);
    CHECK(out.gates().size() == nl.gates().size() - 1);
    // Behavior identical: y == NOT a.
    BoolFunc f = cone_func(out, *out.find_net("y"));
    EquivResult r = check_equivalent(f, BoolFunc::negate(BoolFunc::var(*out.find_net("a"))));
    CHECK(r.equal());
}

TEST_CASE("replace xor lut with primitive xor2") {
    const GateLibrary& lib = builtin_library("ice40-like");
    NetlistBuilder b(&lib);
    NetId a = b.add_net("a", true);
    NetId c = b.add_net("c", true);
    NetId y = b.add_net("y", false, true);
    GateId lut = b.add_gate("LUT4", "xorlut");
    // f = I0 xor I1 over a LUT4 with I2, I3 tied low.
    BitVec init(16);
    for (int i = 0; i < 16; i++)
        if (((i & 1) ^ ((i >> 1) & 1)) != 0)
            init.set(size_t(i), true);
    b.set_config(lut, "INIT", init);
    b.connect(lut, "I0", a);
    b.connect(lut, "I1", c);
    b.connect(lut, "I2", b.const_net(false));
    b.connect(lut, "I3", b.const_net(false));
    b.connect(lut, "O", y);
    Netlist nl = std::move(b).build();

    NetlistBuilder fb(&lib);
    NetId fa = fb.add_net("fa", true);
    NetId fc = fb.add_net("fc", true);
    NetId fy = fb.add_net("fy", false, true);
    GateId fx = fb.add_gate("XOR2", "prim_xor");
    fb.connect(fx, "A", fa);
    fb.connect(fx, "B", fc);
    fb.connect(fx, "Y", fy);
    Netlist frag = std::move(fb).build();

    ReplaceOptions opts;
    opts.check_equivalence = true;
    Netlist out = replace_subcircuit(nl, {lut}, frag, {{fa, a}, {fc, c}, {fy, y}}, opts);
    REQUIRE(out.gates().size() == 1);
    CHECK(out.gate(0).type->name == "XOR2");

    SUBCASE("omitting an output mapping is an error") {
        CHECK_THROWS_WITH_AS(replace_subcircuit(nl, {lut}, frag, {{fa, a}, {fc, c}}, opts),
                             doctest::Contains("boundary"), NetlistError);
    }

    SUBCASE("non-equivalent replacement rejected when checking") {
        NetlistBuilder fb2(&lib);
        NetId ga = fb2.add_net("fa", true);
        NetId gc = fb2.add_net("fc", true);
        NetId gy = fb2.add_net("fy", false, true);
        GateId gg = fb2.add_gate("AND2", "prim_and");
        fb2.connect(gg, "A", ga);
        fb2.connect(gg, "B", gc);
        fb2.connect(gg, "Y", gy);
        Netlist bad = std::move(fb2).build();
        CHECK_THROWS_WITH_AS(replace_subcircuit(nl, {lut}, bad, {{ga, a}, {gc, c}, {gy, y}}, opts),
                             doctest::Contains("equivalent"), NetlistError);
    }
}
