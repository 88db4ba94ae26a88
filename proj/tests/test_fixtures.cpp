#include "nlre/fixtures.hpp"

#include "nlre/arith.hpp"
#include "nlre/netfunc.hpp"
#include "nlre/sim.hpp"

#include <doctest.h>

#include <random>

using namespace nlre;

TEST_CASE("adder fixture simulates as integer addition on all pairs") {
    FixtureSpec spec;
    spec.kind = FixtureKind::Adder;
    spec.width = 8;
    spec.seed = 1;
    Fixture fx = generate_fixture(spec);

    size_t carries = 0;
    for (const Gate& g : fx.netlist.gates())
        if (g.category() == GateCategory::Carry)
            carries++;
    CHECK(carries == 8);

    std::vector<NetId> s;
    for (int i = 0; i < 8; i++)
        s.push_back(*fx.netlist.find_net("s" + std::to_string(i)));
    s.push_back(*fx.netlist.find_net("cout"));
    auto funcs = cone_funcs(fx.netlist, s);
    for (unsigned av = 0; av < 256; av++)
        for (unsigned bv = 0; bv < 256; bv++) {
            std::map<uint32_t, bool> asg;
            for (int i = 0; i < 8; i++) {
                asg[*fx.netlist.find_net("a" + std::to_string(i))] = (av >> i) & 1;
                asg[*fx.netlist.find_net("b" + std::to_string(i))] = (bv >> i) & 1;
            }
            unsigned sum = av + bv;
            auto got = evaluate_all(funcs, asg);
            for (int i = 0; i < 9; i++)
                REQUIRE(got[size_t(i)] == bool((sum >> i) & 1));
        }
}

TEST_CASE("counter fixture matches the chain-plus-ff topology and counts") {
    FixtureSpec spec;
    spec.kind = FixtureKind::CounterWithReset;
    spec.width = 3;
    Fixture fx = generate_fixture(spec);

    size_t ffs = 0, carries = 0, luts = 0;
    for (const Gate& g : fx.netlist.gates()) {
        if (g.category() == GateCategory::Ff)
            ffs++;
        if (g.category() == GateCategory::Carry)
            carries++;
        if (g.category() == GateCategory::Lut)
            luts++;
    }
    CHECK(ffs == 3);
    CHECK(carries == 3);
    CHECK(luts == 3);

    Stimulus st;
    st.clock = "clk";
    st.inputs["rst"] = {Val::One, Val::Zero};
    Waveform w = simulate(fx.netlist, st, 40);
    for (size_t t = 3; t < 40; t++) {
        unsigned v = 0;
        for (int i = 0; i < 3; i++)
            if (w.value("ctr0q" + std::to_string(i), t) == Val::One)
                v |= 1u << i;
        CHECK(v == (t - 1) % 8);
    }
}

TEST_CASE("fixtures are deterministic per seed and vary across seeds") {
    FixtureSpec spec;
    spec.kind = FixtureKind::Subtractor;
    spec.width = 6;
    spec.seed = 7;
    Fixture a = generate_fixture(spec);
    Fixture b = generate_fixture(spec);
    CHECK(a.netlist.gates().size() == b.netlist.gates().size());
    for (size_t i = 0; i < a.netlist.gates().size(); i++)
        CHECK(a.netlist.gates()[i].name == b.netlist.gates()[i].name);
    spec.seed = 8;
    Fixture c = generate_fixture(spec);
    bool same_order = true;
    for (size_t i = 0; i < a.netlist.gates().size(); i++)
        same_order &= a.netlist.gates()[i].name == c.netlist.gates()[i].name;
    CHECK(!same_order);
}

TEST_CASE("mixed fixture composes every structure kind") {
    FixtureSpec spec;
    spec.kind = FixtureKind::MixedSocSlice;
    spec.width = 8;
    Fixture fx = generate_fixture(spec);

    bool has_bram = false, has_dsp = false, has_mux = false, has_carry = false;
    for (const Gate& g : fx.netlist.gates()) {
        has_bram |= g.category() == GateCategory::Bram;
        has_dsp |= g.category() == GateCategory::Dsp;
        has_mux |= g.type->name == "MUX2";
        has_carry |= g.category() == GateCategory::Carry;
    }
    CHECK(has_bram);
    CHECK(has_dsp);
    CHECK(has_mux);
    CHECK(has_carry);
    // One expected structure per arithmetic kind.
    std::set<std::string> models;
    for (const auto& e : fx.truth.arithmetic)
        models.insert(e.model);
    CHECK(models == std::set<std::string>{"addition", "subtraction", "counter", "const-mul", "comparator"});

    // Simulates without X after reset settles.
    Stimulus st;
    st.clock = "clk";
    st.inputs["rst"] = {Val::One, Val::One, Val::Zero};
    for (const char* en : {"sel", "en_a", "en_b", "en_d", "en_e", "en_f"})
        st.defaults[en] = Val::One;
    std::mt19937_64 rng(3);
    for (const char* wd : {"x", "y", "z"})
        for (int i = 0; i < 8; i++) {
            std::vector<Val> seq;
            for (int t = 0; t < 30; t++)
                seq.push_back(from_bool(rng() & 1));
            st.inputs[std::string(wd) + std::to_string(i)] = seq;
        }
    Waveform w = simulate(fx.netlist, st, 30);
    for (NetId out : fx.netlist.global_outputs())
        for (size_t t = 6; t < 30; t++)
            CHECK(w.value(fx.netlist.net(out).name, t) != Val::X);

    // Truth json round-trips.
    FixtureTruth back = parse_truth_json(write_truth_json(fx.truth));
    CHECK(back.labels == fx.truth.labels);
    CHECK(back.orders == fx.truth.orders);
    CHECK(back.unorderable == fx.truth.unorderable);
    REQUIRE(back.arithmetic.size() == fx.truth.arithmetic.size());
}

TEST_CASE("fixture arithmetic classifies as intended on both architectures") {
    for (const char* arch : {"ice40-like", "x7-like"}) {
        for (FixtureKind kind : {FixtureKind::Adder, FixtureKind::Subtractor, FixtureKind::CounterWithReset,
                                 FixtureKind::ComparatorUnsigned, FixtureKind::ConstMul}) {
            FixtureSpec spec;
            spec.kind = kind;
            spec.arch = arch;
            spec.width = 5; // deliberately not a multiple of four
            spec.seed = 2;
            Fixture fx = generate_fixture(spec);
            auto result = classify_arithmetic(fx.netlist);
            std::string combo = std::string(to_string(kind)) + " on " + arch;
            REQUIRE_MESSAGE(result.structures.size() == 1, combo);
            const ArithmeticStructure& s = result.structures[0];
            REQUIRE(fx.truth.arithmetic.size() == 1);
            const ExpectedArith& e = fx.truth.arithmetic[0];
            CHECK(std::string(to_string(s.model.kind)) == e.model);
            CHECK(s.model.width == e.width);
            // Per-position operand sets match the construction.
            REQUIRE(s.operands[0].size() == e.width);
            for (size_t i = 0; i < e.width; i++) {
                std::set<std::string> got{fx.netlist.net(s.operands[0][i]).name};
                if (s.operands.size() > 1)
                    got.insert(fx.netlist.net(s.operands[1][i]).name);
                std::set<std::string> want(e.positions[i].begin(), e.positions[i].end());
                CHECK(got == want);
            }
            CHECK(arithmetic_oracle_mismatches(s, fx.netlist, 300) == 0);
        }
    }
}
