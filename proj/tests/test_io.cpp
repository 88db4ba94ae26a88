#include "nlre/io.hpp"
#include "nlre/netfunc.hpp"

#include "test_helpers.hpp"

#include <doctest.h>

using namespace nlre;

TEST_CASE("parse minimal json netlist") {
    const char* doc = R"({
      "library": "ice40-like",
      "gates": [{"id": 0, "name": "lut", "type": "LUT4",
                 "config": {"INIT": "0x8000"},
                 "pins": {"I0": 0, "I1": 1, "I2": 0, "I3": 1, "O": 2}}],
      "nets": [{"id": 0, "name": "a", "global_in": true},
               {"id": 1, "name": "b", "global_in": true},
               {"id": 2, "name": "y", "global_out": true}]
    })";
    Netlist nl = parse_json_netlist(doc);
    REQUIRE(nl.gates().size() == 1);
    CHECK(nl.gate(0).config.at("INIT").to_hex() == "0x8000");
    CHECK(nl.net(2).is_global_output);
}

TEST_CASE("bad init width rejected") {
    const char* doc = R"({
      "library": "ice40-like",
      "gates": [{"id": 0, "name": "lut", "type": "LUT4",
                 "config": {"INIT": "0x12345"},
                 "pins": {"I0": 0, "I1": 0, "I2": 0, "I3": 0, "O": 1}}],
      "nets": [{"id": 0, "name": "a", "global_in": true},
               {"id": 1, "name": "y", "global_out": true}]
    })";
    CHECK_THROWS_WITH_AS(parse_json_netlist(doc), doctest::Contains("width"), IoError);
}

TEST_CASE("unknown type rejected") {
    const char* doc = R"({"library": "ice40-like",
      "gates": [{"id": 0, "name": "g", "type": "WIDGET", "pins": {}}],
      "nets": []})";
    CHECK_THROWS_WITH_AS(parse_json_netlist(doc), doctest::Contains("unknown"), IoError);
}

TEST_CASE("json round trip is the identity") {
    auto fx = test::build_adder4();
    std::string text = write_json_netlist(fx.nl);
    Netlist back = parse_json_netlist(text);
    CHECK(structurally_equal(fx.nl, back));
    // Byte-stable writer.
    CHECK(write_json_netlist(back) == text);
}

TEST_CASE("empty netlist writes a schema-valid document") {
    NetlistBuilder b(&builtin_library("primitive"));
    Netlist nl = std::move(b).build();
    std::string text = write_json_netlist(nl);
    Netlist back = parse_json_netlist(text);
    CHECK(back.gates().empty());
    CHECK(back.nets().empty());
}

TEST_CASE("dangling net serialized with no source and survives the round trip") {
    const GateLibrary& lib = builtin_library("primitive");
    NetlistBuilder b(&lib);
    NetId ghost = b.add_net("ghost");
    NetId y = b.add_net("y", false, true);
    GateId g = b.add_gate("BUF", "buf");
    b.connect(g, "A", ghost);
    b.connect(g, "Y", y);
    Netlist nl = std::move(b).build();
    Netlist back = parse_json_netlist(write_json_netlist(nl));
    REQUIRE(back.dangling_nets().size() == 1);
    CHECK(back.net(back.dangling_nets()[0]).name == "ghost");
}

TEST_CASE("labels round trip") {
    std::map<std::string, std::string> labels{{"ff_a_0", "reg_a"}, {"ff_a_1", "reg_a"}, {"u2", "ctr"}};
    CHECK(parse_labels(write_labels(labels)) == labels);
}

TEST_CASE("structural verilog: single instance") {
    const char* src = R"(
      module top (d, c, ce, r, q);
        input d, c, ce, r;
        output q;
        FDRE my_reg (.D(d), .C(c), .CE(ce), .R(r), .Q(q));
      endmodule
    )";
    Netlist nl = parse_structural_verilog(src, builtin_library("x7-like"));
    REQUIRE(nl.gates().size() == 1);
    CHECK(nl.gate(0).name == "my_reg");
    CHECK(nl.gate(0).type->name == "FDRE");
    CHECK(nl.net(nl.gate(0).pin_net("Q")).name == "q");
    CHECK(nl.net(nl.gate(0).pin_net("Q")).is_global_output);
}

TEST_CASE("structural verilog: behavioral construct rejected") {
    const char* src = R"(
      module top (input clk, output q);
        always @(posedge clk) q <= ~q;
      endmodule
    )";
    CHECK_THROWS_WITH_AS(parse_structural_verilog(src, builtin_library("x7-like")),
                         doctest::Contains("behavioral"), IoError);
}

TEST_CASE("structural verilog: vectors, parameters, assigns, constants") {
    const char* src = R"(
      // 2-bit and-reduce into a LUT
      module slice (input [1:0] a, output y, output y2);
        wire t;
        LUT2 #(.INIT(4'h8)) u0 (.I0(a[0]), .I1(a[1]), .O(t));
        LUT1 u1 (.I0(t), .O(y));
        defparam u1.INIT = 2'h2;
        assign y2 = 1'b0;
      endmodule
    )";
    Netlist nl = parse_structural_verilog(src, builtin_library("x7-like"));
    REQUIRE(nl.gates().size() == 3); // two LUTs + assign buffer
    auto u0 = nl.find_gate("u0");
    REQUIRE(u0);
    CHECK(nl.gate(*u0).config.at("INIT").to_u64() == 0x8);
    auto u1 = nl.find_gate("u1");
    REQUIRE(u1);
    CHECK(nl.gate(*u1).config.at("INIT").to_u64() == 0x2);
    // y == a[0] & a[1]
    BoolFunc f = cone_func(nl, *nl.find_net("y"));
    BoolFunc expect = BoolFunc::and2(BoolFunc::var(*nl.find_net("a[0]")), BoolFunc::var(*nl.find_net("a[1]")));
    CHECK(check_equivalent(f, expect).equal());
    // y2 buffered from constant 0
    BoolFunc f2 = cone_func(nl, *nl.find_net("y2"));
    CHECK(f2.is_const());
    CHECK(!f2.const_value());
}

TEST_CASE("structural verilog: 4-bit x7 adder simulates as integer addition") {
    // The shape an external synthesizer emits for a small adder on a
    // CARRY4: propagate LUT2s feeding S, operand A on DI.
    std::string src = R"(
      module add4 (input [3:0] a, input [3:0] b, output [3:0] s);
        wire [3:0] p;
    )";
    for (int i = 0; i < 4; i++) {
        src += "    LUT2 #(.INIT(4'h6)) p" + std::to_string(i) + " (.I0(a[" + std::to_string(i) + "]), .I1(b[" +
               std::to_string(i) + "]), .O(p[" + std::to_string(i) + "]));\n";
    }
    src += R"(
        CARRY4 cc (.CI(1'b0), .CYINIT(1'b0),
                   .S0(p[0]), .S1(p[1]), .S2(p[2]), .S3(p[3]),
                   .DI0(a[0]), .DI1(a[1]), .DI2(a[2]), .DI3(a[3]),
                   .O0(s[0]), .O1(s[1]), .O2(s[2]), .O3(s[3]));
      endmodule
    )";
    Netlist nl = parse_structural_verilog(src, builtin_library("x7-like"));

    std::vector<NetId> a, b, s;
    for (int i = 0; i < 4; i++) {
        a.push_back(*nl.find_net("a[" + std::to_string(i) + "]"));
        b.push_back(*nl.find_net("b[" + std::to_string(i) + "]"));
        s.push_back(*nl.find_net("s[" + std::to_string(i) + "]"));
    }
    auto funcs = cone_funcs(nl, s);
    for (unsigned av = 0; av < 16; av++)
        for (unsigned bv = 0; bv < 16; bv++) {
            std::map<uint32_t, bool> asg;
            for (int i = 0; i < 4; i++) {
                asg[a[size_t(i)]] = (av >> i) & 1;
                asg[b[size_t(i)]] = (bv >> i) & 1;
            }
            unsigned sum = (av + bv) & 0xf;
            for (int i = 0; i < 4; i++)
                REQUIRE(funcs[size_t(i)].evaluate(asg) == bool((sum >> i) & 1));
        }
}
