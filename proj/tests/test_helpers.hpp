#pragma once

#include "nlre/netlist.hpp"

#include <map>
#include <string>
#include <vector>

namespace nlre::test {

// Hand-built 4-bit iCE40-style ripple-carry adder used as an independent
// fixture by several suites. Layout: carry chain CARRY_0..2 plus one XOR3
// sum LUT per bit. The most significant carry gate's CO is the carry-out.
struct AdderFixture {
    Netlist nl;
    std::vector<NetId> a, b, sum; // global inputs / outputs, LSB first
    std::vector<NetId> carries;   // c1..c3 internal, then cout
    NetId cout = kInvalidId;
    std::vector<GateId> sum_luts;
    std::vector<GateId> carry_gates;
};

inline AdderFixture build_adder4() {
    const GateLibrary& lib = builtin_library("ice40-like");
    NetlistBuilder b(&lib);
    AdderFixture fx;

    for (int i = 0; i < 4; i++) {
        fx.a.push_back(b.add_net("a" + std::to_string(i), true));
        fx.b.push_back(b.add_net("b" + std::to_string(i), true));
        fx.sum.push_back(b.add_net("s" + std::to_string(i), false, true));
    }
    NetId carry = b.const_net(false);
    // XOR of I0, I1, I2 with I3 ignored.
    BitVec xor3 = BitVec::from_hex("0x9696", 16);
    for (int i = 0; i < 4; i++) {
        GateId lut = b.add_gate("LUT4", "sum" + std::to_string(i));
        b.set_config(lut, "INIT", xor3);
        b.connect(lut, "I0", fx.a[i]);
        b.connect(lut, "I1", fx.b[i]);
        b.connect(lut, "I2", carry);
        b.connect(lut, "I3", b.const_net(false));
        b.connect(lut, "O", fx.sum[i]);
        fx.sum_luts.push_back(lut);
        bool last = i == 3;
        NetId next = last ? b.add_net("cout", false, true) : b.add_net("c" + std::to_string(i + 1));
        GateId cg = b.add_gate("CARRY", "carry" + std::to_string(i));
        b.connect(cg, "I0", fx.a[i]);
        b.connect(cg, "I1", fx.b[i]);
        b.connect(cg, "CI", carry);
        b.connect(cg, "CO", next);
        fx.carry_gates.push_back(cg);
        fx.carries.push_back(next);
        carry = next;
    }
    fx.cout = carry;
    fx.nl = std::move(b).build();
    return fx;
}

} // namespace nlre::test
