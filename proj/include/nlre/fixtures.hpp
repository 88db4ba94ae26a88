#pragma once

#include "nlre/netlist.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace nlre {

enum class FixtureKind {
    Adder,
    Subtractor,
    CounterWithReset,
    ComparatorUnsigned,
    ComparatorSigned,
    ConstMul,
    RegisterPipeline,
    WordMuxFanout,
    MacLoop,
    MixedSocSlice,
};

const char* to_string(FixtureKind k);
FixtureKind fixture_kind_from_string(const std::string& s);

struct FixtureSpec {
    FixtureKind kind = FixtureKind::Adder;
    size_t width = 8;
    std::string arch = "ice40-like";
    uint64_t seed = 1;
    /// ConstMul factor; must be 1 + 2^k so a single carry chain realizes it.
    uint64_t factor = 3;
    size_t stages = 4; // RegisterPipeline
};

struct ExpectedArith {
    std::string model;
    size_t width = 0;
    int64_t param = 0; // increment or factor
    /// Per bit position the unordered set of operand net names.
    std::vector<std::vector<std::string>> positions;
    std::vector<std::string> outputs; // LSB first
};

struct FixtureTruth {
    /// Gate name -> group label, the synthesizer-symbol stand-in.
    std::map<std::string, std::string> labels;
    /// group label -> pin group name -> net names LSB first.
    std::map<std::string, std::map<std::string, std::vector<std::string>>> orders;
    std::vector<ExpectedArith> arithmetic;
    /// Group labels without any ordered neighbor; they stay unordered.
    std::vector<std::string> unorderable;
};

struct Fixture {
    Netlist netlist;
    FixtureTruth truth;
    /// Suggested stimulus fields for simulation-based checks.
    std::string clock;    // empty when the fixture is purely combinational
    std::string reset;    // empty when there is none
};

/// Deterministic generator. Gate and net ids are permuted under the seed so
/// analyses cannot lean on construction order.
Fixture generate_fixture(const FixtureSpec& spec);

std::string write_truth_json(const FixtureTruth& truth);
FixtureTruth parse_truth_json(const std::string& text);

} // namespace nlre
