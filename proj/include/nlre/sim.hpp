#pragma once

#include "nlre/netlist.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace nlre {

/// Three-valued signal domain. Z from external VCDs folds into X.
enum class Val : uint8_t { Zero = 0, One = 1, X = 2 };

inline char to_char(Val v) { return v == Val::Zero ? '0' : v == Val::One ? '1' : 'x'; }
inline Val from_bool(bool b) { return b ? Val::One : Val::Zero; }

struct Signal {
    std::string name;
    std::vector<Val> values;
};

/// Per-net value sequences over clock cycles. Index t holds the settled
/// values after clock edge t.
struct Waveform {
    std::vector<Signal> signals;
    std::map<std::string, size_t> index;

    size_t cycles() const { return signals.empty() ? 0 : signals[0].values.size(); }
    bool has(const std::string& name) const { return index.count(name) != 0; }
    const std::vector<Val>& values(const std::string& name) const;
    Val value(const std::string& name, size_t cycle) const;
    void add(std::string name, std::vector<Val> values);
};

/// Global-input drive plan. Inputs without an explicit sequence hold their
/// default (or the global default). Sequences shorter than the run hold
/// their last value.
struct Stimulus {
    std::string clock;
    std::map<std::string, std::vector<Val>> inputs;
    std::map<std::string, Val> defaults;
    Val default_value = Val::Zero;

    Val at(const std::string& input, size_t cycle) const;
};

struct SimOptions {
    /// Empty: dump every net. Otherwise only the named nets.
    std::vector<std::string> watch;
    /// Initial FF/accumulator values by gate name; everything else starts X.
    std::map<std::string, Val> initial_state;
};

struct SimError : std::runtime_error {
    explicit SimError(const std::string& what) : std::runtime_error(what) {}
    std::vector<GateId> cycle_gates; // set for combinational-cycle errors
};

/// Cycle-based three-valued simulation: on each rising clock edge sequential
/// elements sample their pre-edge inputs, then combinational logic settles in
/// topological order. Single clock domain; the clock must be a global input
/// and drive every sequential clock pin.
Waveform simulate(const Netlist& nl, const Stimulus& stimulus, size_t cycles, const SimOptions& opts = {});

struct VcdResult {
    Waveform waveform;
    std::vector<std::string> warnings;
};

/// 1995-style VCD subset: scalar wires only. Each distinct timestamp becomes
/// one sample index (timescale normalization).
VcdResult read_vcd(const std::string& text);
std::string write_vcd(const Waveform& w);

/// Stimulus JSON: {"clock": "clk", "default": "0",
///                 "inputs": {"rst": "1100...", "a": {"hold": "1"}}}
/// Sequences are strings over 0/1/x, one character per cycle.
Stimulus parse_stimulus_json(const std::string& text);
std::string write_stimulus_json(const Stimulus& s);

/// Derives a stimulus from a recorded waveform by projecting the global
/// inputs of `nl`.
Stimulus stimulus_from_waveform(const Netlist& nl, const Waveform& w, const std::string& clock);

} // namespace nlre
