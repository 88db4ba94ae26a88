#pragma once

#include "nlre/arith.hpp"
#include "nlre/netlist.hpp"
#include "nlre/sim.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace nlre {

struct ControlSet {
    std::set<NetId> nets;
    std::map<NetId, std::string> provenance; // "pin-role" or "user"
};

/// Nets whose every sink is a control-role pin, extended backward through
/// combinational logic that feeds only control nets. Mixed-use nets stay
/// data.
ControlSet classify_control(const Netlist& nl);

/// Minimal-cut registers whose removal acyclifies each sequential loop,
/// chosen deterministically (lowest gate id within a cycle first).
/// Accumulating DSP blocks are implicit loop cuts and not listed here.
std::set<GateId> break_loops(const Netlist& nl);

// --- symbolic expressions --------------------------------------------------

struct Expr;
using ExprRef = std::shared_ptr<const Expr>;

struct Expr {
    enum class Op {
        Const, // value, width
        Sym,   // endpoint symbol: name @ cycle
        Var,   // intermediate variable occurrence: v<k> @ cycle
        Not,
        And,
        Or,
        Xor,
        Ite, // args: cond, then, else (1-bit)
        Add,
        Sub,
        Mul,
        Slice, // args[0], bit `index`
        Cat,   // args LSB first
    };

    Op op = Op::Const;
    size_t width = 1;
    uint64_t value = 0;   // Const
    std::string name;     // Sym
    size_t cycle = 0;     // Sym / Var
    size_t var_id = 0;    // Var
    uint32_t index = 0;   // Slice
    std::vector<ExprRef> args;
};

ExprRef expr_const(uint64_t value, size_t width);
ExprRef expr_sym(std::string name, size_t cycle, size_t width = 1);

struct SymbolicEquation {
    std::string target; // net name
    size_t cycle = 0;
    ExprRef expr;
};

struct VarDef {
    size_t var_id = 0; // v1, v2, ... per loop-cut register, first-use order
    std::string origin; // gate name
    size_t cycle = 0;
    size_t width = 1;
    ExprRef expr;
};

struct TraceResult {
    std::vector<SymbolicEquation> targets;
    std::vector<VarDef> definitions; // first-use order
    std::map<size_t, std::string> var_origin; // var id -> gate name
    std::vector<std::string> warnings;
};

struct TraceOptions {
    /// Registers treated as endpoints (symbols) instead of traced through.
    std::set<GateId> marked_registers;
    /// Symbolize BRAM reads instead of substituting concrete trace values.
    bool symbolize_bram = false;
    /// Verified arithmetic structures; traced outputs fold to word
    /// operations when the waveform control values match a passing
    /// assignment.
    const std::vector<ArithmeticStructure>* arithmetic = nullptr;
};

struct TraceError : std::runtime_error {
    explicit TraceError(const std::string& what) : std::runtime_error(what) {}
};

/// Back-traces each (net, cycle) target: builds the combinational cone in
/// front of the net, substitutes concrete control values from the waveform,
/// and recurses through sequential elements at their last update cycle.
/// Loop-cut registers and DSP accumulators become intermediate variables
/// with one defining equation per update cycle.
TraceResult trace_targets(const Netlist& nl, const Waveform& wave, const ControlSet& controls,
                          const std::vector<std::pair<NetId, size_t>>& targets, const TraceOptions& opts = {});

// --- script emission -------------------------------------------------------

struct WordSpec {
    std::string name;
    std::vector<std::string> nets; // LSB first
};

struct ExportResult {
    std::string script;
    std::vector<std::string> warnings;
};

/// Emits the equations as an executable integer script: definitions in
/// first-use order, then one assignment per target. Bit targets covering a
/// word spec fold into a single word assignment; symbol bits forming a known
/// word collapse into the word symbol. Unmatched structure stays bit-level
/// with a warning.
ExportResult export_equations(const TraceResult& result, const std::vector<WordSpec>& words);

} // namespace nlre
