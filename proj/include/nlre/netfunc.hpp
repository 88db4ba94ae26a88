#pragma once

#include "nlre/boolfunc.hpp"
#include "nlre/netlist.hpp"

#include <set>

namespace nlre {

/// Boolean function of one combinational output pin over its input net ids.
/// Constant input nets are folded. Throws for sequential gates.
BoolFunc gate_output_func(const Netlist& nl, const Gate& g, uint32_t out_pin);

/// Function of `target` over the combinational frontier (sequential outputs,
/// global inputs, sourceless nets) plus any net listed in `cut`: those stay
/// variables instead of being expanded.
BoolFunc cone_func(const Netlist& nl, NetId target, const std::set<NetId>& cut = {});

/// cone_func for several targets sharing one memo table.
std::vector<BoolFunc> cone_funcs(const Netlist& nl, const std::vector<NetId>& targets,
                                 const std::set<NetId>& cut = {});

/// Function of `target` expanded only through gates in `through`; every net
/// driven from outside the set becomes a variable. Used for candidate
/// subgraphs.
BoolFunc subgraph_func(const Netlist& nl, NetId target, const std::set<GateId>& through);

} // namespace nlre
