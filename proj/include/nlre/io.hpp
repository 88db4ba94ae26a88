#pragma once

#include "nlre/netlist.hpp"

#include <map>
#include <string>

namespace nlre {

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Canonical JSON netlist exchange format:
///   {library, gates:[{id,name,type,config:{...},pins:{pin:net}}],
///    nets:[{id,name,global_in,global_out}]}
/// Config values are hex strings, most significant nibble first. Nets named
/// $const0/$const1 are the constant nets. Ids must be unique; they are
/// re-compacted to dense ids in ascending order on load.
Netlist parse_json_netlist(const std::string& text, const GateLibrary& library);
Netlist parse_json_netlist(const std::string& text); // library taken from the document
std::string write_json_netlist(const Netlist& nl);

/// Structural-Verilog subset: module header (ANSI or classic port decls),
/// wire/input/output declarations including vectors, primitive
/// instantiations with named port connections, #(...) parameters and
/// defparam, and buffer-style continuous assigns. Behavioral constructs are
/// rejected.
Netlist parse_structural_verilog(const std::string& text, const GateLibrary& library);

/// Ground-truth label file: JSON object mapping gate name -> group label.
std::map<std::string, std::string> parse_labels(const std::string& text);
std::string write_labels(const std::map<std::string, std::string>& labels);

/// Structural equality: same gates (name, type, config, connections by net
/// name), same nets (name, flags), same order.
bool structurally_equal(const Netlist& a, const Netlist& b);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

} // namespace nlre
