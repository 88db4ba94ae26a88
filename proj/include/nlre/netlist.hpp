#pragma once

#include "nlre/bitvec.hpp"
#include "nlre/library.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace nlre {

using GateId = uint32_t;
using NetId = uint32_t;
constexpr uint32_t kInvalidId = ~uint32_t(0);

struct Endpoint {
    GateId gate = kInvalidId;
    uint32_t pin = 0; // index into GateType::pins

    bool operator==(const Endpoint& o) const { return gate == o.gate && pin == o.pin; }
    bool operator<(const Endpoint& o) const { return gate != o.gate ? gate < o.gate : pin < o.pin; }
};

struct Gate {
    GateId id = kInvalidId;
    const GateType* type = nullptr;
    std::string name;
    std::map<std::string, BitVec> config;
    /// Net bound to each pin, indexed like GateType::pins. kInvalidId for
    /// unbound output pins (inputs must always be bound).
    std::vector<NetId> endpoints;

    NetId pin_net(const std::string& pin_name) const;
    GateCategory category() const { return type->category; }
};

struct Net {
    NetId id = kInvalidId;
    std::string name;
    std::vector<Endpoint> sources;
    std::vector<Endpoint> destinations;
    bool is_global_input = false;
    bool is_global_output = false;
    /// Zero sources, not a global input, not a constant: the net floats.
    /// Such nets are representable on purpose so real extracted netlists load.
    bool dangling = false;
};

enum class GroupKind { Register, WordMux, Arithmetic, Interface, Control, Bram, Dsp, Other };

const char* to_string(GroupKind k);
GroupKind group_kind_from_string(const std::string& s);

struct GroupPin {
    GateId gate = kInvalidId;
    uint32_t pin = 0;
    std::optional<uint32_t> index; // bit index within the word, if assigned

    bool operator==(const GroupPin& o) const { return gate == o.gate && pin == o.pin && index == o.index; }
};

struct GroupPinGroup {
    std::string name;
    std::vector<GroupPin> pins;
};

struct ModuleGroup {
    std::string name;
    GroupKind kind = GroupKind::Other;
    std::set<GateId> gates;
    std::vector<GroupPinGroup> pin_groups;
    bool locked = false;
};

struct ConeResult {
    std::vector<GateId> gates;   // combinational gates, ascending id
    std::vector<NetId> inputs;   // frontier nets, ascending id
};

class Netlist;

/// Incremental construction with validation at build(). Ids are dense and
/// assigned in insertion order.
class NetlistBuilder {
public:
    explicit NetlistBuilder(const GateLibrary* library) : library_(library) {}

    NetId add_net(const std::string& name, bool global_in = false, bool global_out = false);
    /// The two constant nets are created on first use and named $const0/$const1.
    NetId const_net(bool value);
    /// Declares an existing net as a constant (used by parsers for the
    /// reserved $const names).
    void set_const_net(NetId n, bool value);
    GateId add_gate(const std::string& type_name, const std::string& name);
    void set_config(GateId g, const std::string& key, BitVec value);
    void connect(GateId g, const std::string& pin_name, NetId n);
    void connect(GateId g, uint32_t pin_idx, NetId n);
    void mark_global_output(NetId n) { nets_.at(n).is_global_output = true; }

    size_t gate_count() const { return gates_.size(); }
    const Gate& gate_at(GateId g) const { return gates_.at(g); }
    const std::string& net_name(NetId n) const { return nets_.at(n).name; }
    const GateLibrary* library() const { return library_; }

    /// Validates and produces the netlist. Throws NetlistError on duplicate
    /// ids (internally impossible), multi-driven nets, unknown pins, bad
    /// config widths, or unbound input pins. Sourceless nets are flagged
    /// dangling, not rejected.
    Netlist build() &&;

private:
    friend class Netlist;
    const GateLibrary* library_;
    std::vector<Gate> gates_;
    std::vector<Net> nets_;
    std::optional<NetId> const0_, const1_;
};

class Netlist {
public:
    Netlist() = default;

    const GateLibrary& library() const { return *library_; }
    const std::vector<Gate>& gates() const { return gates_; }
    const std::vector<Net>& nets() const { return nets_; }
    const Gate& gate(GateId id) const { return gates_.at(id); }
    const Net& net(NetId id) const { return nets_.at(id); }

    std::optional<NetId> const_net(bool value) const { return value ? const1_ : const0_; }
    bool is_const_net(NetId n) const { return (const0_ && *const0_ == n) || (const1_ && *const1_ == n); }
    /// Value of a constant net; only valid when is_const_net(n).
    bool const_value(NetId n) const { return const1_ && *const1_ == n; }

    std::optional<NetId> find_net(const std::string& name) const;
    std::optional<GateId> find_gate(const std::string& name) const;

    std::vector<NetId> global_inputs() const;
    std::vector<NetId> global_outputs() const;
    std::vector<NetId> dangling_nets() const;

    /// All combinational gates reachable backward from `target`, stopping at
    /// sequential gates, global inputs, and constants. Frontier nets are the
    /// cone inputs. A global input or sequential-driven target yields an
    /// empty cone with the target itself as sole input.
    ConeResult combinational_fanin_cone(NetId target) const;

    /// Strongly connected components of the gate graph, Tarjan order.
    /// Singleton components without a self-loop are excluded. Output sets
    /// are sorted ascending and ordered by their minimum gate id.
    std::vector<std::vector<GateId>> sequential_sccs() const;

    /// Module groups (word-level structure annotations layered on gates).
    const std::vector<ModuleGroup>& groups() const { return groups_; }
    std::vector<ModuleGroup>& mutable_groups() { return groups_; }
    void add_group(ModuleGroup g) { groups_.push_back(std::move(g)); }

    /// Re-validates core invariants (|sources| <= 1 etc.); throws on failure.
    /// Passes call this after rebuilding.
    void check_invariants() const;

private:
    friend class NetlistBuilder;
    friend struct SubcircuitReplacer;
    const GateLibrary* library_ = nullptr;
    std::vector<Gate> gates_;
    std::vector<Net> nets_;
    std::vector<ModuleGroup> groups_;
    std::optional<NetId> const0_, const1_;
};

struct NetlistError : std::runtime_error {
    explicit NetlistError(const std::string& what) : std::runtime_error(what) {}
};

/// A replacement fragment is itself a netlist whose global inputs/outputs
/// form the boundary. `boundary_map` maps fragment boundary net ids to host
/// net ids and must cover every net crossing the cut.
struct ReplaceOptions {
    bool check_equivalence = false;
    /// Equivalence is checked exhaustively for boundary-output cones up to
    /// this many inputs; larger cones fail the replacement when checking is
    /// requested.
    size_t exhaustive_input_limit = 16;
    /// Fragment BUF gates collapse into direct net merges, except onto
    /// global outputs.
    bool merge_buffers = true;
};

Netlist replace_subcircuit(const Netlist& host, const std::set<GateId>& victim_gates,
                           const Netlist& fragment, const std::map<NetId, NetId>& boundary_map,
                           const ReplaceOptions& opts = {});

} // namespace nlre
