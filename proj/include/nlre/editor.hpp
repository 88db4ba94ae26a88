#pragma once

#include "nlre/netlist.hpp"

#include <map>
#include <set>

namespace nlre {

/// Plans a set of edits against an immutable base netlist and produces a new
/// validated netlist. Old nets keep their names; ids are re-compacted. Nets
/// left without any endpoint and without global flags are dropped.
class NetlistEditor {
public:
    explicit NetlistEditor(const Netlist& base);

    void drop_gate(GateId g);
    bool dropped(GateId g) const { return drop_.count(g) != 0; }

    /// Rewires every destination of `victim` to `onto`. The victim net
    /// disappears (unless it is a global output, which is an error: callers
    /// must apply their boundary rules first).
    void merge_net(NetId victim, NetId onto);

    /// Shorthand for merging onto a constant net, creating it on demand.
    void bind_const(NetId victim, bool value);

    /// New nets and gates live in the same id space, after the base ids.
    NetId add_net(const std::string& name);
    GateId add_gate(const std::string& type_name, const std::string& name);
    void set_config(GateId g, const std::string& key, BitVec value);
    void connect(GateId g, const std::string& pin, NetId n);

    /// Resolve a net through pending merges.
    NetId resolve(NetId n) const;

    const Netlist& base() const { return base_; }
    size_t merges() const { return merge_count_; }

    Netlist finish() &&;

private:
    struct NewGate {
        std::string type;
        std::string name;
        std::map<std::string, BitVec> config;
        std::map<std::string, NetId> pins;
    };

    const Netlist& base_;
    std::set<GateId> drop_;
    std::map<NetId, NetId> replace_;
    std::vector<std::string> new_nets_;
    std::vector<NewGate> new_gates_;
    std::map<bool, NetId> new_consts_;
    size_t merge_count_ = 0;
};

} // namespace nlre
