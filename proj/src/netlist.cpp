#include "nlre/netlist.hpp"

#include "nlre/boolfunc.hpp"

#include <algorithm>
#include <unordered_map>

namespace nlre {

const char* to_string(GroupKind k) {
    switch (k) {
    case GroupKind::Register: return "register";
    case GroupKind::WordMux: return "word-mux";
    case GroupKind::Arithmetic: return "arithmetic";
    case GroupKind::Interface: return "interface";
    case GroupKind::Control: return "control";
    case GroupKind::Bram: return "bram";
    case GroupKind::Dsp: return "dsp";
    case GroupKind::Other: return "other";
    }
    return "?";
}

GroupKind group_kind_from_string(const std::string& s) {
    for (GroupKind k : {GroupKind::Register, GroupKind::WordMux, GroupKind::Arithmetic,
                        GroupKind::Interface, GroupKind::Control, GroupKind::Bram, GroupKind::Dsp,
                        GroupKind::Other})
        if (s == to_string(k))
            return k;
    throw NetlistError("unknown group kind '" + s + "'");
}

NetId Gate::pin_net(const std::string& pin_name) const {
    int idx = type->pin_index(pin_name);
    if (idx < 0)
        throw NetlistError("gate '" + name + "': no pin '" + pin_name + "'");
    return endpoints.at(size_t(idx));
}

NetId NetlistBuilder::add_net(const std::string& name, bool global_in, bool global_out) {
    Net n;
    n.id = NetId(nets_.size());
    n.name = name;
    n.is_global_input = global_in;
    n.is_global_output = global_out;
    nets_.push_back(std::move(n));
    return nets_.back().id;
}

NetId NetlistBuilder::const_net(bool value) {
    auto& slot = value ? const1_ : const0_;
    if (!slot)
        slot = add_net(value ? "$const1" : "$const0");
    return *slot;
}

void NetlistBuilder::set_const_net(NetId n, bool value) {
    auto& slot = value ? const1_ : const0_;
    if (slot && *slot != n)
        throw NetlistError("constant net already designated");
    slot = n;
}

GateId NetlistBuilder::add_gate(const std::string& type_name, const std::string& name) {
    const GateType& t = library_->get(type_name);
    Gate g;
    g.id = GateId(gates_.size());
    g.type = &t;
    g.name = name;
    g.endpoints.assign(t.pins.size(), kInvalidId);
    gates_.push_back(std::move(g));
    return gates_.back().id;
}

void NetlistBuilder::set_config(GateId g, const std::string& key, BitVec value) {
    Gate& gate = gates_.at(g);
    auto width = gate.type->config_width(key);
    if (!width)
        throw NetlistError("gate '" + gate.name + "': type " + gate.type->name + " has no config key '" + key + "'");
    if (*width != 0 && value.width() != *width)
        throw NetlistError("gate '" + gate.name + "': bad " + key + " width " + std::to_string(value.width()) +
                           ", expected " + std::to_string(*width));
    gate.config[key] = std::move(value);
}

void NetlistBuilder::connect(GateId g, const std::string& pin_name, NetId n) {
    Gate& gate = gates_.at(g);
    int idx = gate.type->pin_index(pin_name);
    if (idx < 0)
        throw NetlistError("gate '" + gate.name + "': type " + gate.type->name + " has no pin '" + pin_name + "'");
    connect(g, uint32_t(idx), n);
}

void NetlistBuilder::connect(GateId g, uint32_t pin_idx, NetId n) {
    Gate& gate = gates_.at(g);
    if (pin_idx >= gate.endpoints.size())
        throw NetlistError("gate '" + gate.name + "': pin index out of range");
    if (n >= nets_.size())
        throw NetlistError("gate '" + gate.name + "': unknown net id " + std::to_string(n));
    gate.endpoints[pin_idx] = n;
}

Netlist NetlistBuilder::build() && {
    Netlist nl;
    nl.library_ = library_;
    nl.gates_ = std::move(gates_);
    nl.nets_ = std::move(nets_);
    nl.const0_ = const0_;
    nl.const1_ = const1_;

    for (auto& net : nl.nets_) {
        net.sources.clear();
        net.destinations.clear();
    }
    for (const Gate& g : nl.gates_) {
        for (size_t p = 0; p < g.endpoints.size(); p++) {
            NetId n = g.endpoints[p];
            const PinSpec& spec = g.type->pins[p];
            if (n == kInvalidId) {
                if (spec.dir == PinDir::In)
                    throw NetlistError("gate '" + g.name + "': input pin " + spec.name + " unbound");
                continue; // unused output
            }
            Endpoint ep{g.id, uint32_t(p)};
            if (spec.dir == PinDir::Out)
                nl.nets_[n].sources.push_back(ep);
            else
                nl.nets_[n].destinations.push_back(ep);
        }
    }
    for (Net& net : nl.nets_) {
        bool is_const = nl.is_const_net(net.id);
        if (net.sources.size() > 1)
            throw NetlistError("multi-driven net '" + net.name + "' (" + std::to_string(net.sources.size()) + " sources)");
        if (net.is_global_input && !net.sources.empty())
            throw NetlistError("global input '" + net.name + "' is driven inside the netlist");
        net.dangling = net.sources.empty() && !net.is_global_input && !is_const;
    }
    return nl;
}

std::optional<NetId> Netlist::find_net(const std::string& name) const {
    for (const Net& n : nets_)
        if (n.name == name)
            return n.id;
    return std::nullopt;
}

std::optional<GateId> Netlist::find_gate(const std::string& name) const {
    for (const Gate& g : gates_)
        if (g.name == name)
            return g.id;
    return std::nullopt;
}

std::vector<NetId> Netlist::global_inputs() const {
    std::vector<NetId> out;
    for (const Net& n : nets_)
        if (n.is_global_input)
            out.push_back(n.id);
    return out;
}

std::vector<NetId> Netlist::global_outputs() const {
    std::vector<NetId> out;
    for (const Net& n : nets_)
        if (n.is_global_output)
            out.push_back(n.id);
    return out;
}

std::vector<NetId> Netlist::dangling_nets() const {
    std::vector<NetId> out;
    for (const Net& n : nets_)
        if (n.dangling)
            out.push_back(n.id);
    return out;
}

ConeResult Netlist::combinational_fanin_cone(NetId target) const {
    ConeResult res;
    std::vector<bool> gate_seen(gates_.size(), false);
    std::vector<bool> net_seen(nets_.size(), false);
    std::vector<NetId> stack{target};
    net_seen[target] = true;
    while (!stack.empty()) {
        NetId n = stack.back();
        stack.pop_back();
        if (is_const_net(n))
            continue; // constants are not signal inputs
        const Net& net = nets_[n];
        bool frontier = net.is_global_input || net.sources.empty();
        if (!frontier) {
            const Gate& src = gates_[net.sources[0].gate];
            if (is_combinational(src.category())) {
                if (!gate_seen[src.id]) {
                    gate_seen[src.id] = true;
                    res.gates.push_back(src.id);
                    for (size_t p = 0; p < src.endpoints.size(); p++) {
                        if (src.type->pins[p].dir != PinDir::In)
                            continue;
                        NetId in = src.endpoints[p];
                        if (!net_seen[in]) {
                            net_seen[in] = true;
                            stack.push_back(in);
                        }
                    }
                }
                continue;
            }
            frontier = true; // sequential, io, or constant-category driver
        }
        if (frontier)
            res.inputs.push_back(n);
    }
    std::sort(res.gates.begin(), res.gates.end());
    std::sort(res.inputs.begin(), res.inputs.end());
    return res;
}

namespace {

struct TarjanState {
    const Netlist& nl;
    std::vector<std::vector<GateId>> succ;
    std::vector<int> index, lowlink;
    std::vector<bool> on_stack, has_self_loop;
    std::vector<GateId> stack;
    std::vector<std::vector<GateId>> sccs;
    int counter = 0;

    explicit TarjanState(const Netlist& n) : nl(n) {
        size_t g = nl.gates().size();
        succ.resize(g);
        index.assign(g, -1);
        lowlink.assign(g, 0);
        on_stack.assign(g, false);
        has_self_loop.assign(g, false);
        for (const Gate& gate : nl.gates()) {
            for (size_t p = 0; p < gate.endpoints.size(); p++) {
                if (gate.type->pins[p].dir != PinDir::Out || gate.endpoints[p] == kInvalidId)
                    continue;
                for (const Endpoint& dst : nl.net(gate.endpoints[p]).destinations) {
                    succ[gate.id].push_back(dst.gate);
                    if (dst.gate == gate.id)
                        has_self_loop[gate.id] = true;
                }
            }
            std::sort(succ[gate.id].begin(), succ[gate.id].end());
            succ[gate.id].erase(std::unique(succ[gate.id].begin(), succ[gate.id].end()), succ[gate.id].end());
        }
    }

    // Iterative Tarjan; netlists can chain thousands of gates deep.
    void run(GateId root) {
        struct Frame {
            GateId v;
            size_t child = 0;
        };
        std::vector<Frame> frames{{root}};
        index[root] = lowlink[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.child < succ[f.v].size()) {
                GateId w = succ[f.v][f.child++];
                if (index[w] < 0) {
                    index[w] = lowlink[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.push_back({w});
                } else if (on_stack[w]) {
                    lowlink[f.v] = std::min(lowlink[f.v], index[w]);
                }
            } else {
                if (lowlink[f.v] == index[f.v]) {
                    std::vector<GateId> scc;
                    GateId w;
                    do {
                        w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        scc.push_back(w);
                    } while (w != f.v);
                    if (scc.size() > 1 || has_self_loop[scc[0]]) {
                        std::sort(scc.begin(), scc.end());
                        sccs.push_back(std::move(scc));
                    }
                }
                GateId v = f.v;
                frames.pop_back();
                if (!frames.empty())
                    lowlink[frames.back().v] = std::min(lowlink[frames.back().v], lowlink[v]);
            }
        }
    }
};

} // namespace

std::vector<std::vector<GateId>> Netlist::sequential_sccs() const {
    TarjanState st(*this);
    for (const Gate& g : gates_)
        if (st.index[g.id] < 0)
            st.run(g.id);
    std::sort(st.sccs.begin(), st.sccs.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return st.sccs;
}

void Netlist::check_invariants() const {
    for (const Net& net : nets_) {
        if (net.sources.size() > 1)
            throw NetlistError("invariant violated: multi-driven net '" + net.name + "'");
        if (net.is_global_input && !net.sources.empty())
            throw NetlistError("invariant violated: driven global input '" + net.name + "'");
    }
    for (const Gate& g : gates_) {
        for (size_t p = 0; p < g.endpoints.size(); p++)
            if (g.type->pins[p].dir == PinDir::In && g.endpoints[p] == kInvalidId)
                throw NetlistError("invariant violated: unbound input on '" + g.name + "'");
    }
}

} // namespace nlre
