#include "nlre/editor.hpp"

#include <algorithm>

namespace nlre {

NetlistEditor::NetlistEditor(const Netlist& base) : base_(base) {}

void NetlistEditor::drop_gate(GateId g) {
    drop_.insert(g);
}

NetId NetlistEditor::resolve(NetId n) const {
    // Path-compress-free chase; merge chains are short.
    auto it = replace_.find(n);
    while (it != replace_.end()) {
        n = it->second;
        it = replace_.find(n);
    }
    return n;
}

void NetlistEditor::merge_net(NetId victim, NetId onto) {
    victim = resolve(victim);
    onto = resolve(onto);
    if (victim == onto)
        return;
    if (victim < base_.nets().size() && base_.net(victim).is_global_output)
        throw NetlistError("cannot merge global output net '" + base_.net(victim).name + "'");
    replace_[victim] = onto;
    merge_count_++;
}

void NetlistEditor::bind_const(NetId victim, bool value) {
    if (auto n = base_.const_net(value)) {
        merge_net(victim, *n);
        return;
    }
    auto it = new_consts_.find(value);
    if (it == new_consts_.end()) {
        NetId n = add_net(value ? "$const1" : "$const0");
        it = new_consts_.emplace(value, n).first;
    }
    merge_net(victim, it->second);
}

NetId NetlistEditor::add_net(const std::string& name) {
    new_nets_.push_back(name);
    return NetId(base_.nets().size() + new_nets_.size() - 1);
}

GateId NetlistEditor::add_gate(const std::string& type_name, const std::string& name) {
    base_.library().get(type_name); // validate early
    new_gates_.push_back({type_name, name, {}, {}});
    return GateId(base_.gates().size() + new_gates_.size() - 1);
}

void NetlistEditor::set_config(GateId g, const std::string& key, BitVec value) {
    size_t idx = g - base_.gates().size();
    new_gates_.at(idx).config[key] = std::move(value);
}

void NetlistEditor::connect(GateId g, const std::string& pin, NetId n) {
    size_t idx = g - base_.gates().size();
    new_gates_.at(idx).pins[pin] = n;
}

Netlist NetlistEditor::finish() && {
    NetlistBuilder builder(&base_.library());

    size_t n_old_nets = base_.nets().size();
    std::vector<NetId> net_map(n_old_nets + new_nets_.size(), kInvalidId);

    // Which resolved nets are actually used by surviving structure?
    std::vector<bool> used(n_old_nets + new_nets_.size(), false);
    auto mark = [&](NetId n) {
        if (n != kInvalidId)
            used[resolve(n)] = true;
    };
    for (const Gate& g : base_.gates()) {
        if (drop_.count(g.id))
            continue;
        for (NetId n : g.endpoints)
            mark(n);
    }
    for (const auto& ng : new_gates_)
        for (const auto& [pin, n] : ng.pins)
            mark(n);

    auto keep_net = [&](NetId id, const Net* old) {
        if (replace_.count(id))
            return false; // merged away
        if (used[id])
            return true;
        return old && (old->is_global_input || old->is_global_output);
    };

    for (const Net& n : base_.nets()) {
        if (!keep_net(n.id, &n))
            continue;
        bool is_const = base_.is_const_net(n.id);
        NetId nn;
        if (is_const)
            nn = builder.const_net(base_.const_value(n.id));
        else
            nn = builder.add_net(n.name, n.is_global_input, n.is_global_output);
        net_map[n.id] = nn;
    }
    for (size_t i = 0; i < new_nets_.size(); i++) {
        NetId id = NetId(n_old_nets + i);
        if (!keep_net(id, nullptr))
            continue;
        bool c0 = new_consts_.count(false) && new_consts_[false] == id;
        bool c1 = new_consts_.count(true) && new_consts_[true] == id;
        net_map[id] = (c0 || c1) ? builder.const_net(c1) : builder.add_net(new_nets_[i]);
    }

    auto map_net = [&](NetId n) {
        NetId m = net_map[resolve(n)];
        if (m == kInvalidId)
            throw NetlistError("internal: unmapped net during rebuild");
        return m;
    };

    std::map<GateId, GateId> gate_map;
    for (const Gate& g : base_.gates()) {
        if (drop_.count(g.id))
            continue;
        GateId ng = builder.add_gate(g.type->name, g.name);
        gate_map[g.id] = ng;
        for (const auto& [key, value] : g.config)
            builder.set_config(ng, key, value);
        for (size_t p = 0; p < g.endpoints.size(); p++)
            if (g.endpoints[p] != kInvalidId)
                builder.connect(ng, uint32_t(p), map_net(g.endpoints[p]));
    }
    for (const auto& ngate : new_gates_) {
        GateId ng = builder.add_gate(ngate.type, ngate.name);
        for (const auto& [key, value] : ngate.config)
            builder.set_config(ng, key, value);
        for (const auto& [pin, n] : ngate.pins)
            builder.connect(ng, pin, map_net(n));
    }

    Netlist out = std::move(builder).build();

    // Carry groups over, minus dropped gates and their pins.
    for (const ModuleGroup& g : base_.groups()) {
        ModuleGroup ng;
        ng.name = g.name;
        ng.kind = g.kind;
        ng.locked = g.locked;
        for (GateId id : g.gates) {
            auto it = gate_map.find(id);
            if (it != gate_map.end())
                ng.gates.insert(it->second);
        }
        for (const GroupPinGroup& pg : g.pin_groups) {
            GroupPinGroup npg;
            npg.name = pg.name;
            for (const GroupPin& p : pg.pins) {
                auto it = gate_map.find(p.gate);
                if (it != gate_map.end())
                    npg.pins.push_back({it->second, p.pin, p.index});
            }
            if (!npg.pins.empty())
                ng.pin_groups.push_back(std::move(npg));
        }
        if (!ng.gates.empty())
            out.add_group(std::move(ng));
    }
    return out;
}

} // namespace nlre
