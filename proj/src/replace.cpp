#include "nlre/editor.hpp"
#include "nlre/netfunc.hpp"
#include "nlre/netlist.hpp"

#include <algorithm>

namespace nlre {

namespace {

struct Boundary {
    std::set<NetId> inputs;  // crossing into the victim set
    std::set<NetId> outputs; // driven by victims, consumed outside (or global out)
};

Boundary compute_boundary(const Netlist& host, const std::set<GateId>& victims) {
    Boundary b;
    for (GateId id : victims) {
        const Gate& g = host.gate(id);
        for (size_t p = 0; p < g.endpoints.size(); p++) {
            NetId n = g.endpoints[p];
            if (n == kInvalidId)
                continue;
            const Net& net = host.net(n);
            if (g.type->pins[p].dir == PinDir::In) {
                bool external = net.sources.empty() || !victims.count(net.sources[0].gate);
                if (external && !host.is_const_net(n))
                    b.inputs.insert(n);
            } else {
                bool external = net.is_global_output;
                for (const Endpoint& d : net.destinations)
                    if (!victims.count(d.gate))
                        external = true;
                if (external)
                    b.outputs.insert(n);
            }
        }
    }
    return b;
}

} // namespace

Netlist replace_subcircuit(const Netlist& host, const std::set<GateId>& victim_gates, const Netlist& fragment,
                           const std::map<NetId, NetId>& boundary_map, const ReplaceOptions& opts) {
    Boundary boundary = compute_boundary(host, victim_gates);

    // Fragment boundary nets are its global inputs/outputs. Net merges are
    // expressed as fragment BUF gates, which collapse during splicing unless
    // the host-side output is a global output (boundary rule).
    std::map<NetId, NetId> frag_out_to_host; // fragment net -> host output net it drives
    std::set<NetId> covered_outputs;
    for (const Net& fn : fragment.nets()) {
        if (!fn.is_global_input && !fn.is_global_output)
            continue;
        auto it = boundary_map.find(fn.id);
        if (it == boundary_map.end())
            throw NetlistError("boundary map misses fragment net '" + fn.name + "'");
        if (fn.is_global_output) {
            frag_out_to_host.emplace(fn.id, it->second);
            covered_outputs.insert(it->second);
        }
    }
    for (NetId out : boundary.outputs)
        if (!covered_outputs.count(out))
            throw NetlistError("uncovered boundary net '" + host.net(out).name + "'");

    // Map a fragment-side function onto host net variables.
    auto host_side = [&](const BoolFunc& f) {
        std::map<uint32_t, BoolFunc> rename;
        for (uint32_t v : f.syntactic_support()) {
            auto it = boundary_map.find(NetId(v));
            if (it == boundary_map.end())
                throw NetlistError("fragment function escapes boundary via net '" + fragment.net(v).name + "'");
            rename.emplace(v, BoolFunc::var(it->second));
        }
        return f.substitute(rename);
    };

    if (opts.check_equivalence) {
        std::set<GateId> all_fragment_gates;
        for (const Gate& g : fragment.gates())
            all_fragment_gates.insert(g.id);
        for (const auto& [fnet, hnet] : frag_out_to_host) {
            BoolFunc before = subgraph_func(host, hnet, victim_gates);
            BoolFunc after = host_side(subgraph_func(fragment, fnet, all_fragment_gates));
            if (before.syntactic_support().size() > opts.exhaustive_input_limit)
                throw NetlistError("equivalence check: boundary cone for '" + host.net(hnet).name + "' too wide");
            EquivResult r = check_equivalent(before, after);
            if (!r.equal())
                throw NetlistError("replacement not equivalent on boundary net '" + host.net(hnet).name + "'");
        }
    }

    NetlistEditor ed(host);
    for (GateId id : victim_gates)
        ed.drop_gate(id);

    // Fragment internal nets become fresh host nets; boundary nets resolve
    // through the map.
    std::map<NetId, NetId> fnet_map;
    for (const Net& fn : fragment.nets()) {
        if (fn.is_global_input || fn.is_global_output) {
            fnet_map[fn.id] = boundary_map.at(fn.id);
        } else if (fragment.is_const_net(fn.id)) {
            // materialized lazily below
        } else {
            fnet_map[fn.id] = ed.add_net(fn.name);
        }
    }
    auto map_fnet = [&](NetId fn) -> NetId {
        if (fragment.is_const_net(fn)) {
            NetId scratch = ed.add_net("$tmp");
            ed.bind_const(scratch, fragment.const_value(fn));
            return ed.resolve(scratch);
        }
        return fnet_map.at(fn);
    };

    for (const Gate& fg : fragment.gates()) {
        if (fg.type->name == "BUF" && opts.merge_buffers) {
            NetId in = map_fnet(fg.pin_net("A"));
            NetId out_net = map_fnet(fg.pin_net("Y"));
            bool host_global_out =
                out_net < host.nets().size() && host.net(out_net).is_global_output;
            if (!host_global_out) {
                ed.merge_net(out_net, in);
                continue;
            }
        }
        GateId ng = ed.add_gate(fg.type->name, fg.name);
        for (const auto& [key, value] : fg.config)
            ed.set_config(ng, key, value);
        for (size_t p = 0; p < fg.endpoints.size(); p++)
            if (fg.endpoints[p] != kInvalidId)
                ed.connect(ng, fg.type->pins[p].name, map_fnet(fg.endpoints[p]));
    }

    Netlist out = std::move(ed).finish();
    out.check_invariants();
    return out;
}

} // namespace nlre
