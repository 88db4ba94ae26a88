#include "nlre/netfunc.hpp"

#include <unordered_map>

namespace nlre {

namespace {

BoolFunc input_var(const Netlist& nl, NetId n) {
    if (nl.is_const_net(n))
        return BoolFunc::constant(nl.const_value(n));
    return BoolFunc::var(n);
}

} // namespace

BoolFunc gate_output_func(const Netlist& nl, const Gate& g, uint32_t out_pin) {
    const GateType& t = *g.type;
    if (t.pins.at(out_pin).dir != PinDir::Out)
        throw NetlistError("gate '" + g.name + "': pin is not an output");
    auto in = [&](const char* name) { return input_var(nl, g.pin_net(name)); };

    switch (t.category) {
    case GateCategory::Constant:
        return BoolFunc::constant(t.name == "CONST1");
    case GateCategory::Lut: {
        auto it = g.config.find("INIT");
        if (it == g.config.end())
            throw NetlistError("LUT '" + g.name + "' lacks INIT");
        std::vector<uint32_t> vars;
        std::map<uint32_t, BoolFunc> consts;
        for (int p : t.input_pins()) {
            NetId n = g.endpoints[size_t(p)];
            vars.push_back(n);
            if (nl.is_const_net(n))
                consts.emplace(n, BoolFunc::constant(nl.const_value(n)));
        }
        BoolFunc f = BoolFunc::from_lut_init(it->second, vars);
        return consts.empty() ? f : f.substitute(consts);
    }
    case GateCategory::PrimitiveComb: {
        if (t.name == "BUF")
            return in("A");
        if (t.name == "INV")
            return BoolFunc::negate(in("A"));
        if (t.name == "AND2")
            return BoolFunc::and2(in("A"), in("B"));
        if (t.name == "OR2")
            return BoolFunc::or2(in("A"), in("B"));
        if (t.name == "XOR2")
            return BoolFunc::xor2(in("A"), in("B"));
        if (t.name == "XNOR2")
            return BoolFunc::negate(BoolFunc::xor2(in("A"), in("B")));
        if (t.name == "MUX2")
            return BoolFunc::ite(in("S"), in("B"), in("A"));
        throw NetlistError("no boolean semantics for primitive '" + t.name + "'");
    }
    case GateCategory::Carry: {
        if (t.name == "CARRY") {
            BoolFunc a = in("I0"), b = in("I1"), c = in("CI");
            return BoolFunc::or2(BoolFunc::and2(a, b), BoolFunc::and2(c, BoolFunc::or2(a, b)));
        }
        if (t.name == "CARRY4") {
            BoolFunc ci = BoolFunc::or2(in("CI"), in("CYINIT"));
            const std::string& pin_name = t.pins[out_pin].name;
            for (int i = 0; i < 4; i++) {
                BoolFunc s = input_var(nl, g.pin_net("S" + std::to_string(i)));
                BoolFunc di = input_var(nl, g.pin_net("DI" + std::to_string(i)));
                if (pin_name == "O" + std::to_string(i))
                    return BoolFunc::xor2(s, ci);
                BoolFunc co = BoolFunc::ite(s, ci, di);
                if (pin_name == "CO" + std::to_string(i))
                    return co;
                ci = co;
            }
            throw NetlistError("CARRY4: unknown output pin");
        }
        throw NetlistError("no boolean semantics for carry type '" + t.name + "'");
    }
    default:
        throw NetlistError("gate '" + g.name + "' is not combinational");
    }
}

namespace {

struct ConeBuilder {
    const Netlist& nl;
    const std::set<NetId>& cut;
    std::unordered_map<NetId, BoolFunc> memo;

    BoolFunc run(NetId n) {
        if (nl.is_const_net(n))
            return BoolFunc::constant(nl.const_value(n));
        auto it = memo.find(n);
        if (it != memo.end())
            return it->second;
        const Net& net = nl.net(n);
        BoolFunc f;
        if (cut.count(n) || net.is_global_input || net.sources.empty()) {
            f = BoolFunc::var(n);
        } else {
            const Gate& src = nl.gate(net.sources[0].gate);
            if (!is_combinational(src.category()) && src.category() != GateCategory::Constant) {
                f = BoolFunc::var(n);
            } else {
                BoolFunc local = gate_output_func(nl, src, net.sources[0].pin);
                std::map<uint32_t, BoolFunc> sub;
                for (uint32_t v : local.syntactic_support())
                    sub.emplace(v, run(NetId(v)));
                f = local.substitute(sub);
            }
        }
        memo.emplace(n, f);
        return f;
    }
};

} // namespace

BoolFunc cone_func(const Netlist& nl, NetId target, const std::set<NetId>& cut) {
    ConeBuilder b{nl, cut, {}};
    return b.run(target);
}

std::vector<BoolFunc> cone_funcs(const Netlist& nl, const std::vector<NetId>& targets, const std::set<NetId>& cut) {
    ConeBuilder b{nl, cut, {}};
    std::vector<BoolFunc> out;
    out.reserve(targets.size());
    for (NetId t : targets)
        out.push_back(b.run(t));
    return out;
}

BoolFunc subgraph_func(const Netlist& nl, NetId target, const std::set<GateId>& through) {
    struct Rec {
        const Netlist& nl;
        const std::set<GateId>& through;
        std::unordered_map<NetId, BoolFunc> memo;

        BoolFunc run(NetId n) {
            if (nl.is_const_net(n))
                return BoolFunc::constant(nl.const_value(n));
            auto it = memo.find(n);
            if (it != memo.end())
                return it->second;
            const Net& net = nl.net(n);
            BoolFunc f;
            if (net.sources.empty() || !through.count(net.sources[0].gate)) {
                f = BoolFunc::var(n);
            } else {
                const Gate& src = nl.gate(net.sources[0].gate);
                BoolFunc local = gate_output_func(nl, src, net.sources[0].pin);
                std::map<uint32_t, BoolFunc> sub;
                for (uint32_t v : local.syntactic_support())
                    sub.emplace(v, run(NetId(v)));
                f = local.substitute(sub);
            }
            memo.emplace(n, f);
            return f;
        }
    };
    Rec rec{nl, through, {}};
    return rec.run(target);
}

} // namespace nlre
