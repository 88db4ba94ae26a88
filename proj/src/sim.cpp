#include "nlre/sim.hpp"

#include "nlre/netfunc.hpp"

#include <algorithm>
#include <unordered_map>

namespace nlre {

const std::vector<Val>& Waveform::values(const std::string& name) const {
    auto it = index.find(name);
    if (it == index.end())
        throw SimError("waveform has no signal '" + name + "'");
    return signals[it->second].values;
}

Val Waveform::value(const std::string& name, size_t cycle) const {
    const auto& v = values(name);
    if (cycle >= v.size())
        throw SimError("cycle " + std::to_string(cycle) + " out of range for '" + name + "'");
    return v[cycle];
}

void Waveform::add(std::string name, std::vector<Val> values) {
    index.emplace(name, signals.size());
    signals.push_back({std::move(name), std::move(values)});
}

Val Stimulus::at(const std::string& input, size_t cycle) const {
    auto it = inputs.find(input);
    if (it != inputs.end() && !it->second.empty())
        return cycle < it->second.size() ? it->second[cycle] : it->second.back();
    auto dv = defaults.find(input);
    return dv != defaults.end() ? dv->second : default_value;
}

namespace {

Val merge(Val a, Val b) { return a == b ? a : Val::X; }

Val val_not(Val a) { return a == Val::X ? Val::X : from_bool(a == Val::Zero); }

// Three-valued evaluation over a gate's function DAG. The ITE trees built by
// from_lut_init evaluate to the precise monotone extension because every
// split merges its branches.
Val eval3(const BoolFunc::Node* n, const std::vector<Val>& net_vals,
          std::unordered_map<const BoolFunc::Node*, Val>& memo) {
    auto it = memo.find(n);
    if (it != memo.end())
        return it->second;
    Val r = Val::X;
    using Op = BoolFunc::Op;
    switch (n->op) {
    case Op::Const:
        r = from_bool(n->value);
        break;
    case Op::Var:
        r = net_vals[n->var];
        break;
    case Op::Not:
        r = val_not(eval3(n->a.get(), net_vals, memo));
        break;
    case Op::And: {
        Val a = eval3(n->a.get(), net_vals, memo);
        Val b = eval3(n->b.get(), net_vals, memo);
        r = (a == Val::Zero || b == Val::Zero) ? Val::Zero
            : (a == Val::One && b == Val::One) ? Val::One
                                               : Val::X;
        break;
    }
    case Op::Or: {
        Val a = eval3(n->a.get(), net_vals, memo);
        Val b = eval3(n->b.get(), net_vals, memo);
        r = (a == Val::One || b == Val::One) ? Val::One
            : (a == Val::Zero && b == Val::Zero) ? Val::Zero
                                                 : Val::X;
        break;
    }
    case Op::Xor: {
        Val a = eval3(n->a.get(), net_vals, memo);
        Val b = eval3(n->b.get(), net_vals, memo);
        r = (a == Val::X || b == Val::X) ? Val::X : from_bool(a != b);
        break;
    }
    case Op::Ite: {
        Val s = eval3(n->a.get(), net_vals, memo);
        if (s == Val::One)
            r = eval3(n->b.get(), net_vals, memo);
        else if (s == Val::Zero)
            r = eval3(n->c.get(), net_vals, memo);
        else
            r = merge(eval3(n->b.get(), net_vals, memo), eval3(n->c.get(), net_vals, memo));
        break;
    }
    }
    memo.emplace(n, r);
    return r;
}

struct Simulator {
    const Netlist& nl;
    const Stimulus& stim;
    NetId clock_net = kInvalidId;
    std::vector<std::pair<GateId, std::vector<std::pair<NetId, BoolFunc>>>> comb_order;
    std::vector<Val> cur;
    std::vector<Val> ff_q;
    std::map<GateId, std::vector<Val>> bram;    // 256x16 flattened
    std::map<GateId, std::vector<Val>> dsp_acc; // 32 bits
    std::map<GateId, std::vector<Val>> bram_rdata;

    Simulator(const Netlist& n, const Stimulus& s) : nl(n), stim(s) {
        auto cn = nl.find_net(stim.clock);
        if (!cn || !nl.net(*cn).is_global_input)
            throw SimError("clock '" + stim.clock + "' is not a global input");
        clock_net = *cn;
        for (const Gate& g : nl.gates()) {
            if (!is_sequential(g.category()))
                continue;
            int cp = g.type->clock_pin();
            if (cp >= 0 && g.endpoints[size_t(cp)] != clock_net)
                throw SimError("multi-clock designs unsupported: gate '" + g.name + "' clocked by '" +
                               nl.net(g.endpoints[size_t(cp)]).name + "'");
        }
        levelize();
        cur.assign(nl.nets().size(), Val::X);
        ff_q.assign(nl.gates().size(), Val::X);
    }

    void levelize() {
        std::vector<int> pending(nl.gates().size(), 0);
        std::vector<std::vector<GateId>> dependents(nl.gates().size());
        std::vector<GateId> ready;
        size_t comb_total = 0;
        for (const Gate& g : nl.gates()) {
            if (!is_combinational(g.category()))
                continue;
            comb_total++;
            int deps = 0;
            for (size_t p = 0; p < g.endpoints.size(); p++) {
                if (g.type->pins[p].dir != PinDir::In)
                    continue;
                NetId n = g.endpoints[p];
                if (nl.is_const_net(n) || nl.net(n).sources.empty())
                    continue;
                const Gate& src = nl.gate(nl.net(n).sources[0].gate);
                if (is_combinational(src.category())) {
                    deps++;
                    dependents[src.id].push_back(g.id);
                }
            }
            pending[g.id] = deps;
            if (deps == 0)
                ready.push_back(g.id);
        }
        std::sort(ready.begin(), ready.end());
        size_t head = 0;
        std::vector<GateId> order;
        while (head < ready.size()) {
            GateId g = ready[head++];
            order.push_back(g);
            for (GateId d : dependents[g])
                if (--pending[d] == 0)
                    ready.push_back(d);
        }
        if (order.size() != comb_total) {
            std::string names;
            SimError err("");
            for (const Gate& g : nl.gates())
                if (is_combinational(g.category()) && pending[g.id] > 0) {
                    err.cycle_gates.push_back(g.id);
                    if (err.cycle_gates.size() <= 8) {
                        if (!names.empty())
                            names += ", ";
                        names += g.name;
                    }
                }
            SimError out("combinational cycle through: " + names);
            out.cycle_gates = err.cycle_gates;
            throw out;
        }
        for (GateId id : order) {
            const Gate& g = nl.gate(id);
            std::vector<std::pair<NetId, BoolFunc>> outs;
            for (int p : g.type->output_pins())
                if (g.endpoints[size_t(p)] != kInvalidId)
                    outs.emplace_back(g.endpoints[size_t(p)], gate_output_func(nl, g, uint32_t(p)));
            comb_order.emplace_back(id, std::move(outs));
        }
    }

    void drive_inputs(size_t t) {
        for (NetId n : nl.global_inputs())
            cur[n] = n == clock_net ? Val::One : stim.at(nl.net(n).name, t);
        if (auto c0 = nl.const_net(false))
            cur[*c0] = Val::Zero;
        if (auto c1 = nl.const_net(true))
            cur[*c1] = Val::One;
    }

    void publish_state() {
        for (const Gate& g : nl.gates()) {
            if (g.category() == GateCategory::Ff) {
                NetId q = g.endpoints[size_t(g.type->pin_index("Q"))];
                if (q != kInvalidId)
                    cur[q] = ff_q[g.id];
            } else if (g.category() == GateCategory::Bram) {
                auto it = bram_rdata.find(g.id);
                for (size_t i = 0; i < 16; i++) {
                    NetId n = g.endpoints[size_t(g.type->pin_index("RDATA" + std::to_string(i)))];
                    if (n != kInvalidId)
                        cur[n] = it == bram_rdata.end() ? Val::X : it->second[i];
                }
            } else if (g.category() == GateCategory::Dsp) {
                auto acc = dsp_acc.find(g.id);
                for (size_t i = 0; i < 32; i++) {
                    NetId n = g.endpoints[size_t(g.type->pin_index("O" + std::to_string(i)))];
                    if (n != kInvalidId)
                        cur[n] = acc == dsp_acc.end() ? Val::X : acc->second[i];
                }
            }
        }
    }

    void settle() {
        for (auto& [id, outs] : comb_order) {
            (void)id;
            for (auto& [net, func] : outs) {
                std::unordered_map<const BoolFunc::Node*, Val> memo;
                cur[net] = eval3(func.node().get(), cur, memo);
            }
        }
    }

    Val pin_val(const Gate& g, const std::string& pin) const {
        int idx = g.type->pin_index(pin);
        if (idx < 0 || g.endpoints[size_t(idx)] == kInvalidId)
            return Val::X;
        return cur[g.endpoints[size_t(idx)]];
    }

    std::vector<Val> bus_val(const Gate& g, const std::string& prefix, size_t n) const {
        std::vector<Val> out(n, Val::X);
        for (size_t i = 0; i < n; i++)
            out[i] = pin_val(g, prefix + std::to_string(i));
        return out;
    }

    static std::optional<uint64_t> to_uint(const std::vector<Val>& bits) {
        uint64_t v = 0;
        for (size_t i = 0; i < bits.size(); i++) {
            if (bits[i] == Val::X)
                return std::nullopt;
            if (bits[i] == Val::One)
                v |= uint64_t(1) << i;
        }
        return v;
    }

    static Val enabled_value(Val e, Val update, Val hold) {
        if (e == Val::One)
            return update;
        if (e == Val::Zero)
            return hold;
        return merge(update, hold);
    }

    // Simplified-library FF semantics: async reset/set win regardless of the
    // enable; sync reset/set and data capture are enable-gated.
    Val ff_next(const Gate& g, Val q) const {
        const std::string& t = g.type->name;
        bool async_r = t == "FDCE";
        bool async_s = t == "FDPE";
        Val r = Val::Zero, s = Val::Zero, e = Val::One;
        if (int p = g.type->pin_index("R"); p >= 0)
            r = pin_val(g, "R");
        if (int p = g.type->pin_index("CLR"); p >= 0)
            r = pin_val(g, "CLR");
        if (int p = g.type->pin_index("S"); p >= 0)
            s = pin_val(g, "S");
        if (int p = g.type->pin_index("PRE"); p >= 0)
            s = pin_val(g, "PRE");
        if (int p = g.type->pin_index("E"); p >= 0)
            e = pin_val(g, "E");
        if (int p = g.type->pin_index("CE"); p >= 0)
            e = pin_val(g, "CE");
        Val d = pin_val(g, "D");

        if (async_r || async_s) {
            Val ctrl = async_r ? r : s;
            Val forced = async_r ? Val::Zero : Val::One;
            if (ctrl == Val::One)
                return forced;
            Val normal = enabled_value(e, d, q);
            return ctrl == Val::Zero ? normal : merge(forced, normal);
        }
        Val captured = d;
        if (r != Val::Zero)
            captured = r == Val::One ? Val::Zero : merge(Val::Zero, d);
        else if (s != Val::Zero)
            captured = s == Val::One ? Val::One : merge(Val::One, d);
        return enabled_value(e, captured, q);
    }

    void bram_edge(const Gate& g) {
        auto& mem = bram[g.id];
        if (mem.empty()) {
            mem.assign(256 * 16, Val::X);
            auto it = g.config.find("INIT");
            if (it != g.config.end())
                for (size_t i = 0; i < 256 * 16; i++)
                    mem[i] = from_bool(it->second.get(i));
        }
        auto raddr = to_uint(bus_val(g, "RADDR", 8));
        std::vector<Val> rdata(16, Val::X);
        if (raddr)
            for (size_t i = 0; i < 16; i++)
                rdata[i] = mem[*raddr * 16 + i]; // read-first
        Val we = pin_val(g, "WE");
        if (we != Val::Zero) {
            auto waddr = to_uint(bus_val(g, "WADDR", 8));
            auto wdata = bus_val(g, "WDATA", 16);
            if (waddr) {
                for (size_t i = 0; i < 16; i++)
                    mem[*waddr * 16 + i] = we == Val::One ? wdata[i] : merge(mem[*waddr * 16 + i], wdata[i]);
            } else {
                std::fill(mem.begin(), mem.end(), Val::X);
            }
        }
        bram_rdata[g.id] = std::move(rdata);
    }

    void dsp_edge(const Gate& g) {
        auto& acc = dsp_acc[g.id];
        if (acc.empty())
            acc.assign(32, Val::X);
        Val rst = pin_val(g, "RST");
        Val ce = pin_val(g, "CE");
        std::vector<Val> next;
        if (rst == Val::One) {
            next.assign(32, Val::Zero);
        } else {
            std::vector<Val> updated(32, Val::X);
            auto a = to_uint(bus_val(g, "A", 16));
            auto b = to_uint(bus_val(g, "B", 16));
            auto acc_u = to_uint(acc);
            if (a && b && acc_u) {
                uint64_t sum = (*acc_u + *a * *b) & 0xffffffffull;
                for (size_t i = 0; i < 32; i++)
                    updated[i] = from_bool((sum >> i) & 1);
            }
            next.assign(32, Val::X);
            for (size_t i = 0; i < 32; i++)
                next[i] = enabled_value(ce, updated[i], acc[i]);
            if (rst == Val::X)
                for (size_t i = 0; i < 32; i++)
                    next[i] = merge(next[i], Val::Zero);
        }
        acc = std::move(next);
    }

    void clock_edge() {
        std::vector<Val> next_ff = ff_q;
        for (const Gate& g : nl.gates()) {
            switch (g.category()) {
            case GateCategory::Ff:
                next_ff[g.id] = ff_next(g, ff_q[g.id]);
                break;
            case GateCategory::Bram:
                bram_edge(g);
                break;
            case GateCategory::Dsp:
                dsp_edge(g);
                break;
            default:
                break;
            }
        }
        ff_q = std::move(next_ff);
    }

    void apply_initial_state(const std::map<std::string, Val>& init) {
        for (const auto& [name, v] : init) {
            auto g = nl.find_gate(name);
            if (!g)
                throw SimError("initial state names unknown gate '" + name + "'");
            if (nl.gate(*g).category() == GateCategory::Ff)
                ff_q[*g] = v;
            else if (nl.gate(*g).category() == GateCategory::Dsp)
                dsp_acc[*g].assign(32, v);
            else
                throw SimError("initial state for non-state gate '" + name + "'");
        }
    }

    Waveform run(size_t cycles, const SimOptions& opts) {
        apply_initial_state(opts.initial_state);

        std::vector<NetId> dump;
        if (opts.watch.empty()) {
            for (const Net& n : nl.nets())
                dump.push_back(n.id);
        } else {
            for (const std::string& name : opts.watch) {
                auto n = nl.find_net(name);
                if (!n)
                    throw SimError("watch list names unknown net '" + name + "'");
                dump.push_back(*n);
            }
        }
        std::vector<std::vector<Val>> rec(dump.size());

        // Pre-edge-0 view: initial state with cycle-0 inputs applied.
        drive_inputs(0);
        publish_state();
        settle();

        for (size_t t = 0; t < cycles; t++) {
            clock_edge(); // samples the current settled (pre-edge) values
            drive_inputs(t);
            publish_state();
            settle();
            for (size_t i = 0; i < dump.size(); i++)
                rec[i].push_back(cur[dump[i]]);
        }

        Waveform w;
        for (size_t i = 0; i < dump.size(); i++)
            w.add(nl.net(dump[i]).name, std::move(rec[i]));
        return w;
    }
};

} // namespace

Waveform simulate(const Netlist& nl, const Stimulus& stimulus, size_t cycles, const SimOptions& opts) {
    for (const auto& [name, seq] : stimulus.inputs) {
        (void)seq;
        auto n = nl.find_net(name);
        if (!n || !nl.net(*n).is_global_input)
            throw SimError("stimulus drives '" + name + "', which is not a global input");
    }
    Simulator sim(nl, stimulus);
    return sim.run(cycles, opts);
}

Stimulus stimulus_from_waveform(const Netlist& nl, const Waveform& w, const std::string& clock) {
    Stimulus s;
    s.clock = clock;
    for (NetId n : nl.global_inputs()) {
        const std::string& name = nl.net(n).name;
        if (name == clock)
            continue;
        if (w.has(name))
            s.inputs[name] = w.values(name);
    }
    return s;
}

} // namespace nlre
