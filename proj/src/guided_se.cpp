#include "nlre/guided_se.hpp"

#include "nlre/netfunc.hpp"

#include <algorithm>
#include <sstream>

namespace nlre {

ControlSet classify_control(const Netlist& nl) {
    ControlSet cs;
    size_t n = nl.nets().size();
    std::vector<bool> control(n, false);

    // Monotone relaxation: marking a gate's outputs control can make its
    // inputs eligible.
    bool changed = true;
    while (changed) {
        changed = false;
        for (const Net& net : nl.nets()) {
            if (control[net.id] || net.destinations.empty() || net.is_global_output || nl.is_const_net(net.id))
                continue;
            bool all = true;
            for (const Endpoint& d : net.destinations) {
                const Gate& g = nl.gate(d.gate);
                PinRole role = g.type->pins[d.pin].role;
                if (is_control_role(role))
                    continue;
                if (!is_combinational(g.category())) {
                    all = false;
                    break;
                }
                // Data pin of a combinational gate: acceptable only when
                // every bound output of that gate is already control.
                bool outputs_control = true;
                for (int p : g.type->output_pins()) {
                    NetId out = g.endpoints[size_t(p)];
                    if (out != kInvalidId && !control[out])
                        outputs_control = false;
                }
                if (!outputs_control) {
                    all = false;
                    break;
                }
            }
            if (all) {
                control[net.id] = true;
                changed = true;
            }
        }
    }
    for (const Net& net : nl.nets())
        if (control[net.id]) {
            cs.nets.insert(net.id);
            cs.provenance[net.id] = "pin-role";
        }
    return cs;
}

namespace {

// FF -> FFs whose D cone contains it, restricted to a gate subset.
std::map<GateId, std::set<GateId>> register_graph(const Netlist& nl, const std::vector<GateId>& scc) {
    std::set<GateId> members(scc.begin(), scc.end());
    std::map<GateId, std::set<GateId>> succ;
    for (GateId id : scc) {
        const Gate& g = nl.gate(id);
        if (g.category() != GateCategory::Ff)
            continue;
        succ[id];
        NetId d = g.endpoints[size_t(g.type->pin_index("D"))];
        ConeResult cone = nl.combinational_fanin_cone(d);
        for (NetId in : cone.inputs) {
            const Net& net = nl.net(in);
            if (net.sources.empty())
                continue;
            GateId src = net.sources[0].gate;
            if (members.count(src) && nl.gate(src).category() == GateCategory::Ff)
                succ[src].insert(id);
        }
    }
    return succ;
}

bool has_cycle(const std::map<GateId, std::set<GateId>>& graph, std::vector<GateId>& cycle_out) {
    std::map<GateId, int> state; // 0 white, 1 grey, 2 black
    std::vector<GateId> stack;
    std::function<bool(GateId)> dfs = [&](GateId v) {
        state[v] = 1;
        stack.push_back(v);
        auto it = graph.find(v);
        if (it != graph.end()) {
            for (GateId w : it->second) {
                if (state[w] == 1) {
                    auto pos = std::find(stack.begin(), stack.end(), w);
                    cycle_out.assign(pos, stack.end());
                    return true;
                }
                if (state[w] == 0 && dfs(w))
                    return true;
            }
        }
        stack.pop_back();
        state[v] = 2;
        return false;
    };
    for (auto& [v, _] : graph)
        if (state[v] == 0 && dfs(v))
            return true;
    return false;
}

} // namespace

std::set<GateId> break_loops(const Netlist& nl) {
    std::set<GateId> cuts;
    for (const auto& scc : nl.sequential_sccs()) {
        auto graph = register_graph(nl, scc);
        // Drop already-cut nodes, then break remaining cycles lowest-id
        // first.
        for (;;) {
            std::map<GateId, std::set<GateId>> g;
            for (auto& [v, succs] : graph) {
                if (cuts.count(v))
                    continue;
                for (GateId w : succs)
                    if (!cuts.count(w))
                        g[v].insert(w);
                g[v];
            }
            std::vector<GateId> cycle;
            if (!has_cycle(g, cycle))
                break;
            cuts.insert(*std::min_element(cycle.begin(), cycle.end()));
        }
    }
    return cuts;
}

ExprRef expr_const(uint64_t value, size_t width) {
    auto e = std::make_shared<Expr>();
    e->op = Expr::Op::Const;
    e->width = width;
    e->value = width >= 64 ? value : (value & ((uint64_t(1) << width) - 1));
    return e;
}

ExprRef expr_sym(std::string name, size_t cycle, size_t width) {
    auto e = std::make_shared<Expr>();
    e->op = Expr::Op::Sym;
    e->name = std::move(name);
    e->cycle = cycle;
    e->width = width;
    return e;
}

namespace {

ExprRef mk(Expr::Op op, size_t width, std::vector<ExprRef> args) {
    auto e = std::make_shared<Expr>();
    e->op = op;
    e->width = width;
    e->args = std::move(args);
    return e;
}

ExprRef expr_var(size_t var_id, size_t cycle, size_t width) {
    auto e = std::make_shared<Expr>();
    e->op = Expr::Op::Var;
    e->var_id = var_id;
    e->cycle = cycle;
    e->width = width;
    return e;
}

ExprRef expr_not(ExprRef a) {
    if (a->op == Expr::Op::Const)
        return expr_const(~a->value, a->width);
    return mk(Expr::Op::Not, a->width, {std::move(a)});
}

ExprRef expr_slice(ExprRef a, uint32_t index) {
    if (a->op == Expr::Op::Const)
        return expr_const((a->value >> index) & 1, 1);
    if (a->width == 1 && index == 0)
        return a;
    if (a->op == Expr::Op::Cat && index < a->args.size())
        return a->args[index];
    auto e = std::make_shared<Expr>();
    e->op = Expr::Op::Slice;
    e->width = 1;
    e->index = index;
    e->args = {std::move(a)};
    return e;
}

struct FfUpdate {
    enum Kind { Hold, Capture, Force0, Force1 } kind = Hold;
};

struct Tracer {
    const Netlist& nl;
    const Waveform& wave;
    const ControlSet& controls;
    const TraceOptions& opts;
    std::set<GateId> loop_cuts;
    TraceResult result;

    std::map<std::pair<NetId, size_t>, ExprRef> net_memo;
    std::map<GateId, size_t> var_ids;
    std::set<std::pair<size_t, size_t>> defs_done;
    std::map<std::pair<size_t, size_t>, ExprRef> word_memo; // (structure idx, cycle)
    std::map<NetId, std::pair<size_t, uint32_t>> arith_out; // net -> (structure, bit)

    Tracer(const Netlist& n, const Waveform& w, const ControlSet& c, const TraceOptions& o)
        : nl(n), wave(w), controls(c), opts(o) {
        loop_cuts = break_loops(nl);
        if (opts.arithmetic)
            for (size_t si = 0; si < opts.arithmetic->size(); si++) {
                const ArithmeticStructure& s = (*opts.arithmetic)[si];
                if (s.status != VerifyStatus::Verified)
                    continue;
                for (size_t j = 0; j < s.outputs.size(); j++)
                    arith_out.emplace(s.outputs[j], std::make_pair(si, uint32_t(j)));
            }
    }

    Val value_at(NetId net, size_t cycle) const { return wave.value(nl.net(net).name, cycle); }

    bool defined_bool(NetId net, size_t cycle, const char* what) const {
        Val v = value_at(net, cycle);
        if (v == Val::X)
            throw TraceError(std::string("X ") + what + " value on net '" + nl.net(net).name + "' at cycle " +
                             std::to_string(cycle));
        return v == Val::One;
    }

    size_t var_id_for(GateId g) {
        auto it = var_ids.find(g);
        if (it != var_ids.end())
            return it->second;
        size_t id = var_ids.size() + 1;
        var_ids.emplace(g, id);
        result.var_origin[id] = nl.gate(g).name;
        return id;
    }

    // --- flip-flop update semantics, mirroring the simulator -------------

    FfUpdate ff_update_at(const Gate& g, size_t edge) const {
        // Edge `edge` samples the values recorded at edge-1.
        if (edge == 0)
            throw TraceError("cycle-0 underflow"); // callers handle via initial-state symbol
        size_t t = edge - 1;
        auto pin_val = [&](const char* name) -> std::optional<bool> {
            int p = g.type->pin_index(name);
            if (p < 0 || g.endpoints[size_t(p)] == kInvalidId)
                return std::nullopt;
            NetId net = g.endpoints[size_t(p)];
            if (nl.is_const_net(net))
                return nl.const_value(net);
            return defined_bool(net, t, "control");
        };
        const std::string& type = g.type->name;
        if (type == "FDCE" || type == "FDPE") {
            auto ctrl = pin_val(type == "FDCE" ? "CLR" : "PRE");
            if (ctrl && *ctrl)
                return {type == "FDCE" ? FfUpdate::Force0 : FfUpdate::Force1};
            auto ce = pin_val("CE");
            return {!ce || *ce ? FfUpdate::Capture : FfUpdate::Hold};
        }
        auto e = pin_val("E");
        if (!e)
            e = pin_val("CE");
        if (e && !*e)
            return {FfUpdate::Hold};
        auto r = pin_val("R");
        if (r && *r)
            return {FfUpdate::Force0};
        auto s = pin_val("S");
        if (s && *s)
            return {FfUpdate::Force1};
        return {FfUpdate::Capture};
    }

    // Last edge <= cycle at which the FF updated; nullopt means never.
    std::optional<std::pair<size_t, FfUpdate>> last_update(const Gate& g, size_t cycle) const {
        for (size_t edge = cycle;; edge--) {
            if (edge == 0)
                return std::nullopt; // pre-trace state
            FfUpdate u = ff_update_at(g, edge);
            if (u.kind != FfUpdate::Hold)
                return std::make_pair(edge, u);
            if (edge == 1)
                return std::nullopt;
        }
    }

    ExprRef trace_net(NetId net, size_t cycle) {
        if (nl.is_const_net(net))
            return expr_const(nl.const_value(net) ? 1 : 0, 1);
        if (controls.nets.count(net))
            return expr_const(defined_bool(net, cycle, "control") ? 1 : 0, 1);
        auto key = std::make_pair(net, cycle);
        auto hit = net_memo.find(key);
        if (hit != net_memo.end())
            return hit->second;
        ExprRef e = trace_net_inner(net, cycle);
        net_memo.emplace(key, e);
        return e;
    }

    ExprRef trace_net_inner(NetId net, size_t cycle) {
        const Net& n = nl.net(net);
        if (n.is_global_input)
            return expr_sym(n.name, cycle);
        if (n.sources.empty()) {
            result.warnings.push_back("dangling net '" + n.name + "' symbolized");
            return expr_sym(n.name, cycle);
        }
        const Gate& src = nl.gate(n.sources[0].gate);
        if (is_combinational(src.category()) || src.category() == GateCategory::Constant) {
            // Word-level fold through a verified arithmetic structure when
            // the control values match a passing assignment.
            auto ao = arith_out.find(net);
            if (ao != arith_out.end()) {
                ExprRef word = arith_word(ao->second.first, cycle);
                if (word)
                    return expr_slice(word, ao->second.second);
            }
            return trace_comb(net, cycle);
        }
        if (src.category() == GateCategory::Ff)
            return trace_ff(src, cycle);
        if (src.category() == GateCategory::Bram)
            return trace_bram(src, net, cycle);
        if (src.category() == GateCategory::Dsp)
            return trace_dsp(src, net, cycle);
        throw TraceError("cannot trace through gate '" + src.name + "'");
    }

    // Combinational cone with controls cut and substituted.
    ExprRef trace_comb(NetId net, size_t cycle) {
        BoolFunc f = cone_func(nl, net, controls.nets);
        std::map<uint32_t, BoolFunc> subst;
        for (uint32_t v : f.syntactic_support())
            if (controls.nets.count(NetId(v)))
                subst.emplace(v, BoolFunc::constant(defined_bool(NetId(v), cycle, "control")));
        if (!subst.empty())
            f = f.substitute(subst);
        std::map<const BoolFunc::Node*, ExprRef> memo;
        return from_boolfunc(f.node().get(), cycle, memo);
    }

    ExprRef from_boolfunc(const BoolFunc::Node* n, size_t cycle, std::map<const BoolFunc::Node*, ExprRef>& memo) {
        auto it = memo.find(n);
        if (it != memo.end())
            return it->second;
        ExprRef e;
        using Op = BoolFunc::Op;
        switch (n->op) {
        case Op::Const: e = expr_const(n->value ? 1 : 0, 1); break;
        case Op::Var: e = trace_net(NetId(n->var), cycle); break;
        case Op::Not: e = expr_not(from_boolfunc(n->a.get(), cycle, memo)); break;
        case Op::And:
            e = mk(Expr::Op::And, 1, {from_boolfunc(n->a.get(), cycle, memo), from_boolfunc(n->b.get(), cycle, memo)});
            break;
        case Op::Or:
            e = mk(Expr::Op::Or, 1, {from_boolfunc(n->a.get(), cycle, memo), from_boolfunc(n->b.get(), cycle, memo)});
            break;
        case Op::Xor:
            e = mk(Expr::Op::Xor, 1, {from_boolfunc(n->a.get(), cycle, memo), from_boolfunc(n->b.get(), cycle, memo)});
            break;
        case Op::Ite:
            e = mk(Expr::Op::Ite, 1,
                   {from_boolfunc(n->a.get(), cycle, memo), from_boolfunc(n->b.get(), cycle, memo),
                    from_boolfunc(n->c.get(), cycle, memo)});
            break;
        }
        memo.emplace(n, e);
        return e;
    }

    ExprRef trace_ff(const Gate& g, size_t cycle) {
        auto last = last_update(g, cycle);
        if (!last) {
            result.warnings.push_back("initial-state symbol for '" + g.name + "'");
            return expr_sym("init$" + g.name, 0);
        }
        auto [edge, update] = *last;
        if (loop_cuts.count(g.id)) {
            size_t vid = var_id_for(g.id);
            define_ff_var(g, vid, edge, update);
            return expr_var(vid, edge, 1);
        }
        if (opts.marked_registers.count(g.id))
            return expr_sym(g.name, edge);
        switch (update.kind) {
        case FfUpdate::Force0: return expr_const(0, 1);
        case FfUpdate::Force1: return expr_const(1, 1);
        default: break;
        }
        return trace_net(g.endpoints[size_t(g.type->pin_index("D"))], edge - 1);
    }

    void define_ff_var(const Gate& g, size_t vid, size_t edge, FfUpdate update) {
        auto key = std::make_pair(vid, edge);
        if (!defs_done.insert(key).second)
            return;
        ExprRef def;
        switch (update.kind) {
        case FfUpdate::Force0: def = expr_const(0, 1); break;
        case FfUpdate::Force1: def = expr_const(1, 1); break;
        default: def = trace_net(g.endpoints[size_t(g.type->pin_index("D"))], edge - 1); break;
        }
        result.definitions.push_back({vid, g.name, edge, 1, def});
    }

    ExprRef trace_bram(const Gate& g, NetId net, size_t cycle) {
        if (!opts.symbolize_bram) {
            Val v = value_at(net, cycle);
            if (v == Val::X)
                throw TraceError("X memory value on '" + nl.net(net).name + "' at cycle " + std::to_string(cycle));
            return expr_const(v == Val::One ? 1 : 0, 1);
        }
        return expr_sym(g.name + "." + g.type->pins[nl.net(net).sources[0].pin].name, cycle);
    }

    // MAC accumulator: implicit loop cut with 32-bit word definitions.
    ExprRef trace_dsp(const Gate& g, NetId net, size_t cycle) {
        uint32_t bit = 0;
        const std::string& pin = g.type->pins[nl.net(net).sources[0].pin].name;
        bit = uint32_t(std::stoul(pin.substr(1)));
        size_t vid = var_id_for(g.id);
        ExprRef word = dsp_word(g, vid, cycle);
        return expr_slice(word, bit);
    }

    std::optional<std::pair<size_t, bool>> dsp_last_update(const Gate& g, size_t cycle) const {
        auto pin_val = [&](const char* name, size_t t) -> std::optional<bool> {
            int p = g.type->pin_index(name);
            if (p < 0 || g.endpoints[size_t(p)] == kInvalidId)
                return std::nullopt;
            NetId n = g.endpoints[size_t(p)];
            if (nl.is_const_net(n))
                return nl.const_value(n);
            return defined_bool(n, t, "control");
        };
        for (size_t edge = cycle; edge >= 1; edge--) {
            auto rst = pin_val("RST", edge - 1);
            if (rst && *rst)
                return std::make_pair(edge, true);
            auto ce = pin_val("CE", edge - 1);
            if (!ce || *ce)
                return std::make_pair(edge, false);
        }
        return std::nullopt;
    }

    ExprRef dsp_word(const Gate& g, size_t vid, size_t cycle) {
        auto last = dsp_last_update(g, cycle);
        if (!last) {
            result.warnings.push_back("initial-state symbol for '" + g.name + "'");
            return expr_sym("init$" + g.name, 0, 32);
        }
        auto [edge, is_reset] = *last;
        auto key = std::make_pair(vid, edge);
        if (defs_done.insert(key).second) {
            ExprRef def;
            if (is_reset) {
                def = expr_const(0, 32);
            } else {
                std::vector<ExprRef> abits, bbits;
                for (int i = 0; i < 16; i++) {
                    abits.push_back(trace_net(g.pin_net("A" + std::to_string(i)), edge - 1));
                    bbits.push_back(trace_net(g.pin_net("B" + std::to_string(i)), edge - 1));
                }
                ExprRef a = mk(Expr::Op::Cat, 16, std::move(abits));
                ExprRef b = mk(Expr::Op::Cat, 16, std::move(bbits));
                ExprRef prod = mk(Expr::Op::Mul, 32, {a, b});
                // Previous accumulator value.
                ExprRef prev;
                if (edge == 1) {
                    result.warnings.push_back("initial-state symbol for '" + g.name + "'");
                    prev = expr_sym("init$" + g.name, 0, 32);
                } else {
                    auto before = dsp_last_update(g, edge - 1);
                    if (!before) {
                        result.warnings.push_back("initial-state symbol for '" + g.name + "'");
                        prev = expr_sym("init$" + g.name, 0, 32);
                    } else {
                        // Materialize the earlier definition too.
                        prev = dsp_word(g, vid, edge - 1);
                    }
                }
                def = mk(Expr::Op::Add, 32, {prod, prev});
            }
            result.definitions.push_back({vid, g.name, edge, 32, def});
        }
        return expr_var(vid, edge, 32);
    }

    ExprRef arith_word(size_t si, size_t cycle) {
        const ArithmeticStructure& s = (*opts.arithmetic)[si];
        // Control values must match one probed outcome with a model.
        std::optional<ArithmeticModel> model;
        for (const ControlOutcome& o : s.outcomes) {
            bool match = true;
            for (const auto& [net, v] : o.assignment)
                if (defined_bool(net, cycle, "control") != v)
                    match = false;
            if (match && o.model) {
                model = o.model;
                break;
            }
            if (match && o.constant_outputs)
                return nullptr; // constant under this assignment: fall back
        }
        if (!model)
            return nullptr;
        auto key = std::make_pair(si + (size_t(1) << 32), cycle);
        auto hit = word_memo.find(key);
        if (hit != word_memo.end())
            return hit->second;

        size_t out_w = s.outputs.size();
        auto operand = [&](size_t idx) {
            std::vector<ExprRef> bits;
            for (NetId net : s.operands[idx])
                bits.push_back(trace_net(net, cycle));
            return mk(Expr::Op::Cat, bits.size(), std::move(bits));
        };
        ExprRef e;
        switch (model->kind) {
        case ModelKind::Addition:
        case ModelKind::Counter:
            e = s.operands.size() > 1 ? mk(Expr::Op::Add, out_w, {operand(0), operand(1)})
                                      : mk(Expr::Op::Add, out_w,
                                           {operand(0), expr_const(uint64_t(model->increment), out_w)});
            break;
        case ModelKind::Subtraction:
            // With the borrow-bar bit the word equals A - B + 2^width.
            if (model->carry_out) {
                ExprRef diff = mk(Expr::Op::Sub, out_w, {operand(0), operand(1)});
                e = mk(Expr::Op::Add, out_w, {diff, expr_const(uint64_t(1) << model->width, out_w)});
            } else {
                e = mk(Expr::Op::Sub, out_w, {operand(0), operand(1)});
            }
            break;
        case ModelKind::ConstMul:
            e = mk(Expr::Op::Mul, out_w, {operand(0), expr_const(uint64_t(model->factor), out_w)});
            break;
        default:
            return nullptr; // comparators and negations stay bit-level here
        }
        word_memo.emplace(key, e);
        return e;
    }
};

} // namespace

TraceResult trace_targets(const Netlist& nl, const Waveform& wave, const ControlSet& controls,
                          const std::vector<std::pair<NetId, size_t>>& targets, const TraceOptions& opts) {
    Tracer tracer(nl, wave, controls, opts);
    for (auto& [net, cycle] : targets) {
        SymbolicEquation eq;
        eq.target = nl.net(net).name;
        eq.cycle = cycle;
        eq.expr = tracer.trace_net(net, cycle);
        tracer.result.targets.push_back(std::move(eq));
    }
    return std::move(tracer.result);
}

// ---------------------------------------------------------------------------
// Script emission

namespace {

std::string sanitize(const std::string& name) {
    std::string out;
    for (char c : name)
        out += (isalnum(uint8_t(c)) ? c : '_');
    return out;
}

std::string sym_name(const std::string& base, size_t cycle) {
    return sanitize(base) + "_" + std::to_string(cycle);
}

uint64_t mask_of(size_t width) {
    return width >= 64 ? ~uint64_t(0) : ((uint64_t(1) << width) - 1);
}

struct Emitter {
    const std::vector<WordSpec>& words;
    std::ostringstream out;
    std::vector<std::string> warnings;
    // word spec index by exact LSB-first net list
    std::map<std::vector<std::string>, const WordSpec*> by_nets;

    explicit Emitter(const std::vector<WordSpec>& w) : words(w) {
        for (const WordSpec& spec : words)
            by_nets[spec.nets] = &spec;
    }

    // Collapses Cat-of-symbols at one cycle into a word symbol.
    std::string print(const ExprRef& e) {
        switch (e->op) {
        case Expr::Op::Const: {
            std::ostringstream os;
            os << "0x" << std::hex << e->value;
            return os.str();
        }
        case Expr::Op::Sym:
            return sym_name(e->name, e->cycle);
        case Expr::Op::Var:
            return "v" + std::to_string(e->var_id) + "_" + std::to_string(e->cycle);
        case Expr::Op::Not: {
            std::ostringstream os;
            os << "((~" << print(e->args[0]) << ") & 0x" << std::hex << mask_of(e->width) << ")";
            return os.str();
        }
        case Expr::Op::And:
            return "(" + print(e->args[0]) + " & " + print(e->args[1]) + ")";
        case Expr::Op::Or:
            return "(" + print(e->args[0]) + " | " + print(e->args[1]) + ")";
        case Expr::Op::Xor:
            return "(" + print(e->args[0]) + " ^ " + print(e->args[1]) + ")";
        case Expr::Op::Ite:
            return "((" + print(e->args[0]) + " & " + print(e->args[1]) + ") | ((" + print(e->args[0]) +
                   " ^ 1) & " + print(e->args[2]) + "))";
        case Expr::Op::Add:
        case Expr::Op::Sub:
        case Expr::Op::Mul: {
            const char* op = e->op == Expr::Op::Add ? "+" : e->op == Expr::Op::Sub ? "-" : "*";
            std::ostringstream os;
            os << "((" << print(e->args[0]) << " " << op << " " << print(e->args[1]) << ") & 0x" << std::hex
               << mask_of(e->width) << ")";
            return os.str();
        }
        case Expr::Op::Slice: {
            std::ostringstream os;
            os << "((" << print(e->args[0]) << " >> " << e->index << ") & 1)";
            return os.str();
        }
        case Expr::Op::Cat: {
            if (auto word = word_of_cat(e))
                return *word;
            std::ostringstream os;
            os << "(";
            for (size_t i = 0; i < e->args.size(); i++) {
                if (i)
                    os << " | ";
                os << "(" << print(e->args[i]) << " << " << i << ")";
            }
            os << ")";
            return os.str();
        }
        }
        return "0";
    }

    // A Cat of per-bit symbols (or constant padding) matching a word spec
    // prefix at a single cycle prints as the word symbol.
    std::optional<std::string> word_of_cat(const ExprRef& e) {
        std::vector<std::string> nets;
        std::optional<size_t> cycle;
        size_t const_tail = 0;
        for (const ExprRef& a : e->args) {
            if (a->op == Expr::Op::Sym) {
                if (cycle && *cycle != a->cycle)
                    return std::nullopt;
                cycle = a->cycle;
                nets.push_back(a->name);
                if (const_tail)
                    return std::nullopt; // symbols after constants
            } else if (a->op == Expr::Op::Const && a->value == 0) {
                const_tail++;
            } else {
                return std::nullopt;
            }
        }
        if (!cycle || nets.empty())
            return std::nullopt;
        auto it = by_nets.find(nets);
        if (it == by_nets.end())
            return std::nullopt;
        return sym_name(it->second->name, *cycle);
    }
};

} // namespace

ExportResult export_equations(const TraceResult& result, const std::vector<WordSpec>& words) {
    Emitter em(words);
    em.out << "# guided trace equations\n";
    em.out << "# symbols are <net>_<cycle>; v<k>_<cycle> are loop variables\n";
    for (const VarDef& def : result.definitions)
        em.out << "v" << def.var_id << "_" << def.cycle << " = " << em.print(def.expr) << "\n";

    // Word folding: when the target list covers a word spec completely at
    // one cycle, emit a single word assignment.
    std::map<std::string, std::pair<size_t, const SymbolicEquation*>> by_name; // net -> (idx, eq)
    for (size_t i = 0; i < result.targets.size(); i++)
        by_name[result.targets[i].target + "@" + std::to_string(result.targets[i].cycle)] = {i,
                                                                                             &result.targets[i]};
    std::vector<bool> emitted(result.targets.size(), false);
    for (const WordSpec& spec : words) {
        // All bits present at one common cycle?
        std::set<size_t> cycles;
        for (size_t i = 0; i < result.targets.size(); i++)
            cycles.insert(result.targets[i].cycle);
        for (size_t cycle : cycles) {
            std::vector<const SymbolicEquation*> bits;
            std::vector<size_t> idx;
            bool all = true;
            for (const std::string& net : spec.nets) {
                auto it = by_name.find(net + "@" + std::to_string(cycle));
                if (it == by_name.end()) {
                    all = false;
                    break;
                }
                bits.push_back(it->second.second);
                idx.push_back(it->second.first);
            }
            if (!all)
                continue;
            // Shared word expression sliced in order folds to the word, any
            // other shape concatenates the bit expressions.
            bool shared = true;
            const Expr* base = nullptr;
            for (size_t i = 0; i < bits.size(); i++) {
                const Expr* e = bits[i]->expr.get();
                if (e->op != Expr::Op::Slice || e->index != i) {
                    shared = false;
                    break;
                }
                if (!base)
                    base = e->args[0].get();
                else if (base != e->args[0].get())
                    shared = false;
            }
            std::string rhs;
            if (shared && base) {
                rhs = em.print(bits[0]->expr->args[0]);
            } else {
                std::ostringstream os;
                os << "(";
                for (size_t i = 0; i < bits.size(); i++) {
                    if (i)
                        os << " | ";
                    os << "(" << em.print(bits[i]->expr) << " << " << i << ")";
                }
                os << ")";
                rhs = os.str();
            }
            em.out << sym_name(spec.name, cycle) << " = " << rhs << "\n";
            for (size_t i : idx)
                emitted[i] = true;
        }
    }
    for (size_t i = 0; i < result.targets.size(); i++) {
        if (emitted[i])
            continue;
        const SymbolicEquation& eq = result.targets[i];
        em.out << sym_name(eq.target, eq.cycle) << " = " << em.print(eq.expr) << "\n";
    }

    ExportResult res;
    res.script = em.out.str();
    res.warnings = std::move(em.warnings);
    return res;
}

} // namespace nlre
