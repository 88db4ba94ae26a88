#include "nlre/preprocess.hpp"

#include "nlre/editor.hpp"
#include "nlre/netfunc.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <unordered_map>

namespace nlre {

PreprocessReport& PreprocessReport::operator+=(const PreprocessReport& o) {
    luts_replaced += o.luts_replaced;
    buffers_removed += o.buffers_removed;
    muxes_extracted += o.muxes_extracted;
    primitives_emitted += o.primitives_emitted;
    duplicates_removed += o.duplicates_removed;
    other_simplifications += o.other_simplifications;
    incidents.insert(incidents.end(), o.incidents.begin(), o.incidents.end());
    return *this;
}

namespace {

bool removable_driver(const Netlist& nl, NetId out) {
    return !nl.net(out).is_global_output;
}

NetId single_output_net(const Gate& g) {
    NetId out = kInvalidId;
    for (int p : g.type->output_pins()) {
        if (g.endpoints[size_t(p)] == kInvalidId)
            continue;
        if (out != kInvalidId)
            return kInvalidId; // multi-output
        out = g.endpoints[size_t(p)];
    }
    return out;
}

bool foldable(const Gate& g) {
    return is_combinational(g.category()) || g.category() == GateCategory::Constant;
}

} // namespace

PassResult propagate_constants(const Netlist& input) {
    PreprocessReport report;
    report.before_gates = input.gates().size();
    Netlist cur = input;

    for (;;) {
        NetlistEditor ed(cur);
        size_t changes = 0;
        for (const Gate& g : cur.gates()) {
            if (!foldable(g))
                continue;
            NetId out = single_output_net(g);
            if (out == kInvalidId || !removable_driver(cur, out))
                continue;
            BoolFunc f = gate_output_func(cur, g, uint32_t(g.type->output_pins()[0]));
            if (f.is_const()) {
                ed.bind_const(out, f.const_value());
                ed.drop_gate(g.id);
                changes++;
            } else if (f.node()->op == BoolFunc::Op::Var) {
                ed.merge_net(out, NetId(f.var_id()));
                ed.drop_gate(g.id);
                changes++;
            }
        }
        if (changes == 0)
            break;
        report.other_simplifications += changes;
        cur = std::move(ed).finish();
    }
    report.after_gates = cur.gates().size();
    return {std::move(cur), std::move(report)};
}

PassResult remove_buffers(const Netlist& input) {
    PreprocessReport report;
    report.before_gates = input.gates().size();
    Netlist cur = input;

    for (;;) {
        size_t changes = 0;

        // Identity gates fold into net merges.
        {
            NetlistEditor ed(cur);
            for (const Gate& g : cur.gates()) {
                if (!is_combinational(g.category()))
                    continue;
                NetId out = single_output_net(g);
                if (out == kInvalidId || !removable_driver(cur, out))
                    continue;
                BoolFunc f = gate_output_func(cur, g, uint32_t(g.type->output_pins()[0]));
                if (f.node()->op == BoolFunc::Op::Var) {
                    ed.merge_net(out, NetId(f.var_id()));
                    ed.drop_gate(g.id);
                    report.buffers_removed++;
                    changes++;
                }
            }
            if (changes)
                cur = std::move(ed).finish();
        }

        // Inverter pairs: g computes NOT(x) where x is itself driven by an
        // inverter-like gate of input u; g's output merges onto u.
        {
            NetlistEditor ed(cur);
            size_t pair_changes = 0;
            std::set<GateId> used;
            for (const Gate& g : cur.gates()) {
                if (!is_combinational(g.category()) || used.count(g.id))
                    continue;
                NetId out = single_output_net(g);
                if (out == kInvalidId || !removable_driver(cur, out))
                    continue;
                BoolFunc f = gate_output_func(cur, g, uint32_t(g.type->output_pins()[0]));
                if (f.node()->op != BoolFunc::Op::Not || f.node()->a->op != BoolFunc::Op::Var)
                    continue;
                NetId x = NetId(f.node()->a->var);
                if (cur.net(x).sources.empty())
                    continue;
                const Gate& h = cur.gate(cur.net(x).sources[0].gate);
                if (!is_combinational(h.category()) || used.count(h.id) || h.id == g.id)
                    continue;
                BoolFunc fh = gate_output_func(cur, h, cur.net(x).sources[0].pin);
                if (fh.node()->op != BoolFunc::Op::Not || fh.node()->a->op != BoolFunc::Op::Var)
                    continue;
                NetId u = NetId(fh.node()->a->var);
                ed.merge_net(out, u);
                ed.drop_gate(g.id);
                used.insert(g.id);
                used.insert(h.id); // h goes in the dead sweep once unused
                report.buffers_removed++;
                pair_changes++;
            }
            if (pair_changes)
                cur = std::move(ed).finish();
            changes += pair_changes;
        }

        // Dead combinational gates: no consumer on any output.
        {
            NetlistEditor ed(cur);
            size_t dead = 0;
            for (const Gate& g : cur.gates()) {
                if (!is_combinational(g.category()) && g.category() != GateCategory::Constant)
                    continue;
                bool alive = false;
                for (int p : g.type->output_pins()) {
                    NetId n = g.endpoints[size_t(p)];
                    if (n == kInvalidId)
                        continue;
                    if (cur.net(n).is_global_output || !cur.net(n).destinations.empty())
                        alive = true;
                }
                if (!alive) {
                    ed.drop_gate(g.id);
                    dead++;
                }
            }
            if (dead) {
                report.other_simplifications += dead;
                cur = std::move(ed).finish();
            }
            changes += dead;
        }

        if (changes == 0)
            break;
    }
    report.after_gates = cur.gates().size();
    return {std::move(cur), std::move(report)};
}

namespace {

// Functional signature: per output pin, the truth table over the sorted
// semantic support nets. Two gates with equal signatures are interchangeable.
struct GateSignature {
    std::vector<std::tuple<uint32_t, std::vector<uint32_t>, std::string>> outputs;

    bool operator<(const GateSignature& o) const { return outputs < o.outputs; }
};

GateSignature signature_of(const Netlist& nl, const Gate& g) {
    GateSignature sig;
    for (int p : g.type->output_pins()) {
        BoolFunc f = gate_output_func(nl, g, uint32_t(p));
        std::vector<uint32_t> sup = f.support();
        sig.outputs.emplace_back(uint32_t(p), sup, f.truth_table(sup).to_hex());
    }
    return sig;
}

} // namespace

PassResult deduplicate_gates(const Netlist& input) {
    PreprocessReport report;
    report.before_gates = input.gates().size();
    Netlist cur = input;

    for (;;) {
        NetlistEditor ed(cur);
        size_t changes = 0;
        std::map<GateSignature, std::vector<GateId>> classes;
        for (const Gate& g : cur.gates()) {
            if (!is_combinational(g.category()))
                continue; // sequential gates are state-bearing, never merged
            classes[signature_of(cur, g)].push_back(g.id);
        }
        for (auto& [sig, ids] : classes) {
            if (ids.size() < 2)
                continue;
            const Gate& keeper = cur.gate(ids[0]);
            for (size_t i = 1; i < ids.size(); i++) {
                const Gate& dup = cur.gate(ids[i]);
                bool can = true;
                std::vector<std::pair<NetId, NetId>> merges;
                for (int p : dup.type->output_pins()) {
                    NetId dn = dup.endpoints[size_t(p)];
                    if (dn == kInvalidId)
                        continue;
                    if (cur.net(dn).is_global_output) {
                        can = false; // keep the port's driver
                        break;
                    }
                    // Match by pin name so LUT/primitive mixes pair up only
                    // when type layouts agree; same-signature gates of
                    // different types still merge through identical tables.
                    int kp = keeper.type->pin_index(dup.type->pins[size_t(p)].name);
                    NetId kn = kp >= 0 ? keeper.endpoints[size_t(kp)] : kInvalidId;
                    if (kn == kInvalidId) {
                        can = false;
                        break;
                    }
                    merges.emplace_back(dn, kn);
                }
                if (!can)
                    continue;
                for (auto& [dn, kn] : merges)
                    ed.merge_net(dn, kn);
                ed.drop_gate(dup.id);
                report.duplicates_removed++;
                changes++;
            }
        }
        if (changes == 0)
            break;
        cur = std::move(ed).finish();
    }
    report.after_gates = cur.gates().size();
    return {std::move(cur), std::move(report)};
}

// ---------------------------------------------------------------------------
// LUT decomposition

namespace {

struct Plan;
using PlanRef = std::shared_ptr<const Plan>;

struct Plan {
    enum Kind { Const0, Const1, Ref, Inv, Chain, Mux, AndGate, OrGate } kind = Const0;
    uint32_t var = 0;              // Ref / Inv / Mux select / AndGate-OrGate literal
    bool lit_negated = false;      // AndGate/OrGate: literal polarity
    std::string chain_op;          // Chain: AND2 / OR2 / XOR2 / XNOR2
    std::vector<uint32_t> chain_vars;
    PlanRef a, b;                  // Mux: (0-branch, 1-branch); AndGate/OrGate: a

    size_t cost() const {
        switch (kind) {
        case Const0:
        case Const1:
        case Ref: return 0;
        case Inv: return 1;
        case Chain: return chain_vars.size() - 1;
        case Mux: return 1 + a->cost() + b->cost();
        case AndGate:
        case OrGate: return (lit_negated ? 2 : 1) + a->cost();
        }
        return 0;
    }
};

struct TableKey {
    std::vector<uint32_t> vars;
    std::string table;
    bool operator<(const TableKey& o) const { return std::tie(vars, table) < std::tie(o.vars, o.table); }
};

struct Decomposer {
    std::map<TableKey, PlanRef> memo;

    static size_t ones(const std::vector<bool>& t) {
        size_t n = 0;
        for (bool b : t)
            n += b;
        return n;
    }

    static double entropy(const std::vector<bool>& t) {
        double p = double(ones(t)) / double(t.size());
        if (p == 0.0 || p == 1.0)
            return 0.0;
        return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
    }

    static std::vector<bool> cofactor_table(const std::vector<bool>& t, size_t pos, bool value) {
        std::vector<bool> out;
        out.reserve(t.size() / 2);
        for (size_t i = 0; i < t.size(); i++)
            if (((i >> pos) & 1) == size_t(value))
                out.push_back(t[i]);
        return out;
    }

    static bool depends(const std::vector<bool>& t, size_t pos) {
        return cofactor_table(t, pos, false) != cofactor_table(t, pos, true);
    }

    static std::string key_bits(const std::vector<bool>& t) {
        std::string s((t.size() + 7) / 8, '\0');
        for (size_t i = 0; i < t.size(); i++)
            if (t[i])
                s[i / 8] = char(s[i / 8] | (1 << (i % 8)));
        return s;
    }

    PlanRef solve(std::vector<uint32_t> vars, std::vector<bool> table) {
        // Shrink to the true support first.
        for (size_t pos = vars.size(); pos-- > 0;) {
            if (!depends(table, pos)) {
                table = cofactor_table(table, pos, false);
                vars.erase(vars.begin() + long(pos));
            }
        }
        if (table.empty() || ones(table) == 0)
            return std::make_shared<Plan>(Plan{Plan::Const0, 0, false, "", {}, nullptr, nullptr});
        if (ones(table) == table.size())
            return std::make_shared<Plan>(Plan{Plan::Const1, 0, false, "", {}, nullptr, nullptr});
        TableKey key{vars, key_bits(table)};
        auto hit = memo.find(key);
        if (hit != memo.end())
            return hit->second;

        PlanRef plan = solve_inner(vars, table);
        memo.emplace(std::move(key), plan);
        return plan;
    }

    PlanRef solve_inner(const std::vector<uint32_t>& vars, const std::vector<bool>& table) {
        size_t k = vars.size();
        size_t n1 = ones(table);

        if (k == 1)
            return table[1] ? std::make_shared<Plan>(Plan{Plan::Ref, vars[0], false, "", {}, nullptr, nullptr})
                            : std::make_shared<Plan>(Plan{Plan::Inv, vars[0], false, "", {}, nullptr, nullptr});

        // Wide single-primitive shapes over the full support.
        if (n1 == 1 && table.back())
            return std::make_shared<Plan>(Plan{Plan::Chain, 0, false, "AND2", vars, nullptr, nullptr});
        if (n1 == table.size() - 1 && !table.front())
            return std::make_shared<Plan>(Plan{Plan::Chain, 0, false, "OR2", vars, nullptr, nullptr});
        bool is_xor = true, is_xnor = true;
        for (size_t i = 0; i < table.size(); i++) {
            bool parity = __builtin_popcountll(i) & 1;
            if (table[i] != parity)
                is_xor = false;
            if (table[i] != !parity)
                is_xnor = false;
        }
        if (is_xor)
            return std::make_shared<Plan>(Plan{Plan::Chain, 0, false, "XOR2", vars, nullptr, nullptr});
        if (is_xnor)
            return std::make_shared<Plan>(Plan{Plan::Chain, 0, false, "XNOR2", vars, nullptr, nullptr});

        // Shannon split. Select variable: minimal summed cofactor entropy,
        // then minimal realized cost, then lowest net id.
        struct Candidate {
            double entropy;
            size_t cost;
            uint32_t var;
            size_t pos;
            PlanRef plan;
        };
        std::optional<Candidate> best;
        double best_entropy = 1e9;
        std::vector<size_t> tied;
        std::vector<std::pair<std::vector<bool>, std::vector<bool>>> cofs(k);
        for (size_t pos = 0; pos < k; pos++) {
            cofs[pos] = {cofactor_table(table, pos, false), cofactor_table(table, pos, true)};
            double h = entropy(cofs[pos].first) + entropy(cofs[pos].second);
            if (h < best_entropy - 1e-12) {
                best_entropy = h;
                tied.clear();
            }
            if (h <= best_entropy + 1e-12)
                tied.push_back(pos);
        }
        for (size_t pos : tied) {
            std::vector<uint32_t> sub = vars;
            sub.erase(sub.begin() + long(pos));
            PlanRef p0 = solve(sub, cofs[pos].first);
            PlanRef p1 = solve(sub, cofs[pos].second);
            PlanRef plan;
            if (p0->kind == Plan::Const0)
                plan = std::make_shared<Plan>(Plan{Plan::AndGate, vars[pos], false, "", {}, p1, nullptr});
            else if (p0->kind == Plan::Const1)
                plan = std::make_shared<Plan>(Plan{Plan::OrGate, vars[pos], true, "", {}, p1, nullptr});
            else if (p1->kind == Plan::Const0)
                plan = std::make_shared<Plan>(Plan{Plan::AndGate, vars[pos], true, "", {}, p0, nullptr});
            else if (p1->kind == Plan::Const1)
                plan = std::make_shared<Plan>(Plan{Plan::OrGate, vars[pos], false, "", {}, p0, nullptr});
            else
                plan = std::make_shared<Plan>(Plan{Plan::Mux, vars[pos], false, "", {}, p0, p1});
            Candidate c{best_entropy, plan->cost(), vars[pos], pos, plan};
            if (!best || c.cost < best->cost || (c.cost == best->cost && c.var < best->var))
                best = std::move(c);
        }
        return best->plan;
    }
};

BoolFunc plan_func(const PlanRef& p) {
    switch (p->kind) {
    case Plan::Const0: return BoolFunc::constant(false);
    case Plan::Const1: return BoolFunc::constant(true);
    case Plan::Ref: return BoolFunc::var(p->var);
    case Plan::Inv: return BoolFunc::negate(BoolFunc::var(p->var));
    case Plan::Chain: {
        BoolFunc acc = BoolFunc::var(p->chain_vars[0]);
        for (size_t i = 1; i < p->chain_vars.size(); i++) {
            BoolFunc v = BoolFunc::var(p->chain_vars[i]);
            if (p->chain_op == "AND2")
                acc = BoolFunc::and2(acc, v);
            else if (p->chain_op == "OR2")
                acc = BoolFunc::or2(acc, v);
            else if (p->chain_op == "XOR2")
                acc = BoolFunc::xor2(acc, v);
            else
                acc = i + 1 == p->chain_vars.size() ? BoolFunc::negate(BoolFunc::xor2(acc, v))
                                                    : BoolFunc::xor2(acc, v);
        }
        return acc;
    }
    case Plan::Mux:
        return BoolFunc::ite(BoolFunc::var(p->var), plan_func(p->b), plan_func(p->a));
    case Plan::AndGate: {
        BoolFunc lit = BoolFunc::var(p->var);
        if (p->lit_negated)
            lit = BoolFunc::negate(lit);
        return BoolFunc::and2(lit, plan_func(p->a));
    }
    case Plan::OrGate: {
        BoolFunc lit = BoolFunc::var(p->var);
        if (p->lit_negated)
            lit = BoolFunc::negate(lit);
        return BoolFunc::or2(lit, plan_func(p->a));
    }
    }
    return BoolFunc::constant(false);
}

struct PlanRealizer {
    NetlistEditor& ed;
    const std::string& base_name;
    PreprocessReport& report;
    size_t counter = 0;
    std::map<const Plan*, NetId> done;

    NetId fresh_net() { return ed.add_net("$dec$" + base_name + "$n" + std::to_string(counter++)); }

    GateId emit(const std::string& type) {
        GateId g = ed.add_gate(type, "$dec$" + base_name + "$g" + std::to_string(counter++));
        if (type == "MUX2")
            report.muxes_extracted++;
        else
            report.primitives_emitted++;
        return g;
    }

    NetId literal(uint32_t var, bool negated) {
        if (!negated)
            return NetId(var);
        GateId inv = emit("INV");
        NetId out = fresh_net();
        ed.connect(inv, "A", NetId(var));
        ed.connect(inv, "Y", out);
        return out;
    }

    NetId realize(const PlanRef& p) {
        auto it = done.find(p.get());
        if (it != done.end())
            return it->second;
        NetId out = kInvalidId;
        switch (p->kind) {
        case Plan::Const0:
        case Plan::Const1: {
            out = ed.add_net("$dec$" + base_name + "$c" + std::to_string(counter++));
            ed.bind_const(out, p->kind == Plan::Const1);
            out = ed.resolve(out);
            break;
        }
        case Plan::Ref:
            out = NetId(p->var);
            break;
        case Plan::Inv:
            out = literal(p->var, true);
            break;
        case Plan::Chain: {
            // Balanced-ish left fold; XNOR chains negate at the last stage.
            NetId acc = NetId(p->chain_vars[0]);
            for (size_t i = 1; i < p->chain_vars.size(); i++) {
                bool last = i + 1 == p->chain_vars.size();
                std::string op = p->chain_op == "XNOR2" ? (last ? "XNOR2" : "XOR2") : p->chain_op;
                GateId g = emit(op);
                NetId next = fresh_net();
                ed.connect(g, "A", acc);
                ed.connect(g, "B", NetId(p->chain_vars[i]));
                ed.connect(g, "Y", next);
                acc = next;
            }
            out = acc;
            break;
        }
        case Plan::Mux: {
            NetId n0 = realize(p->a);
            NetId n1 = realize(p->b);
            GateId g = emit("MUX2");
            out = fresh_net();
            ed.connect(g, "S", NetId(p->var));
            ed.connect(g, "A", n0);
            ed.connect(g, "B", n1);
            ed.connect(g, "Y", out);
            break;
        }
        case Plan::AndGate:
        case Plan::OrGate: {
            NetId sub = realize(p->a);
            NetId lit = literal(p->var, p->lit_negated);
            GateId g = emit(p->kind == Plan::AndGate ? "AND2" : "OR2");
            out = fresh_net();
            ed.connect(g, "A", lit);
            ed.connect(g, "B", sub);
            ed.connect(g, "Y", out);
            break;
        }
        }
        done.emplace(p.get(), out);
        return out;
    }
};

} // namespace

PassResult decompose_luts(const Netlist& input) {
    PreprocessReport report;
    report.before_gates = input.gates().size();

    NetlistEditor ed(input);
    Decomposer dec;
    for (const Gate& g : input.gates()) {
        if (g.category() != GateCategory::Lut)
            continue;
        NetId out = single_output_net(g);
        if (out == kInvalidId)
            continue;
        BoolFunc f = gate_output_func(input, g, uint32_t(g.type->output_pins()[0]));
        std::vector<uint32_t> vars = f.support();
        if (vars.size() > 20) {
            report.incidents.push_back("lut '" + g.name + "': too wide to decompose");
            continue;
        }
        BitVec tt = f.truth_table(vars);
        std::vector<bool> table(tt.width());
        for (size_t i = 0; i < tt.width(); i++)
            table[i] = tt.get(i);
        PlanRef plan = dec.solve(vars, table);

        // Verify before commit.
        EquivResult eq = check_equivalent(f, plan_func(plan));
        if (!eq.equal()) {
            report.incidents.push_back("lut '" + g.name + "': decomposition not equivalent, kept");
            continue;
        }

        bool global_out = input.net(out).is_global_output;
        if ((plan->kind == Plan::Const0 || plan->kind == Plan::Const1 || plan->kind == Plan::Ref) && global_out) {
            // A port needs a driver; leave the LUT as the boundary driver.
            continue;
        }
        report.luts_replaced++;
        if (plan->kind == Plan::Const0 || plan->kind == Plan::Const1) {
            ed.bind_const(out, plan->kind == Plan::Const1);
            ed.drop_gate(g.id);
            continue;
        }
        if (plan->kind == Plan::Ref) {
            ed.merge_net(out, NetId(plan->var));
            ed.drop_gate(g.id);
            continue;
        }
        PlanRealizer realizer{ed, g.name, report, 0, {}};
        NetId result = realizer.realize(plan);
        // The plan's root gate output becomes the LUT's output net. Root is
        // never Ref/Const here, so `result` is a fresh net we can rename by
        // merging the old output onto it... the old net may be a global
        // output, so merge the fresh net into the old one instead by
        // reconnecting: drop the LUT and let the root gate drive `out`.
        ed.drop_gate(g.id);
        ed.merge_net(result, out);
    }
    Netlist cur = std::move(ed).finish();
    cur.check_invariants();
    report.after_gates = cur.gates().size();
    return {std::move(cur), std::move(report)};
}

PassResult preprocess_all(const Netlist& input) {
    PreprocessReport total;
    total.before_gates = input.gates().size();
    PassResult r = propagate_constants(input);
    total += r.report;
    r = remove_buffers(r.netlist);
    total += r.report;
    r = deduplicate_gates(r.netlist);
    total += r.report;
    r = decompose_luts(r.netlist);
    total += r.report;
    r = remove_buffers(r.netlist);
    total += r.report;
    r = deduplicate_gates(r.netlist);
    total += r.report;
    total.after_gates = r.netlist.gates().size();
    return {std::move(r.netlist), std::move(total)};
}

BoundaryCheck compare_boundary_functions(const Netlist& before, const Netlist& after,
                                         const BoundaryCheckOptions& opts) {
    BoundaryCheck res;
    std::mt19937_64 rng(opts.seed);

    // Targets: every sequential-gate input pin plus every global output.
    struct Target {
        std::string label;
        NetId before_net, after_net;
    };
    std::vector<Target> targets;
    for (const Gate& g : before.gates()) {
        if (!is_sequential(g.category()))
            continue;
        auto ag = after.find_gate(g.name);
        if (!ag) {
            res.ok = false;
            res.mismatches.push_back("sequential gate '" + g.name + "' missing after pass");
            continue;
        }
        for (size_t p = 0; p < g.endpoints.size(); p++) {
            if (g.type->pins[p].dir != PinDir::In || g.endpoints[p] == kInvalidId)
                continue;
            targets.push_back({g.name + "." + g.type->pins[p].name, g.endpoints[p],
                               after.gate(*ag).endpoints[p]});
        }
    }
    for (NetId n : before.global_outputs()) {
        auto an = after.find_net(before.net(n).name);
        if (!an) {
            res.ok = false;
            res.mismatches.push_back("global output '" + before.net(n).name + "' missing after pass");
            continue;
        }
        targets.push_back({"output " + before.net(n).name, n, *an});
    }

    for (const Target& t : targets) {
        BoolFunc fb = cone_func(before, t.before_net);
        BoolFunc fa = cone_func(after, t.after_net);
        // Align frontier variables by net name.
        std::map<uint32_t, BoolFunc> rename;
        bool aligned = true;
        for (uint32_t v : fa.syntactic_support()) {
            auto bn = before.find_net(after.net(v).name);
            if (!bn) {
                aligned = false;
                break;
            }
            rename.emplace(v, BoolFunc::var(*bn));
        }
        if (!aligned) {
            res.ok = false;
            res.mismatches.push_back(t.label + ": frontier net missing before pass");
            continue;
        }
        fa = fa.substitute(rename);
        res.checked++;

        std::vector<uint32_t> vars;
        {
            std::set<uint32_t> u;
            for (uint32_t v : fb.syntactic_support())
                u.insert(v);
            for (uint32_t v : fa.syntactic_support())
                u.insert(v);
            vars.assign(u.begin(), u.end());
        }
        if (vars.size() <= opts.exhaustive_input_limit) {
            EquivResult r = check_equivalent(fb, fa);
            if (!r.equal()) {
                res.ok = false;
                res.mismatches.push_back(t.label + ": function changed");
            }
        } else {
            for (size_t i = 0; i < opts.random_vectors; i++) {
                std::map<uint32_t, bool> asg;
                for (uint32_t v : vars)
                    asg[v] = rng() & 1;
                if (fb.evaluate(asg) != fa.evaluate(asg)) {
                    res.ok = false;
                    res.mismatches.push_back(t.label + ": function changed (random vector)");
                    break;
                }
            }
        }
    }
    return res;
}

} // namespace nlre
