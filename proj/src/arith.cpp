#include "nlre/arith.hpp"

#include "nlre/netfunc.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace nlre {

const char* to_string(ModelKind k) {
    switch (k) {
    case ModelKind::Counter: return "counter";
    case ModelKind::Negation: return "negation";
    case ModelKind::ConstMul: return "const-mul";
    case ModelKind::Addition: return "addition";
    case ModelKind::Subtraction: return "subtraction";
    case ModelKind::Comparator: return "comparator";
    case ModelKind::Unknown: return "unknown";
    }
    return "?";
}

const char* to_string(CmpOp c) {
    switch (c) {
    case CmpOp::Eq: return "eq";
    case CmpOp::Lt: return "lt";
    case CmpOp::Le: return "le";
    }
    return "?";
}

std::string ArithmeticModel::describe() const {
    std::ostringstream os;
    os << to_string(kind) << " w" << width;
    if (kind == ModelKind::Counter || (kind == ModelKind::Addition && increment != 0))
        os << " n=" << increment;
    if (kind == ModelKind::ConstMul)
        os << " c=" << factor;
    if (kind == ModelKind::Comparator)
        os << " " << to_string(cmp) << (cmp_is_signed ? " signed" : " unsigned");
    if (carry_out)
        os << " +carry";
    return os.str();
}

// ---------------------------------------------------------------------------
// Phase 1: structural candidates

std::vector<CarryChain> find_carry_chains(const Netlist& nl) {
    const std::string& arch = nl.library().name();
    if (arch != "ice40-like" && arch != "x7-like")
        throw NetlistError("unknown architecture '" + arch + "' for carry-chain scan");

    // carry-out pin -> consuming carry gate via its carry-in pin
    auto next_in_chain = [&](const Gate& g) -> std::optional<GateId> {
        for (size_t p = 0; p < g.endpoints.size(); p++) {
            if (g.type->pins[p].role != PinRole::CarryOut)
                continue;
            // CARRY4 chains via CO3 only; intermediate COs feed fabric.
            if (g.type->name == "CARRY4" && g.type->pins[p].name != "CO3")
                continue;
            NetId n = g.endpoints[p];
            if (n == kInvalidId)
                continue;
            std::optional<GateId> found;
            for (const Endpoint& d : nl.net(n).destinations) {
                const Gate& dst = nl.gate(d.gate);
                if (dst.category() == GateCategory::Carry &&
                    dst.type->pins[d.pin].role == PinRole::CarryIn) {
                    if (found)
                        return std::nullopt; // branching chain: stop here
                    found = d.gate;
                }
            }
            if (found)
                return found;
        }
        return std::nullopt;
    };

    std::vector<bool> has_carry_pred(nl.gates().size(), false);
    for (const Gate& g : nl.gates()) {
        if (g.category() != GateCategory::Carry)
            continue;
        if (auto nxt = next_in_chain(g))
            has_carry_pred[*nxt] = true;
    }

    std::vector<CarryChain> chains;
    for (const Gate& g : nl.gates()) {
        if (g.category() != GateCategory::Carry || has_carry_pred[g.id])
            continue;
        CarryChain chain;
        GateId cur = g.id;
        std::set<GateId> seen;
        while (seen.insert(cur).second) {
            chain.gates.push_back(cur);
            size_t sub = nl.gate(cur).type->name == "CARRY4" ? 4 : 1;
            for (size_t i = 0; i < sub; i++)
                chain.positions.emplace_back(cur, uint32_t(i));
            auto nxt = next_in_chain(nl.gate(cur));
            if (!nxt)
                break;
            cur = *nxt;
        }
        chains.push_back(std::move(chain));
    }
    return chains;
}

namespace {

void expand_predecessors(const Netlist& nl, std::set<GateId>& gates) {
    std::vector<GateId> add;
    for (GateId id : gates) {
        const Gate& g = nl.gate(id);
        for (size_t p = 0; p < g.endpoints.size(); p++) {
            if (g.type->pins[p].dir != PinDir::In || g.endpoints[p] == kInvalidId)
                continue;
            const Net& net = nl.net(g.endpoints[p]);
            if (net.sources.empty())
                continue;
            const Gate& src = nl.gate(net.sources[0].gate);
            if (is_combinational(src.category()) && !gates.count(src.id))
                add.push_back(src.id);
        }
    }
    gates.insert(add.begin(), add.end());
}

void expand_successors(const Netlist& nl, std::set<GateId>& gates) {
    std::vector<GateId> add;
    for (GateId id : gates) {
        const Gate& g = nl.gate(id);
        for (size_t p = 0; p < g.endpoints.size(); p++) {
            if (g.type->pins[p].dir != PinDir::Out || g.endpoints[p] == kInvalidId)
                continue;
            for (const Endpoint& d : nl.net(g.endpoints[p]).destinations) {
                const Gate& dst = nl.gate(d.gate);
                if (is_combinational(dst.category()) && !gates.count(dst.id))
                    add.push_back(dst.id);
            }
        }
    }
    gates.insert(add.begin(), add.end());
}

// Gates consuming every non-constant operand net of one chain position.
// The bit-0 sum gate of a ripple adder consumes no carry and is invisible
// to plain successor expansion, yet it reads exactly the position-0 operand
// pair the chain head reads.
std::set<GateId> chain_sibling_gates(const Netlist& nl, const CarryChain& chain) {
    std::set<GateId> siblings;
    std::set<GateId> chain_gates(chain.gates.begin(), chain.gates.end());
    for (const auto& [gid, sub] : chain.positions) {
        const Gate& g = nl.gate(gid);
        std::vector<NetId> ops;
        auto add_op = [&](const std::string& pin) {
            int p = g.type->pin_index(pin);
            if (p < 0)
                return;
            NetId n = g.endpoints[size_t(p)];
            if (n != kInvalidId && !nl.is_const_net(n))
                ops.push_back(n);
        };
        if (g.type->name == "CARRY4") {
            add_op("S" + std::to_string(sub));
            add_op("DI" + std::to_string(sub));
        } else {
            add_op("I0");
            add_op("I1");
        }
        if (ops.empty())
            continue;
        // Candidates: consumers of the first operand that consume them all.
        for (const Endpoint& d : nl.net(ops[0]).destinations) {
            const Gate& dst = nl.gate(d.gate);
            if (!is_combinational(dst.category()) || chain_gates.count(dst.id))
                continue;
            bool all = true;
            for (NetId op : ops) {
                bool found = false;
                for (size_t p = 0; p < dst.endpoints.size(); p++)
                    if (dst.type->pins[p].dir == PinDir::In && dst.endpoints[p] == op)
                        found = true;
                all &= found;
            }
            if (all)
                siblings.insert(dst.id);
        }
    }
    return siblings;
}

void compute_boundary(const Netlist& nl, StructuralCandidate& c) {
    std::set<NetId> in, out;
    for (GateId id : c.gates) {
        const Gate& g = nl.gate(id);
        for (size_t p = 0; p < g.endpoints.size(); p++) {
            NetId n = g.endpoints[p];
            if (n == kInvalidId || nl.is_const_net(n))
                continue;
            if (g.type->pins[p].dir == PinDir::In) {
                const Net& net = nl.net(n);
                if (net.sources.empty() || !c.gates.count(net.sources[0].gate))
                    in.insert(n);
            } else {
                const Net& net = nl.net(n);
                bool external = net.is_global_output;
                for (const Endpoint& d : net.destinations)
                    if (!c.gates.count(d.gate))
                        external = true;
                if (external)
                    out.insert(n);
                if (g.type->pins[p].role == PinRole::CarryOut)
                    c.carry_out_nets.insert(n);
            }
        }
    }
    c.inputs.assign(in.begin(), in.end());
    c.outputs.assign(out.begin(), out.end());
}

// Lowest chain position each boundary net touches, walking only candidate
// gates. Chain pins are assigned per bit position (a CARRY4 block spans
// four), then positions relax through the neighboring candidate gates.
// Ranking hint for variants and comparator positions; never a decision.
void compute_position_hints(const Netlist& nl, const CarryChain& chain, StructuralCandidate& c) {
    std::map<NetId, uint32_t> net_pos;    // chain-pinned net positions
    std::set<GateId> chain_gates;
    std::map<GateId, uint32_t> gate_base;
    for (size_t i = 0; i < chain.positions.size(); i++) {
        chain_gates.insert(chain.positions[i].first);
        gate_base.emplace(chain.positions[i].first, uint32_t(i));
    }
    auto pin_net = [&](const Gate& g, const std::string& name) -> NetId {
        int p = g.type->pin_index(name);
        return p < 0 ? kInvalidId : g.endpoints[size_t(p)];
    };
    auto pin_pos = [&](NetId n, uint32_t pos) {
        if (n == kInvalidId || nl.is_const_net(n))
            return;
        auto it = net_pos.find(n);
        if (it == net_pos.end() || it->second > pos)
            net_pos[n] = pos;
    };
    for (GateId id : chain_gates) {
        const Gate& g = nl.gate(id);
        uint32_t base = gate_base[id];
        if (g.type->name == "CARRY4") {
            for (uint32_t j = 0; j < 4; j++) {
                pin_pos(pin_net(g, "S" + std::to_string(j)), base + j);
                pin_pos(pin_net(g, "DI" + std::to_string(j)), base + j);
                pin_pos(pin_net(g, "O" + std::to_string(j)), base + j);
                pin_pos(pin_net(g, "CO" + std::to_string(j)), base + j);
            }
        } else {
            for (size_t p = 0; p < g.endpoints.size(); p++)
                pin_pos(g.endpoints[p], base);
        }
    }
    std::set<NetId> pinned;
    for (auto& [n, pos] : net_pos)
        pinned.insert(n);

    std::map<GateId, uint32_t> gate_pos;
    for (int round = 0; round < 16; round++) {
        bool changed = false;
        for (GateId id : c.gates) {
            if (chain_gates.count(id))
                continue;
            const Gate& g = nl.gate(id);
            uint32_t best = ~uint32_t(0);
            for (NetId n : g.endpoints) {
                if (n == kInvalidId)
                    continue;
                auto it = net_pos.find(n);
                if (it != net_pos.end())
                    best = std::min(best, it->second);
            }
            if (best == ~uint32_t(0))
                continue;
            auto it = gate_pos.find(id);
            if (it == gate_pos.end() || it->second > best) {
                gate_pos[id] = best;
                changed = true;
            }
            for (NetId n : g.endpoints) {
                if (n == kInvalidId || nl.is_const_net(n) || pinned.count(n))
                    continue;
                auto np = net_pos.find(n);
                if (np == net_pos.end() || np->second > best) {
                    net_pos[n] = best;
                    changed = true;
                }
            }
        }
        if (!changed)
            break;
    }
    auto hint = [&](NetId n) {
        auto it = net_pos.find(n);
        return it == net_pos.end() ? uint32_t(chain.positions.size()) : it->second;
    };
    for (NetId n : c.inputs)
        c.input_position_hint[n] = hint(n);
    for (NetId n : c.outputs)
        c.output_position_hint[n] = hint(n);

    for (NetId n : c.inputs) {
        for (const Endpoint& d : nl.net(n).destinations) {
            if (!chain_gates.count(d.gate))
                continue;
            const std::string& pin = nl.gate(d.gate).type->pins[d.pin].name;
            int side = -1;
            if (pin == "I0" || pin.rfind("DI", 0) == 0)
                side = 0;
            else if (pin == "I1" || pin[0] == 'S')
                side = 1;
            if (side >= 0 && !c.operand_side_hint.count(n))
                c.operand_side_hint[n] = side;
        }
    }
}

} // namespace

std::vector<StructuralCandidate> build_structural_candidates(const CarryChain& chain, size_t chain_index,
                                                             const Netlist& nl, const ArithConfig& cfg,
                                                             std::vector<std::string>* log) {
    std::vector<StructuralCandidate> out;
    std::set<std::set<GateId>> seen;
    std::set<GateId> siblings = chain_sibling_gates(nl, chain);
    for (int s = 0; s <= cfg.expansion_layers; s++) {
        for (int p = 0; p <= cfg.expansion_layers; p++) {
            StructuralCandidate c;
            c.chain_index = chain_index;
            c.pred_layers = p;
            c.succ_layers = s;
            c.gates.insert(chain.gates.begin(), chain.gates.end());
            for (int i = 0; i < s; i++) {
                if (i == 0)
                    c.gates.insert(siblings.begin(), siblings.end());
                expand_successors(nl, c.gates);
            }
            for (int i = 0; i < p; i++)
                expand_predecessors(nl, c.gates);
            if (!seen.insert(c.gates).second)
                continue;
            compute_boundary(nl, c);
            compute_position_hints(nl, chain, c);
            out.push_back(std::move(c));
            if (out.size() >= cfg.variant_cap) {
                if (log)
                    log->push_back("chain " + std::to_string(chain_index) + ": structural variant cap hit");
                return out;
            }
        }
    }
    // Smallest first: cheap candidates usually verify already.
    std::stable_sort(out.begin(), out.end(),
                     [](const StructuralCandidate& a, const StructuralCandidate& b) {
                         return a.gates.size() < b.gates.size();
                     });
    return out;
}

// ---------------------------------------------------------------------------
// Phase 2: functional candidates

namespace {

std::vector<std::vector<uint32_t>> output_supports(const std::vector<BoolFunc>& funcs, const ArithConfig& cfg) {
    if (auto s = semantic_supports(funcs, cfg.budget))
        return *s;
    // Budget blown: fall back to syntactic supports.
    std::vector<std::vector<uint32_t>> out;
    out.reserve(funcs.size());
    for (const BoolFunc& f : funcs)
        out.push_back(f.syntactic_support());
    return out;
}

// n choose k combinations of indices, capped.
void combinations(size_t n, size_t k, size_t cap, std::vector<std::vector<size_t>>& out) {
    std::vector<size_t> idx(k);
    for (size_t i = 0; i < k; i++)
        idx[i] = i;
    for (;;) {
        out.push_back(idx);
        if (out.size() >= cap)
            return;
        size_t i = k;
        while (i-- > 0) {
            if (idx[i] != i + n - k) {
                idx[i]++;
                for (size_t j = i + 1; j < k; j++)
                    idx[j] = idx[j - 1] + 1;
                break;
            }
            if (i == 0)
                return;
        }
    }
}

struct InputInfo {
    NetId net;
    size_t influence;
    uint32_t hint;
};

} // namespace

FunctionalCandidateSet derive_functional_candidates(const StructuralCandidate& sc, const Netlist& nl,
                                                    const ArithConfig& cfg) {
    FunctionalCandidateSet set;
    if (sc.outputs.size() > cfg.width_cap) {
        set.log.push_back("candidate exceeds width cap (" + std::to_string(sc.outputs.size()) + " outputs)");
        return set;
    }
    std::vector<BoolFunc> funcs;
    for (NetId n : sc.outputs)
        funcs.push_back(subgraph_func(nl, n, sc.gates));

    std::vector<std::vector<uint32_t>> supports = output_supports(funcs, cfg);

    // Hard controls: nets feeding select/enable pins inside the candidate.
    std::set<NetId> hard_controls;
    for (NetId n : sc.inputs)
        for (const Endpoint& d : nl.net(n).destinations)
            if (sc.gates.count(d.gate)) {
                PinRole role = nl.gate(d.gate).type->pins[d.pin].role;
                if (role == PinRole::Select || role == PinRole::Enable)
                    hard_controls.insert(n);
            }

    // Output order: support size ascending, data before carry-out at ties,
    // then position hint, then net id. Tied blocks fan out as variations.
    struct OutInfo {
        size_t idx;
        size_t sup;
        bool is_carry;
        uint32_t hint;
    };
    std::vector<OutInfo> outs;
    for (size_t i = 0; i < sc.outputs.size(); i++)
        outs.push_back({i, supports[i].size(), sc.carry_out_nets.count(sc.outputs[i]) != 0,
                        sc.output_position_hint.count(sc.outputs[i]) ? sc.output_position_hint.at(sc.outputs[i]) : 0});
    std::sort(outs.begin(), outs.end(), [&](const OutInfo& a, const OutInfo& b) {
        return std::tie(a.sup, a.is_carry, a.hint, sc.outputs[a.idx]) <
               std::tie(b.sup, b.is_carry, b.hint, sc.outputs[b.idx]);
    });
    std::vector<std::vector<size_t>> output_orders{{}};
    for (const OutInfo& o : outs)
        output_orders[0].push_back(o.idx);
    // One extra variation per adjacent equal-support pair (swap), capped.
    for (size_t i = 0; i + 1 < outs.size() && output_orders.size() < 8; i++) {
        if (outs[i].sup == outs[i + 1].sup) {
            auto swapped = output_orders[0];
            std::swap(swapped[i], swapped[i + 1]);
            output_orders.push_back(std::move(swapped));
        }
    }

    // Influence counts for the remaining (non-hard-control) inputs.
    std::map<uint32_t, size_t> influence;
    for (size_t i = 0; i < funcs.size(); i++)
        for (uint32_t v : supports[i])
            influence[v]++;
    std::vector<InputInfo> pool;
    for (NetId n : sc.inputs) {
        if (hard_controls.count(n))
            continue;
        auto it = influence.find(n);
        size_t inf = it == influence.end() ? 0 : it->second;
        if (inf == 0)
            continue; // semantically dead input
        uint32_t hint = sc.input_position_hint.count(n) ? sc.input_position_hint.at(n) : 0;
        pool.push_back({n, inf, hint});
    }
    std::sort(pool.begin(), pool.end(), [](const InputInfo& a, const InputInfo& b) {
        return std::tie(b.influence, a.hint, a.net) < std::tie(a.influence, b.hint, b.net);
    });

    // Pack positions of the requested arity; equal-influence runs wider than
    // the arity branch into multiple variations (capped).
    auto pack = [&](size_t arity, size_t width) {
        std::vector<std::pair<std::vector<std::vector<NetId>>, std::vector<NetId>>> results; // positions, controls
        struct State {
            std::vector<InputInfo> remaining;
            std::vector<std::vector<NetId>> positions;
            std::vector<NetId> demoted; // tie losers treated as controls
        };
        std::vector<State> states{{pool, {}, {}}};
        for (size_t bit = 0; bit < width; bit++) {
            std::vector<State> next;
            for (State& st : states) {
                if (st.remaining.size() < arity)
                    continue;
                size_t run = 1;
                while (run < st.remaining.size() && st.remaining[run].influence == st.remaining[0].influence)
                    run++;
                if (run <= arity) {
                    State ns = st;
                    std::vector<NetId> pos;
                    for (size_t j = 0; j < arity; j++)
                        pos.push_back(ns.remaining[j].net);
                    ns.remaining.erase(ns.remaining.begin(), ns.remaining.begin() + long(arity));
                    ns.positions.push_back(std::move(pos));
                    next.push_back(std::move(ns));
                } else {
                    // Ambiguous run: branch on every choice of position
                    // occupants. At the top position the losers may also be
                    // control signals (a reset influences every output,
                    // exactly like bit 0 does), so branch on demoting them.
                    bool allow_demote = bit == 0;
                    std::vector<std::vector<size_t>> combos;
                    combinations(run, arity, 16, combos);
                    for (const auto& combo : combos) {
                        if (next.size() >= cfg.variant_cap) {
                            set.capped = true;
                            break;
                        }
                        std::vector<NetId> pos;
                        std::set<size_t> used(combo.begin(), combo.end());
                        for (size_t j : combo)
                            pos.push_back(st.remaining[j].net);
                        for (int demote = 0; demote < 2; demote++) {
                            State ns = st;
                            std::vector<InputInfo> rest;
                            for (size_t j = 0; j < ns.remaining.size(); j++) {
                                if (used.count(j))
                                    continue;
                                if (demote && j < run)
                                    ns.demoted.push_back(ns.remaining[j].net);
                                else
                                    rest.push_back(ns.remaining[j]);
                            }
                            ns.remaining = std::move(rest);
                            ns.positions.push_back(pos);
                            next.push_back(std::move(ns));
                            if (!allow_demote)
                                break;
                        }
                    }
                }
            }
            states = std::move(next);
            if (states.size() > cfg.variant_cap) {
                states.resize(cfg.variant_cap);
                set.capped = true;
            }
        }
        std::set<std::pair<std::vector<std::vector<NetId>>, std::vector<NetId>>> dedup;
        for (State& st : states) {
            std::vector<NetId> controls(hard_controls.begin(), hard_controls.end());
            for (const InputInfo& r : st.remaining)
                controls.push_back(r.net);
            controls.insert(controls.end(), st.demoted.begin(), st.demoted.end());
            std::sort(controls.begin(), controls.end());
            if (controls.size() > cfg.control_cap)
                continue;
            if (dedup.emplace(st.positions, controls).second)
                results.emplace_back(st.positions, controls);
        }
        return results;
    };

    // Comparator positions come from structural pin-position hints instead:
    // a single-bit output makes influence counts useless.
    auto comparator_pack = [&]() {
        std::vector<std::pair<std::vector<std::vector<NetId>>, std::vector<NetId>>> results;
        std::map<uint32_t, std::vector<NetId>> by_pos;
        for (const InputInfo& in : pool)
            by_pos[in.hint].push_back(in.net);
        std::vector<std::vector<NetId>> positions;
        for (auto& [pos, nets] : by_pos) {
            if (nets.size() != 2)
                return results; // not a clean two-operand ladder
            positions.push_back(nets);
        }
        if (positions.size() >= 2)
            results.emplace_back(positions, std::vector<NetId>(hard_controls.begin(), hard_controls.end()));
        return results;
    };

    auto add_candidates = [&](size_t arity) {
        size_t n_out = sc.outputs.size();
        if (arity == 1 && n_out < 2)
            return; // single-output candidates carry no influence signal
        // Operand widths implied by the output count (a top carry bit may or
        // may not be among the outputs), widest first so a full-width match
        // beats a truncated one with extra controls. Const-mul additionally
        // allows the full input pool as one operand. Single-bit "words" are
        // not word-level structures.
        std::vector<size_t> widths{n_out};
        if (n_out >= 3)
            widths.push_back(n_out - 1);
        if (arity == 1 && pool.size() > n_out)
            widths.insert(widths.begin(), pool.size());
        std::vector<std::pair<std::vector<std::vector<NetId>>, std::vector<NetId>>> packs;
        if (n_out == 1 && arity == 2) {
            packs = comparator_pack();
        } else {
            for (size_t w : widths) {
                if (w < 2 || w * arity > pool.size())
                    continue;
                auto r = pack(arity, w);
                packs.insert(packs.end(), r.begin(), r.end());
            }
        }
        // Counter/negation/const-mul interpretations rarely need more than a
        // couple of variants; the wide arity-1 packings of a two-operand
        // structure are all junk.
        size_t cap = arity == 1 ? std::min<size_t>(32, cfg.variant_cap) : cfg.variant_cap;
        size_t base = set.candidates.size();
        for (auto& [positions, controls] : packs) {
            for (const auto& order : output_orders) {
                if (set.candidates.size() - base >= cap) {
                    set.capped = true;
                    return;
                }
                FunctionalCandidate fc;
                fc.arity = arity;
                for (size_t idx : order) {
                    fc.outputs.push_back(sc.outputs[idx]);
                    fc.output_funcs.push_back(funcs[idx]);
                }
                fc.positions = positions;
                fc.controls = controls;
                set.candidates.push_back(std::move(fc));
            }
        }
    };

    add_candidates(2);
    add_candidates(1);
    if (set.capped)
        set.log.push_back("functional variant cap hit");
    return set;
}

// ---------------------------------------------------------------------------
// Model library (bit-blasted)

namespace {

struct RippleResult {
    std::vector<BoolFunc> bits;
    BoolFunc carry;
};

RippleResult ripple_add(const std::vector<BoolFunc>& a, const std::vector<BoolFunc>& b, BoolFunc carry) {
    RippleResult r;
    for (size_t i = 0; i < a.size(); i++) {
        BoolFunc ai = a[i];
        BoolFunc bi = i < b.size() ? b[i] : BoolFunc::constant(false);
        r.bits.push_back(BoolFunc::xor2(BoolFunc::xor2(ai, bi), carry));
        carry = BoolFunc::or2(BoolFunc::and2(ai, bi), BoolFunc::and2(carry, BoolFunc::or2(ai, bi)));
    }
    r.carry = carry;
    return r;
}

std::vector<BoolFunc> const_bits(uint64_t v, size_t width) {
    std::vector<BoolFunc> out;
    for (size_t i = 0; i < width; i++)
        out.push_back(BoolFunc::constant((v >> i) & 1));
    return out;
}

std::vector<BoolFunc> negate_all(const std::vector<BoolFunc>& a) {
    std::vector<BoolFunc> out;
    for (const BoolFunc& f : a)
        out.push_back(BoolFunc::negate(f));
    return out;
}

// Model output bits, length n_out. A carry-out interpretation appends the
// final carry as the top bit.
std::vector<BoolFunc> model_bits(const ArithmeticModel& m, const std::vector<BoolFunc>& a,
                                 const std::vector<BoolFunc>& b, size_t n_out) {
    switch (m.kind) {
    case ModelKind::Counter:
    case ModelKind::Addition: {
        RippleResult r =
            b.empty() ? ripple_add(a, const_bits(uint64_t(m.increment), a.size()), BoolFunc::constant(false))
                      : ripple_add(a, b, BoolFunc::constant(false));
        std::vector<BoolFunc> out = r.bits;
        if (m.carry_out)
            out.push_back(r.carry);
        out.resize(n_out, BoolFunc::constant(false));
        return out;
    }
    case ModelKind::Subtraction: {
        RippleResult r = ripple_add(a, negate_all(b), BoolFunc::constant(true));
        std::vector<BoolFunc> out = r.bits;
        if (m.carry_out)
            out.push_back(r.carry); // borrow-bar
        out.resize(n_out, BoolFunc::constant(false));
        return out;
    }
    case ModelKind::Negation: {
        RippleResult r = ripple_add(negate_all(a), const_bits(1, a.size()), BoolFunc::constant(false));
        std::vector<BoolFunc> out = r.bits;
        out.resize(n_out, BoolFunc::constant(false));
        return out;
    }
    case ModelKind::ConstMul: {
        std::vector<BoolFunc> acc = const_bits(0, n_out);
        for (size_t j = 0; j < n_out; j++) {
            if (!((uint64_t(m.factor) >> j) & 1))
                continue;
            std::vector<BoolFunc> shifted = const_bits(0, n_out);
            for (size_t i = 0; i + j < n_out && i < a.size(); i++)
                shifted[i + j] = a[i];
            acc = ripple_add(acc, shifted, BoolFunc::constant(false)).bits;
        }
        return acc;
    }
    case ModelKind::Comparator: {
        std::vector<BoolFunc> av = a, bv = b;
        if (m.cmp_is_signed && !av.empty()) {
            av.back() = BoolFunc::negate(av.back());
            bv.back() = BoolFunc::negate(bv.back());
        }
        BoolFunc result;
        if (m.cmp == CmpOp::Eq) {
            result = BoolFunc::constant(true);
            for (size_t i = 0; i < av.size(); i++)
                result = BoolFunc::and2(result, BoolFunc::negate(BoolFunc::xor2(av[i], bv[i])));
        } else if (m.cmp == CmpOp::Lt) {
            // A < B  <=>  not carry_out(A + ~B + 1)
            result = BoolFunc::negate(ripple_add(av, negate_all(bv), BoolFunc::constant(true)).carry);
        } else {
            // A <= B  <=>  not (B < A)
            result = ripple_add(bv, negate_all(av), BoolFunc::constant(true)).carry;
        }
        return {result};
    }
    case ModelKind::Unknown:
        break;
    }
    return {};
}

// Evaluate substituted output functions as an integer with all operand nets
// set per `value_of`. Returns nullopt if any output is not fully determined.
std::optional<uint64_t> eval_outputs_as_int(const std::vector<BoolFunc>& funcs,
                                            const std::map<uint32_t, bool>& assignment) {
    uint64_t v = 0;
    for (size_t i = 0; i < funcs.size() && i < 64; i++)
        if (funcs[i].evaluate(assignment))
            v |= uint64_t(1) << i;
    return v;
}

struct FitOutcome {
    bool ok = false;
    bool undecided = false;
    std::vector<bool> swapped; // per position, operand labeling
    ArithmeticModel model;
};

// Cheap screen before an equivalence query: a handful of random vectors
// rejects nearly every mismatched pairing.
bool random_agree(const BoolFunc& f, const BoolFunc& g, size_t vectors, uint64_t seed) {
    std::set<uint32_t> vars;
    for (uint32_t v : f.syntactic_support())
        vars.insert(v);
    for (uint32_t v : g.syntactic_support())
        vars.insert(v);
    std::mt19937_64 rng(seed);
    for (size_t i = 0; i < vectors; i++) {
        std::map<uint32_t, bool> asg;
        for (uint32_t v : vars)
            asg[v] = rng() & 1;
        if (f.evaluate(asg) != g.evaluate(asg))
            return false;
    }
    return true;
}

// Unateness-based operand labeling for comparators: in an unsigned A < B,
// every a_i is negative-unate and every b_i positive-unate.
std::optional<std::vector<bool>> comparator_labeling(const BoolFunc& f, const std::vector<std::vector<NetId>>& positions,
                                                     const EquivBudget& budget, bool& undecided) {
    std::vector<bool> swapped;
    for (const auto& pos : positions) {
        // Which of the pair is negative-unate?
        int neg = -1;
        for (int k = 0; k < 2; k++) {
            BoolFunc c1 = f.cofactor(pos[size_t(k)], true);
            BoolFunc c0 = f.cofactor(pos[size_t(k)], false);
            // negative-unate: f|v=1 implies f|v=0
            BoolFunc witness = BoolFunc::and2(c1, BoolFunc::negate(c0));
            if (!random_agree(witness, BoolFunc::constant(false), 6, 0x2545f491))
                continue;
            EquivResult r = check_equivalent(witness, BoolFunc::constant(false), budget);
            if (r.status == EquivStatus::Undecided) {
                undecided = true;
                return std::nullopt;
            }
            if (r.equal()) {
                neg = k;
                break;
            }
        }
        if (neg < 0)
            return std::nullopt;
        swapped.push_back(neg == 1);
    }
    return swapped;
}

struct ModelTrial {
    ModelKind kind;
    bool carry_out;
    CmpOp cmp = CmpOp::Eq;
    bool cmp_is_signed = false;
};

// Bit-serial model fit with per-position labeling resolution. Position i
// first matters at output bit i, where the borrow/carry asymmetry pins down
// which net is A's bit.
FitOutcome fit_model(ModelKind kind, const ModelTrial& trial, const std::vector<BoolFunc>& out_funcs,
                     const std::vector<std::vector<NetId>>& positions, size_t arity, const ArithConfig& cfg) {
    FitOutcome res;
    size_t n_out = out_funcs.size();
    size_t width = positions.size();

    ArithmeticModel m;
    m.kind = kind;
    m.width = width;
    m.carry_out = trial.carry_out;
    m.cmp = trial.cmp;
    m.cmp_is_signed = trial.cmp_is_signed;

    // Parameter recovery by evaluation.
    if (kind == ModelKind::Counter || (kind == ModelKind::Addition && arity == 1)) {
        std::map<uint32_t, bool> zeros;
        for (const auto& pos : positions)
            zeros[pos[0]] = false;
        auto n = eval_outputs_as_int(out_funcs, zeros);
        if (!n)
            return res;
        uint64_t mask = width >= 64 ? ~uint64_t(0) : ((uint64_t(1) << width) - 1);
        m.increment = int64_t(*n & mask);
        if (m.increment == 0)
            return res; // an identity is not an arithmetic structure
        if (width > 1 && uint64_t(m.increment) > (uint64_t(1) << (width - 1)))
            m.increment -= int64_t(uint64_t(1) << width); // signed-normalize
    } else if (kind == ModelKind::ConstMul) {
        std::map<uint32_t, bool> one;
        for (size_t i = 0; i < positions.size(); i++)
            one[positions[i][0]] = i == 0;
        auto c = eval_outputs_as_int(out_funcs, one);
        if (!c)
            return res;
        m.factor = int64_t(*c);
        if (m.factor == 0 || m.factor == 1)
            return res; // zero is no structure, one is a wire
    }

    auto bits_for = [&](const std::vector<bool>& swapped) {
        std::vector<BoolFunc> a, b;
        for (size_t i = 0; i < positions.size(); i++) {
            a.push_back(BoolFunc::var(positions[i][swapped[i] ? 1 : 0]));
            if (arity == 2)
                b.push_back(BoolFunc::var(positions[i][swapped[i] ? 0 : 1]));
        }
        return std::make_pair(a, b);
    };

    if (kind == ModelKind::Comparator) {
        bool undecided = false;
        std::optional<std::vector<bool>> lab;
        if (trial.cmp == CmpOp::Eq)
            lab = std::vector<bool>(positions.size(), false); // fully symmetric
        else
            lab = comparator_labeling(out_funcs[0], positions, cfg.budget, undecided);
        res.undecided = undecided;
        if (!lab)
            return res;
        // Try the unateness labeling, plus the MSB-flip variant for signed.
        std::vector<std::vector<bool>> labelings{*lab};
        if (trial.cmp_is_signed && !lab->empty()) {
            auto flipped = *lab;
            flipped.back() = !flipped.back();
            labelings.push_back(flipped);
        }
        for (const auto& swapped : labelings) {
            auto [a, b] = bits_for(swapped);
            std::vector<BoolFunc> mb = model_bits(m, a, b, 1);
            if (!random_agree(out_funcs[0], mb[0], 6, 0x517cc1b7))
                continue;
            EquivResult r = check_equivalent(out_funcs[0], mb[0], cfg.budget);
            if (r.status == EquivStatus::Undecided)
                res.undecided = true;
            if (r.equal()) {
                res.ok = true;
                res.swapped = swapped;
                res.model = m;
                return res;
            }
        }
        return res;
    }

    // Width sanity for the remaining models.
    if (trial.carry_out ? n_out != width + 1 : n_out != width) {
        if (!(kind == ModelKind::ConstMul && !trial.carry_out))
            return res;
    }
    if (kind == ModelKind::ConstMul)
        m.width = width;

    // Ripple kinds walk the carry along with the labeling prefix, so each
    // output bit costs one small function build. Const-mul rebuilds the
    // full shift-add network instead (it has no single ripple).
    bool ripple_kind = kind != ModelKind::ConstMul;

    struct Prefix {
        std::vector<bool> swapped;
        BoolFunc carry;
    };
    BoolFunc carry0 = BoolFunc::constant(kind == ModelKind::Subtraction || kind == ModelKind::Negation);
    std::vector<Prefix> live{{{}, carry0}};
    if (arity == 1)
        live[0].swapped.assign(width, false);

    auto step = [&](size_t i, bool swapped_i, const BoolFunc& carry) {
        BoolFunc ai = BoolFunc::var(positions[i][swapped_i ? 1 : 0]);
        BoolFunc bi;
        switch (kind) {
        case ModelKind::Counter:
        case ModelKind::Addition:
            bi = arity == 2 ? BoolFunc::var(positions[i][swapped_i ? 0 : 1])
                            : BoolFunc::constant((uint64_t(m.increment) >> i) & 1);
            break;
        case ModelKind::Subtraction:
            bi = BoolFunc::negate(BoolFunc::var(positions[i][swapped_i ? 0 : 1]));
            break;
        case ModelKind::Negation:
            ai = BoolFunc::negate(ai);
            bi = BoolFunc::constant(i == 0);
            break;
        default:
            break;
        }
        BoolFunc sum = BoolFunc::xor2(BoolFunc::xor2(ai, bi), carry);
        BoolFunc cout = BoolFunc::or2(BoolFunc::and2(ai, bi), BoolFunc::and2(carry, BoolFunc::or2(ai, bi)));
        return std::make_pair(sum, cout);
    };

    for (size_t bit = 0; bit < n_out; bit++) {
        std::vector<Prefix> next;
        for (Prefix& pre : live) {
            struct Branch {
                Prefix prefix;
                BoolFunc model_bit;
            };
            std::vector<Branch> branches;
            auto make_branch = [&](Prefix base, bool swap_choice, bool fresh_position) {
                if (fresh_position)
                    base.swapped.push_back(swap_choice);
                BoolFunc mb;
                if (ripple_kind) {
                    if (bit < width) {
                        auto [sum, cout] = step(bit, base.swapped[bit], base.carry);
                        mb = sum;
                        base.carry = cout;
                    } else {
                        mb = base.carry; // top carry bit
                    }
                } else {
                    std::vector<bool> padded = base.swapped;
                    padded.resize(width, false);
                    auto [a, b] = bits_for(padded);
                    mb = model_bits(m, a, b, n_out)[bit];
                }
                branches.push_back({std::move(base), std::move(mb)});
            };
            size_t involved = std::min(bit + 1, width);
            if (pre.swapped.size() >= involved) {
                make_branch(pre, false, false);
            } else {
                make_branch(pre, false, true);
                if (arity == 2 && positions[pre.swapped.size()][0] != positions[pre.swapped.size()][1])
                    make_branch(pre, true, true);
            }
            for (Branch& br : branches) {
                if (!random_agree(out_funcs[bit], br.model_bit, 6, 0x9e3779b9 + bit))
                    continue;
                EquivResult r = check_equivalent(out_funcs[bit], br.model_bit, cfg.budget);
                if (r.status == EquivStatus::Undecided) {
                    res.undecided = true;
                    continue;
                }
                if (r.equal())
                    next.push_back(std::move(br.prefix));
            }
        }
        live = std::move(next);
        if (live.size() > 8)
            live.resize(8);
        if (live.empty())
            return res;
    }
    res.ok = true;
    res.swapped = live[0].swapped;
    res.swapped.resize(width, false);
    res.model = m;
    return res;
}

bool has_ff_feedback(const Netlist& nl, const std::vector<NetId>& outputs, const std::vector<BoolFunc>& operand_a,
                     const std::vector<std::vector<NetId>>& positions) {
    (void)operand_a;
    std::set<GateId> output_sources;
    for (NetId o : outputs)
        if (!nl.net(o).sources.empty())
            output_sources.insert(nl.net(o).sources[0].gate);

    for (const Gate& g : nl.gates()) {
        if (g.category() != GateCategory::Ff)
            continue;
        NetId d = g.endpoints[size_t(g.type->pin_index("D"))];
        ConeResult cone = nl.combinational_fanin_cone(d);
        bool sees_output = false;
        for (GateId cg : cone.gates)
            if (output_sources.count(cg)) {
                sees_output = true;
                break;
            }
        // ... or the FF samples a structure output net directly.
        for (NetId o : outputs)
            if (d == o)
                sees_output = true;
        if (!sees_output)
            continue;
        NetId q = g.endpoints[size_t(g.type->pin_index("Q"))];
        for (const auto& pos : positions) {
            for (NetId in : pos) {
                if (in == q)
                    return true;
                ConeResult back = nl.combinational_fanin_cone(in);
                if (std::find(back.inputs.begin(), back.inputs.end(), q) != back.inputs.end())
                    return true;
            }
        }
    }
    return false;
}

} // namespace

std::optional<ArithmeticStructure> verify_candidate(const FunctionalCandidate& cand, const StructuralCandidate& sc,
                                                    const Netlist& nl, const ArithConfig& cfg,
                                                    std::vector<std::string>* log) {
    if (cand.controls.size() > cfg.control_cap)
        return std::nullopt;
    size_t k = cand.controls.size();
    bool saw_undecided = false;

    std::optional<ArithmeticStructure> best;
    auto priority = [](ModelKind m) {
        switch (m) {
        case ModelKind::Counter: return 0;
        case ModelKind::Negation: return 1;
        case ModelKind::ConstMul: return 2;
        case ModelKind::Addition: return 3;
        case ModelKind::Subtraction: return 4;
        case ModelKind::Comparator: return 5;
        default: return 6;
        }
    };

    std::vector<ControlOutcome> outcomes;
    for (uint64_t a = 0; a < (uint64_t(1) << k); a++) {
        ControlOutcome outcome;
        std::map<uint32_t, BoolFunc> sub;
        for (size_t i = 0; i < k; i++) {
            bool v = (a >> i) & 1;
            outcome.assignment[cand.controls[i]] = v;
            sub.emplace(cand.controls[i], BoolFunc::constant(v));
        }
        std::vector<BoolFunc> funcs;
        bool all_const = true;
        for (const BoolFunc& f : cand.output_funcs) {
            funcs.push_back(f.substitute(sub));
            all_const &= funcs.back().is_const();
        }
        if (all_const) {
            outcome.constant_outputs = true;
            outcomes.push_back(std::move(outcome));
            continue;
        }

        std::vector<ModelTrial> trials;
        if (cand.arity == 1) {
            trials.push_back({ModelKind::Counter, false});
            if (cand.output_funcs.size() == cand.positions.size() + 1)
                trials.push_back({ModelKind::Counter, true});
            trials.push_back({ModelKind::Negation, false});
            trials.push_back({ModelKind::ConstMul, false});
        } else {
            trials.push_back({ModelKind::Addition, false});
            trials.push_back({ModelKind::Addition, true});
            trials.push_back({ModelKind::Subtraction, false});
            trials.push_back({ModelKind::Subtraction, true});
            if (cand.output_funcs.size() == 1)
                for (CmpOp op : {CmpOp::Eq, CmpOp::Lt, CmpOp::Le})
                    for (bool sgn : {false, true})
                        trials.push_back({ModelKind::Comparator, false, op, sgn});
        }

        for (const ModelTrial& trial : trials) {
            FitOutcome fit = fit_model(trial.kind, trial, funcs, cand.positions, cand.arity, cfg);
            saw_undecided |= fit.undecided;
            if (!fit.ok)
                continue;

            ArithmeticModel model = fit.model;
            // Arity-1 increments: a feedback path through FFs back into the
            // operand makes it a counter, otherwise addition-with-constant.
            if (trial.kind == ModelKind::Counter) {
                std::vector<BoolFunc> dummy;
                model.kind = has_ff_feedback(nl, cand.outputs, dummy, cand.positions) ? ModelKind::Counter
                                                                                      : ModelKind::Addition;
            }
            outcome.model = model;

            if (!best || priority(model.kind) < priority(best->model.kind)) {
                ArithmeticStructure s;
                s.gates = sc.gates;
                s.model = model;
                s.outputs = cand.outputs;
                // Per-position symmetric models (addition, equality) leave
                // the labeling free; the carry-gate pin side settles it.
                bool symmetric = model.kind == ModelKind::Addition ||
                                 (model.kind == ModelKind::Comparator && model.cmp == CmpOp::Eq);
                std::vector<NetId> opa, opb;
                for (size_t i = 0; i < cand.positions.size(); i++) {
                    bool swap = fit.swapped[i];
                    if (symmetric && cand.arity == 2) {
                        auto side = [&](NetId n) {
                            auto it = sc.operand_side_hint.find(n);
                            return it == sc.operand_side_hint.end() ? -1 : it->second;
                        };
                        int s0 = side(cand.positions[i][0]);
                        int s1 = side(cand.positions[i][1]);
                        if (s0 == 0 || s1 == 1)
                            swap = false;
                        else if (s1 == 0 || s0 == 1)
                            swap = true;
                    }
                    opa.push_back(cand.positions[i][swap ? 1 : 0]);
                    if (cand.arity == 2)
                        opb.push_back(cand.positions[i][swap ? 0 : 1]);
                }
                s.operands.push_back(opa);
                if (cand.arity == 2)
                    s.operands.push_back(opb);
                s.control_assignment = outcome.assignment;
                s.status = VerifyStatus::Verified;
                best = std::move(s);
            } else if (best && model.kind != best->model.kind) {
                if (std::find(best->also_matches.begin(), best->also_matches.end(), model.kind) ==
                    best->also_matches.end())
                    best->also_matches.push_back(model.kind);
            }
            break; // first fitting model for this assignment
        }
        outcomes.push_back(std::move(outcome));
    }

    if (best) {
        best->outcomes = std::move(outcomes);
        return best;
    }
    if (saw_undecided) {
        ArithmeticStructure s;
        s.gates = sc.gates;
        s.model.kind = ModelKind::Unknown;
        s.status = VerifyStatus::Undecided;
        s.outcomes = std::move(outcomes);
        if (log)
            log->push_back("candidate verification undecided at budget");
        return s;
    }
    return std::nullopt;
}

ArithResult classify_arithmetic(const Netlist& nl, const ArithConfig& cfg) {
    ArithResult res;
    std::vector<CarryChain> chains = find_carry_chains(nl);
    res.summary.chains_total = chains.size();

    for (const char* k : {"addition", "subtraction", "counter", "negation", "const-mul", "comparator", "unknown"})
        res.summary.per_model[k] = 0;

    for (size_t ci = 0; ci < chains.size(); ci++) {
        std::vector<StructuralCandidate> cands = build_structural_candidates(chains[ci], ci, nl, cfg, &res.summary.log);
        std::optional<ArithmeticStructure> found;
        bool undecided_seen = false;
        // Candidates run smallest to largest; the largest verifying variant
        // wins so surrounding operand logic (inverters, gating) is covered.
        for (const StructuralCandidate& sc : cands) {
            FunctionalCandidateSet fset = derive_functional_candidates(sc, nl, cfg);
            for (const std::string& line : fset.log)
                res.summary.log.push_back("chain " + std::to_string(ci) + ": " + line);
            for (const FunctionalCandidate& fc : fset.candidates) {
                auto s = verify_candidate(fc, sc, nl, cfg, &res.summary.log);
                if (!s)
                    continue;
                if (s->status == VerifyStatus::Undecided) {
                    undecided_seen = true;
                    continue;
                }
                if (!found || s->gates.size() >= found->gates.size())
                    found = std::move(s);
                break;
            }
        }
        if (found) {
            res.summary.chains_verified++;
            res.summary.per_model[to_string(found->model.kind)]++;
            res.structures.push_back(std::move(*found));
        } else {
            res.summary.per_model["unknown"]++;
            if (undecided_seen) {
                res.summary.chains_undecided++;
                res.summary.log.push_back("chain " + std::to_string(ci) + ": undecided at budget");
            } else {
                res.summary.log.push_back("chain " + std::to_string(ci) + ": no model matched");
            }
        }
    }

    std::set<GateId> classified;
    for (const ArithmeticStructure& s : res.structures)
        classified.insert(s.gates.begin(), s.gates.end());
    for (const Gate& g : nl.gates())
        if (is_combinational(g.category()))
            res.summary.combinational_gates++;
    res.summary.classified_gates = classified.size();
    res.summary.classified_fraction =
        res.summary.combinational_gates ? double(classified.size()) / double(res.summary.combinational_gates) : 0.0;
    return res;
}

size_t arithmetic_oracle_mismatches(const ArithmeticStructure& s, const Netlist& nl, size_t vectors, uint64_t seed) {
    if (s.status != VerifyStatus::Verified)
        return vectors;
    std::mt19937_64 rng(seed);
    size_t mismatches = 0;

    std::vector<BoolFunc> funcs;
    for (NetId o : s.outputs)
        funcs.push_back(subgraph_func(nl, o, s.gates));
    std::map<uint32_t, BoolFunc> csub;
    for (const auto& [net, v] : s.control_assignment)
        csub.emplace(net, BoolFunc::constant(v));
    for (BoolFunc& f : funcs)
        f = f.substitute(csub);

    size_t w = s.model.width;
    for (size_t t = 0; t < vectors; t++) {
        uint64_t av = rng() & (w >= 64 ? ~uint64_t(0) : ((uint64_t(1) << w) - 1));
        uint64_t bv = rng() & (w >= 64 ? ~uint64_t(0) : ((uint64_t(1) << w) - 1));
        std::map<uint32_t, bool> asg;
        for (size_t i = 0; i < w; i++) {
            asg[s.operands[0][i]] = (av >> i) & 1;
            if (s.operands.size() > 1)
                asg[s.operands[1][i]] = (bv >> i) & 1;
        }
        uint64_t mask = w >= 64 ? ~uint64_t(0) : ((uint64_t(1) << w) - 1);
        uint64_t expect = 0;
        size_t expect_bits = s.outputs.size();
        switch (s.model.kind) {
        case ModelKind::Counter:
        case ModelKind::Addition:
            expect = s.operands.size() > 1 ? av + bv : av + (uint64_t(s.model.increment) & mask);
            break;
        case ModelKind::Subtraction:
            expect = (av + (~bv & mask) + 1); // borrow-bar carry convention
            break;
        case ModelKind::Negation:
            expect = (~av & mask) + 1;
            break;
        case ModelKind::ConstMul:
            expect = av * uint64_t(s.model.factor);
            break;
        case ModelKind::Comparator: {
            int64_t sa = int64_t(av), sb = int64_t(bv);
            if (s.model.cmp_is_signed) {
                sa = int64_t(av << (64 - w)) >> (64 - w);
                sb = int64_t(bv << (64 - w)) >> (64 - w);
            }
            bool r = s.model.cmp == CmpOp::Eq ? sa == sb : s.model.cmp == CmpOp::Lt ? sa < sb : sa <= sb;
            expect = r ? 1 : 0;
            break;
        }
        case ModelKind::Unknown:
            return vectors;
        }
        std::vector<bool> got = evaluate_all(funcs, asg);
        for (size_t i = 0; i < expect_bits; i++) {
            if (got[i] != bool((expect >> i) & 1)) {
                mismatches++;
                break;
            }
        }
    }
    return mismatches;
}

void annotate_arithmetic(Netlist& nl, const std::vector<ArithmeticStructure>& structures) {
    size_t idx = 0;
    for (const ArithmeticStructure& s : structures) {
        if (s.status != VerifyStatus::Verified) {
            idx++;
            continue;
        }
        ModuleGroup g;
        g.name = "arith" + std::to_string(idx++) + "_" + to_string(s.model.kind);
        g.kind = GroupKind::Arithmetic;
        g.locked = true;
        g.gates = s.gates;

        auto consumer_pin = [&](NetId n) -> std::optional<GroupPin> {
            for (const Endpoint& d : nl.net(n).destinations)
                if (s.gates.count(d.gate))
                    return GroupPin{d.gate, d.pin, std::nullopt};
            return std::nullopt;
        };
        const char* names[] = {"A", "B"};
        for (size_t op = 0; op < s.operands.size(); op++) {
            GroupPinGroup pg;
            pg.name = names[op];
            for (size_t i = 0; i < s.operands[op].size(); i++) {
                auto pin = consumer_pin(s.operands[op][i]);
                if (pin) {
                    pin->index = uint32_t(i);
                    pg.pins.push_back(*pin);
                }
            }
            if (!pg.pins.empty())
                g.pin_groups.push_back(std::move(pg));
        }
        GroupPinGroup out;
        out.name = "O";
        for (size_t i = 0; i < s.outputs.size(); i++) {
            const Net& net = nl.net(s.outputs[i]);
            if (!net.sources.empty())
                out.pins.push_back({net.sources[0].gate, net.sources[0].pin, uint32_t(i)});
        }
        if (!out.pins.empty())
            g.pin_groups.push_back(std::move(out));
        nl.add_group(std::move(g));
    }
}

} // namespace nlre
