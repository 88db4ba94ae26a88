#include "nlre/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace nlre {

namespace {

// Stable endpoint tokens for predecessor/successor sets. Target gates map to
// their current group each round; everything else keeps a fixed identity.
struct Token {
    enum Kind { External, Anchor, SeqGate, Target } kind;
    uint32_t id; // anchor index / gate id

    bool operator<(const Token& o) const { return std::tie(kind, id) < std::tie(o.kind, o.id); }
    bool operator==(const Token& o) const { return kind == o.kind && id == o.id; }
};

struct GateTraits {
    std::vector<std::pair<PinRole, NetId>> controls; // signature material
    std::vector<Token> preds, succs;
};

bool is_target_gate(const Gate& g, TargetKind t) {
    if (t == TargetKind::Register)
        return g.category() == GateCategory::Ff;
    return g.type->name == "MUX2";
}

struct Tracer {
    const Netlist& nl;
    TargetKind target;
    const std::map<GateId, uint32_t>& anchor_of; // gate -> anchor group index

    Token token_for_gate(GateId id) const {
        auto a = anchor_of.find(id);
        if (a != anchor_of.end())
            return {Token::Anchor, a->second};
        const Gate& g = nl.gate(id);
        if (is_target_gate(g, target))
            return {Token::Target, id};
        return {Token::SeqGate, id}; // non-target sequential pseudo group
    }

    bool stops(GateId id) const {
        const Gate& g = nl.gate(id);
        return anchor_of.count(id) || is_target_gate(g, target) || is_sequential(g.category());
    }

    // Walk backward from a net to the nearest stopping structures.
    void trace_back(NetId start, std::set<Token>& out, std::set<NetId>& seen) const {
        if (nl.is_const_net(start) || !seen.insert(start).second)
            return;
        const Net& net = nl.net(start);
        if (net.sources.empty()) {
            out.insert({Token::External, 0});
            return;
        }
        GateId src = net.sources[0].gate;
        if (stops(src)) {
            out.insert(token_for_gate(src));
            return;
        }
        const Gate& g = nl.gate(src);
        for (size_t p = 0; p < g.endpoints.size(); p++)
            if (g.type->pins[p].dir == PinDir::In && g.endpoints[p] != kInvalidId)
                trace_back(g.endpoints[p], out, seen);
    }

    void trace_fwd(NetId start, std::set<Token>& out, std::set<NetId>& seen) const {
        if (nl.is_const_net(start) || !seen.insert(start).second)
            return;
        const Net& net = nl.net(start);
        if (net.is_global_output)
            out.insert({Token::External, 0});
        for (const Endpoint& d : net.destinations) {
            if (stops(d.gate)) {
                out.insert(token_for_gate(d.gate));
                continue;
            }
            const Gate& g = nl.gate(d.gate);
            for (size_t p = 0; p < g.endpoints.size(); p++)
                if (g.type->pins[p].dir == PinDir::Out && g.endpoints[p] != kInvalidId)
                    trace_fwd(g.endpoints[p], out, seen);
        }
    }
};

struct Work {
    std::set<GateId> gates;
    bool locked = false;
    int split_family = -1; // groups split from the same parent never remerge
    std::string provenance;
};

using Signature = std::vector<std::pair<PinRole, NetId>>;

} // namespace

GroupingResult group_gates(const Netlist& nl, TargetKind target, const std::vector<ModuleGroup>& known_groups,
                           const GroupingConfig& cfg) {
    GroupingResult res;

    // Anchors: known groups that are not unlocked target groups.
    std::map<GateId, uint32_t> anchor_of;
    std::vector<const ModuleGroup*> anchors;
    std::vector<const ModuleGroup*> seeds;
    GroupKind target_kind = target == TargetKind::Register ? GroupKind::Register : GroupKind::WordMux;
    for (const ModuleGroup& g : known_groups) {
        if (g.kind == target_kind && g.locked) {
            seeds.push_back(&g);
            continue;
        }
        if (g.kind == target_kind)
            continue; // unlocked same-kind groups are ignored as inputs
        anchors.push_back(&g);
        for (GateId id : g.gates)
            anchor_of.emplace(id, uint32_t(anchors.size() - 1));
    }

    // Per-gate traits, computed once.
    Tracer tracer{nl, target, anchor_of};
    std::map<GateId, GateTraits> traits;
    std::vector<GateId> targets;
    for (const Gate& g : nl.gates()) {
        if (!is_target_gate(g, target))
            continue;
        targets.push_back(g.id);
        GateTraits t;
        for (size_t p = 0; p < g.endpoints.size(); p++) {
            if (g.type->pins[p].dir != PinDir::In || g.endpoints[p] == kInvalidId)
                continue;
            PinRole role = g.type->pins[p].role;
            if (is_control_role(role)) {
                if (cfg.loose_signature && (role == PinRole::Reset || role == PinRole::Set))
                    continue;
                t.controls.emplace_back(role, g.endpoints[p]);
                continue;
            }
            std::set<Token> preds;
            std::set<NetId> seen;
            tracer.trace_back(g.endpoints[p], preds, seen);
            t.preds.insert(t.preds.end(), preds.begin(), preds.end());
        }
        for (size_t p = 0; p < g.endpoints.size(); p++) {
            if (g.type->pins[p].dir != PinDir::Out || g.endpoints[p] == kInvalidId)
                continue;
            std::set<Token> succs;
            std::set<NetId> seen;
            tracer.trace_fwd(g.endpoints[p], succs, seen);
            t.succs.insert(t.succs.end(), succs.begin(), succs.end());
        }
        std::sort(t.controls.begin(), t.controls.end());
        std::sort(t.preds.begin(), t.preds.end());
        t.preds.erase(std::unique(t.preds.begin(), t.preds.end()), t.preds.end());
        std::sort(t.succs.begin(), t.succs.end());
        t.succs.erase(std::unique(t.succs.begin(), t.succs.end()), t.succs.end());
        traits.emplace(g.id, std::move(t));
    }

    // Seed: locked known groups, then singletons.
    std::vector<Work> groups;
    std::map<GateId, size_t> group_of;
    for (const ModuleGroup* s : seeds) {
        Work w;
        w.locked = true;
        w.provenance = "known:" + s->name;
        for (GateId id : s->gates)
            if (traits.count(id)) {
                w.gates.insert(id);
                group_of[id] = groups.size();
            }
        if (!w.gates.empty())
            groups.push_back(std::move(w));
    }
    for (GateId id : targets) {
        if (group_of.count(id))
            continue;
        Work w;
        w.gates.insert(id);
        w.provenance = "seed";
        group_of[id] = groups.size();
        groups.push_back(std::move(w));
    }

    int split_families = 0;

    auto group_signature = [&](const Work& w) {
        std::set<std::pair<PinRole, NetId>> sig;
        for (GateId id : w.gates)
            for (const auto& c : traits.at(id).controls)
                sig.insert(c);
        return Signature(sig.begin(), sig.end());
    };
    auto mapped_tokens = [&](const std::vector<Token>& toks, size_t own) {
        // Current group indices for target tokens; all else verbatim.
        std::set<std::pair<int, uint32_t>> out;
        for (const Token& t : toks) {
            if (t.kind == Token::Target) {
                size_t g = group_of.at(t.id);
                if (g != own)
                    out.emplace(100, uint32_t(g));
            } else {
                out.emplace(int(t.kind), t.id);
            }
        }
        return out;
    };

    for (res.rounds = 1; res.rounds <= cfg.max_rounds; res.rounds++) {
        bool changed = false;

        // Merge phase: identical signature plus identical predecessor set or
        // identical successor set. Predecessor classes win ties; classes
        // process in min-gate-id order.
        for (int side = 0; side < 2 && !changed; side++) {
            std::map<std::pair<Signature, std::set<std::pair<int, uint32_t>>>, std::vector<size_t>> classes;
            for (size_t gi = 0; gi < groups.size(); gi++) {
                if (groups[gi].locked || groups[gi].gates.empty())
                    continue;
                std::set<std::pair<int, uint32_t>> key;
                for (GateId id : groups[gi].gates) {
                    auto m = mapped_tokens(side == 0 ? traits.at(id).preds : traits.at(id).succs, gi);
                    key.insert(m.begin(), m.end());
                }
                if (key.empty())
                    continue;
                classes[{group_signature(groups[gi]), key}].push_back(gi);
            }
            std::vector<std::pair<GateId, std::vector<size_t>>> ordered;
            for (auto& [key, members] : classes) {
                if (members.size() < 2)
                    continue;
                GateId min_id = *groups[members[0]].gates.begin();
                for (size_t gi : members)
                    min_id = std::min(min_id, *groups[gi].gates.begin());
                ordered.emplace_back(min_id, members);
            }
            std::sort(ordered.begin(), ordered.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            for (auto& [min_id, members] : ordered) {
                (void)min_id;
                // Family guard: split products of one parent never remerge.
                std::sort(members.begin(), members.end());
                size_t keeper = members[0];
                for (size_t i = 1; i < members.size(); i++) {
                    size_t victim = members[i];
                    if (groups[victim].gates.empty() || groups[keeper].gates.empty())
                        continue;
                    if (groups[victim].split_family >= 0 &&
                        groups[victim].split_family == groups[keeper].split_family)
                        continue;
                    for (GateId id : groups[victim].gates)
                        group_of[id] = keeper;
                    groups[keeper].gates.insert(groups[victim].gates.begin(), groups[victim].gates.end());
                    if (groups[keeper].split_family < 0)
                        groups[keeper].split_family = groups[victim].split_family;
                    groups[victim].gates.clear();
                    changed = true;
                }
                if (changed) {
                    std::ostringstream os;
                    os << "round " << res.rounds << ": merged " << members.size() << " groups by "
                       << (side == 0 ? "predecessors" : "successors");
                    res.log.push_back(os.str());
                }
            }
        }

        // Split phase: a group whose successor (or predecessor) side
        // partitions into word structures whose widths sum to its size.
        if (!changed) {
            for (size_t gi = 0; gi < groups.size() && !changed; gi++) {
                Work& w = groups[gi];
                if (w.locked || w.gates.size() < 2)
                    continue;
                for (int side = 0; side < 2 && !changed; side++) {
                    std::map<std::set<std::pair<int, uint32_t>>, std::vector<GateId>> blocks;
                    for (GateId id : w.gates)
                        blocks[mapped_tokens(side == 1 ? traits.at(id).preds : traits.at(id).succs, gi)]
                            .push_back(id);
                    if (blocks.size() < 2)
                        continue;
                    // Every block must align with a single word structure of
                    // the same width.
                    bool ok = true;
                    for (auto& [key, members] : blocks) {
                        if (key.size() != 1) {
                            ok = false;
                            break;
                        }
                        auto [kind, id] = *key.begin();
                        size_t width = 0;
                        if (kind == 100) {
                            width = groups[id].gates.size();
                        } else if (kind == int(Token::Anchor)) {
                            const ModuleGroup* a = anchors[id];
                            width = a->gates.size();
                            for (const GroupPinGroup& pg : a->pin_groups)
                                width = std::max(width, pg.pins.size());
                        } else {
                            ok = false;
                            break;
                        }
                        if (members.size() != width) {
                            ok = false;
                            break;
                        }
                    }
                    if (!ok)
                        continue;
                    // Apply the split.
                    int family = split_families++;
                    bool first = true;
                    for (auto& [key, members] : blocks) {
                        (void)key;
                        if (first) {
                            w.gates = std::set<GateId>(members.begin(), members.end());
                            w.split_family = family;
                            first = false;
                            continue;
                        }
                        Work nw;
                        nw.split_family = family;
                        nw.provenance = "split";
                        for (GateId id : members) {
                            nw.gates.insert(id);
                            group_of[id] = groups.size();
                        }
                        groups.push_back(std::move(nw));
                    }
                    std::ostringstream os;
                    os << "round " << res.rounds << ": split a group of "
                       << std::accumulate(blocks.begin(), blocks.end(), size_t(0),
                                          [](size_t acc, const auto& b) { return acc + b.second.size(); })
                       << " by " << (side == 0 ? "successors" : "predecessors") << " into " << blocks.size();
                    res.log.push_back(os.str());
                    changed = true;
                }
            }
        }

        if (!changed)
            break;
    }

    // Emit module groups in deterministic order (min gate id).
    std::vector<size_t> order;
    for (size_t gi = 0; gi < groups.size(); gi++)
        if (!groups[gi].gates.empty())
            order.push_back(gi);
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return *groups[a].gates.begin() < *groups[b].gates.begin(); });

    const char* prefix = target == TargetKind::Register ? "reg" : "mux";
    for (size_t rank = 0; rank < order.size(); rank++) {
        const Work& w = groups[order[rank]];
        ModuleGroup g;
        g.kind = target_kind;
        g.locked = w.locked;
        g.name = std::string(prefix) + std::to_string(rank);
        g.gates = w.gates;
        // Pin groups for bit-order propagation, ascending gate id.
        auto add_pins = [&](const char* name, auto pin_of) {
            GroupPinGroup pg;
            pg.name = name;
            for (GateId id : w.gates) {
                int p = pin_of(nl.gate(id));
                if (p >= 0 && nl.gate(id).endpoints[size_t(p)] != kInvalidId)
                    pg.pins.push_back({id, uint32_t(p), std::nullopt});
            }
            if (!pg.pins.empty())
                g.pin_groups.push_back(std::move(pg));
        };
        if (target == TargetKind::Register) {
            add_pins("D", [](const Gate& gg) { return gg.type->pin_index("D"); });
            add_pins("Q", [](const Gate& gg) { return gg.type->pin_index("Q"); });
        } else {
            add_pins("A", [](const Gate& gg) { return gg.type->pin_index("A"); });
            add_pins("B", [](const Gate& gg) { return gg.type->pin_index("B"); });
            add_pins("O", [](const Gate& gg) { return gg.type->pin_index("Y"); });
        }
        if (w.gates.size() < 2)
            res.small_groups.push_back(res.groups.size());
        res.groups.push_back(std::move(g));
    }
    return res;
}

GroupingMetrics grouping_metrics(const Netlist& nl, const std::vector<ModuleGroup>& groups,
                                 const std::map<std::string, std::string>& labels) {
    // Restrict both partitions to gates carrying a label.
    std::map<GateId, std::string> truth;
    for (const ModuleGroup& g : groups)
        for (GateId id : g.gates) {
            auto it = labels.find(nl.gate(id).name);
            if (it != labels.end())
                truth.emplace(id, it->second);
        }
    if (truth.empty())
        throw NetlistError("no labeled gate overlaps the grouping");

    GroupingMetrics m;
    m.labeled_gates = truth.size();
    double n = double(truth.size());

    std::map<std::string, size_t> label_count;
    std::vector<std::map<std::string, size_t>> joint(groups.size());
    std::vector<size_t> group_count(groups.size(), 0);
    for (size_t gi = 0; gi < groups.size(); gi++)
        for (GateId id : groups[gi].gates) {
            auto it = truth.find(id);
            if (it == truth.end())
                continue;
            label_count[it->second]++;
            joint[gi][it->second]++;
            group_count[gi]++;
        }

    double h_group = 0, h_label = 0, mi = 0, purity_sum = 0;
    for (size_t gi = 0; gi < groups.size(); gi++) {
        if (group_count[gi] == 0)
            continue;
        double pg = double(group_count[gi]) / n;
        h_group -= pg * std::log2(pg);
        size_t best = 0;
        for (auto& [label, cnt] : joint[gi]) {
            best = std::max(best, cnt);
            double pxy = double(cnt) / n;
            double px = double(group_count[gi]) / n;
            double py = double(label_count[label]) / n;
            mi += pxy * std::log2(pxy / (px * py));
        }
        purity_sum += double(best);
    }
    for (auto& [label, cnt] : label_count) {
        double pl = double(cnt) / n;
        h_label -= pl * std::log2(pl);
    }
    m.purity = purity_sum / n;
    if (h_group + h_label <= 0)
        m.nmi = 1.0; // both partitions trivial and identical
    else
        m.nmi = 2.0 * mi / (h_group + h_label);
    return m;
}

std::map<size_t, size_t> mux_size_histogram(const std::vector<ModuleGroup>& groups) {
    std::map<size_t, size_t> hist;
    for (const ModuleGroup& g : groups)
        if (g.kind == GroupKind::WordMux)
            hist[g.gates.size()]++;
    return hist;
}

} // namespace nlre
