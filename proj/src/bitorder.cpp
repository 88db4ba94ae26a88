#include "nlre/bitorder.hpp"

#include <algorithm>
#include <sstream>

namespace nlre {

namespace {

bool self_conflicting(const IndexRecord& r) {
    std::set<uint32_t> seen;
    for (const auto& idx : r.indices)
        if (idx && !seen.insert(*idx).second)
            return true;
    return false;
}

bool complete(const IndexRecord& r) {
    for (const auto& idx : r.indices)
        if (!idx)
            return false;
    return true;
}

// Contiguity check plus rebase to 0; empty result on failure.
std::optional<std::vector<uint32_t>> rebase(const std::vector<uint32_t>& order) {
    if (order.empty())
        return std::nullopt;
    uint32_t lo = *std::min_element(order.begin(), order.end());
    std::set<uint32_t> seen;
    std::vector<uint32_t> out;
    for (uint32_t v : order) {
        uint32_t r = v - lo;
        if (r >= order.size() || !seen.insert(r).second)
            return std::nullopt;
        out.push_back(r);
    }
    return out;
}

} // namespace

ConsensusResult consensus(const std::vector<IndexRecord>& records, size_t group_size) {
    ConsensusResult res;
    std::vector<const IndexRecord*> clean;
    for (const IndexRecord& r : records)
        if (!self_conflicting(r))
            clean.push_back(&r);

    // Exact agreement: the clean records agree pointwise and cover every pin.
    if (!clean.empty()) {
        std::vector<std::optional<uint32_t>> combined(group_size);
        bool agree = true;
        for (const IndexRecord* r : clean) {
            for (size_t p = 0; p < group_size && agree; p++) {
                if (!r->indices[p])
                    continue;
                if (combined[p] && *combined[p] != *r->indices[p])
                    agree = false;
                else
                    combined[p] = r->indices[p];
            }
            if (!agree)
                break;
        }
        if (agree) {
            std::vector<uint32_t> order;
            bool full = true;
            for (auto& v : combined) {
                if (!v)
                    full = false;
                else
                    order.push_back(*v);
            }
            if (full) {
                if (auto r = rebase(order)) {
                    res.ok = true;
                    res.order = *r;
                    res.mechanism = "exact";
                    return res;
                }
            }
        }
    }

    // Shifted consensus: complete clean records that are shifted variants of
    // each other annotate the order rebased to index 0.
    {
        std::vector<const IndexRecord*> full;
        for (const IndexRecord* r : clean)
            if (complete(*r))
                full.push_back(r);
        if (full.size() >= 2) {
            bool shifted = true;
            for (size_t i = 1; i < full.size() && shifted; i++) {
                int64_t delta = int64_t(*full[i]->indices[0]) - int64_t(*full[0]->indices[0]);
                for (size_t p = 0; p < group_size; p++)
                    if (int64_t(*full[i]->indices[p]) - int64_t(*full[0]->indices[p]) != delta)
                        shifted = false;
            }
            if (shifted) {
                std::vector<uint32_t> order;
                for (auto& v : full[0]->indices)
                    order.push_back(*v);
                if (auto r = rebase(order)) {
                    res.ok = true;
                    res.order = *r;
                    res.mechanism = "shifted";
                    return res;
                }
            }
        }
    }

    // Majority: per-pin plurality over clean records, all pins or nothing.
    {
        std::vector<uint32_t> order;
        bool all = true;
        for (size_t p = 0; p < group_size && all; p++) {
            std::map<uint32_t, size_t> votes;
            for (const IndexRecord* r : clean)
                if (r->indices[p])
                    votes[*r->indices[p]]++;
            uint32_t best = 0;
            size_t best_count = 0;
            bool unique = false;
            for (auto& [idx, cnt] : votes) {
                if (cnt > best_count) {
                    best = idx;
                    best_count = cnt;
                    unique = true;
                } else if (cnt == best_count) {
                    unique = false;
                }
            }
            if (!unique || best_count == 0)
                all = false;
            else
                order.push_back(best);
        }
        if (all) {
            if (auto r = rebase(order)) {
                res.ok = true;
                res.order = *r;
                res.mechanism = "majority";
                return res;
            }
        }
    }

    // Iterative majority: records conflicting with themselves are ignored
    // until masking the already-annotated pins resolves their conflict; each
    // iteration annotates the per-pin majority over the pins still missing
    // an index.
    {
        std::vector<std::optional<uint32_t>> assigned(group_size);
        std::set<uint32_t> used;
        bool progress = true;
        while (progress) {
            progress = false;
            // Mask: drop entries for assigned pins and used indices.
            std::vector<IndexRecord> masked;
            for (const IndexRecord& r : records) {
                IndexRecord m;
                m.indices.resize(group_size);
                for (size_t p = 0; p < group_size; p++) {
                    if (assigned[p] || !r.indices[p])
                        continue;
                    if (used.count(*r.indices[p]))
                        continue;
                    m.indices[p] = r.indices[p];
                }
                if (!self_conflicting(m))
                    masked.push_back(std::move(m));
            }
            for (size_t p = 0; p < group_size; p++) {
                if (assigned[p])
                    continue;
                std::map<uint32_t, size_t> votes;
                for (const IndexRecord& r : masked)
                    if (r.indices[p])
                        votes[*r.indices[p]]++;
                uint32_t best = 0;
                size_t best_count = 0;
                bool unique = false;
                for (auto& [idx, cnt] : votes) {
                    if (cnt > best_count) {
                        best = idx;
                        best_count = cnt;
                        unique = true;
                    } else if (cnt == best_count) {
                        unique = false;
                    }
                }
                if (unique && best_count > 0 && !used.count(best)) {
                    assigned[p] = best;
                    used.insert(best);
                    progress = true;
                }
            }
        }
        std::vector<uint32_t> order;
        bool full = true;
        for (auto& v : assigned) {
            if (!v)
                full = false;
            else
                order.push_back(*v);
        }
        if (full) {
            if (auto r = rebase(order)) {
                res.ok = true;
                res.order = *r;
                res.mechanism = "iterative-majority";
                return res;
            }
        }
    }
    return res;
}

void seed_word_structures(Netlist& nl) {
    std::set<GateId> covered;
    for (const ModuleGroup& g : nl.groups())
        if (g.kind == GroupKind::Bram || g.kind == GroupKind::Dsp)
            covered.insert(g.gates.begin(), g.gates.end());
    std::vector<ModuleGroup> fresh;
    for (const Gate& g : nl.gates()) {
        bool is_bram = g.category() == GateCategory::Bram;
        bool is_dsp = g.category() == GateCategory::Dsp;
        if ((!is_bram && !is_dsp) || covered.count(g.id))
            continue;
        ModuleGroup mg;
        mg.name = g.name;
        mg.kind = is_bram ? GroupKind::Bram : GroupKind::Dsp;
        mg.locked = true;
        mg.gates.insert(g.id);
        for (const PinGroupSpec& spec : g.type->pin_groups) {
            GroupPinGroup pg;
            pg.name = spec.name;
            size_t n = spec.pins.size();
            for (size_t k = 0; k < n; k++) {
                int pin = g.type->pin_index(spec.pins[k]);
                if (pin < 0 || g.endpoints[size_t(pin)] == kInvalidId)
                    continue;
                // Descending declarations normalize to ascending indices.
                uint32_t index = spec.ascending ? uint32_t(k) : uint32_t(n - 1 - k);
                pg.pins.push_back({g.id, uint32_t(pin), index});
            }
            if (!pg.pins.empty())
                mg.pin_groups.push_back(std::move(pg));
        }
        fresh.push_back(std::move(mg));
    }
    for (ModuleGroup& g : fresh)
        nl.add_group(std::move(g));
}

namespace {

struct PinGroupKey {
    size_t group;
    size_t pin_group;
    bool operator<(const PinGroupKey& o) const {
        return std::tie(group, pin_group) < std::tie(o.group, o.pin_group);
    }
};

bool fully_ordered(const GroupPinGroup& pg) {
    for (const GroupPin& p : pg.pins)
        if (!p.index)
            return false;
    return !pg.pins.empty();
}

// Order-preserving closure from a net: identity-like single-bit hops only.
void closure(const Netlist& nl, NetId start, const std::set<NetId>& control, std::set<NetId>& out) {
    if (nl.is_const_net(start) || control.count(start) || !out.insert(start).second)
        return;
    const Net& net = nl.net(start);
    auto hop = [&](NetId next) {
        if (next != kInvalidId)
            closure(nl, next, control, out);
    };
    // Forward through consumers.
    for (const Endpoint& d : net.destinations) {
        const Gate& g = nl.gate(d.gate);
        const std::string& type = g.type->name;
        const std::string& pin = g.type->pins[d.pin].name;
        if (type == "BUF" || type == "INV")
            hop(g.endpoints[size_t(g.type->pin_index("Y"))]);
        else if (type == "MUX2" && (pin == "A" || pin == "B"))
            hop(g.endpoints[size_t(g.type->pin_index("Y"))]);
        else if (g.category() == GateCategory::Ff && pin == "D")
            hop(g.endpoints[size_t(g.type->pin_index("Q"))]);
    }
    // Backward through the driver.
    if (!net.sources.empty()) {
        const Gate& g = nl.gate(net.sources[0].gate);
        const std::string& type = g.type->name;
        if (type == "BUF" || type == "INV") {
            hop(g.endpoints[size_t(g.type->pin_index("A"))]);
        } else if (type == "MUX2") {
            hop(g.endpoints[size_t(g.type->pin_index("A"))]);
            hop(g.endpoints[size_t(g.type->pin_index("B"))]);
        } else if (g.category() == GateCategory::Ff) {
            hop(g.endpoints[size_t(g.type->pin_index("D"))]);
        }
    }
}

} // namespace

BitorderResult propagate_bitorder(Netlist& nl, const std::set<NetId>& control_nets, const BitorderConfig& cfg) {
    BitorderResult res;
    auto& groups = nl.mutable_groups();

    std::set<PinGroupKey> ordered, initially;
    for (size_t gi = 0; gi < groups.size(); gi++)
        for (size_t pg = 0; pg < groups[gi].pin_groups.size(); pg++)
            if (fully_ordered(groups[gi].pin_groups[pg])) {
                ordered.insert({gi, pg});
                initially.insert({gi, pg});
            }

    std::map<PinGroupKey, std::pair<std::string, size_t>> mechanisms; // mechanism, round

    for (res.rounds = 1; res.rounds <= cfg.max_rounds; res.rounds++) {
        // Net -> (origin pin group, index) lookup over the groups ordered at
        // the start of this round; annotation happens at round end.
        std::map<NetId, std::vector<std::pair<PinGroupKey, uint32_t>>> net_index;
        for (const PinGroupKey& key : ordered) {
            const GroupPinGroup& pg = groups[key.group].pin_groups[key.pin_group];
            for (const GroupPin& p : pg.pins) {
                NetId n = nl.gate(p.gate).endpoints[p.pin];
                if (n != kInvalidId && p.index)
                    net_index[n].emplace_back(key, *p.index);
            }
        }

        struct Pending {
            PinGroupKey key;
            std::vector<uint32_t> order;
            std::string mechanism;
        };
        std::vector<Pending> pending;

        for (size_t gi = 0; gi < groups.size(); gi++) {
            if (groups[gi].kind == GroupKind::Control)
                continue; // control carries no natural bit order
            for (size_t pgi = 0; pgi < groups[gi].pin_groups.size(); pgi++) {
                PinGroupKey key{gi, pgi};
                if (ordered.count(key))
                    continue;
                GroupPinGroup& pg = groups[gi].pin_groups[pgi];
                size_t n = pg.pins.size();
                if (n < 2)
                    continue;
                // Gather per-origin records.
                std::map<PinGroupKey, std::vector<std::set<uint32_t>>> raw;
                for (size_t p = 0; p < n; p++) {
                    NetId net = nl.gate(pg.pins[p].gate).endpoints[pg.pins[p].pin];
                    if (net == kInvalidId || control_nets.count(net))
                        continue;
                    std::set<NetId> cl;
                    closure(nl, net, control_nets, cl);
                    for (NetId cn : cl) {
                        auto it = net_index.find(cn);
                        if (it == net_index.end())
                            continue;
                        for (auto& [origin, idx] : it->second) {
                            if (origin.group == gi)
                                continue; // own annotations do not feed back
                            auto& rec = raw[origin];
                            rec.resize(n);
                            rec[p].insert(idx);
                        }
                    }
                }
                if (raw.empty())
                    continue;
                std::vector<IndexRecord> records;
                for (auto& [origin, sets] : raw) {
                    IndexRecord r;
                    r.indices.resize(n);
                    for (size_t p = 0; p < n; p++)
                        if (sets[p].size() == 1)
                            r.indices[p] = *sets[p].begin(); // ambiguous pins stay missing
                    records.push_back(std::move(r));
                }
                ConsensusResult c = consensus(records, n);
                if (c.ok)
                    pending.push_back({key, c.order, c.mechanism});
            }
        }

        if (pending.empty())
            break;
        for (Pending& p : pending) {
            GroupPinGroup& pg = groups[p.key.group].pin_groups[p.key.pin_group];
            for (size_t i = 0; i < pg.pins.size(); i++)
                pg.pins[i].index = p.order[i];
            ordered.insert(p.key);
            mechanisms[p.key] = {p.mechanism, res.rounds};
            std::ostringstream os;
            os << "round " << res.rounds << ": ordered " << groups[p.key.group].name << "."
               << pg.name << " by " << p.mechanism;
            res.log.push_back(os.str());
        }
    }

    for (size_t gi = 0; gi < groups.size(); gi++) {
        for (size_t pgi = 0; pgi < groups[gi].pin_groups.size(); pgi++) {
            const GroupPinGroup& pg = groups[gi].pin_groups[pgi];
            BitorderEntry e;
            e.group = groups[gi].name;
            e.pin_group = pg.name;
            e.pins = pg.pins.size();
            PinGroupKey key{gi, pgi};
            e.ordered = ordered.count(key) != 0;
            e.initially_ordered = initially.count(key) != 0;
            auto m = mechanisms.find(key);
            if (m != mechanisms.end()) {
                e.mechanism = m->second.first;
                e.round = m->second.second;
            }
            if (e.ordered) {
                e.nets_by_index.assign(pg.pins.size(), "");
                for (const GroupPin& p : pg.pins) {
                    NetId n = nl.gate(p.gate).endpoints[p.pin];
                    if (p.index && *p.index < e.nets_by_index.size())
                        e.nets_by_index[*p.index] = n == kInvalidId ? "" : nl.net(n).name;
                }
            }
            res.entries.push_back(std::move(e));
        }
    }
    return res;
}

BitorderScore score_bitorder(const Netlist& nl, const BitorderResult& result,
                             const std::map<std::string, std::map<std::string, std::vector<std::string>>>& truth,
                             size_t min_pins) {
    (void)nl;
    BitorderScore s;
    // Index truth entries by their net-name set.
    std::map<std::set<std::string>, const std::vector<std::string>*> truth_by_nets;
    for (const auto& [label, pgs] : truth)
        for (const auto& [pgname, nets] : pgs)
            truth_by_nets[{nets.begin(), nets.end()}] = &nets;

    for (const BitorderEntry& e : result.entries) {
        if (e.pins < min_pins)
            continue;
        s.considered++;
        if (!e.ordered)
            continue;
        s.ordered++;
        std::set<std::string> nets(e.nets_by_index.begin(), e.nets_by_index.end());
        auto it = truth_by_nets.find(nets);
        if (it == truth_by_nets.end())
            continue;
        s.with_truth++;
        if (*it->second == e.nets_by_index)
            s.correct++;
    }
    s.ordered_fraction = s.considered ? double(s.ordered) / double(s.considered) : 0.0;
    s.correct_fraction = s.with_truth ? double(s.correct) / double(s.with_truth) : 0.0;
    return s;
}

} // namespace nlre
