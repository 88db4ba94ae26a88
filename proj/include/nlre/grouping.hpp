#pragma once

#include "nlre/netlist.hpp"

#include <map>
#include <string>
#include <vector>

namespace nlre {

enum class TargetKind { Register, Mux };

struct GroupingConfig {
    /// strict: control signatures must match on every role. loose: reset and
    /// set nets are ignored when comparing.
    bool loose_signature = false;
    size_t max_rounds = 50;
};

struct GroupingResult {
    /// Partition of the target gates. Locked seed groups come through
    /// bit-identical.
    std::vector<ModuleGroup> groups;
    /// Indices of groups below the word-level threshold (fewer than 2
    /// gates); still part of the partition but excluded from the word layer.
    std::vector<size_t> small_groups;
    size_t rounds = 0;
    std::vector<std::string> log; // merge/split provenance
};

/// Iterative word-level recovery over one target gate type. Known groups of
/// the target kind seed locked groups; groups of any other kind (arithmetic,
/// BRAM, DSP words, earlier register runs) act as structural anchors that
/// predecessor/successor tracing stops at.
GroupingResult group_gates(const Netlist& nl, TargetKind target, const std::vector<ModuleGroup>& known_groups,
                           const GroupingConfig& cfg = {});

struct GroupingMetrics {
    double nmi = 0.0;
    double purity = 0.0;
    size_t labeled_gates = 0;
};

/// NMI (2 I(X;Y) / (H(X)+H(Y))) and purity restricted to gates that carry a
/// ground-truth label. Throws when no labeled gate intersects the grouping.
GroupingMetrics grouping_metrics(const Netlist& nl, const std::vector<ModuleGroup>& groups,
                                 const std::map<std::string, std::string>& labels);

/// Word-size histogram of recovered MUX groups (size -> count).
std::map<size_t, size_t> mux_size_histogram(const std::vector<ModuleGroup>& groups);

} // namespace nlre
