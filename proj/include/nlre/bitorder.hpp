#pragma once

#include "nlre/netlist.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace nlre {

/// One origin's index proposal for a pin group: per pin an index or missing.
struct IndexRecord {
    std::vector<std::optional<uint32_t>> indices;
};

struct ConsensusResult {
    bool ok = false;
    std::vector<uint32_t> order; // rebased to start at 0
    std::string mechanism;       // exact | shifted | majority | iterative-majority
};

/// Applies the consensus mechanisms in order: exact agreement, shifted,
/// majority (all pins or nothing), iterative majority (self-conflicting
/// records masked, then per-pin majority over the pins still missing an
/// index, iterated). The annotated order is always a permutation of 0..n-1.
ConsensusResult consensus(const std::vector<IndexRecord>& records, size_t group_size);

struct BitorderConfig {
    size_t max_rounds = 20;
};

struct BitorderEntry {
    std::string group;
    std::string pin_group;
    size_t pins = 0;
    bool ordered = false;
    bool initially_ordered = false;
    std::string mechanism; // empty for initial orders
    size_t round = 0;      // round at which the order was annotated
    /// Net name per index slot (LSB first) once ordered.
    std::vector<std::string> nets_by_index;
};

struct BitorderResult {
    std::vector<BitorderEntry> entries;
    size_t rounds = 0;
    std::vector<std::string> log;
};

/// Creates locked word groups for BRAM/DSP gates from their type-declared
/// pin groups (bit-order seeds). Descending declarations normalize to
/// ascending indices.
void seed_word_structures(Netlist& nl);

/// Propagates bit orders from ordered pin groups to unordered ones through
/// order-preserving paths (BUF/INV, MUX2 data pins, FF D-to-Q, shared nets),
/// running consensus per group per round until a fixpoint or the round cap.
/// Control nets are never traversed. Updates the netlist groups' pin
/// indices in place.
BitorderResult propagate_bitorder(Netlist& nl, const std::set<NetId>& control_nets, const BitorderConfig& cfg = {});

struct BitorderScore {
    size_t considered = 0; // pin groups evaluated
    size_t ordered = 0;
    size_t with_truth = 0; // ordered groups a truth order exists for
    size_t correct = 0;
    double ordered_fraction = 0.0;
    double correct_fraction = 0.0;
};

/// Compares annotated orders with construction truth. Truth maps group label
/// -> pin group name -> net names LSB first; recovered groups match truth
/// entries by net-name set. Registers with more than `min_ff` member pins
/// are considered; shifted-but-contiguous matches count as correct only if
/// the rebased form matches exactly.
BitorderScore score_bitorder(const Netlist& nl, const BitorderResult& result,
                             const std::map<std::string, std::map<std::string, std::vector<std::string>>>& truth,
                             size_t min_pins = 4);

} // namespace nlre
