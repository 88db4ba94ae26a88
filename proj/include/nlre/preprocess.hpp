#pragma once

#include "nlre/netlist.hpp"

#include <string>
#include <vector>

namespace nlre {

struct PreprocessReport {
    size_t luts_replaced = 0;
    size_t buffers_removed = 0;
    size_t muxes_extracted = 0;
    size_t primitives_emitted = 0;
    size_t duplicates_removed = 0;
    size_t other_simplifications = 0;
    size_t before_gates = 0;
    size_t after_gates = 0;
    std::vector<std::string> incidents;

    size_t removed() const {
        return luts_replaced + buffers_removed + duplicates_removed + other_simplifications;
    }
    size_t emitted() const { return muxes_extracted + primitives_emitted; }
    size_t changes() const { return removed() + emitted(); }

    PreprocessReport& operator+=(const PreprocessReport& o);
};

struct PassResult {
    Netlist netlist;
    PreprocessReport report;
};

/// Gates whose outputs fold to a constant get replaced by constant bindings;
/// gates that become single-input identities after folding are merged away.
/// Runs to a fixpoint.
PassResult propagate_constants(const Netlist& nl);

/// Removes gates whose output equals one of their inputs (identity) by net
/// merging, pairs up chained inverters, and sweeps dead combinational gates.
/// Drivers of global outputs are kept.
PassResult remove_buffers(const Netlist& nl);

/// Merges combinational gates computing the same function on the same input
/// nets (functional equality, not config equality). Sequential gates are
/// never merged. Fixpoint.
PassResult deduplicate_gates(const Netlist& nl);

/// Rewrites every LUT into primitive-library gates. Simple functions map to
/// single primitives (chains for wide AND/OR/XOR/XNOR); everything else goes
/// through recursive Shannon decomposition with MUX2 splits. Each cone is
/// verified equivalent before commit; failures keep the original and log an
/// incident. Carry gates are kept as-is: they anchor arithmetic
/// identification.
PassResult decompose_luts(const Netlist& nl);

/// Fixed pipeline order: constants, buffers, dedup, decompose, buffers,
/// dedup. Decomposition creates new merge opportunities.
PassResult preprocess_all(const Netlist& nl);

struct BoundaryCheckOptions {
    size_t exhaustive_input_limit = 16;
    size_t random_vectors = 1000;
    uint64_t seed = 1;
};

struct BoundaryCheck {
    bool ok = true;
    size_t checked = 0;
    std::vector<std::string> mismatches;
};

/// Compares the Boolean function of every sequential-gate input pin and
/// global output between two netlists related by a pass. Correspondence is
/// by gate/net name; frontier variables are matched by name as well.
BoundaryCheck compare_boundary_functions(const Netlist& before, const Netlist& after,
                                         const BoundaryCheckOptions& opts = {});

} // namespace nlre
