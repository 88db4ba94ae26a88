#pragma once

#include "nlre/boolfunc.hpp"
#include "nlre/netlist.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace nlre {

/// Maximal run of connected carry primitives. For CARRY4 every block
/// contributes four bit positions.
struct CarryChain {
    std::vector<GateId> gates; // chain order, head (external carry-in) first
    std::vector<std::pair<GateId, uint32_t>> positions; // bit position -> (gate, sub-position)
};

std::vector<CarryChain> find_carry_chains(const Netlist& nl);

struct StructuralCandidate {
    size_t chain_index = 0;
    int pred_layers = 0;
    int succ_layers = 0;
    std::set<GateId> gates;
    std::vector<NetId> inputs;  // boundary nets feeding the set, ascending
    std::vector<NetId> outputs; // boundary nets leaving the set, ascending
    /// Lowest chain position each input reaches inside the candidate;
    /// structural ranking hint only, never a decision input.
    std::map<NetId, uint32_t> input_position_hint;
    /// Which operand-side chain pin a net feeds directly (0 = I0/DI,
    /// 1 = I1/S); canonicalizes labelings the functional check leaves free.
    std::map<NetId, int> operand_side_hint;
    std::map<NetId, uint32_t> output_position_hint;
    std::set<NetId> carry_out_nets; // driven by carry-out-role pins
};

struct ArithConfig {
    int expansion_layers = 2;
    size_t control_cap = 6;
    size_t width_cap = 33; // 32-bit word plus carry
    size_t variant_cap = 256;
    EquivBudget budget;
    size_t oracle_vectors = 1000; // simulation soundness oracle

    ArithConfig() {
        // Candidates are pre-screened with random vectors already; keep the
        // decision procedure's own random phase short.
        budget.random_vectors = 24;
    }
};

std::vector<StructuralCandidate> build_structural_candidates(const CarryChain& chain, size_t chain_index,
                                                             const Netlist& nl, const ArithConfig& cfg,
                                                             std::vector<std::string>* log = nullptr);

enum class ModelKind { Counter, Negation, ConstMul, Addition, Subtraction, Comparator, Unknown };
enum class CmpOp { Eq, Lt, Le };

const char* to_string(ModelKind k);
const char* to_string(CmpOp c);

struct ArithmeticModel {
    ModelKind kind = ModelKind::Unknown;
    size_t width = 0;       // operand width
    bool carry_out = false; // outputs include the top carry bit
    int64_t increment = 0;  // counter / addition-with-constant
    int64_t factor = 0;     // const-mul
    CmpOp cmp = CmpOp::Eq;
    bool cmp_is_signed = false;

    std::string describe() const;
};

/// One candidate interpretation: ordered outputs, per-bit-position input
/// nets (arity 1 or 2), and the control set left outside the operands.
struct FunctionalCandidate {
    size_t arity = 2;
    std::vector<NetId> outputs; // LSB first
    std::vector<BoolFunc> output_funcs;
    std::vector<std::vector<NetId>> positions; // LSB first, one vector of arity nets per bit
    std::vector<NetId> controls;
};

struct FunctionalCandidateSet {
    std::vector<FunctionalCandidate> candidates;
    bool capped = false;
    std::vector<std::string> log;
};

/// Functional-heuristic candidate derivation: inputs ordered by influence
/// count descending (the LSB influences every output), outputs by support
/// size ascending. Ties fan out into multiple variations up to the cap.
FunctionalCandidateSet derive_functional_candidates(const StructuralCandidate& cand, const Netlist& nl,
                                                    const ArithConfig& cfg);

enum class VerifyStatus { Verified, Undecided };

struct ControlOutcome {
    std::map<NetId, bool> assignment;
    bool constant_outputs = false; // all outputs constant under the assignment
    std::optional<ArithmeticModel> model;
};

struct ArithmeticStructure {
    std::set<GateId> gates;
    ArithmeticModel model;
    std::vector<std::vector<NetId>> operands; // A then optionally B, LSB first
    std::vector<NetId> outputs;               // LSB first
    std::map<NetId, bool> control_assignment;  // assignment under which the model holds
    std::vector<ControlOutcome> outcomes;      // every assignment probed
    VerifyStatus status = VerifyStatus::Verified;
    std::vector<ModelKind> also_matches; // lower-priority models that also verified
};

/// Enumerates control assignments and checks per-output equivalence against
/// the bit-blasted model library, most specific model first. Budget
/// exhaustion yields an undecided structure rather than a silent miss.
std::optional<ArithmeticStructure> verify_candidate(const FunctionalCandidate& cand, const StructuralCandidate& sc,
                                                    const Netlist& nl, const ArithConfig& cfg,
                                                    std::vector<std::string>* log = nullptr);

struct ArithSummary {
    size_t chains_total = 0;
    size_t chains_verified = 0;
    size_t chains_undecided = 0;
    std::map<std::string, size_t> per_model; // keyed by model-kind name
    size_t combinational_gates = 0;
    size_t classified_gates = 0;
    double classified_fraction = 0.0;
    std::vector<std::string> log;
};

struct ArithResult {
    std::vector<ArithmeticStructure> structures;
    ArithSummary summary;
};

/// Full phase-1 / phase-2 pipeline over every carry chain.
ArithResult classify_arithmetic(const Netlist& nl, const ArithConfig& cfg = {});

/// Simulation soundness oracle: drives `vectors` random operand pairs
/// through the structure's subgraph with the recorded control assignment
/// and compares with the model's integer arithmetic. Returns the number of
/// mismatches.
size_t arithmetic_oracle_mismatches(const ArithmeticStructure& s, const Netlist& nl, size_t vectors,
                                    uint64_t seed = 1);

/// Adds the verified structures as arithmetic module groups with ordered
/// operand/output pin groups (bit-order seeds for later passes).
void annotate_arithmetic(Netlist& nl, const std::vector<ArithmeticStructure>& structures);

} // namespace nlre
