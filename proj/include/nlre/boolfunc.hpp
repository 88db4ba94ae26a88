#pragma once

#include "nlre/bitvec.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace nlre {

/// Variables are net ids. Functions are immutable expression DAGs with
/// light local simplification on construction; semantic questions go
/// through truth tables (small support) or a reduced ordered BDD with a
/// node budget (large support).
class BoolFunc {
public:
    enum class Op : uint8_t { Const, Var, Not, And, Or, Xor, Ite };

    struct Node;
    using Ref = std::shared_ptr<const Node>;

    struct Node {
        Op op;
        bool value = false;        // Const
        uint32_t var = 0;          // Var
        Ref a, b, c;               // operands; Ite uses all three (a ? b : c)
    };

    BoolFunc(); // constant false

    static BoolFunc constant(bool v);
    static BoolFunc var(uint32_t v);
    static BoolFunc negate(const BoolFunc& f);
    static BoolFunc and2(const BoolFunc& f, const BoolFunc& g);
    static BoolFunc or2(const BoolFunc& f, const BoolFunc& g);
    static BoolFunc xor2(const BoolFunc& f, const BoolFunc& g);
    static BoolFunc ite(const BoolFunc& s, const BoolFunc& t, const BoolFunc& e);

    /// Function whose truth table equals `init`: output for input vector v
    /// is init bit sum(v_i * 2^i), with input_vars[0] as bit 0.
    static BoolFunc from_lut_init(const BitVec& init, const std::vector<uint32_t>& input_vars);

    bool is_const() const { return node_->op == Op::Const; }
    bool const_value() const { return node_->value; }
    bool is_var() const { return node_->op == Op::Var; }
    uint32_t var_id() const { return node_->var; }
    const Ref& node() const { return node_; }

    /// Exact semantic support, ascending. Syntactic support is computed
    /// first; variables whose cofactors coincide are dropped.
    std::vector<uint32_t> support() const;

    /// Variables mentioned in the DAG, ascending; may overapproximate the
    /// semantic support.
    std::vector<uint32_t> syntactic_support() const;

    BoolFunc cofactor(uint32_t var, bool value) const;
    BoolFunc substitute(const std::map<uint32_t, BoolFunc>& assignment) const;
    bool evaluate(const std::map<uint32_t, bool>& assignment) const;

    /// Truth table over the given variable order (vars[0] is bit 0 of the
    /// row index). Requires vars.size() <= 20.
    BitVec truth_table(const std::vector<uint32_t>& vars) const;

    bool depends_on(uint32_t var) const;

    size_t dag_size() const;

private:
    explicit BoolFunc(Ref n) : node_(std::move(n)) {}
    Ref node_;
};

enum class EquivStatus { Equal, NotEqual, Undecided };

struct EquivResult {
    EquivStatus status = EquivStatus::Undecided;
    /// Counterexample assignment over the union support when NotEqual.
    std::map<uint32_t, bool> counterexample;

    bool equal() const { return status == EquivStatus::Equal; }
};

struct EquivBudget {
    /// Supports up to this size are decided by exhaustive truth tables.
    size_t exhaustive_vars = 20;
    size_t random_vectors = 256;
    size_t bdd_node_budget = 4'000'000;
    uint64_t seed = 1;
};

/// Decides f == g over the union support. Exhaustive for small supports;
/// otherwise randomized counterexample search followed by a canonical BDD
/// comparison under the ascending-variable order. Never silently wrong:
/// blowing the node budget yields Undecided.
EquivResult check_equivalent(const BoolFunc& f, const BoolFunc& g, const EquivBudget& budget = {});

/// Number of functions in `outputs` whose two cofactors on `var` differ.
size_t influence_count(const std::vector<BoolFunc>& outputs, uint32_t var, const EquivBudget& budget = {});

/// Exact semantic supports for a family of functions, computed on one shared
/// canonical-form manager. nullopt when the node budget is exceeded.
std::optional<std::vector<std::vector<uint32_t>>> semantic_supports(const std::vector<BoolFunc>& funcs,
                                                                    const EquivBudget& budget = {});

/// Evaluates a family of functions under one assignment with a shared memo
/// table; missing variables read as false.
std::vector<bool> evaluate_all(const std::vector<BoolFunc>& funcs, const std::map<uint32_t, bool>& assignment);

} // namespace nlre
