#include "nlre/boolfunc.hpp"

#include <algorithm>
#include <cstring>
#include <random>
#include <set>
#include <unordered_map>

namespace nlre {

namespace {

using Ref = BoolFunc::Ref;
using Op = BoolFunc::Op;

Ref make_node(Op op, bool value, uint32_t var, Ref a = nullptr, Ref b = nullptr, Ref c = nullptr) {
    auto n = std::make_shared<BoolFunc::Node>();
    n->op = op;
    n->value = value;
    n->var = var;
    n->a = std::move(a);
    n->b = std::move(b);
    n->c = std::move(c);
    return n;
}

const Ref& true_node() {
    static Ref n = make_node(Op::Const, true, 0);
    return n;
}

const Ref& false_node() {
    static Ref n = make_node(Op::Const, false, 0);
    return n;
}

bool node_is_const(const Ref& n, bool v) { return n->op == Op::Const && n->value == v; }

// Pointer-level complement test; catches the common patterns produced by
// cofactoring and substitution without full hash consing.
bool complements(const Ref& f, const Ref& g) {
    if (f->op == Op::Not && f->a == g)
        return true;
    if (g->op == Op::Not && g->a == f)
        return true;
    return false;
}

} // namespace

BoolFunc::BoolFunc() : node_(false_node()) {}

BoolFunc BoolFunc::constant(bool v) { return BoolFunc(v ? true_node() : false_node()); }

BoolFunc BoolFunc::var(uint32_t v) { return BoolFunc(make_node(Op::Var, false, v)); }

BoolFunc BoolFunc::negate(const BoolFunc& f) {
    if (f.node_->op == Op::Const)
        return constant(!f.node_->value);
    if (f.node_->op == Op::Not)
        return BoolFunc(f.node_->a);
    return BoolFunc(make_node(Op::Not, false, 0, f.node_));
}

BoolFunc BoolFunc::and2(const BoolFunc& f, const BoolFunc& g) {
    if (node_is_const(f.node_, false) || node_is_const(g.node_, false))
        return constant(false);
    if (node_is_const(f.node_, true))
        return g;
    if (node_is_const(g.node_, true))
        return f;
    if (f.node_ == g.node_)
        return f;
    if (complements(f.node_, g.node_))
        return constant(false);
    return BoolFunc(make_node(Op::And, false, 0, f.node_, g.node_));
}

BoolFunc BoolFunc::or2(const BoolFunc& f, const BoolFunc& g) {
    if (node_is_const(f.node_, true) || node_is_const(g.node_, true))
        return constant(true);
    if (node_is_const(f.node_, false))
        return g;
    if (node_is_const(g.node_, false))
        return f;
    if (f.node_ == g.node_)
        return f;
    if (complements(f.node_, g.node_))
        return constant(true);
    return BoolFunc(make_node(Op::Or, false, 0, f.node_, g.node_));
}

BoolFunc BoolFunc::xor2(const BoolFunc& f, const BoolFunc& g) {
    if (f.node_->op == Op::Const)
        return f.node_->value ? negate(g) : g;
    if (g.node_->op == Op::Const)
        return g.node_->value ? negate(f) : f;
    if (f.node_ == g.node_)
        return constant(false);
    if (complements(f.node_, g.node_))
        return constant(true);
    return BoolFunc(make_node(Op::Xor, false, 0, f.node_, g.node_));
}

BoolFunc BoolFunc::ite(const BoolFunc& s, const BoolFunc& t, const BoolFunc& e) {
    if (s.node_->op == Op::Const)
        return s.node_->value ? t : e;
    if (t.node_ == e.node_)
        return t;
    if (node_is_const(t.node_, true) && node_is_const(e.node_, false))
        return s;
    if (node_is_const(t.node_, false) && node_is_const(e.node_, true))
        return negate(s);
    if (node_is_const(e.node_, false))
        return and2(s, t);
    if (node_is_const(e.node_, true))
        return or2(negate(s), t);
    if (node_is_const(t.node_, false))
        return and2(negate(s), e);
    if (node_is_const(t.node_, true))
        return or2(s, e);
    return BoolFunc(make_node(Op::Ite, false, 0, s.node_, t.node_, e.node_));
}

BoolFunc BoolFunc::from_lut_init(const BitVec& init, const std::vector<uint32_t>& input_vars) {
    if (init.width() != (size_t(1) << input_vars.size()))
        throw std::invalid_argument("LUT init width " + std::to_string(init.width()) + " does not match " +
                                    std::to_string(input_vars.size()) + " inputs");
    // Recursive Shannon construction, memoized by sub-table so equal halves
    // share nodes and fold away.
    struct Builder {
        const std::vector<uint32_t>& vars;
        std::map<std::vector<bool>, BoolFunc> memo;

        BoolFunc build(const std::vector<bool>& table, size_t nvars) {
            bool all0 = true, all1 = true;
            for (bool b : table) {
                all0 &= !b;
                all1 &= b;
            }
            if (all0)
                return BoolFunc::constant(false);
            if (all1)
                return BoolFunc::constant(true);
            auto it = memo.find(table);
            if (it != memo.end())
                return it->second;
            size_t half = table.size() / 2;
            std::vector<bool> lo(table.begin(), table.begin() + half);
            std::vector<bool> hi(table.begin() + half, table.end());
            BoolFunc f = BoolFunc::ite(BoolFunc::var(vars[nvars - 1]), build(hi, nvars - 1), build(lo, nvars - 1));
            memo.emplace(table, f);
            return f;
        }
    };
    std::vector<bool> table(init.width());
    for (size_t i = 0; i < init.width(); i++)
        table[i] = init.get(i);
    Builder b{input_vars, {}};
    return b.build(table, input_vars.size());
}

namespace {

void collect_vars(const Ref& n, std::set<uint32_t>& vars, std::set<const BoolFunc::Node*>& seen) {
    if (!n || !seen.insert(n.get()).second)
        return;
    if (n->op == Op::Var)
        vars.insert(n->var);
    collect_vars(n->a, vars, seen);
    collect_vars(n->b, vars, seen);
    collect_vars(n->c, vars, seen);
}

bool eval_node(const BoolFunc::Node* n, const std::map<uint32_t, bool>& assignment,
               std::unordered_map<const BoolFunc::Node*, bool>& memo) {
    auto it = memo.find(n);
    if (it != memo.end())
        return it->second;
    bool r = false;
    switch (n->op) {
    case Op::Const: r = n->value; break;
    case Op::Var: {
        auto v = assignment.find(n->var);
        r = v != assignment.end() && v->second;
        break;
    }
    case Op::Not: r = !eval_node(n->a.get(), assignment, memo); break;
    case Op::And: r = eval_node(n->a.get(), assignment, memo) && eval_node(n->b.get(), assignment, memo); break;
    case Op::Or: r = eval_node(n->a.get(), assignment, memo) || eval_node(n->b.get(), assignment, memo); break;
    case Op::Xor: r = eval_node(n->a.get(), assignment, memo) != eval_node(n->b.get(), assignment, memo); break;
    case Op::Ite:
        r = eval_node(n->a.get(), assignment, memo) ? eval_node(n->b.get(), assignment, memo)
                                                    : eval_node(n->c.get(), assignment, memo);
        break;
    }
    memo.emplace(n, r);
    return r;
}

// Per-node truth tables as bit blocks, for exhaustive work up to 20 vars.
struct TableCtx {
    std::vector<uint32_t> vars; // ascending
    size_t words;
    std::unordered_map<const BoolFunc::Node*, std::vector<uint64_t>> memo;

    explicit TableCtx(std::vector<uint32_t> v) : vars(std::move(v)) {
        size_t rows = size_t(1) << vars.size();
        words = (rows + 63) / 64;
    }

    std::vector<uint64_t> var_pattern(uint32_t var) const {
        size_t pos = size_t(std::find(vars.begin(), vars.end(), var) - vars.begin());
        std::vector<uint64_t> t(words, 0);
        if (pos >= vars.size())
            return t; // absent variable: all zero
        size_t rows = size_t(1) << vars.size();
        if (pos < 6) {
            uint64_t w = 0;
            for (size_t i = 0; i < 64; i++)
                if ((i >> pos) & 1)
                    w |= uint64_t(1) << i;
            std::fill(t.begin(), t.end(), w);
        } else {
            size_t period_words = (size_t(1) << pos) / 64;
            for (size_t w = 0; w < t.size(); w++)
                if ((w / period_words) & 1)
                    t[w] = ~uint64_t(0);
        }
        if (rows < 64)
            t[0] &= (uint64_t(1) << rows) - 1;
        return t;
    }

    const std::vector<uint64_t>& table(const BoolFunc::Node* n) {
        auto it = memo.find(n);
        if (it != memo.end())
            return it->second;
        std::vector<uint64_t> t;
        size_t rows = size_t(1) << vars.size();
        switch (n->op) {
        case Op::Const:
            t.assign(words, n->value ? ~uint64_t(0) : 0);
            break;
        case Op::Var:
            t = var_pattern(n->var);
            break;
        case Op::Not: {
            t = table(n->a.get());
            for (auto& w : t)
                w = ~w;
            break;
        }
        case Op::And: {
            t = table(n->a.get());
            const auto& tb = table(n->b.get());
            for (size_t i = 0; i < t.size(); i++)
                t[i] &= tb[i];
            break;
        }
        case Op::Or: {
            t = table(n->a.get());
            const auto& tb = table(n->b.get());
            for (size_t i = 0; i < t.size(); i++)
                t[i] |= tb[i];
            break;
        }
        case Op::Xor: {
            t = table(n->a.get());
            const auto& tb = table(n->b.get());
            for (size_t i = 0; i < t.size(); i++)
                t[i] ^= tb[i];
            break;
        }
        case Op::Ite: {
            t = table(n->a.get());
            const auto& tt = table(n->b.get());
            const auto& te = table(n->c.get());
            for (size_t i = 0; i < t.size(); i++)
                t[i] = (t[i] & tt[i]) | (~t[i] & te[i]);
            break;
        }
        }
        if (rows < 64)
            for (auto& w : t)
                w &= (uint64_t(1) << rows) - 1;
        auto [pos, _] = memo.emplace(n, std::move(t));
        return pos->second;
    }
};

} // namespace

std::vector<uint32_t> BoolFunc::syntactic_support() const {
    std::set<uint32_t> syn;
    std::set<const Node*> seen;
    collect_vars(node_, syn, seen);
    return {syn.begin(), syn.end()};
}

std::vector<uint32_t> BoolFunc::support() const {
    std::set<uint32_t> syn;
    std::set<const Node*> seen;
    collect_vars(node_, syn, seen);
    // Semantic refinement: drop variables whose cofactors coincide. Cheap
    // random probing first, then an exact check only for surviving doubts.
    std::vector<uint32_t> out;
    for (uint32_t v : syn) {
        BoolFunc c0 = cofactor(v, false), c1 = cofactor(v, true);
        EquivResult r = check_equivalent(c0, c1);
        if (r.status != EquivStatus::Equal)
            out.push_back(v); // Undecided kept conservatively
    }
    return out;
}

bool BoolFunc::depends_on(uint32_t var) const {
    std::set<uint32_t> syn;
    std::set<const Node*> seen;
    collect_vars(node_, syn, seen);
    if (!syn.count(var))
        return false;
    EquivResult r = check_equivalent(cofactor(var, false), cofactor(var, true));
    return r.status != EquivStatus::Equal;
}

BoolFunc BoolFunc::cofactor(uint32_t var, bool value) const {
    std::map<uint32_t, BoolFunc> a;
    a.emplace(var, constant(value));
    return substitute(a);
}

BoolFunc BoolFunc::substitute(const std::map<uint32_t, BoolFunc>& assignment) const {
    std::unordered_map<const Node*, BoolFunc> memo;
    struct Rec {
        const std::map<uint32_t, BoolFunc>& assignment;
        std::unordered_map<const Node*, BoolFunc>& memo;

        BoolFunc run(const Ref& n) {
            auto it = memo.find(n.get());
            if (it != memo.end())
                return it->second;
            BoolFunc r = BoolFunc(n); // untouched subtrees are shared
            switch (n->op) {
            case Op::Const:
                break;
            case Op::Var: {
                auto v = assignment.find(n->var);
                if (v != assignment.end())
                    r = v->second;
                break;
            }
            case Op::Not: {
                BoolFunc a = run(n->a);
                if (a.node_ != n->a)
                    r = negate(a);
                break;
            }
            case Op::And:
            case Op::Or:
            case Op::Xor: {
                BoolFunc a = run(n->a), b = run(n->b);
                if (a.node_ != n->a || b.node_ != n->b)
                    r = n->op == Op::And ? and2(a, b) : n->op == Op::Or ? or2(a, b) : xor2(a, b);
                break;
            }
            case Op::Ite: {
                BoolFunc a = run(n->a), b = run(n->b), c = run(n->c);
                if (a.node_ != n->a || b.node_ != n->b || c.node_ != n->c)
                    r = ite(a, b, c);
                break;
            }
            }
            memo.emplace(n.get(), r);
            return r;
        }
    };
    Rec rec{assignment, memo};
    return rec.run(node_);
}

bool BoolFunc::evaluate(const std::map<uint32_t, bool>& assignment) const {
    std::unordered_map<const Node*, bool> memo;
    return eval_node(node_.get(), assignment, memo);
}

BitVec BoolFunc::truth_table(const std::vector<uint32_t>& vars) const {
    if (vars.size() > 20)
        throw std::invalid_argument("truth_table limited to 20 variables");
    TableCtx ctx(vars);
    const auto& t = ctx.table(node_.get());
    size_t rows = size_t(1) << vars.size();
    BitVec bv(rows);
    for (size_t i = 0; i < rows; i++)
        if ((t[i / 64] >> (i % 64)) & 1)
            bv.set(i, true);
    return bv;
}

size_t BoolFunc::dag_size() const {
    std::set<const Node*> seen;
    std::vector<const Node*> stack{node_.get()};
    while (!stack.empty()) {
        const Node* n = stack.back();
        stack.pop_back();
        if (!n || !seen.insert(n).second)
            continue;
        stack.push_back(n->a.get());
        stack.push_back(n->b.get());
        stack.push_back(n->c.get());
    }
    seen.erase(nullptr);
    return seen.size();
}

// ---------------------------------------------------------------------------
// Reduced ordered BDD with a node budget, ascending variable order.

namespace {

class Bdd {
public:
    static constexpr uint32_t kTermVar = ~uint32_t(0);

    explicit Bdd(size_t budget) : budget_(budget) {
        nodes_.push_back({kTermVar, 0, 0}); // 0 = false
        nodes_.push_back({kTermVar, 1, 1}); // 1 = true
    }

    struct BudgetExceeded {};

    uint32_t mk(uint32_t var, uint32_t lo, uint32_t hi) {
        if (lo == hi)
            return lo;
        uint64_t key = (uint64_t(var) << 40) ^ (uint64_t(lo) << 20) ^ hi;
        auto range = unique_.equal_range(key);
        for (auto it = range.first; it != range.second; ++it) {
            const Node& n = nodes_[it->second];
            if (n.var == var && n.lo == lo && n.hi == hi)
                return it->second;
        }
        if (nodes_.size() >= budget_)
            throw BudgetExceeded{};
        nodes_.push_back({var, lo, hi});
        uint32_t idx = uint32_t(nodes_.size() - 1);
        unique_.emplace(key, idx);
        return idx;
    }

    uint32_t apply_ite(uint32_t f, uint32_t g, uint32_t h) {
        if (f == 1)
            return g;
        if (f == 0)
            return h;
        if (g == h)
            return g;
        if (g == 1 && h == 0)
            return f;
        uint64_t key = (uint64_t(f) << 42) ^ (uint64_t(g) << 21) ^ h;
        auto it = ite_memo_.find(key);
        if (it != ite_memo_.end())
            return it->second;
        uint32_t top = std::min({var_of(f), var_of(g), var_of(h)});
        uint32_t flo = restrict0(f, top), fhi = restrict1(f, top);
        uint32_t glo = restrict0(g, top), ghi = restrict1(g, top);
        uint32_t hlo = restrict0(h, top), hhi = restrict1(h, top);
        uint32_t lo = apply_ite(flo, glo, hlo);
        uint32_t hi = apply_ite(fhi, ghi, hhi);
        uint32_t r = mk(top, lo, hi);
        ite_memo_.emplace(key, r);
        return r;
    }

    uint32_t var_node(uint32_t var) { return mk(var, 0, 1); }
    uint32_t not_of(uint32_t f) { return apply_ite(f, 0, 1); }
    uint32_t and_of(uint32_t f, uint32_t g) { return apply_ite(f, g, 0); }
    uint32_t or_of(uint32_t f, uint32_t g) { return apply_ite(f, 1, g); }
    uint32_t xor_of(uint32_t f, uint32_t g) { return apply_ite(f, not_of(g), g); }

    uint32_t var_of(uint32_t idx) const { return nodes_[idx].var; }
    uint32_t lo_of(uint32_t idx) const { return nodes_[idx].lo; }
    uint32_t hi_of(uint32_t idx) const { return nodes_[idx].hi; }

    /// Assignment reaching the true terminal of f; f must not be 0. In a
    /// reduced BDD every non-false node reaches the true terminal.
    std::map<uint32_t, bool> satisfying(uint32_t f) const {
        std::map<uint32_t, bool> a;
        while (f > 1) {
            const Node& n = nodes_[f];
            if (n.lo != 0) {
                a[n.var] = false;
                f = n.lo;
            } else {
                a[n.var] = true;
                f = n.hi;
            }
        }
        return a;
    }

private:
    struct Node {
        uint32_t var, lo, hi;
    };

    uint32_t restrict0(uint32_t f, uint32_t var) const {
        return var_of(f) == var ? nodes_[f].lo : f;
    }
    uint32_t restrict1(uint32_t f, uint32_t var) const {
        return var_of(f) == var ? nodes_[f].hi : f;
    }

    size_t budget_;
    std::vector<Node> nodes_;
    std::unordered_multimap<uint64_t, uint32_t> unique_;
    std::unordered_map<uint64_t, uint32_t> ite_memo_;
};

uint32_t bdd_of(Bdd& bdd, const Ref& n, std::unordered_map<const BoolFunc::Node*, uint32_t>& memo) {
    auto it = memo.find(n.get());
    if (it != memo.end())
        return it->second;
    uint32_t r = 0;
    switch (n->op) {
    case Op::Const: r = n->value ? 1 : 0; break;
    case Op::Var: r = bdd.var_node(n->var); break;
    case Op::Not: r = bdd.not_of(bdd_of(bdd, n->a, memo)); break;
    case Op::And: r = bdd.and_of(bdd_of(bdd, n->a, memo), bdd_of(bdd, n->b, memo)); break;
    case Op::Or: r = bdd.or_of(bdd_of(bdd, n->a, memo), bdd_of(bdd, n->b, memo)); break;
    case Op::Xor: r = bdd.xor_of(bdd_of(bdd, n->a, memo), bdd_of(bdd, n->b, memo)); break;
    case Op::Ite:
        r = bdd.apply_ite(bdd_of(bdd, n->a, memo), bdd_of(bdd, n->b, memo), bdd_of(bdd, n->c, memo));
        break;
    }
    memo.emplace(n.get(), r);
    return r;
}

std::vector<uint32_t> union_support(const BoolFunc& f, const BoolFunc& g) {
    std::set<uint32_t> vars;
    std::set<const BoolFunc::Node*> seen;
    collect_vars(f.node(), vars, seen);
    collect_vars(g.node(), vars, seen);
    return {vars.begin(), vars.end()};
}

} // namespace

EquivResult check_equivalent(const BoolFunc& f, const BoolFunc& g, const EquivBudget& budget) {
    EquivResult res;
    std::vector<uint32_t> vars = union_support(f, g);

    if (vars.size() <= budget.exhaustive_vars) {
        TableCtx ctx(vars);
        const auto& tf = ctx.table(f.node().get());
        const auto& tg = ctx.table(g.node().get());
        for (size_t w = 0; w < tf.size(); w++) {
            if (tf[w] != tg[w]) {
                uint64_t diff = tf[w] ^ tg[w];
                size_t row = w * 64 + size_t(__builtin_ctzll(diff));
                res.status = EquivStatus::NotEqual;
                for (size_t i = 0; i < vars.size(); i++)
                    res.counterexample[vars[i]] = (row >> i) & 1;
                return res;
            }
        }
        res.status = EquivStatus::Equal;
        return res;
    }

    // Randomized counterexample search.
    std::mt19937_64 rng(budget.seed);
    for (size_t t = 0; t < budget.random_vectors; t++) {
        std::map<uint32_t, bool> a;
        for (uint32_t v : vars)
            a[v] = rng() & 1;
        if (f.evaluate(a) != g.evaluate(a)) {
            res.status = EquivStatus::NotEqual;
            res.counterexample = std::move(a);
            return res;
        }
    }

    // Canonical-form comparison under the shared manager.
    try {
        Bdd bdd(budget.bdd_node_budget);
        std::unordered_map<const BoolFunc::Node*, uint32_t> memo;
        uint32_t bf = bdd_of(bdd, f.node(), memo);
        uint32_t bg = bdd_of(bdd, g.node(), memo);
        if (bf == bg) {
            res.status = EquivStatus::Equal;
            return res;
        }
        uint32_t diff = bdd.xor_of(bf, bg);
        res.status = EquivStatus::NotEqual;
        res.counterexample = bdd.satisfying(diff);
        for (uint32_t v : vars)
            res.counterexample.emplace(v, false);
        return res;
    } catch (const Bdd::BudgetExceeded&) {
        res.status = EquivStatus::Undecided;
        return res;
    }
}

size_t influence_count(const std::vector<BoolFunc>& outputs, uint32_t var, const EquivBudget& budget) {
    size_t count = 0;
    for (const BoolFunc& f : outputs) {
        std::set<uint32_t> syn;
        std::set<const BoolFunc::Node*> seen;
        collect_vars(f.node(), syn, seen);
        if (!syn.count(var))
            continue;
        EquivResult r = check_equivalent(f.cofactor(var, false), f.cofactor(var, true), budget);
        if (r.status != EquivStatus::Equal)
            count++; // Undecided counted as influential, never silently dropped
    }
    return count;
}

std::vector<bool> evaluate_all(const std::vector<BoolFunc>& funcs, const std::map<uint32_t, bool>& assignment) {
    std::unordered_map<const BoolFunc::Node*, bool> memo;
    std::vector<bool> out;
    out.reserve(funcs.size());
    for (const BoolFunc& f : funcs)
        out.push_back(eval_node(f.node().get(), assignment, memo));
    return out;
}

std::optional<std::vector<std::vector<uint32_t>>> semantic_supports(const std::vector<BoolFunc>& funcs,
                                                                    const EquivBudget& budget) {
    try {
        Bdd bdd(budget.bdd_node_budget);
        std::unordered_map<const BoolFunc::Node*, uint32_t> memo;
        std::vector<std::vector<uint32_t>> out;
        out.reserve(funcs.size());
        for (const BoolFunc& f : funcs) {
            uint32_t root = bdd_of(bdd, f.node(), memo);
            std::set<uint32_t> vars;
            std::set<uint32_t> seen;
            std::vector<uint32_t> stack{root};
            while (!stack.empty()) {
                uint32_t n = stack.back();
                stack.pop_back();
                if (n <= 1 || !seen.insert(n).second)
                    continue;
                vars.insert(bdd.var_of(n));
                stack.push_back(bdd.lo_of(n));
                stack.push_back(bdd.hi_of(n));
            }
            out.emplace_back(vars.begin(), vars.end());
        }
        return out;
    } catch (const Bdd::BudgetExceeded&) {
        return std::nullopt;
    }
}

} // namespace nlre
