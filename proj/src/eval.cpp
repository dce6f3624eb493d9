#include "clw/eval.hpp"

#include <algorithm>

#include "clw/errors.hpp"
#include "clw/modulus.hpp"

namespace clw {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool tag_lo(Bound t) { return t == Bound::Exact || t == Bound::Lower; }
bool tag_hi(Bound t) { return t == Bound::Exact || t == Bound::Upper; }

Bound make_tag(bool lo, bool hi) {
    if (lo && hi) return Bound::Exact;
    if (lo) return Bound::Lower;
    if (hi) return Bound::Upper;
    return Bound::Unknown;
}

Bound tag_sum(Bound a, Bound b) { return make_tag(tag_lo(a) && tag_lo(b), tag_hi(a) && tag_hi(b)); }
Bound tag_sub(Bound a, Bound b) { return make_tag(tag_lo(a) && tag_hi(b), tag_hi(a) && tag_lo(b)); }

}  // namespace

const char* bound_name(Bound b) {
    switch (b) {
        case Bound::Exact: return "exact";
        case Bound::Lower: return "lower-bound";
        case Bound::Upper: return "upper-bound";
        case Bound::Unknown: return "unknown";
    }
    return "unknown";
}

struct Evaluator::NodeInfo {
    std::vector<int> free_ids;  // sorted
    std::size_t subtree_size = 1;
    bool quantifier_free = true;
    bool memoize = false;
    // Atom fast path.
    const PredTable* table = nullptr;
    std::vector<int> arg_ids;
    // Dist / quantifier fast path.
    int var_a = -1, var_b = -1;
    std::unordered_map<std::string, TaggedRat> memo;
};

struct Evaluator::Impl {
    explicit Impl(const StructureCode& p) : code(p) {}

    const StructureCode& code;
    std::unordered_map<std::string, int> var_ids;
    std::vector<int> env;  // slot -> point index or -1
    // NodeInfo addresses must stay stable across insertions; recursion into
    // children can rehash the map while a parent's info is in use.
    std::unordered_map<const Formula*, std::unique_ptr<NodeInfo>> info;
    std::vector<FormulaPtr> roots;  // keep evaluated formulas alive

    int intern(const std::string& var) {
        auto [it, inserted] = var_ids.emplace(var, static_cast<int>(var_ids.size()));
        if (inserted) env.push_back(-1);
        return it->second;
    }

    NodeInfo& node_info(const FormulaPtr& f) {
        auto it = info.find(f.get());
        if (it != info.end()) return *it->second;
        NodeInfo ni;
        std::visit(
            overloaded{
                [&](const DistNode& n) {
                    ni.var_a = intern(n.x);
                    ni.var_b = intern(n.y);
                    ni.free_ids = {ni.var_a, ni.var_b};
                },
                [&](const AtomNode& n) {
                    auto pt = code.predicates.find(n.pred);
                    const PredicateDecl* decl = code.signature.find(n.pred);
                    if (pt == code.predicates.end() || !decl)
                        throw Error(ErrorCode::UnknownPredicate, n.pred);
                    if (decl->arity != n.args.size())
                        throw Error(ErrorCode::ArityMismatch, n.pred);
                    ni.table = &pt->second;
                    for (const auto& a : n.args) {
                        int id = intern(a);
                        ni.arg_ids.push_back(id);
                        ni.free_ids.push_back(id);
                    }
                },
                [&](const ConstNode&) {},
                [&](const AddNode& n) { merge_children(ni, n.f, n.g); },
                [&](const SubNode& n) { merge_children(ni, n.f, n.g); },
                [&](const ScaleNode& n) { merge_children(ni, n.f, nullptr); },
                [&](const MinNode& n) { merge_children(ni, n.f, n.g); },
                [&](const MaxNode& n) { merge_children(ni, n.f, n.g); },
                [&](const AbsNode& n) { merge_children(ni, n.f, nullptr); },
                [&](const SupNode& n) {
                    merge_children(ni, n.body, nullptr);
                    ni.var_a = intern(n.var);
                    drop_id(ni.free_ids, ni.var_a);
                    ni.quantifier_free = false;
                },
                [&](const InfNode& n) {
                    merge_children(ni, n.body, nullptr);
                    ni.var_a = intern(n.var);
                    drop_id(ni.free_ids, ni.var_a);
                    ni.quantifier_free = false;
                },
                [&](const JoinNode& n) {
                    for (const auto& m : n.family.members) merge_children(ni, m, nullptr);
                    ni.quantifier_free = false;
                },
                [&](const MeetNode& n) {
                    for (const auto& m : n.family.members) merge_children(ni, m, nullptr);
                    ni.quantifier_free = false;
                },
            },
            f->node);
        std::sort(ni.free_ids.begin(), ni.free_ids.end());
        ni.free_ids.erase(std::unique(ni.free_ids.begin(), ni.free_ids.end()), ni.free_ids.end());
        ni.memoize = !ni.quantifier_free ||
                     (ni.subtree_size >= 8 && ni.free_ids.size() <= 4);
        return info.emplace(f.get(), std::move(ni)).first->second;
    }

    void merge_children(NodeInfo& ni, const FormulaPtr& a, const FormulaPtr* b_ignored) {
        (void)b_ignored;
        const NodeInfo& ca = node_info(a);
        ni.subtree_size += ca.subtree_size;
        ni.quantifier_free = ni.quantifier_free && ca.quantifier_free;
        ni.free_ids.insert(ni.free_ids.end(), ca.free_ids.begin(), ca.free_ids.end());
    }
    void merge_children(NodeInfo& ni, const FormulaPtr& a, const FormulaPtr& b) {
        merge_children(ni, a, nullptr);
        merge_children(ni, b, nullptr);
    }

    std::string env_key(const NodeInfo& ni) const {
        std::string key;
        key.reserve(ni.free_ids.size());
        for (int id : ni.free_ids) key.push_back(static_cast<char>(env[id] + 1));
        return key;
    }

    std::size_t binding(int id, const char* var_for_error) const {
        int v = env[id];
        if (v < 0) throw Error(ErrorCode::UnboundVariable, var_for_error);
        return static_cast<std::size_t>(v);
    }

    TaggedRat eval_rec(const FormulaPtr& f) {
        NodeInfo& ni = node_info(f);
        if (!ni.memoize) return compute(f, ni);
        std::string key = env_key(ni);
        auto it = ni.memo.find(key);
        if (it != ni.memo.end()) return it->second;
        TaggedRat result = compute(f, ni);
        // compute() may grow `info` and invalidate ni; re-resolve.
        return info.at(f.get()).memo.emplace(std::move(key), std::move(result)).first->second;
    }

    TaggedRat compute(const FormulaPtr& f, NodeInfo& ni) {
        return std::visit(
            overloaded{
                [&](const DistNode& n) -> TaggedRat {
                    std::size_t i = binding(ni.var_a, n.x.c_str());
                    std::size_t j = binding(ni.var_b, n.y.c_str());
                    Rat d = code.dist[i][j];
                    if (n.truncated && d > 1) d = 1;
                    return {std::move(d), Bound::Exact};
                },
                [&](const AtomNode&) -> TaggedRat {
                    std::size_t idx = 0;
                    for (std::size_t a = 0; a < ni.arg_ids.size(); ++a)
                        idx = idx * code.size + binding(ni.arg_ids[a], "atom argument");
                    return {(*ni.table)[idx], Bound::Exact};
                },
                [&](const ConstNode& n) -> TaggedRat { return {n.value, Bound::Exact}; },
                [&](const AddNode& n) -> TaggedRat {
                    TaggedRat a = eval_rec(n.f), b = eval_rec(n.g);
                    return {a.value + b.value, tag_sum(a.tag, b.tag)};
                },
                [&](const SubNode& n) -> TaggedRat {
                    TaggedRat a = eval_rec(n.f), b = eval_rec(n.g);
                    return {a.value - b.value, tag_sub(a.tag, b.tag)};
                },
                [&](const ScaleNode& n) -> TaggedRat {
                    TaggedRat a = eval_rec(n.f);
                    return {n.factor * a.value, a.tag};
                },
                [&](const MinNode& n) -> TaggedRat {
                    TaggedRat a = eval_rec(n.f), b = eval_rec(n.g);
                    return {rat_min(a.value, b.value), tag_sum(a.tag, b.tag)};
                },
                [&](const MaxNode& n) -> TaggedRat {
                    TaggedRat a = eval_rec(n.f), b = eval_rec(n.g);
                    return {rat_max(a.value, b.value), tag_sum(a.tag, b.tag)};
                },
                [&](const AbsNode& n) -> TaggedRat {
                    TaggedRat a = eval_rec(n.f);
                    return {rat_abs(a.value), a.tag == Bound::Exact ? Bound::Exact : Bound::Unknown};
                },
                [&](const SupNode& n) -> TaggedRat { return quantify(n.body, ni, true); },
                [&](const InfNode& n) -> TaggedRat { return quantify(n.body, ni, false); },
                [&](const JoinNode& n) -> TaggedRat {
                    TaggedRat acc = eval_rec(n.family.members[0]);
                    for (std::size_t i = 1; i < n.family.members.size(); ++i) {
                        TaggedRat m = eval_rec(n.family.members[i]);
                        acc.tag = tag_sum(acc.tag, m.tag);
                        if (m.value > acc.value) acc.value = std::move(m.value);
                    }
                    if (n.family.lower_bound_only)
                        acc.tag = make_tag(tag_lo(acc.tag), false);
                    return acc;
                },
                [&](const MeetNode& n) -> TaggedRat {
                    TaggedRat acc = eval_rec(n.family.members[0]);
                    for (std::size_t i = 1; i < n.family.members.size(); ++i) {
                        TaggedRat m = eval_rec(n.family.members[i]);
                        acc.tag = tag_sum(acc.tag, m.tag);
                        if (m.value < acc.value) acc.value = std::move(m.value);
                    }
                    if (n.family.lower_bound_only)
                        acc.tag = make_tag(false, tag_hi(acc.tag));
                    return acc;
                },
            },
            f->node);
    }

    TaggedRat quantify(const FormulaPtr& body, NodeInfo& ni, bool is_sup) {
        const int slot = ni.var_a;
        const NodeInfo& body_info = node_info(body);
        const bool vacuous =
            !std::binary_search(body_info.free_ids.begin(), body_info.free_ids.end(), slot);
        if (vacuous) return eval_rec(body);
        const int saved = env[slot];
        TaggedRat acc;
        for (std::size_t pt = 0; pt < code.size; ++pt) {
            env[slot] = static_cast<int>(pt);
            TaggedRat v = eval_rec(body);
            if (pt == 0) {
                acc = std::move(v);
            } else {
                acc.tag = tag_sum(acc.tag, v.tag);
                if (is_sup ? v.value > acc.value : v.value < acc.value)
                    acc.value = std::move(v.value);
            }
        }
        env[slot] = saved;
        return acc;
    }
};

Evaluator::Evaluator(const StructureCode& structure)
    : structure_(structure), impl_(std::make_unique<Impl>(structure)) {}

Evaluator::~Evaluator() = default;

TaggedRat Evaluator::eval(const FormulaPtr& f, const Env& env) {
    impl_->roots.push_back(f);
    // Bind the environment, clearing any previous top-level bindings.
    std::fill(impl_->env.begin(), impl_->env.end(), -1);
    for (const auto& [var, pt] : env) {
        if (pt >= structure_.size) throw Error(ErrorCode::IndexOutOfRange, var);
        impl_->env[impl_->intern(var)] = static_cast<int>(pt);
    }
    return impl_->eval_rec(f);
}

TaggedRat eval_formula(const FormulaPtr& f, const StructureCode& p, const Env& env) {
    Evaluator ev(p);
    return ev.eval(f, env);
}

LipschitzAuditReport lipschitz_audit(const FormulaPtr& f, const StructureCode& p,
                                     std::size_t budget) {
    InferredModulus mod = infer_modulus(f, p.signature);
    if (!mod.finite())
        throw Error(ErrorCode::IllFormed, "lipschitz_audit requires finite inferred modulus");

    std::vector<std::string> vars;
    for (const auto& v : free_variables(f)) vars.push_back(v);
    const std::size_t n = p.size;
    std::size_t env_count = 1;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (env_count > budget / (n ? n : 1)) throw Error(ErrorCode::BudgetExceeded, "lipschitz_audit");
        env_count *= n;
    }
    if (env_count * env_count > budget) throw Error(ErrorCode::BudgetExceeded, "lipschitz_audit");

    Evaluator ev(p);
    std::vector<std::vector<std::size_t>> assignments;
    std::vector<Rat> values;
    std::vector<std::size_t> tuple(vars.size(), 0);
    do {
        Env env;
        for (std::size_t i = 0; i < vars.size(); ++i) env[vars[i]] = tuple[i];
        TaggedRat v = ev.eval(f, env);
        if (v.tag != Bound::Exact)
            throw Error(ErrorCode::IllFormed, "lipschitz_audit requires exact families");
        assignments.push_back(tuple);
        values.push_back(std::move(v.value));
    } while (next_tuple(tuple, n));

    for (std::size_t a = 0; a < values.size(); ++a)
        for (std::size_t b = a + 1; b < values.size(); ++b) {
            Rat allowed = 0;
            for (std::size_t i = 0; i < vars.size(); ++i) {
                const ExtRat lip = mod.lipschitz_of(vars[i]);
                allowed += lip.value * truncated_distance(p, assignments[a][i], assignments[b][i]);
            }
            if (rat_abs(values[a] - values[b]) > allowed) {
                LipschitzAuditReport report;
                report.ok = false;
                for (std::size_t i = 0; i < vars.size(); ++i) {
                    report.env_a[vars[i]] = assignments[a][i];
                    report.env_b[vars[i]] = assignments[b][i];
                }
                report.detail = "|" + rational_string(values[a]) + " - " + rational_string(values[b]) +
                                "| > " + rational_string(allowed);
                return report;
            }
        }
    return {};
}

}  // namespace clw
