#include "clw/formula.hpp"

#include "clw/errors.hpp"

namespace clw {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

FormulaPtr make(Formula f) { return std::make_shared<const Formula>(std::move(f)); }

void collect_free(const FormulaPtr& f, std::set<std::string>& bound, std::set<std::string>& out) {
    std::visit(
        overloaded{
            [&](const DistNode& n) {
                if (!bound.count(n.x)) out.insert(n.x);
                if (!bound.count(n.y)) out.insert(n.y);
            },
            [&](const AtomNode& n) {
                for (const auto& a : n.args)
                    if (!bound.count(a)) out.insert(a);
            },
            [&](const ConstNode&) {},
            [&](const AddNode& n) {
                collect_free(n.f, bound, out);
                collect_free(n.g, bound, out);
            },
            [&](const SubNode& n) {
                collect_free(n.f, bound, out);
                collect_free(n.g, bound, out);
            },
            [&](const ScaleNode& n) { collect_free(n.f, bound, out); },
            [&](const MinNode& n) {
                collect_free(n.f, bound, out);
                collect_free(n.g, bound, out);
            },
            [&](const MaxNode& n) {
                collect_free(n.f, bound, out);
                collect_free(n.g, bound, out);
            },
            [&](const AbsNode& n) { collect_free(n.f, bound, out); },
            [&](const SupNode& n) {
                bool inserted = bound.insert(n.var).second;
                collect_free(n.body, bound, out);
                if (inserted) bound.erase(n.var);
            },
            [&](const InfNode& n) {
                bool inserted = bound.insert(n.var).second;
                collect_free(n.body, bound, out);
                if (inserted) bound.erase(n.var);
            },
            [&](const JoinNode& n) {
                for (const auto& m : n.family.members) collect_free(m, bound, out);
            },
            [&](const MeetNode& n) {
                for (const auto& m : n.family.members) collect_free(m, bound, out);
            },
        },
        f->node);
}

}  // namespace

FormulaPtr mk_dist(std::string x, std::string y, bool truncated) {
    return make({DistNode{std::move(x), std::move(y), truncated}});
}
FormulaPtr mk_atom(std::string pred, std::vector<std::string> args) {
    return make({AtomNode{std::move(pred), std::move(args)}});
}
FormulaPtr mk_const(Rat value) { return make({ConstNode{std::move(value)}}); }
FormulaPtr mk_add(FormulaPtr f, FormulaPtr g) { return make({AddNode{std::move(f), std::move(g)}}); }
FormulaPtr mk_sub(FormulaPtr f, FormulaPtr g) { return make({SubNode{std::move(f), std::move(g)}}); }
FormulaPtr mk_scale(Rat factor, FormulaPtr f) {
    if (factor < 0) throw Error(ErrorCode::InvalidArgument, "scale factor must be >= 0");
    return make({ScaleNode{std::move(factor), std::move(f)}});
}
FormulaPtr mk_min(FormulaPtr f, FormulaPtr g) { return make({MinNode{std::move(f), std::move(g)}}); }
FormulaPtr mk_max(FormulaPtr f, FormulaPtr g) { return make({MaxNode{std::move(f), std::move(g)}}); }
FormulaPtr mk_abs(FormulaPtr f) { return make({AbsNode{std::move(f)}}); }
FormulaPtr mk_sup(std::string var, FormulaPtr body) {
    return make({SupNode{std::move(var), std::move(body)}});
}
FormulaPtr mk_inf(std::string var, FormulaPtr body) {
    return make({InfNode{std::move(var), std::move(body)}});
}
FormulaPtr mk_join(Family family) {
    if (family.members.empty()) throw Error(ErrorCode::IllFormed, "join family must be nonempty");
    return make({JoinNode{std::move(family)}});
}
FormulaPtr mk_meet(Family family) {
    if (family.members.empty()) throw Error(ErrorCode::IllFormed, "meet family must be nonempty");
    return make({MeetNode{std::move(family)}});
}

FormulaPtr max_tree(const std::vector<FormulaPtr>& parts) {
    if (parts.empty()) throw Error(ErrorCode::InvalidArgument, "max_tree: empty");
    FormulaPtr acc = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) acc = mk_max(acc, parts[i]);
    return acc;
}

FormulaPtr min_tree(const std::vector<FormulaPtr>& parts) {
    if (parts.empty()) throw Error(ErrorCode::InvalidArgument, "min_tree: empty");
    FormulaPtr acc = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) acc = mk_min(acc, parts[i]);
    return acc;
}

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b) {
    if (a.get() == b.get()) return true;
    if (a->node.index() != b->node.index()) return false;
    return std::visit(
        overloaded{
            [&](const DistNode& n) {
                const auto& o = std::get<DistNode>(b->node);
                return n.x == o.x && n.y == o.y && n.truncated == o.truncated;
            },
            [&](const AtomNode& n) {
                const auto& o = std::get<AtomNode>(b->node);
                return n.pred == o.pred && n.args == o.args;
            },
            [&](const ConstNode& n) { return n.value == std::get<ConstNode>(b->node).value; },
            [&](const AddNode& n) {
                const auto& o = std::get<AddNode>(b->node);
                return formula_equal(n.f, o.f) && formula_equal(n.g, o.g);
            },
            [&](const SubNode& n) {
                const auto& o = std::get<SubNode>(b->node);
                return formula_equal(n.f, o.f) && formula_equal(n.g, o.g);
            },
            [&](const ScaleNode& n) {
                const auto& o = std::get<ScaleNode>(b->node);
                return n.factor == o.factor && formula_equal(n.f, o.f);
            },
            [&](const MinNode& n) {
                const auto& o = std::get<MinNode>(b->node);
                return formula_equal(n.f, o.f) && formula_equal(n.g, o.g);
            },
            [&](const MaxNode& n) {
                const auto& o = std::get<MaxNode>(b->node);
                return formula_equal(n.f, o.f) && formula_equal(n.g, o.g);
            },
            [&](const AbsNode& n) { return formula_equal(n.f, std::get<AbsNode>(b->node).f); },
            [&](const SupNode& n) {
                const auto& o = std::get<SupNode>(b->node);
                return n.var == o.var && formula_equal(n.body, o.body);
            },
            [&](const InfNode& n) {
                const auto& o = std::get<InfNode>(b->node);
                return n.var == o.var && formula_equal(n.body, o.body);
            },
            [&](const JoinNode& n) {
                const auto& o = std::get<JoinNode>(b->node);
                if (n.family.members.size() != o.family.members.size()) return false;
                if (!(n.family.declared == o.family.declared)) return false;
                if (n.family.lower_bound_only != o.family.lower_bound_only) return false;
                for (std::size_t i = 0; i < n.family.members.size(); ++i)
                    if (!formula_equal(n.family.members[i], o.family.members[i])) return false;
                return true;
            },
            [&](const MeetNode& n) {
                const auto& o = std::get<MeetNode>(b->node);
                if (n.family.members.size() != o.family.members.size()) return false;
                if (!(n.family.declared == o.family.declared)) return false;
                if (n.family.lower_bound_only != o.family.lower_bound_only) return false;
                for (std::size_t i = 0; i < n.family.members.size(); ++i)
                    if (!formula_equal(n.family.members[i], o.family.members[i])) return false;
                return true;
            },
        },
        a->node);
}

std::set<std::string> free_variables(const FormulaPtr& f) {
    std::set<std::string> bound, out;
    collect_free(f, bound, out);
    return out;
}

bool is_quantifier_free(const FormulaPtr& f) {
    return std::visit(
        overloaded{
            [](const DistNode&) { return true; },
            [](const AtomNode&) { return true; },
            [](const ConstNode&) { return true; },
            [](const AddNode& n) { return is_quantifier_free(n.f) && is_quantifier_free(n.g); },
            [](const SubNode& n) { return is_quantifier_free(n.f) && is_quantifier_free(n.g); },
            [](const ScaleNode& n) { return is_quantifier_free(n.f); },
            [](const MinNode& n) { return is_quantifier_free(n.f) && is_quantifier_free(n.g); },
            [](const MaxNode& n) { return is_quantifier_free(n.f) && is_quantifier_free(n.g); },
            [](const AbsNode& n) { return is_quantifier_free(n.f); },
            [](const SupNode&) { return false; },
            [](const InfNode&) { return false; },
            [](const JoinNode&) { return false; },
            [](const MeetNode&) { return false; },
        },
        f->node);
}

FormulaPtr rename_free(const FormulaPtr& f, const std::map<std::string, std::string>& renaming) {
    if (!is_quantifier_free(f))
        throw Error(ErrorCode::InvalidArgument, "rename_free: quantifier-free formulas only");
    auto ren = [&](const std::string& v) {
        auto it = renaming.find(v);
        return it == renaming.end() ? v : it->second;
    };
    return std::visit(
        overloaded{
            [&](const DistNode& n) { return mk_dist(ren(n.x), ren(n.y), n.truncated); },
            [&](const AtomNode& n) {
                std::vector<std::string> args;
                args.reserve(n.args.size());
                for (const auto& a : n.args) args.push_back(ren(a));
                return mk_atom(n.pred, std::move(args));
            },
            [&](const ConstNode& n) { return mk_const(n.value); },
            [&](const AddNode& n) {
                return mk_add(rename_free(n.f, renaming), rename_free(n.g, renaming));
            },
            [&](const SubNode& n) {
                return mk_sub(rename_free(n.f, renaming), rename_free(n.g, renaming));
            },
            [&](const ScaleNode& n) { return mk_scale(n.factor, rename_free(n.f, renaming)); },
            [&](const MinNode& n) {
                return mk_min(rename_free(n.f, renaming), rename_free(n.g, renaming));
            },
            [&](const MaxNode& n) {
                return mk_max(rename_free(n.f, renaming), rename_free(n.g, renaming));
            },
            [&](const AbsNode& n) { return mk_abs(rename_free(n.f, renaming)); },
            [&](const SupNode&) -> FormulaPtr { throw Error(ErrorCode::InvalidArgument, "unreachable"); },
            [&](const InfNode&) -> FormulaPtr { throw Error(ErrorCode::InvalidArgument, "unreachable"); },
            [&](const JoinNode&) -> FormulaPtr { throw Error(ErrorCode::InvalidArgument, "unreachable"); },
            [&](const MeetNode&) -> FormulaPtr { throw Error(ErrorCode::InvalidArgument, "unreachable"); },
        },
        f->node);
}

}  // namespace clw
