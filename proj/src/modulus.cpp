#include "clw/modulus.hpp"

#include "clw/errors.hpp"

namespace clw {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void add_to(std::map<std::string, ExtRat>& acc, const std::string& var, const ExtRat& c) {
    auto [it, inserted] = acc.emplace(var, c);
    if (!inserted) it->second = it->second + c;
}

InferredModulus combine_sum(const InferredModulus& a, const InferredModulus& b) {
    InferredModulus out = a;
    for (const auto& [var, c] : b.lipschitz) add_to(out.lipschitz, var, c);
    out.value_bound = a.value_bound + b.value_bound;
    return out;
}

InferredModulus combine_minmax(const InferredModulus& a, const InferredModulus& b) {
    InferredModulus out = a;
    for (const auto& [var, c] : b.lipschitz) {
        auto [it, inserted] = out.lipschitz.emplace(var, c);
        if (!inserted) it->second = ExtRat::max(it->second, c);
    }
    out.value_bound = ExtRat::max(a.value_bound, b.value_bound);
    return out;
}

}  // namespace

bool InferredModulus::finite() const {
    if (value_bound.infinite) return false;
    for (const auto& [_, c] : lipschitz)
        if (c.infinite) return false;
    return true;
}

bool InferredModulus::dominated_by(const ModulusVector& declared) const {
    if (!value_bound.leq(declared.value_bound)) return false;
    for (const auto& [var, c] : lipschitz) {
        auto it = declared.lipschitz.find(var);
        const Rat allowed = it == declared.lipschitz.end() ? Rat(0) : it->second;
        if (!c.leq(allowed)) return false;
    }
    return true;
}

InferredModulus infer_modulus(const FormulaPtr& f, const Signature& signature) {
    return std::visit(
        overloaded{
            [&](const DistNode& n) {
                InferredModulus m;
                if (n.truncated) {
                    add_to(m.lipschitz, n.x, ExtRat::fin(1));
                    add_to(m.lipschitz, n.y, ExtRat::fin(1));
                    m.value_bound = ExtRat::fin(1);
                } else {
                    add_to(m.lipschitz, n.x, ExtRat::inf());
                    add_to(m.lipschitz, n.y, ExtRat::inf());
                    m.value_bound = ExtRat::inf();
                }
                return m;
            },
            [&](const AtomNode& n) {
                const PredicateDecl* decl = signature.find(n.pred);
                if (!decl) throw Error(ErrorCode::UnknownPredicate, n.pred);
                if (decl->arity != n.args.size())
                    throw Error(ErrorCode::ArityMismatch, n.pred + " expects " +
                                                              std::to_string(decl->arity) +
                                                              " arguments");
                InferredModulus m;
                for (std::size_t i = 0; i < n.args.size(); ++i)
                    add_to(m.lipschitz, n.args[i], ExtRat::fin(decl->lipschitz[i]));
                m.value_bound = ExtRat::fin(decl->bound);
                return m;
            },
            [&](const ConstNode& n) {
                InferredModulus m;
                m.value_bound = ExtRat::fin(rat_abs(n.value));
                return m;
            },
            [&](const AddNode& n) {
                return combine_sum(infer_modulus(n.f, signature), infer_modulus(n.g, signature));
            },
            [&](const SubNode& n) {
                return combine_sum(infer_modulus(n.f, signature), infer_modulus(n.g, signature));
            },
            [&](const ScaleNode& n) {
                InferredModulus m = infer_modulus(n.f, signature);
                for (auto& [_, c] : m.lipschitz) c = c.scaled(n.factor);
                m.value_bound = m.value_bound.scaled(n.factor);
                return m;
            },
            [&](const MinNode& n) {
                return combine_minmax(infer_modulus(n.f, signature), infer_modulus(n.g, signature));
            },
            [&](const MaxNode& n) {
                return combine_minmax(infer_modulus(n.f, signature), infer_modulus(n.g, signature));
            },
            [&](const AbsNode& n) { return infer_modulus(n.f, signature); },
            [&](const SupNode& n) {
                InferredModulus m = infer_modulus(n.body, signature);
                m.lipschitz.erase(n.var);
                return m;
            },
            [&](const InfNode& n) {
                InferredModulus m = infer_modulus(n.body, signature);
                m.lipschitz.erase(n.var);
                return m;
            },
            [&](const JoinNode& n) {
                InferredModulus m;
                for (const auto& [var, lip] : n.family.declared.lipschitz)
                    m.lipschitz.emplace(var, ExtRat::fin(lip));
                m.value_bound = ExtRat::fin(n.family.declared.value_bound);
                return m;
            },
            [&](const MeetNode& n) {
                InferredModulus m;
                for (const auto& [var, lip] : n.family.declared.lipschitz)
                    m.lipschitz.emplace(var, ExtRat::fin(lip));
                m.value_bound = ExtRat::fin(n.family.declared.value_bound);
                return m;
            },
        },
        f->node);
}

ModulusVector default_family_modulus(const std::vector<FormulaPtr>& members,
                                     const Signature* signature) {
    const Signature empty;
    const Signature& sig = signature ? *signature : empty;
    ModulusVector mv;
    for (const auto& member : members) {
        InferredModulus m = infer_modulus(member, sig);
        if (!m.finite())
            throw Error(ErrorCode::IllFormed,
                        "family member has unbounded modulus; declare one explicitly");
        for (const auto& [var, c] : m.lipschitz) {
            auto [it, inserted] = mv.lipschitz.emplace(var, c.value);
            if (!inserted) it->second = rat_max(it->second, c.value);
        }
        mv.value_bound = rat_max(mv.value_bound, m.value_bound.value);
    }
    return mv;
}

namespace {

class WellformedChecker {
  public:
    WellformedChecker(const Signature& sig, const std::set<std::string>& declared_free)
        : sig_(sig), scope_(declared_free) {}

    std::optional<WellformedIssue> run(const FormulaPtr& f) {
        visit(f);
        return issue_;
    }

  private:
    void use_var(const std::string& v) {
        if (issue_) return;
        if (!scope_.count(v))
            issue_ = WellformedIssue{WellformedIssue::Kind::UnboundVariable, v, std::nullopt};
    }

    void visit_quantifier(const std::string& var, const FormulaPtr& body) {
        if (issue_) return;
        if (scope_.count(var)) {
            issue_ = WellformedIssue{WellformedIssue::Kind::ShadowedVariable, var, std::nullopt};
            return;
        }
        scope_.insert(var);
        visit(body);
        scope_.erase(var);
    }

    void visit_family(const Family& fam) {
        for (std::size_t i = 0; i < fam.members.size() && !issue_; ++i) {
            visit(fam.members[i]);
            if (issue_) return;
            InferredModulus m = infer_modulus(fam.members[i], sig_);
            if (!m.dominated_by(fam.declared)) {
                issue_ = WellformedIssue{WellformedIssue::Kind::ModulusExceedsDeclared,
                                         "member " + std::to_string(i), i};
                return;
            }
        }
    }

    void visit(const FormulaPtr& f) {
        if (issue_) return;
        std::visit(overloaded{
                       [&](const DistNode& n) {
                           use_var(n.x);
                           use_var(n.y);
                       },
                       [&](const AtomNode& n) {
                           for (const auto& a : n.args) use_var(a);
                       },
                       [&](const ConstNode&) {},
                       [&](const AddNode& n) {
                           visit(n.f);
                           visit(n.g);
                       },
                       [&](const SubNode& n) {
                           visit(n.f);
                           visit(n.g);
                       },
                       [&](const ScaleNode& n) { visit(n.f); },
                       [&](const MinNode& n) {
                           visit(n.f);
                           visit(n.g);
                       },
                       [&](const MaxNode& n) {
                           visit(n.f);
                           visit(n.g);
                       },
                       [&](const AbsNode& n) { visit(n.f); },
                       [&](const SupNode& n) { visit_quantifier(n.var, n.body); },
                       [&](const InfNode& n) { visit_quantifier(n.var, n.body); },
                       [&](const JoinNode& n) { visit_family(n.family); },
                       [&](const MeetNode& n) { visit_family(n.family); },
                   },
                   f->node);
    }

    const Signature& sig_;
    std::set<std::string> scope_;
    std::optional<WellformedIssue> issue_;
};

}  // namespace

WellformedReport check_wellformed(const FormulaPtr& f, const Signature& signature,
                                  const std::set<std::string>& declared_free) {
    WellformedChecker checker(signature, declared_free);
    return WellformedReport{checker.run(f)};
}

WellformedReport check_wellformed(const FormulaPtr& f, const Signature& signature) {
    return check_wellformed(f, signature, free_variables(f));
}

}  // namespace clw
