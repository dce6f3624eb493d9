#pragma once

#include <optional>

#include "clw/formula.hpp"
#include "clw/structure.hpp"

namespace clw {

// Inferred counterpart of ModulusVector. Constants may be infinite: the raw
// distance symbol admits no finite Lipschitz constant or bound with respect
// to the truncated metric.
struct InferredModulus {
    std::map<std::string, ExtRat> lipschitz;
    ExtRat value_bound = ExtRat::fin(0);

    ExtRat lipschitz_of(const std::string& var) const {
        auto it = lipschitz.find(var);
        return it == lipschitz.end() ? ExtRat::fin(0) : it->second;
    }
    /// True when every constant and the bound are finite.
    bool finite() const;
    /// Pointwise comparison against a declared (finite) vector; variables
    /// absent from the declaration count as declared 0.
    bool dominated_by(const ModulusVector& declared) const;
};

/// Structural modulus inference. Dist(truncated) contributes 1 per argument
/// slot and bound 1; atoms contribute their declared constants; Min/Max take
/// pointwise maxima; Sup/Inf drop the bound variable; families return their
/// declared vector. Throws UnknownPredicate/ArityMismatch on bad atoms.
InferredModulus infer_modulus(const FormulaPtr& f, const Signature& signature);

/// Declared modulus used when a family is written without an explicit
/// mod-decl: the pointwise max of the members' inferred moduli. All members
/// must infer finite; the signature may be null only if no atoms occur.
ModulusVector default_family_modulus(const std::vector<FormulaPtr>& members,
                                     const Signature* signature);

struct WellformedIssue {
    enum class Kind { UnboundVariable, ShadowedVariable, ModulusExceedsDeclared } kind;
    std::string detail;
    std::optional<std::size_t> member_index;
};

struct WellformedReport {
    std::optional<WellformedIssue> first_issue;
    bool ok() const { return !first_issue.has_value(); }
};

/// Binding soundness plus family discipline: every variable occurrence is
/// bound or among declared_free, no quantifier rebinds a variable already in
/// scope, and every Join/Meet member's inferred modulus and bound are
/// dominated by the family's declared ones.
WellformedReport check_wellformed(const FormulaPtr& f, const Signature& signature,
                                  const std::set<std::string>& declared_free);

/// Convenience overload: declared_free = the formula's own free variables.
WellformedReport check_wellformed(const FormulaPtr& f, const Signature& signature);

}  // namespace clw
