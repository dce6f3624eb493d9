#pragma once

#include <string>

#include "clw/formula.hpp"
#include "clw/structure.hpp"

namespace clw {

/// Parses the s-expression grammar:
///   (d x y) (dhat x y) (pred NAME x1 ... xk) (const p/q)
///   (add f g) (sub f g) (scale p/q f) (min f g) (max f g) (abs f)
///   (sup x f) (inf x f)
///   (join [mod-decl] [:lower-bound-only] f1 f2 ...) and (meet ...)
/// where mod-decl is (mod ((var p/q) ...) bound). A family without an
/// explicit mod-decl gets the pointwise max of its members' inferred moduli,
/// which must all be finite.
///
/// When a signature is given, predicate names and arities are checked
/// (UnknownPredicate / ArityMismatch); otherwise atoms are accepted as-is.
FormulaPtr parse_formula(const std::string& text, const Signature* signature = nullptr);

/// Canonical text; parse_formula(print_formula(f)) reproduces f exactly.
/// Family modulus declarations are always printed.
std::string print_formula(const FormulaPtr& f);

}  // namespace clw
