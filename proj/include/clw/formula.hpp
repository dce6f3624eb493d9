#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "clw/rational.hpp"

namespace clw {

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Static "type" of a formula: per-free-variable Lipschitz constants with
// respect to the truncated metric, plus a value bound.
struct ModulusVector {
    std::map<std::string, Rat> lipschitz;
    Rat value_bound = 0;

    bool operator==(const ModulusVector&) const = default;
};

// Finite presentation of a countable join/meet: an explicit prefix plus a
// flag recording whether the prefix is known to exhaust the family's value.
struct Family {
    std::vector<FormulaPtr> members;  // nonempty
    ModulusVector declared;
    bool lower_bound_only = false;
};

struct DistNode {
    std::string x, y;
    bool truncated = true;
};
struct AtomNode {
    std::string pred;
    std::vector<std::string> args;
};
struct ConstNode {
    Rat value;
};
struct AddNode {
    FormulaPtr f, g;
};
struct SubNode {
    FormulaPtr f, g;
};
struct ScaleNode {
    Rat factor;  // >= 0
    FormulaPtr f;
};
struct MinNode {
    FormulaPtr f, g;
};
struct MaxNode {
    FormulaPtr f, g;
};
struct AbsNode {
    FormulaPtr f;
};
struct SupNode {
    std::string var;
    FormulaPtr body;
};
struct InfNode {
    std::string var;
    FormulaPtr body;
};
struct JoinNode {
    Family family;
};
struct MeetNode {
    Family family;
};

struct Formula {
    std::variant<DistNode, AtomNode, ConstNode, AddNode, SubNode, ScaleNode, MinNode, MaxNode,
                 AbsNode, SupNode, InfNode, JoinNode, MeetNode>
        node;
};

// Construction helpers. Scale and families validate their arguments.
FormulaPtr mk_dist(std::string x, std::string y, bool truncated);
FormulaPtr mk_atom(std::string pred, std::vector<std::string> args);
FormulaPtr mk_const(Rat value);
FormulaPtr mk_add(FormulaPtr f, FormulaPtr g);
FormulaPtr mk_sub(FormulaPtr f, FormulaPtr g);
FormulaPtr mk_scale(Rat factor, FormulaPtr f);
FormulaPtr mk_min(FormulaPtr f, FormulaPtr g);
FormulaPtr mk_max(FormulaPtr f, FormulaPtr g);
FormulaPtr mk_abs(FormulaPtr f);
FormulaPtr mk_sup(std::string var, FormulaPtr body);
FormulaPtr mk_inf(std::string var, FormulaPtr body);
FormulaPtr mk_join(Family family);
FormulaPtr mk_meet(Family family);

/// Balanced max of a nonempty list (used for finitely many disjuncts that
/// are not a countable family).
FormulaPtr max_tree(const std::vector<FormulaPtr>& parts);
FormulaPtr min_tree(const std::vector<FormulaPtr>& parts);

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b);

std::set<std::string> free_variables(const FormulaPtr& f);

bool is_quantifier_free(const FormulaPtr& f);

/// Renames free variable occurrences. Restricted to quantifier-free
/// formulas, which is all synthesis needs; throws otherwise.
FormulaPtr rename_free(const FormulaPtr& f, const std::map<std::string, std::string>& renaming);

}  // namespace clw
