#pragma once

#include <memory>
#include <unordered_map>

#include "clw/formula.hpp"
#include "clw/structure.hpp"

namespace clw {

// Soundness tag carried by every evaluation result. Lower means the computed
// value is <= the formula's true value (a non-exhausted Join prefix), Upper
// the dual, Unknown neither. Arithmetic combines tags conservatively.
enum class Bound { Exact, Lower, Upper, Unknown };

const char* bound_name(Bound b);

struct TaggedRat {
    Rat value;
    Bound tag = Bound::Exact;
};

using Env = std::map<std::string, std::size_t>;

/// Exact interpreter over a fixed structure code. Sup/Inf range over the
/// code points. Results are memoized per subformula against the restriction
/// of the environment to the subformula's free variables, so sweeps over
/// many environments of the same formula share work. A quantifier whose
/// variable does not occur in its body is evaluated without looping.
///
/// The structure must stay alive for the evaluator's lifetime; evaluated
/// formulas are retained internally.
class Evaluator {
  public:
    explicit Evaluator(const StructureCode& structure);
    ~Evaluator();

    Evaluator(const Evaluator&) = delete;
    Evaluator& operator=(const Evaluator&) = delete;

    TaggedRat eval(const FormulaPtr& f, const Env& env);

    const StructureCode& structure() const { return structure_; }

  private:
    struct NodeInfo;
    struct Impl;

    const StructureCode& structure_;
    std::unique_ptr<Impl> impl_;
};

/// One-shot convenience wrapper.
TaggedRat eval_formula(const FormulaPtr& f, const StructureCode& p, const Env& env);

struct LipschitzAuditReport {
    bool ok = true;
    Env env_a, env_b;  // witness pair when !ok
    std::string detail;
};

/// Exhaustively verifies |eval(f,e) - eval(f,e')| <= sum_v L_v * dhat(e(v),e'(v))
/// over all environment pairs, with the L_v from infer_modulus. Requires
/// exact families and finite inferred constants.
LipschitzAuditReport lipschitz_audit(const FormulaPtr& f, const StructureCode& p,
                                     std::size_t budget = 10'000'000);

}  // namespace clw
