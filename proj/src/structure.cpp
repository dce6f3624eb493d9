#include "clw/structure.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "clw/errors.hpp"

namespace clw {

namespace {

std::size_t table_size(std::size_t n, std::size_t arity) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < arity; ++i) {
        if (n != 0 && total > SIZE_MAX / n) throw Error(ErrorCode::BudgetExceeded, "table too large");
        total *= n;
    }
    return total;
}

std::size_t flat_index(const std::vector<std::size_t>& tuple, std::size_t n) {
    std::size_t idx = 0;
    for (std::size_t v : tuple) idx = idx * n + v;
    return idx;
}

std::string tuple_str(const std::vector<std::size_t>& t) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << t[i];
    os << ")";
    return os.str();
}

}  // namespace

const PredicateDecl* Signature::find(const std::string& name) const {
    for (const auto& p : predicates)
        if (p.name == name) return &p;
    return nullptr;
}

void validate_signature(const Signature& sig) {
    std::set<std::string> names;
    for (const auto& p : sig.predicates) {
        if (p.name.empty()) throw Error(ErrorCode::InvalidArgument, "empty predicate name");
        if (p.name == kDistanceSymbol)
            throw Error(ErrorCode::InvalidArgument, "predicate name 'd' is reserved for the metric");
        if (!names.insert(p.name).second)
            throw Error(ErrorCode::InvalidArgument, "duplicate predicate name " + p.name);
        if (p.arity < 1) throw Error(ErrorCode::InvalidArgument, p.name + ": arity must be >= 1");
        if (p.lipschitz.size() != p.arity)
            throw Error(ErrorCode::InvalidArgument, p.name + ": one Lipschitz constant per argument required");
        for (const Rat& c : p.lipschitz)
            if (c < 0) throw Error(ErrorCode::InvalidArgument, p.name + ": negative Lipschitz constant");
        if (p.bound < 0) throw Error(ErrorCode::InvalidArgument, p.name + ": negative bound");
    }
}

const Rat& StructureCode::pred_value(const PredicateDecl& decl,
                                     const std::vector<std::size_t>& args) const {
    const auto it = predicates.find(decl.name);
    if (it == predicates.end()) throw Error(ErrorCode::UnknownPredicate, decl.name);
    for (std::size_t a : args)
        if (a >= size) throw Error(ErrorCode::IndexOutOfRange, decl.name + " argument");
    return it->second[flat_index(args, size)];
}

const char* violation_kind_name(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::DimensionMismatch: return "dimension_mismatch";
        case ViolationKind::NegativeDistance: return "negative_distance";
        case ViolationKind::NonzeroDiagonal: return "nonzero_diagonal";
        case ViolationKind::AsymmetricDistance: return "asymmetric_distance";
        case ViolationKind::TriangleViolation: return "triangle_violation";
        case ViolationKind::ModulusViolation: return "modulus_violation";
        case ViolationKind::BoundViolation: return "bound_violation";
    }
    return "unknown";
}

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::IndexOutOfRange: return "index_out_of_range";
        case ErrorCode::LengthMismatch: return "length_mismatch";
        case ErrorCode::DimensionMismatch: return "dimension_mismatch";
        case ErrorCode::InconsistentPredicateOnClass: return "inconsistent_predicate_on_class";
        case ErrorCode::SyntaxError: return "syntax_error";
        case ErrorCode::UnknownPredicate: return "unknown_predicate";
        case ErrorCode::ArityMismatch: return "arity_mismatch";
        case ErrorCode::UnboundVariable: return "unbound_variable";
        case ErrorCode::ModulusExceedsDeclared: return "modulus_exceeds_declared";
        case ErrorCode::IllFormed: return "ill_formed";
        case ErrorCode::InsufficientPrefix: return "insufficient_prefix";
        case ErrorCode::BudgetExceeded: return "budget_exceeded";
        case ErrorCode::MissingStage: return "missing_stage";
        case ErrorCode::EmptySubspace: return "empty_subspace";
        case ErrorCode::InvalidArgument: return "invalid_argument";
        case ErrorCode::IoError: return "io_error";
    }
    return "unknown";
}

bool next_tuple(std::vector<std::size_t>& tuple, std::size_t size) {
    for (std::size_t pos = tuple.size(); pos-- > 0;) {
        if (++tuple[pos] < size) return true;
        tuple[pos] = 0;
    }
    return false;
}

ValidationReport validate_structure(const StructureCode& code) {
    const std::size_t n = code.size;
    auto fail = [](Violation v) {
        return ValidationReport{std::move(v)};
    };

    validate_signature(code.signature);
    if (n < 1)
        return fail({ViolationKind::DimensionMismatch, "", {}, {}, "size must be >= 1"});
    if (code.dist.size() != n)
        return fail({ViolationKind::DimensionMismatch, "", {}, {}, "dist must have N rows"});
    for (std::size_t i = 0; i < n; ++i)
        if (code.dist[i].size() != n)
            return fail({ViolationKind::DimensionMismatch, "", {i}, {}, "dist row has wrong length"});
    for (const auto& decl : code.signature.predicates) {
        auto it = code.predicates.find(decl.name);
        if (it == code.predicates.end())
            return fail({ViolationKind::DimensionMismatch, decl.name, {}, {}, "missing predicate table"});
        if (it->second.size() != table_size(n, decl.arity))
            return fail({ViolationKind::DimensionMismatch, decl.name, {}, {}, "predicate table has wrong size"});
    }
    for (const auto& [name, _] : code.predicates)
        if (!code.signature.find(name))
            return fail({ViolationKind::DimensionMismatch, name, {}, {}, "table for undeclared predicate"});

    // Pseudo-metric axioms.
    for (std::size_t i = 0; i < n; ++i) {
        if (code.dist[i][i] != 0)
            return fail({ViolationKind::NonzeroDiagonal, "", {i}, {}, "d(i,i) must be 0"});
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (code.dist[i][j] < 0)
                return fail({ViolationKind::NegativeDistance, "", {i, j}, {}, "negative distance"});
            if (code.dist[i][j] != code.dist[j][i])
                return fail({ViolationKind::AsymmetricDistance, "", {i, j}, {},
                             "d(" + std::to_string(i) + "," + std::to_string(j) + ") != transpose"});
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                if (code.dist[i][j] > code.dist[i][k] + code.dist[k][j])
                    return fail({ViolationKind::TriangleViolation, "", {i, j, k}, {},
                                 "d(" + std::to_string(i) + "," + std::to_string(j) + ") > d(" +
                                     std::to_string(i) + "," + std::to_string(k) + ") + d(" +
                                     std::to_string(k) + "," + std::to_string(j) + ")"});

    // Value bounds, then modulus compliance, per predicate in declaration order.
    for (const auto& decl : code.signature.predicates) {
        const PredTable& table = code.predicates.at(decl.name);
        std::vector<std::size_t> u(decl.arity, 0);
        std::size_t idx = 0;
        do {
            if (rat_abs(table[idx]) > decl.bound)
                return fail({ViolationKind::BoundViolation, decl.name, u, {},
                             decl.name + tuple_str(u) + " exceeds bound"});
            ++idx;
        } while (next_tuple(u, n));
    }
    for (const auto& decl : code.signature.predicates) {
        const PredTable& table = code.predicates.at(decl.name);
        std::vector<std::size_t> u(decl.arity, 0);
        std::size_t ui = 0;
        do {
            std::vector<std::size_t> v(decl.arity, 0);
            std::size_t vi = 0;
            do {
                Rat allowed = 0;
                for (std::size_t a = 0; a < decl.arity; ++a)
                    allowed += decl.lipschitz[a] * truncated_distance(code, u[a], v[a]);
                if (rat_abs(table[ui] - table[vi]) > allowed)
                    return fail({ViolationKind::ModulusViolation, decl.name, u, v,
                                 decl.name + ": |B" + tuple_str(u) + " - B" + tuple_str(v) +
                                     "| exceeds declared modulus"});
                ++vi;
            } while (next_tuple(v, n));
            ++ui;
        } while (next_tuple(u, n));
    }
    return {};
}

Rat truncated_distance(const StructureCode& code, std::size_t i, std::size_t j) {
    if (i >= code.size || j >= code.size) throw Error(ErrorCode::IndexOutOfRange, "truncated_distance");
    return rat_min(code.dist[i][j], Rat(1));
}

StructureCode quotient_zero_distance(const StructureCode& code) {
    const std::size_t n = code.size;
    // Zero-distance classes: the triangle inequality makes "distance zero"
    // transitive, so one sweep assigning each index to the first class at
    // distance 0 suffices.
    std::vector<std::size_t> cls(n, SIZE_MAX);
    std::vector<std::size_t> reps;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < reps.size(); ++c) {
            if (code.dist[i][reps[c]] == 0) {
                cls[i] = c;
                break;
            }
        }
        if (cls[i] == SIZE_MAX) {
            cls[i] = reps.size();
            reps.push_back(i);
        }
    }
    if (reps.size() == n) return code;

    // Predicate values must not depend on the class member chosen. Modulus
    // compliance forces this for valid codes; check anyway so misuse on an
    // unvalidated code is reported rather than silently resolved.
    for (const auto& decl : code.signature.predicates) {
        const PredTable& table = code.predicates.at(decl.name);
        std::vector<std::size_t> u(decl.arity, 0);
        std::size_t ui = 0;
        do {
            std::vector<std::size_t> r(decl.arity);
            for (std::size_t a = 0; a < decl.arity; ++a) r[a] = reps[cls[u[a]]];
            std::size_t ri = flat_index(r, n);
            if (table[ui] != table[ri])
                throw Error(ErrorCode::InconsistentPredicateOnClass,
                            decl.name + tuple_str(u) + " differs across a zero-distance class");
            ++ui;
        } while (next_tuple(u, n));
    }
    return reindex(code, reps);
}

StructureCode reindex(const StructureCode& code, const std::vector<std::size_t>& y) {
    for (std::size_t v : y)
        if (v >= code.size) throw Error(ErrorCode::IndexOutOfRange, "reindex");
    StructureCode out;
    out.signature = code.signature;
    out.size = y.size();
    out.dist.assign(y.size(), std::vector<Rat>(y.size()));
    for (std::size_t i = 0; i < y.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j) out.dist[i][j] = code.dist[y[i]][y[j]];
    for (const auto& decl : code.signature.predicates) {
        const PredTable& table = code.predicates.at(decl.name);
        PredTable pulled(table_size(y.size(), decl.arity));
        std::vector<std::size_t> u(decl.arity, 0);
        std::size_t ui = 0;
        do {
            std::vector<std::size_t> src(decl.arity);
            for (std::size_t a = 0; a < decl.arity; ++a) src[a] = y[u[a]];
            pulled[ui] = table[flat_index(src, code.size)];
            ++ui;
        } while (next_tuple(u, y.size()));
        out.predicates[decl.name] = std::move(pulled);
    }
    return out;
}

std::optional<std::vector<std::size_t>> iso_check(const StructureCode& a, const StructureCode& b) {
    if (a.size != b.size) return std::nullopt;
    if (a.signature != b.signature) return std::nullopt;
    std::vector<std::size_t> perm(a.size);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool ok = true;
        for (std::size_t i = 0; ok && i < a.size; ++i)
            for (std::size_t j = 0; ok && j < a.size; ++j)
                if (a.dist[i][j] != b.dist[perm[i]][perm[j]]) ok = false;
        for (const auto& decl : a.signature.predicates) {
            if (!ok) break;
            const PredTable& ta = a.predicates.at(decl.name);
            const PredTable& tb = b.predicates.at(decl.name);
            std::vector<std::size_t> u(decl.arity, 0);
            std::size_t ui = 0;
            do {
                std::vector<std::size_t> v(decl.arity);
                for (std::size_t x = 0; x < decl.arity; ++x) v[x] = perm[u[x]];
                if (ta[ui] != tb[flat_index(v, b.size)]) {
                    ok = false;
                    break;
                }
                ++ui;
            } while (next_tuple(u, a.size));
        }
        if (ok) return perm;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::nullopt;
}

PredTable encode_function_symbol(const StructureCode& code,
                                 const std::vector<std::size_t>& f_table, std::size_t arity) {
    const std::size_t n = code.size;
    if (f_table.size() != table_size(n, arity))
        throw Error(ErrorCode::DimensionMismatch, "encode_function_symbol: table size");
    for (std::size_t v : f_table)
        if (v >= n) throw Error(ErrorCode::IndexOutOfRange, "encode_function_symbol: value");
    PredTable out(table_size(n, arity + 1));
    for (std::size_t ui = 0; ui < f_table.size(); ++ui)
        for (std::size_t r = 0; r < n; ++r) out[ui * n + r] = code.dist[f_table[ui]][r];
    return out;
}

std::optional<Rat> min_positive_truncated_distance(const StructureCode& code) {
    std::optional<Rat> best;
    for (std::size_t i = 0; i < code.size; ++i)
        for (std::size_t j = i + 1; j < code.size; ++j) {
            Rat t = truncated_distance(code, i, j);
            if (t > 0 && (!best || t < *best)) best = t;
        }
    return best;
}

}  // namespace clw
