#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "clw/rational.hpp"

namespace clw {

// The binary distance symbol is part of every signature but is stored apart
// from ordinary predicates: it carries no value bound and its table is the
// `dist` matrix of the code.
inline constexpr const char* kDistanceSymbol = "d";

struct PredicateDecl {
    std::string name;
    std::size_t arity = 1;
    std::vector<Rat> lipschitz;  // one constant per argument, w.r.t. min(d,1)
    Rat bound = 0;               // |B(...)| <= bound

    bool operator==(const PredicateDecl&) const = default;
};

struct Signature {
    std::vector<PredicateDecl> predicates;

    const PredicateDecl* find(const std::string& name) const;
    bool operator==(const Signature&) const = default;
};

/// Checks name uniqueness, arity >= 1, per-argument constants, nonnegative
/// data, and that no predicate reuses the reserved distance symbol.
void validate_signature(const Signature& sig);

// Flat row-major table over point indices; predicate B of arity a on an
// N-point code has N^a entries.
using PredTable = std::vector<Rat>;

struct StructureCode {
    Signature signature;
    std::size_t size = 0;
    std::vector<std::vector<Rat>> dist;
    std::map<std::string, PredTable> predicates;

    const Rat& d(std::size_t i, std::size_t j) const { return dist[i][j]; }
    const Rat& pred_value(const PredicateDecl& decl, const std::vector<std::size_t>& args) const;

    bool operator==(const StructureCode&) const = default;
};

enum class ViolationKind {
    DimensionMismatch,
    NegativeDistance,
    NonzeroDiagonal,
    AsymmetricDistance,
    TriangleViolation,
    ModulusViolation,
    BoundViolation,
};

const char* violation_kind_name(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    std::string predicate;             // empty for metric violations
    std::vector<std::size_t> tuple_a;  // witnesses; meaning depends on kind
    std::vector<std::size_t> tuple_b;
    std::string message;
};

struct ValidationReport {
    std::optional<Violation> first_violation;
    bool ok() const { return !first_violation.has_value(); }
};

/// Scans the three invariant families in a fixed order (metric axioms,
/// value bounds, modulus compliance) and reports the first failure.
ValidationReport validate_structure(const StructureCode& code);

/// min(dist[i][j], 1).
Rat truncated_distance(const StructureCode& code, std::size_t i, std::size_t j);

/// Merges zero-distance index classes; the result has strictly positive
/// distances between distinct points. Class representatives keep the
/// smallest original index, in original order.
StructureCode quotient_zero_distance(const StructureCode& code);

/// Pulls tables back along y: the result has size |y| and
/// B'[i0..] = B[y(i0)..]. Validity is preserved.
StructureCode reindex(const StructureCode& code, const std::vector<std::size_t>& y);

/// Exact isomorphism search over point bijections (inputs should be
/// quotiented). Returns the first witness in lexicographic order, or
/// nullopt. Signature mismatch or size mismatch yields nullopt.
std::optional<std::vector<std::size_t>> iso_check(const StructureCode& a, const StructureCode& b);

/// Encodes a k-ary function table as a (k+1)-ary predicate table
/// B_f[u..., r] = dist[f(u...)][r], flat row-major.
PredTable encode_function_symbol(const StructureCode& code,
                                 const std::vector<std::size_t>& f_table, std::size_t arity);

/// Smallest positive truncated distance; nullopt when all points coincide
/// (size 1, or all-zero pseudo-metric).
std::optional<Rat> min_positive_truncated_distance(const StructureCode& code);

// Tuple enumeration helper shared by the oracles and the audits: visits all
// size^len index tuples in lexicographic order.
bool next_tuple(std::vector<std::size_t>& tuple, std::size_t size);

}  // namespace clw
