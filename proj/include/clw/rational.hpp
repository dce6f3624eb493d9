#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

namespace clw {

// Exact rational arithmetic throughout; no floating point anywhere in the
// value path, so equality tests in reports and tests are exact.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) { return Rat(num, den); }

/// Parses "p/q" or "p" (q > 0 after canonicalization). Returns nullopt on
/// malformed input instead of aborting, unlike mpq_class(std::string).
std::optional<Rat> parse_rational(const std::string& text);

/// Canonical form with an explicit denominator: 0 -> "0/1", -3 -> "-3/1".
std::string rational_string(const Rat& q);

inline Rat rat_abs(const Rat& q) { return q < 0 ? Rat(-q) : q; }
inline const Rat& rat_min(const Rat& a, const Rat& b) { return b < a ? b : a; }
inline const Rat& rat_max(const Rat& a, const Rat& b) { return a < b ? b : a; }

/// Least integer >= q, as an unsigned count. Requires q >= 0.
unsigned long rat_ceil_ulong(const Rat& q);

// Lipschitz constants and value bounds of formulas live in Q>=0 extended
// with infinity: the raw distance symbol is unbounded, so inference must be
// able to say so instead of inventing a finite constant.
struct ExtRat {
    bool infinite = false;
    Rat value = 0;

    static ExtRat inf() { return ExtRat{true, Rat(0)}; }
    static ExtRat fin(Rat v) { return ExtRat{false, std::move(v)}; }

    bool operator==(const ExtRat& o) const {
        return infinite == o.infinite && (infinite || value == o.value);
    }
    bool leq(const ExtRat& o) const {
        if (o.infinite) return true;
        if (infinite) return false;
        return value <= o.value;
    }
    /// Is this bounded above by finite r?
    bool leq(const Rat& r) const { return !infinite && value <= r; }

    ExtRat operator+(const ExtRat& o) const {
        if (infinite || o.infinite) return inf();
        return fin(value + o.value);
    }
    ExtRat scaled(const Rat& c) const {
        if (c == 0) return fin(0);
        if (infinite) return inf();
        return fin(c * value);
    }
    static ExtRat max(const ExtRat& a, const ExtRat& b) {
        if (a.infinite || b.infinite) return inf();
        return fin(rat_max(a.value, b.value));
    }
};

std::string to_string(const ExtRat& e);

}  // namespace clw
