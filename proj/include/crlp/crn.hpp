#pragma once

// Constructive real numbers. A Crn is a pair of total algorithms: `fund`
// produces rational approximants, `reg` maps a positive tolerance eps to an
// index beyond which the approximants vary by at most eps. The limit value is
// never materialized; every consumer works through approx().
//
// Order is only semi-decidable: compare_fuel sweeps a precision schedule and
// reports Less/Greater only when a positive rational gap has been exhibited,
// Unknown otherwise. That honesty is the point of the whole workbench.

#include "crlp/rational.hpp"

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <utility>

namespace crlp {

using Index = std::uint64_t;

/// Unified budget: working precision 2^-t and machine step allowance t.
struct Fuel {
    std::uint32_t t = 0;
    Rational eps() const { return Rational::pow2(-static_cast<long>(t)); }
};

class Crn {
public:
    using FundFn = std::function<Rational(Index)>;
    using RegFn = std::function<Index(const Rational&)>;

    Crn(FundFn fund, RegFn reg) : fund_(std::move(fund)), reg_(std::move(reg)) {}

    /// Standard real presentation of a rational: constant sequence, trivial
    /// regulator that answers 1 for every tolerance.
    static Crn from_rational(Rational q) {
        return Crn([q = std::move(q)](Index) { return q; },
                   [](const Rational&) -> Index { return 1; });
    }

    Rational fund(Index n) const { return fund_(n); }

    Index reg(const Rational& eps) const {
        if (eps.sign() <= 0)
            throw std::domain_error("Crn::reg: tolerance must be positive");
        return reg_(eps);
    }

private:
    FundFn fund_;
    RegFn reg_;
};

/// fund(reg(eps) + 1); the result is within eps of the limit.
inline Rational approx(const Crn& x, const Rational& eps) {
    return x.fund(x.reg(eps) + 1);
}

/// [approx(x, eps) - eps, approx(x, eps) + eps]: a sound enclosure of x.
inline Interval enclose(const Crn& x, const Rational& eps) {
    Rational q = approx(x, eps);
    return Interval(q - eps, q + eps);
}

// Arithmetic. Regulators are derived by error propagation: binary add-like
// ops split the tolerance between the operands; mul scales it by static
// magnitude bounds obtained from one coarse approximation. Tolerances fed to
// operand regulators are capped at 1 so the magnitude bounds stay valid for
// arbitrarily large eps.

namespace detail {
inline Rational cap1(const Rational& eps) { return min(eps, Rational(1)); }
}  // namespace detail

inline Crn operator+(const Crn& x, const Crn& y) {
    return Crn(
        [x, y](Index n) { return x.fund(n) + y.fund(n); },
        [x, y](const Rational& eps) {
            Rational half = detail::cap1(eps / Rational(2));
            return std::max(x.reg(half), y.reg(half));
        });
}

inline Crn operator-(const Crn& x) {
    return Crn([x](Index n) { return -x.fund(n); },
               [x](const Rational& eps) { return x.reg(detail::cap1(eps / Rational(2))); });
}

inline Crn operator-(const Crn& x, const Crn& y) { return x + (-y); }

inline Crn operator*(const Crn& x, const Crn& y) {
    // |x|, |y| and every fund value past reg(1) are bounded by these.
    Rational bx = abs(approx(x, Rational(1))) + Rational(2);
    Rational by = abs(approx(y, Rational(1))) + Rational(2);
    return Crn(
        [x, y](Index n) { return x.fund(n) * y.fund(n); },
        [x, y, bx, by](const Rational& eps) {
            Rational ex = detail::cap1(eps / (Rational(2) * by));
            Rational ey = detail::cap1(eps / (Rational(2) * bx));
            Index ix = std::max(x.reg(ex), x.reg(Rational(1)));
            Index iy = std::max(y.reg(ey), y.reg(Rational(1)));
            return std::max(ix, iy);
        });
}

inline Crn cmax(const Crn& x, const Crn& y) {
    return Crn(
        [x, y](Index n) { return max(x.fund(n), y.fund(n)); },
        [x, y](const Rational& eps) {
            Rational half = detail::cap1(eps / Rational(2));
            return std::max(x.reg(half), y.reg(half));
        });
}

inline Crn cmin(const Crn& x, const Crn& y) {
    return Crn(
        [x, y](Index n) { return min(x.fund(n), y.fund(n)); },
        [x, y](const Rational& eps) {
            Rational half = detail::cap1(eps / Rational(2));
            return std::max(x.reg(half), y.reg(half));
        });
}

inline Crn cabs(const Crn& x) {
    return Crn([x](Index n) { return abs(x.fund(n)); },
               [x](const Rational& eps) { return x.reg(detail::cap1(eps / Rational(2))); });
}

/// Division by a nonzero rational. General Crn division needs an apartness
/// witness and is out of scope.
inline Crn div_rational(const Crn& x, const Rational& q) {
    if (q.is_zero())
        throw std::domain_error("div_rational: divisor is zero");
    return Crn([x, q](Index n) { return x.fund(n) / q; },
               [x, q](const Rational& eps) { return x.reg(eps * abs(q)); });
}

// Order queries.

struct OrderVerdict {
    enum class Kind { Less, Greater, Unknown };
    Kind kind = Kind::Unknown;
    /// Level that decided, or the exhausted budget for Unknown.
    Fuel fuel;

    bool decided() const { return kind != Kind::Unknown; }
};

/// Sweeps precisions 2^-t' for t' = 0..fuel.t and reports the first level at
/// which the two enclosures separate. Less/Greater exhibit a positive
/// rational gap, so they are sound; Unknown says only that this budget did
/// not separate the inputs.
inline OrderVerdict compare_fuel(const Crn& x, const Crn& y, Fuel fuel) {
    for (std::uint32_t t = 0; t <= fuel.t; ++t) {
        Rational eps = Rational::pow2(-static_cast<long>(t));
        Interval ix = enclose(x, eps);
        Interval iy = enclose(y, eps);
        if (ix.hi < iy.lo)
            return {OrderVerdict::Kind::Less, Fuel{t}};
        if (iy.hi < ix.lo)
            return {OrderVerdict::Kind::Greater, Fuel{t}};
    }
    return {OrderVerdict::Kind::Unknown, fuel};
}

enum class Order { Less, Greater };

/// Total only under the promise x != y; escalates fuel until the gap shows.
/// Diverges on equal inputs -- callers that cannot promise apartness must cap
/// the escalation themselves.
inline Order order_of_apart(const Crn& x, const Crn& y) {
    for (std::uint32_t f = 1;; ++f) {
        OrderVerdict v = compare_fuel(x, y, Fuel{f});
        if (v.kind == OrderVerdict::Kind::Less)
            return Order::Less;
        if (v.kind == OrderVerdict::Kind::Greater)
            return Order::Greater;
    }
}

struct RefuteVerdict {
    bool refuted = false;
    Fuel fuel;
};

/// x <= y can never be affirmed at finite fuel, only refuted: Refuted iff
/// y < x was exhibited within the budget.
inline RefuteVerdict refute_leq(const Crn& x, const Crn& y, Fuel fuel) {
    OrderVerdict v = compare_fuel(y, x, fuel);
    return {v.kind == OrderVerdict::Kind::Less, v.fuel};
}

/// Coarse locator: maps x promised to lie in E to a bit b with x in E_b,
/// where E_0 and E_1 are the left/right subintervals of 2/3 the length.
/// Always terminates, but is deliberately not well defined on the real x
/// denotes: equal Crns presented differently may yield different bits.
inline int coarse_locate(const Crn& x, const Interval& e) {
    if (!(e.lo < e.hi))
        throw std::invalid_argument("coarse_locate: empty interval");
    Rational len = e.width();
    Rational q = approx(x, len / Rational(6));
    return q <= e.mid() ? 0 : 1;
}

}  // namespace crlp
