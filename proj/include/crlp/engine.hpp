#pragma once

// LPs whose coefficients are constructive reals, and the fuel-bounded
// semi-decision procedures over them. No procedure here is total -- that is
// provably impossible -- so every query answers Decided-with-certificate or
// an honest Unknown.
//
// The engine works through one construction: at working precision 2^-t each
// coefficient is enclosed in a rational interval, and the interval LP is
// relaxed to an OUTER rational LP (feasible set contains the true one) and an
// INNER rational LP (feasible set contained in the true one). Everything
// positive the engine ever asserts is backed by one of the two sides.

#include "crlp/crn.hpp"
#include "crlp/expr.hpp"
#include "crlp/rational.hpp"
#include "crlp/simplex.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace crlp {

struct ClppRow {
    std::vector<CrnExpr> a;
    Rel rel = Rel::Eq;
    CrnExpr b = CrnExpr::rat(Rational(0));
};

/// An LP with CrnExpr coefficients. Every variable is sign-restricted to
/// x >= 0 (lower bounds are implicit); that restriction is what makes the
/// interval relaxations linear, and it is validated rather than assumed.
struct Clpp {
    Sense sense = Sense::Max;
    std::vector<std::string> var_names;
    std::vector<CrnExpr> objective;
    std::vector<ClppRow> rows;
    std::vector<std::optional<Rational>> upper;  // per variable; lower is always 0
};

void validate_clpp(const Clpp& p);
bool operator==(const Clpp& a, const Clpp& b);
inline bool operator!=(const Clpp& a, const Clpp& b) { return !(a == b); }

/// Coefficient enclosure of a Clpp at one precision level.
struct IntervalRow {
    std::vector<Interval> a;
    Rel rel = Rel::Eq;
    Interval b = Interval::point(Rational(0));
};
struct IntervalLp {
    Sense sense = Sense::Max;
    std::size_t nvars = 0;
    std::vector<Interval> c;
    std::vector<IntervalRow> rows;
    std::vector<std::optional<Rational>> upper;
};

/// Encloses every coefficient at precision 2^-level.t. Machine-free
/// expressions become exact points, so an all-rational problem snapshots to
/// itself at any fuel, including 0.
IntervalLp interval_snapshot(const Clpp& p, const MachineEnv& env, Fuel level);

/// OUTER admits everything any coefficient choice in the box would admit;
/// INNER only what every choice admits. Uncertain equality rows cannot be
/// robustly satisfied except by forcing the fat-coefficient variables to 0;
/// when even that fails (fat right-hand side) there is no usable inner
/// approximation at this level and `inner` is empty.
struct RelaxedPair {
    RatLp outer;
    std::optional<RatLp> inner;
};
RelaxedPair outer_inner_relax(const IntervalLp& snapshot);

// Verdicts.

struct FeasibilityAnswer {
    bool feasible = false;
    std::vector<Rational> plan;  // when feasible: an INNER-certified plan
    Rational phase1_value;       // when infeasible: OUTER's positive phase-1 mass
};

struct BoundednessAnswer {
    bool bounded = false;
    enum class Why { OuterOptimal, OuterInfeasible, InnerRay };
    Why why = Why::OuterOptimal;
    std::optional<Rational> value_bound;  // OuterOptimal: certified bound on the objective
    std::vector<Rational> ray;            // InnerRay: improving recession direction
    std::vector<Rational> at;             // InnerRay: a feasible starting point
};

template <typename Answer>
struct SemiVerdict {
    std::optional<Answer> decided;  // empty = Unknown
    Fuel fuel;                      // deciding level, or the exhausted budget

    bool is_decided() const { return decided.has_value(); }
};

enum class Ternary { Yes, No, Unknown };
struct TernaryVerdict {
    Ternary value = Ternary::Unknown;
    Fuel fuel;
};

struct Bound {
    enum class Kind { Finite, NegInf, PosInf, Unknown };
    Kind kind = Kind::Unknown;
    Rational value;

    static Bound finite(Rational v) { return {Kind::Finite, std::move(v)}; }
    static Bound unknown() { return {Kind::Unknown, Rational(0)}; }
    static Bound pos_inf() { return {Kind::PosInf, Rational(0)}; }
    static Bound neg_inf() { return {Kind::NegInf, Rational(0)}; }
    bool finite_value() const { return kind == Kind::Finite; }
    std::string str() const;
};

/// Sound two-sided bounds on the optimal value: the upper side comes from
/// OUTER optima, the lower side from INNER-certified plans. lower = PosInf
/// records a proof that the objective is unbounded above. Both sides are
/// monotone in fuel by construction (running extremes over the level sweep).
struct ValueBounds {
    Bound lower = Bound::unknown();
    Bound upper = Bound::unknown();
    Fuel fuel;
};

enum class UnsolvableReason { Infeasible, Unbounded, Unknown };
struct DiagnoseVerdict {
    UnsolvableReason reason = UnsolvableReason::Unknown;
    Fuel fuel;
};

// Semi-decision procedures. Each sweeps levels t' = 0..fuel.t and returns at
// the first level that yields a certificate, which makes every Decided answer
// stable under fuel increase.

SemiVerdict<FeasibilityAnswer> decide_feasibility(const Clpp& p, const MachineEnv& env, Fuel fuel);

/// "Infeasible counts as bounded": an OUTER infeasibility certificate decides
/// bounded with Why::OuterInfeasible, mirroring the co-occurrence of the
/// three properties in the counterexample families.
SemiVerdict<BoundednessAnswer> decide_boundedness(const Clpp& p, const MachineEnv& env, Fuel fuel);

/// Yes when every constraint is robustly certified at some level, No when any
/// is refuted, Unknown otherwise. Bounds are exact and checked up front.
TernaryVerdict check_plan_feasible(const Clpp& p, const MachineEnv& env,
                                   const std::vector<Rational>& plan, Fuel fuel);

/// Pre: check_plan_feasible(p, env, plan, fuel) != No. Yes when the plan's
/// objective enclosure reaches the OUTER optimum; No when an INNER-certified
/// plan provably beats it.
TernaryVerdict check_plan_optimal(const Clpp& p, const MachineEnv& env,
                                  const std::vector<Rational>& plan, Fuel fuel);

ValueBounds value_bounds(const Clpp& p, const MachineEnv& env, Fuel fuel);

/// Pre: the caller promises p is unsolvable (infeasible or unbounded); the
/// verdict names the reason when a certificate appears within the budget.
DiagnoseVerdict diagnose_unsolvable(const Clpp& p, const MachineEnv& env, Fuel fuel);

// The counterexample families. Each is the smallest LP whose analysis
// encodes the halting of the bound machine on input n.

enum class Family { P, H, Q, R, T, D };

const char* family_name(Family f);
std::optional<Family> family_from_name(const std::string& name);

/// P: max x        s.t. s*x = 0,        0 <= x <= 1
/// H: max (1+s)x + (1-s)y   s.t. x + y <= 1, x, y >= 0
/// Q: max x        s.t. s*x = 0,        x >= 0
/// R: max x        s.t. s*x = 0,  x = 1
/// T: max y        s.t. s*x = 0,  x = 1
/// D: feasibility (objective 0) of (a+b)*x = a, 0 <= x <= 1
Clpp make_family(Family f, const std::string& machine, std::uint64_t n);

/// max(1+s, 1-s): the optimal value of H as a Crn. It is computable even
/// though no procedure here (or anywhere) produces an optimal plan for H.
Crn optimal_value_crn_h(const MachineEnv& env, const std::string& machine, std::uint64_t n);

/// Instantiates the problem with exact coefficient values from known halting
/// behavior. nullopt when some machine's status is unknown. This is the
/// oracle side of every cross-check; it never feeds back into the deciders.
std::optional<RatLp> exact_ratlp_under(const Clpp& p, const GroundFn& ground);

}  // namespace crlp
