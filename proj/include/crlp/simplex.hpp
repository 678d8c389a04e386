#pragma once

// Exact two-phase simplex over rationals with certificates, plus a
// brute-force vertex-enumeration oracle for testing. Everything is exact:
// there are no tolerances anywhere in this module.

#include "crlp/rational.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace crlp {

enum class Sense { Max, Min };
enum class Rel { Eq, Le, Ge };

inline const char* rel_text(Rel r) { return r == Rel::Eq ? "=" : (r == Rel::Le ? "<=" : ">="); }

struct RatRow {
    std::vector<Rational> a;
    Rel rel = Rel::Eq;
    Rational b;
};

/// Per-variable sign information. The lower bound is 0 unless the variable is
/// free, in which case the solver splits it into a difference of two
/// nonnegative parts. Upper bounds become explicit rows during solving.
struct VarBound {
    bool free = false;
    std::optional<Rational> upper;
};

struct RatLp {
    Sense sense = Sense::Max;
    std::size_t nvars = 0;
    std::vector<Rational> c;
    std::vector<RatRow> rows;
    std::vector<VarBound> vars;  // may be empty: all variables default to x >= 0
};

struct LpValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Throws LpValidationError on shape mismatches.
void validate_lp(const RatLp& lp);

struct Optimal {
    std::vector<Rational> plan;
    Rational value;
    std::vector<std::string> basis;  // labels of the final basic columns
};
struct Infeasible {
    Rational phase1_value;  // > 0: the unremovable artificial mass
};
struct Unbounded {
    std::vector<Rational> ray;  // feasible improving direction, original space
};
using LpOutcome = std::variant<Optimal, Infeasible, Unbounded>;

struct SolveStats {
    std::size_t pivots_phase1 = 0;
    std::size_t pivots_phase2 = 0;
};

/// Phase 1 with artificial variables decides feasibility, phase 2 optimizes.
/// Bland's rule guarantees termination. Certificates are exact: an Optimal
/// plan satisfies every constraint and value = c . plan; an Unbounded ray is
/// a homogeneously feasible improving direction.
LpOutcome solve_rational_lp(const RatLp& lp, SolveStats* stats = nullptr);

/// True iff the plan satisfies every row and bound exactly.
bool check_feasible_rational(const RatLp& lp, const std::vector<Rational>& plan);

/// True iff the ray is a recession direction (homogeneous feasibility) that
/// improves the objective. Used to audit Unbounded certificates.
bool check_improving_ray(const RatLp& lp, const std::vector<Rational>& ray);

/// All vertices (basic feasible solutions) with their objective values,
/// found by enumerating n-subsets of the constraint hyperplanes. Test-scale
/// guard: at most 6 variables and 12 rows. For a bounded feasible region the
/// best vertex value equals the simplex optimum.
std::vector<std::pair<std::vector<Rational>, Rational>> enumerate_vertices(const RatLp& lp);

}  // namespace crlp
