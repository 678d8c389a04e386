#include "crlp/engine.hpp"

#include <algorithm>
#include <utility>

namespace crlp {

void validate_clpp(const Clpp& p) {
    const std::size_t nv = p.var_names.size();
    if (p.objective.size() != nv)
        throw LpValidationError("objective length does not match the variable count");
    if (p.upper.size() != nv)
        throw LpValidationError("upper-bound list length does not match the variable count");
    for (std::size_t i = 0; i < p.rows.size(); ++i)
        if (p.rows[i].a.size() != nv)
            throw LpValidationError("row " + std::to_string(i) +
                                    " length does not match the variable count");
    for (const auto& u : p.upper)
        if (u && *u < Rational(0))
            throw LpValidationError("upper bound below the implicit lower bound 0");
}

bool operator==(const Clpp& a, const Clpp& b) {
    return a.sense == b.sense && a.var_names == b.var_names && a.objective == b.objective &&
           a.upper == b.upper &&
           std::equal(a.rows.begin(), a.rows.end(), b.rows.begin(), b.rows.end(),
                      [](const ClppRow& x, const ClppRow& y) {
                          return x.rel == y.rel && x.a == y.a && x.b == y.b;
                      });
}

IntervalLp interval_snapshot(const Clpp& p, const MachineEnv& env, Fuel level) {
    validate_clpp(p);
    IntervalLp s;
    s.sense = p.sense;
    s.nvars = p.var_names.size();
    s.upper = p.upper;
    for (const CrnExpr& e : p.objective)
        s.c.push_back(enclose_expr(e, env, level));
    for (const ClppRow& r : p.rows) {
        IntervalRow ir;
        ir.rel = r.rel;
        ir.b = enclose_expr(r.b, env, level);
        for (const CrnExpr& e : r.a)
            ir.a.push_back(enclose_expr(e, env, level));
        s.rows.push_back(std::move(ir));
    }
    return s;
}

namespace {

std::vector<Rational> side(const std::vector<Interval>& iv, bool hi) {
    std::vector<Rational> out;
    out.reserve(iv.size());
    for (const Interval& i : iv)
        out.push_back(hi ? i.hi : i.lo);
    return out;
}

}  // namespace

RelaxedPair outer_inner_relax(const IntervalLp& s) {
    const bool maximize = s.sense == Sense::Max;
    RelaxedPair pair;

    RatLp& outer = pair.outer;
    outer.sense = s.sense;
    outer.nvars = s.nvars;
    outer.c = side(s.c, maximize);
    for (std::size_t i = 0; i < s.nvars; ++i)
        outer.vars.push_back({false, s.upper[i]});
    for (const IntervalRow& r : s.rows) {
        switch (r.rel) {
            case Rel::Le:
                outer.rows.push_back({side(r.a, false), Rel::Le, r.b.hi});
                break;
            case Rel::Ge:
                outer.rows.push_back({side(r.a, true), Rel::Ge, r.b.lo});
                break;
            case Rel::Eq:
                // Some box point can reach b iff the reachable span
                // [sum lo_i x_i, sum hi_i x_i] meets [b.lo, b.hi].
                outer.rows.push_back({side(r.a, false), Rel::Le, r.b.hi});
                outer.rows.push_back({side(r.a, true), Rel::Ge, r.b.lo});
                break;
        }
    }

    RatLp inner;
    inner.sense = s.sense;
    inner.nvars = s.nvars;
    inner.c = side(s.c, !maximize);
    for (std::size_t i = 0; i < s.nvars; ++i)
        inner.vars.push_back({false, s.upper[i]});
    bool inner_usable = true;
    for (const IntervalRow& r : s.rows) {
        switch (r.rel) {
            case Rel::Le:
                inner.rows.push_back({side(r.a, true), Rel::Le, r.b.lo});
                break;
            case Rel::Ge:
                inner.rows.push_back({side(r.a, false), Rel::Ge, r.b.hi});
                break;
            case Rel::Eq: {
                // A fat equality has no robust interior. Pinning every
                // fat-coefficient variable to 0 removes its uncertainty; what
                // remains must be an exact row, and needs an exact rhs.
                if (!r.b.is_point()) {
                    inner_usable = false;
                    break;
                }
                std::vector<Rational> row(s.nvars, Rational(0));
                for (std::size_t i = 0; i < s.nvars; ++i) {
                    if (r.a[i].is_point()) {
                        row[i] = r.a[i].lo;
                    } else {
                        inner.vars[i].upper = Rational(0);
                    }
                }
                inner.rows.push_back({std::move(row), Rel::Eq, r.b.lo});
                break;
            }
        }
        if (!inner_usable)
            break;
    }
    if (inner_usable)
        pair.inner = std::move(inner);
    return pair;
}

namespace {

/// A feasible point of the LP, if any (ignores the objective).
std::optional<std::vector<Rational>> feasible_point(const RatLp& lp) {
    RatLp probe = lp;
    probe.c.assign(lp.nvars, Rational(0));
    LpOutcome out = solve_rational_lp(probe);
    if (auto* opt = std::get_if<Optimal>(&out))
        return std::move(opt->plan);
    return std::nullopt;
}

Interval plan_objective(const IntervalLp& s, const std::vector<Rational>& plan) {
    Interval acc = Interval::point(Rational(0));
    for (std::size_t i = 0; i < s.nvars; ++i)
        acc = acc + s.c[i] * plan[i];
    return acc;
}

}  // namespace

SemiVerdict<FeasibilityAnswer> decide_feasibility(const Clpp& p, const MachineEnv& env, Fuel fuel) {
    for (std::uint32_t t = 0; t <= fuel.t; ++t) {
        RelaxedPair relax = outer_inner_relax(interval_snapshot(p, env, Fuel{t}));
        LpOutcome outer = solve_rational_lp(relax.outer);
        if (auto* inf = std::get_if<Infeasible>(&outer)) {
            FeasibilityAnswer a;
            a.feasible = false;
            a.phase1_value = inf->phase1_value;
            return {std::move(a), Fuel{t}};
        }
        if (relax.inner) {
            if (auto plan = feasible_point(*relax.inner)) {
                FeasibilityAnswer a;
                a.feasible = true;
                a.plan = std::move(*plan);
                return {std::move(a), Fuel{t}};
            }
        }
    }
    return {std::nullopt, fuel};
}

SemiVerdict<BoundednessAnswer> decide_boundedness(const Clpp& p, const MachineEnv& env, Fuel fuel) {
    for (std::uint32_t t = 0; t <= fuel.t; ++t) {
        RelaxedPair relax = outer_inner_relax(interval_snapshot(p, env, Fuel{t}));
        LpOutcome outer = solve_rational_lp(relax.outer);
        if (auto* opt = std::get_if<Optimal>(&outer)) {
            BoundednessAnswer a;
            a.bounded = true;
            a.why = BoundednessAnswer::Why::OuterOptimal;
            a.value_bound = opt->value;
            return {std::move(a), Fuel{t}};
        }
        if (std::holds_alternative<Infeasible>(outer)) {
            BoundednessAnswer a;
            a.bounded = true;
            a.why = BoundednessAnswer::Why::OuterInfeasible;
            return {std::move(a), Fuel{t}};
        }
        if (relax.inner) {
            LpOutcome in = solve_rational_lp(*relax.inner);
            if (auto* ray = std::get_if<Unbounded>(&in)) {
                // An unbounded INNER is feasible, so this always yields a point.
                if (auto at = feasible_point(*relax.inner)) {
                    BoundednessAnswer a;
                    a.bounded = false;
                    a.why = BoundednessAnswer::Why::InnerRay;
                    a.ray = std::move(ray->ray);
                    a.at = std::move(*at);
                    return {std::move(a), Fuel{t}};
                }
            }
        }
    }
    return {std::nullopt, fuel};
}

namespace {

struct PlanLevelCheck {
    bool refuted = false;    // some constraint provably fails at the plan
    bool certified = false;  // every constraint provably holds at the plan
};

/// Encloses each row's slack at the plan (per-coefficient enclosures combined
/// with the exact rational plan; a pinned zero component silences a fat
/// coefficient exactly) and classifies the level.
PlanLevelCheck check_plan_at_level(const Clpp& p, const MachineEnv& env,
                                   const std::vector<Rational>& plan, std::uint32_t t) {
    PlanLevelCheck out;
    out.certified = true;
    for (const ClppRow& r : p.rows) {
        Interval slack = -enclose_expr(r.b, env, Fuel{t});
        for (std::size_t i = 0; i < plan.size(); ++i)
            slack = slack + enclose_expr(r.a[i], env, Fuel{t}) * plan[i];
        bool refuted = false;
        bool certified = false;
        switch (r.rel) {
            case Rel::Eq:
                refuted = slack.lo > Rational(0) || slack.hi < Rational(0);
                certified = slack.is_point() && slack.lo.is_zero();
                break;
            case Rel::Le:
                refuted = slack.lo > Rational(0);
                certified = slack.hi <= Rational(0);
                break;
            case Rel::Ge:
                refuted = slack.hi < Rational(0);
                certified = slack.lo >= Rational(0);
                break;
        }
        if (refuted) {
            out.refuted = true;
            out.certified = false;
            return out;
        }
        out.certified = out.certified && certified;
    }
    return out;
}

bool plan_violates_bounds(const Clpp& p, const std::vector<Rational>& plan) {
    for (std::size_t i = 0; i < plan.size(); ++i)
        if (plan[i] < Rational(0) || (p.upper[i] && plan[i] > *p.upper[i]))
            return true;
    return false;
}

}  // namespace

TernaryVerdict check_plan_feasible(const Clpp& p, const MachineEnv& env,
                                   const std::vector<Rational>& plan, Fuel fuel) {
    validate_clpp(p);
    if (plan.size() != p.var_names.size())
        throw LpValidationError("plan length does not match the variable count");
    // Bounds are exact rationals; violations are definitive at fuel 0.
    if (plan_violates_bounds(p, plan))
        return {Ternary::No, Fuel{0}};

    for (std::uint32_t t = 0; t <= fuel.t; ++t) {
        PlanLevelCheck lvl = check_plan_at_level(p, env, plan, t);
        if (lvl.refuted)
            return {Ternary::No, Fuel{t}};
        if (lvl.certified)
            return {Ternary::Yes, Fuel{t}};
    }
    return {Ternary::Unknown, fuel};
}

TernaryVerdict check_plan_optimal(const Clpp& p, const MachineEnv& env,
                                  const std::vector<Rational>& plan, Fuel fuel) {
    validate_clpp(p);
    if (plan.size() != p.var_names.size())
        throw LpValidationError("plan length does not match the variable count");
    const bool maximize = p.sense == Sense::Max;
    if (plan_violates_bounds(p, plan))
        return {Ternary::No, Fuel{0}};

    // A Yes must prove two things: the plan is feasible, and its value
    // reaches the OUTER optimum. Matching the plan value against OUTER alone
    // would let an unrefuted-but-infeasible plan slip through as "optimal".
    bool feasibility_certified = false;
    for (std::uint32_t t = 0; t <= fuel.t; ++t) {
        PlanLevelCheck lvl = check_plan_at_level(p, env, plan, t);
        if (lvl.refuted)
            return {Ternary::No, Fuel{t}};  // an infeasible plan is not optimal
        feasibility_certified = feasibility_certified || lvl.certified;

        IntervalLp snap = interval_snapshot(p, env, Fuel{t});
        RelaxedPair relax = outer_inner_relax(snap);
        Interval obj = plan_objective(snap, plan);

        LpOutcome outer = solve_rational_lp(relax.outer);
        if (std::holds_alternative<Infeasible>(outer))
            return {Ternary::No, Fuel{t}};  // nothing is optimal in an empty region
        if (auto* opt = std::get_if<Optimal>(&outer)) {
            bool attains = maximize ? obj.lo >= opt->value : obj.hi <= opt->value;
            if (attains && feasibility_certified)
                return {Ternary::Yes, Fuel{t}};
        }
        if (relax.inner) {
            LpOutcome in = solve_rational_lp(*relax.inner);
            if (std::holds_alternative<Unbounded>(in))
                return {Ternary::No, Fuel{t}};  // no optimum exists at all
            if (auto* opt = std::get_if<Optimal>(&in)) {
                bool beaten = maximize ? opt->value > obj.hi : opt->value < obj.lo;
                if (beaten)
                    return {Ternary::No, Fuel{t}};
            }
        }
    }
    return {Ternary::Unknown, fuel};
}

std::string Bound::str() const {
    switch (kind) {
        case Kind::Finite:
            return value.str();
        case Kind::NegInf:
            return "-inf";
        case Kind::PosInf:
            return "+inf";
        case Kind::Unknown:
            return "unknown";
    }
    return "unknown";
}

ValueBounds value_bounds(const Clpp& p, const MachineEnv& env, Fuel fuel) {
    const bool maximize = p.sense == Sense::Max;
    ValueBounds vb;
    vb.fuel = fuel;

    // For max sense: the upper side improves by shrinking, lower by growing;
    // min sense mirrors. "better" always means a tighter claim.
    auto tighten_outer = [&](const LpOutcome& out) {
        Bound& target = maximize ? vb.upper : vb.lower;
        if (const auto* opt = std::get_if<Optimal>(&out)) {
            if (target.kind != Bound::Kind::Finite ||
                (maximize ? opt->value < target.value : opt->value > target.value))
                target = Bound::finite(opt->value);
        } else if (std::holds_alternative<Unbounded>(out)) {
            if (target.kind == Bound::Kind::Unknown)
                target = maximize ? Bound::pos_inf() : Bound::neg_inf();
        }
        // OUTER infeasible: the problem has no value at all; no claim.
    };
    auto tighten_inner = [&](const LpOutcome& out) {
        Bound& target = maximize ? vb.lower : vb.upper;
        if (const auto* opt = std::get_if<Optimal>(&out)) {
            if (target.kind == Bound::Kind::Unknown ||
                (target.kind == Bound::Kind::Finite &&
                 (maximize ? opt->value > target.value : opt->value < target.value)))
                target = Bound::finite(opt->value);
        } else if (std::holds_alternative<Unbounded>(out)) {
            // A certified improving ray: the objective is provably unbounded.
            target = maximize ? Bound::pos_inf() : Bound::neg_inf();
        }
    };

    for (std::uint32_t t = 0; t <= fuel.t; ++t) {
        RelaxedPair relax = outer_inner_relax(interval_snapshot(p, env, Fuel{t}));
        tighten_outer(solve_rational_lp(relax.outer));
        if (relax.inner)
            tighten_inner(solve_rational_lp(*relax.inner));
    }
    return vb;
}

DiagnoseVerdict diagnose_unsolvable(const Clpp& p, const MachineEnv& env, Fuel fuel) {
    for (std::uint32_t t = 0; t <= fuel.t; ++t) {
        RelaxedPair relax = outer_inner_relax(interval_snapshot(p, env, Fuel{t}));
        if (std::holds_alternative<Infeasible>(solve_rational_lp(relax.outer)))
            return {UnsolvableReason::Infeasible, Fuel{t}};
        if (relax.inner && std::holds_alternative<Unbounded>(solve_rational_lp(*relax.inner)))
            return {UnsolvableReason::Unbounded, Fuel{t}};
    }
    return {UnsolvableReason::Unknown, fuel};
}

const char* family_name(Family f) {
    switch (f) {
        case Family::P: return "P";
        case Family::H: return "H";
        case Family::Q: return "Q";
        case Family::R: return "R";
        case Family::T: return "T";
        case Family::D: return "D";
    }
    return "?";
}

std::optional<Family> family_from_name(const std::string& name) {
    if (name.size() != 1)
        return std::nullopt;
    switch (name[0]) {
        case 'P': return Family::P;
        case 'H': return Family::H;
        case 'Q': return Family::Q;
        case 'R': return Family::R;
        case 'T': return Family::T;
        case 'D': return Family::D;
    }
    return std::nullopt;
}

Clpp make_family(Family f, const std::string& machine, std::uint64_t n) {
    auto one = CrnExpr::rat(Rational(1));
    auto zero = CrnExpr::rat(Rational(0));
    auto s = CrnExpr::specker(machine, n);
    Clpp p;
    p.sense = Sense::Max;
    switch (f) {
        case Family::P:
            p.var_names = {"x"};
            p.objective = {one};
            p.rows = {{{s}, Rel::Eq, zero}};
            p.upper = {Rational(1)};
            break;
        case Family::H: {
            p.var_names = {"x", "y"};
            p.objective = {CrnExpr::add(one, s), CrnExpr::sub(one, s)};
            p.rows = {{{one, one}, Rel::Le, one}};
            p.upper = {std::nullopt, std::nullopt};
            break;
        }
        case Family::Q:
            p.var_names = {"x"};
            p.objective = {one};
            p.rows = {{{s}, Rel::Eq, zero}};
            p.upper = {std::nullopt};
            break;
        case Family::R:
            p.var_names = {"x"};
            p.objective = {one};
            p.rows = {{{s}, Rel::Eq, zero}, {{one}, Rel::Eq, one}};
            p.upper = {std::nullopt};
            break;
        case Family::T:
            p.var_names = {"x", "y"};
            p.objective = {zero, one};
            p.rows = {{{s, zero}, Rel::Eq, zero}, {{one, zero}, Rel::Eq, one}};
            p.upper = {std::nullopt, std::nullopt};
            break;
        case Family::D: {
            auto a = CrnExpr::pair_a(machine, n);
            auto b = CrnExpr::pair_b(machine, n);
            p.var_names = {"x"};
            p.objective = {zero};
            p.rows = {{{CrnExpr::add(a, b)}, Rel::Eq, a}};
            p.upper = {Rational(1)};
            break;
        }
    }
    return p;
}

Crn optimal_value_crn_h(const MachineEnv& env, const std::string& machine, std::uint64_t n) {
    auto one = CrnExpr::rat(Rational(1));
    auto s = CrnExpr::specker(machine, n);
    return eval_expr(CrnExpr::vmax(CrnExpr::add(one, s), CrnExpr::sub(one, s)), env);
}

std::optional<RatLp> exact_ratlp_under(const Clpp& p, const GroundFn& ground) {
    validate_clpp(p);
    RatLp lp;
    lp.sense = p.sense;
    lp.nvars = p.var_names.size();
    for (const CrnExpr& e : p.objective) {
        auto v = exact_value_under(e, ground);
        if (!v)
            return std::nullopt;
        lp.c.push_back(std::move(*v));
    }
    for (const ClppRow& r : p.rows) {
        RatRow rr;
        rr.rel = r.rel;
        auto b = exact_value_under(r.b, ground);
        if (!b)
            return std::nullopt;
        rr.b = std::move(*b);
        for (const CrnExpr& e : r.a) {
            auto v = exact_value_under(e, ground);
            if (!v)
                return std::nullopt;
            rr.a.push_back(std::move(*v));
        }
        lp.rows.push_back(std::move(rr));
    }
    for (const auto& u : p.upper)
        lp.vars.push_back({false, u});
    return lp;
}

}  // namespace crlp
