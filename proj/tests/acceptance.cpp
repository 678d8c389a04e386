// Acceptance suite: runs every top-level requirement at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit code = number of
// failures.

#include "crlp/engine.hpp"
#include "crlp/gallery.hpp"
#include "crlp/machine.hpp"
#include "crlp/simplex.hpp"

#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <vector>

using namespace crlp;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void fail(const std::string& why) {
        if (ok) {
            ok = false;
            detail = why;
        }
    }
    void require(bool cond, const std::string& why) {
        if (!cond)
            fail(why);
    }
};

Rational rand_rational(std::mt19937& rng, int num_lo, int num_hi, int den_hi) {
    std::uniform_int_distribution<int> num(num_lo, num_hi);
    std::uniform_int_distribution<int> den(1, den_hi);
    return Rational(num(rng), den(rng));
}

// ---------------------------------------------------------------------------
// 1. Regulator/arithmetic suite: 1000 randomized embedded-rational cases per
//    operation, approximation error <= eps for every eps = 2^-k, k = 1..16.

void criterion_regulator_arithmetic(Check& c) {
    std::mt19937 rng(101);
    std::vector<Rational> eps_grid;
    for (int k = 1; k <= 16; ++k)
        eps_grid.push_back(Rational::pow2(-k));

    for (int i = 0; i < 1000 && c.ok; ++i) {
        Rational a = rand_rational(rng, -60, 60, 16);
        Rational b = rand_rational(rng, -60, 60, 16);
        Crn ea = Crn::from_rational(a), eb = Crn::from_rational(b);
        Rational d = b.is_zero() ? Rational(1) : b;
        struct Case {
            const char* op;
            Crn value;
            Rational exact;
        };
        Case cases[] = {
            {"add", ea + eb, a + b},
            {"neg", -ea, -a},
            {"mul", ea * eb, a * b},
            {"max", cmax(ea, eb), max(a, b)},
            {"min", cmin(ea, eb), min(a, b)},
            {"abs", cabs(ea), abs(a)},
            {"div_rational", div_rational(ea, d), a / d},
        };
        for (const Case& cs : cases) {
            for (const Rational& eps : eps_grid) {
                if (abs(approx(cs.value, eps) - cs.exact) > eps) {
                    c.fail(std::string("op ") + cs.op + " violated eps " + eps.str() + " on a=" +
                           a.str() + " b=" + b.str());
                    return;
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// 2. Specker suite: exact values once the halt step is inside the tolerance,
//    identically zero for the silent machine, and the geometric Cauchy bound
//    on all term pairs up to 64.

void criterion_specker(Check& c) {
    for (std::uint64_t m = 1; m <= 12; ++m) {
        for (int bit : {0, 1}) {
            Crn s = specker_crn(make_halts_at(m, bit), 1);
            Rational eps = Rational::pow2(-static_cast<long>(m + 4));
            Rational expected = Rational::pow2(-static_cast<long>(m));
            if (bit == 0)
                expected = -expected;
            if (approx(s, eps) != expected) {
                c.fail("halts_at(" + std::to_string(m) + "," + std::to_string(bit) +
                       ") approx != " + expected.str());
                return;
            }
        }
    }
    Crn silent = specker_crn(make_never_halts(), 1);
    for (int k = 0; k <= 24; ++k)
        c.require(approx(silent, Rational::pow2(-k)) == Rational(0),
                  "never_halts approximation nonzero at 2^-" + std::to_string(k));
    c.require(approx(silent, Rational(1, 3)) == Rational(0), "never_halts nonzero at 1/3");

    std::vector<StepMachine> machines;
    for (std::uint64_t m = 1; m <= 12; m += 3) {
        machines.push_back(make_halts_at(m, 1));
        machines.push_back(make_halts_at(m, 0));
    }
    machines.push_back(make_never_halts());
    machines.push_back(make_even_odd());
    for (const StepMachine& m : machines) {
        for (std::uint64_t j = 0; j <= 64 && c.ok; ++j) {
            for (std::uint64_t k = 0; k <= 64; ++k) {
                Rational bound = Rational::pow2(-static_cast<long>(std::min(j, k)));
                if (abs(specker_term(m, 2, j) - specker_term(m, 2, k)) > bound) {
                    c.fail("Cauchy bound violated for " + m.name + " at (" + std::to_string(j) +
                           "," + std::to_string(k) + ")");
                    return;
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// 3. Simplex oracle equivalence on 500 random rational LPs: outcome class and
//    optimal value match brute-force vertex enumeration exactly.

void criterion_simplex_oracle(Check& c) {
    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> nv_d(1, 4), rows_d(1, 6), num_d(-3, 3), den_d(1, 4);
    std::uniform_int_distribution<int> rel_d(0, 2), ub_d(0, 9);
    for (int iter = 0; iter < 500 && c.ok; ++iter) {
        RatLp lp;
        lp.sense = Sense::Max;
        lp.nvars = static_cast<std::size_t>(nv_d(rng));
        for (std::size_t i = 0; i < lp.nvars; ++i)
            lp.c.push_back(Rational(num_d(rng), den_d(rng)));
        int nrows = rows_d(rng);
        for (int r = 0; r < nrows; ++r) {
            RatRow row;
            for (std::size_t i = 0; i < lp.nvars; ++i)
                row.a.push_back(Rational(num_d(rng), den_d(rng)));
            int rel = rel_d(rng);
            row.rel = rel == 0 ? Rel::Eq : (rel == 1 ? Rel::Le : Rel::Ge);
            row.b = Rational(num_d(rng), den_d(rng));
            lp.rows.push_back(std::move(row));
        }
        for (std::size_t i = 0; i < lp.nvars; ++i) {
            VarBound vb;
            if (ub_d(rng) < 3)
                vb.upper = Rational(ub_d(rng) % 4);
            lp.vars.push_back(vb);
        }

        auto vertices = enumerate_vertices(lp);
        LpOutcome out = solve_rational_lp(lp);
        if (vertices.empty()) {
            c.require(std::holds_alternative<Infeasible>(out),
                      "oracle infeasible, solver disagrees (iter " + std::to_string(iter) + ")");
            continue;
        }
        Rational best = vertices[0].second;
        for (const auto& [_, v] : vertices)
            best = max(best, v);
        RatLp boxed = lp;
        const Rational big(1000000000);
        for (VarBound& vb : boxed.vars)
            if (!vb.upper)
                vb.upper = big;
        Rational boxed_best = best;
        for (const auto& [_, v] : enumerate_vertices(boxed))
            boxed_best = max(boxed_best, v);
        if (boxed_best != best) {
            c.require(std::holds_alternative<Unbounded>(out),
                      "oracle unbounded, solver disagrees (iter " + std::to_string(iter) + ")");
            if (c.ok)
                c.require(check_improving_ray(lp, std::get<Unbounded>(out).ray),
                          "unbounded ray certificate invalid (iter " + std::to_string(iter) + ")");
        } else {
            if (!std::holds_alternative<Optimal>(out)) {
                c.fail("oracle optimal, solver disagrees (iter " + std::to_string(iter) + ")");
                continue;
            }
            const auto& opt = std::get<Optimal>(out);
            c.require(opt.value == best, "optimal value mismatch (iter " + std::to_string(iter) +
                                             "): solver " + opt.value.str() + " oracle " +
                                             best.str());
            c.require(check_feasible_rational(lp, opt.plan),
                      "optimal plan infeasible (iter " + std::to_string(iter) + ")");
        }
    }
}

// ---------------------------------------------------------------------------
// 4. Case-analysis reproduction: the gallery sweep over all six families and
//    the four reference machines has zero Decided/oracle mismatches at fuel
//    <= 64, and the designated queries with the silent machine stay Unknown
//    at fuel 4096. Each decider is a first-hit sweep over levels 0..fuel, so
//    Unknown at 4096 is Unknown at every smaller fuel too.

GalleryResult reference_gallery() {
    GalleryConfig cfg;
    cfg.machines = {make_halts_at(3, 1), make_halts_at(4, 0), make_halts_at(10, 1),
                    make_never_halts()};
    cfg.fuel_cap = 64;
    cfg.probe_budget = 1 << 14;
    return run_gallery(cfg);
}

void criterion_case_analysis(Check& c, const GalleryResult& gallery) {
    c.require(gallery.ok && !gallery.report.invariant_violation,
              "gallery reported an oracle mismatch");
    std::size_t decided = 0;
    for (const ReportRecord& r : gallery.report.records)
        if (r.payload.contains("verdict") && r.payload["verdict"] != "unknown")
            ++decided;
    c.require(decided > 0, "gallery decided nothing at all");

    MachineEnv env;
    env.bind(make_never_halts());
    const Fuel deep{4096};
    c.require(check_plan_feasible(make_family(Family::P, "never_halts", 1), env, {Rational(1)},
                                  deep)
                      .value == Ternary::Unknown,
              "P: plan x=1 feasibility was decided for the silent machine");
    c.require(check_plan_optimal(make_family(Family::P, "never_halts", 1), env, {Rational(0)},
                                 deep)
                      .value == Ternary::Unknown,
              "P: plan x=0 optimality was decided for the silent machine");
    c.require(!decide_boundedness(make_family(Family::Q, "never_halts", 1), env, deep)
                   .is_decided(),
              "Q: boundedness was decided for the silent machine");
    c.require(!decide_feasibility(make_family(Family::R, "never_halts", 1), env, deep)
                   .is_decided(),
              "R: feasibility was decided for the silent machine");
    c.require(diagnose_unsolvable(make_family(Family::T, "never_halts", 1), env, deep).reason ==
                  UnsolvableReason::Unknown,
              "T: unsolvability reason was decided for the silent machine");
    c.require(!decide_feasibility(make_family(Family::D, "never_halts", 1), env, deep)
                   .is_decided(),
              "D: feasibility was decided for the silent machine");
}

// ---------------------------------------------------------------------------
// 5. The value/plan gap for family H: the optimal value is approximated to
//    2^-16 against ground truth, while the only plan-flavored records are
//    locator estimates whose sole assertion is subinterval membership.

void criterion_h_gap(Check& c, const GalleryResult& gallery) {
    MachineEnv env;
    for (StepMachine m : {make_halts_at(3, 1), make_halts_at(4, 0), make_halts_at(10, 1),
                          make_never_halts()})
        env.bind(m);
    Rational eps = Rational::pow2(-16);
    struct Case {
        const char* machine;
        Rational expected;
    };
    Case cases[] = {
        {"halts_at_3_1", Rational(1) + Rational(1, 8)},
        {"halts_at_4_0", Rational(1) + Rational(1, 16)},
        {"halts_at_10_1", Rational(1) + Rational(1, 1024)},
        {"never_halts", Rational(1)},
    };
    for (const Case& cs : cases) {
        Rational got = approx(optimal_value_crn_h(env, cs.machine, 1), eps);
        if (abs(got - cs.expected) > eps) {
            c.fail(std::string("H value for ") + cs.machine + ": got " + got.str() +
                   ", expected within 2^-16 of " + cs.expected.str());
            return;
        }
    }

    std::size_t locates = 0;
    for (const ReportRecord& r : gallery.report.records) {
        if (r.family != "H")
            continue;
        if (r.kind == "plan_estimate_locate") {
            ++locates;
            if (!r.payload["estimate_x"].is_null())
                c.require(r.payload["in_subinterval"].get<bool>(),
                          "locator membership guarantee violated");
        } else {
            c.require(r.kind == "value_bounds" || r.kind == "optimal_value_approx",
                      "family H exposes an unexpected record kind: " + r.kind);
        }
    }
    c.require(locates > 0, "no locator records for family H");
}

// ---------------------------------------------------------------------------
// 6. Fuel monotonicity across the full gallery sweep: verdicts never
//    downgrade or flip, and value bounds nest.

void criterion_monotonicity(Check& c, const GalleryResult& gallery) {
    std::map<std::string, std::vector<const ReportRecord*>> streams;
    for (const ReportRecord& r : gallery.report.records) {
        std::string plan = r.payload.contains("plan") && r.payload["plan"].is_string()
                               ? r.payload["plan"].get<std::string>()
                               : "";
        streams[r.family + "|" + r.machine + "|" + std::to_string(r.n) + "|" + r.kind + "|" +
                plan]
            .push_back(&r);
    }
    for (auto& [key, recs] : streams) {
        std::sort(recs.begin(), recs.end(),
                  [](const ReportRecord* a, const ReportRecord* b) { return a->fuel < b->fuel; });
        std::string decided_verdict;
        Rational lower, upper;
        bool have_lower = false, have_upper = false;
        for (const ReportRecord* r : recs) {
            if (r->payload.contains("verdict")) {
                std::string v = r->payload["verdict"].get<std::string>();
                if (!decided_verdict.empty()) {
                    if (v != decided_verdict) {
                        c.fail("verdict changed from " + decided_verdict + " to " + v + " in " +
                               key);
                        return;
                    }
                } else if (v != "unknown") {
                    decided_verdict = v;
                }
            }
            if (r->payload.contains("bounds")) {
                const auto& b = r->payload["bounds"];
                auto lo = Rational::parse(b["lower"].get<std::string>());
                auto hi = Rational::parse(b["upper"].get<std::string>());
                if (lo) {
                    if (have_lower && *lo < lower) {
                        c.fail("lower bound regressed in " + key);
                        return;
                    }
                    lower = *lo;
                    have_lower = true;
                }
                if (hi) {
                    if (have_upper && *hi > upper) {
                        c.fail("upper bound regressed in " + key);
                        return;
                    }
                    upper = *hi;
                    have_upper = true;
                }
                if (have_lower && have_upper && lower > upper) {
                    c.fail("bounds crossed in " + key);
                    return;
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// 7. Exactness degeneration: on all-rational problems every semi-decider
//    decides at fuel 0 and matches the exact solver.

void criterion_exactness(Check& c) {
    MachineEnv env;
    GroundFn no_machines = [](const std::string&, std::uint64_t) {
        return HaltStatus::unknown();
    };

    std::vector<std::string> texts;
    struct Prob {
        Clpp p;
        const char* label;
    };
    std::vector<Prob> problems;

    Clpp box;
    box.var_names = {"x"};
    box.objective = {CrnExpr::rat(Rational(1))};
    box.rows = {{{CrnExpr::rat(Rational(0))}, Rel::Eq, CrnExpr::rat(Rational(0))}};
    box.upper = {Rational(1)};
    problems.push_back({box, "0x=0 box"});

    Clpp seg;
    seg.var_names = {"x", "y"};
    seg.objective = {CrnExpr::rat(Rational(1)), CrnExpr::rat(Rational(1))};
    seg.rows = {{{CrnExpr::rat(Rational(1)), CrnExpr::rat(Rational(1))}, Rel::Le,
                 CrnExpr::rat(Rational(1))}};
    seg.upper = {std::nullopt, std::nullopt};
    problems.push_back({seg, "segment"});

    Clpp unb;
    unb.var_names = {"x"};
    unb.objective = {CrnExpr::rat(Rational(1))};
    unb.rows = {{{CrnExpr::rat(Rational(0))}, Rel::Eq, CrnExpr::rat(Rational(0))}};
    unb.upper = {std::nullopt};
    problems.push_back({unb, "unbounded"});

    Clpp inf;
    inf.var_names = {"x"};
    inf.objective = {CrnExpr::rat(Rational(1))};
    inf.rows = {{{CrnExpr::rat(Rational(1, 8))}, Rel::Eq, CrnExpr::rat(Rational(0))},
                {{CrnExpr::rat(Rational(1))}, Rel::Eq, CrnExpr::rat(Rational(1))}};
    inf.upper = {std::nullopt};
    problems.push_back({inf, "infeasible"});

    Clpp mixed;
    mixed.sense = Sense::Min;
    mixed.var_names = {"x", "y"};
    mixed.objective = {CrnExpr::rat(Rational(2, 3)), CrnExpr::rat(Rational(-1))};
    mixed.rows = {{{CrnExpr::rat(Rational(1)), CrnExpr::rat(Rational(2))}, Rel::Ge,
                   CrnExpr::rat(Rational(1))},
                  {{CrnExpr::rat(Rational(1)), CrnExpr::rat(Rational(1))}, Rel::Le,
                   CrnExpr::rat(Rational(4))}};
    mixed.upper = {Rational(3), Rational(2)};
    problems.push_back({mixed, "min mixed"});

    for (const Prob& prob : problems) {
        auto lp = exact_ratlp_under(prob.p, no_machines);
        if (!lp) {
            c.fail(std::string(prob.label) + ": not machine-free");
            return;
        }
        LpOutcome truth = solve_rational_lp(*lp);

        auto feas = decide_feasibility(prob.p, env, Fuel{0});
        if (!feas.is_decided() ||
            feas.decided->feasible != !std::holds_alternative<Infeasible>(truth)) {
            c.fail(std::string(prob.label) + ": feasibility not exact at fuel 0");
            return;
        }
        auto bnd = decide_boundedness(prob.p, env, Fuel{0});
        if (!bnd.is_decided() ||
            bnd.decided->bounded != !std::holds_alternative<Unbounded>(truth)) {
            c.fail(std::string(prob.label) + ": boundedness not exact at fuel 0");
            return;
        }
        if (const auto* opt = std::get_if<Optimal>(&truth)) {
            ValueBounds vb = value_bounds(prob.p, env, Fuel{0});
            if (!vb.lower.finite_value() || !vb.upper.finite_value() ||
                vb.lower.value != opt->value || vb.upper.value != opt->value) {
                c.fail(std::string(prob.label) + ": value bounds not exact at fuel 0");
                return;
            }
            if (check_plan_optimal(prob.p, env, opt->plan, Fuel{0}).value != Ternary::Yes) {
                c.fail(std::string(prob.label) + ": optimal plan not certified at fuel 0");
                return;
            }
            for (const auto& [vertex, value] : enumerate_vertices(*lp)) {
                Ternary pf = check_plan_feasible(prob.p, env, vertex, Fuel{0}).value;
                if (pf != Ternary::Yes) {
                    c.fail(std::string(prob.label) + ": vertex not certified feasible at fuel 0");
                    return;
                }
                Ternary po = check_plan_optimal(prob.p, env, vertex, Fuel{0}).value;
                bool is_opt = value == opt->value;
                if ((po == Ternary::Yes) != is_opt || po == Ternary::Unknown) {
                    c.fail(std::string(prob.label) + ": vertex optimality not exact at fuel 0");
                    return;
                }
            }
        }
    }
}

}  // namespace

int main() {
    GalleryResult gallery = reference_gallery();

    struct Criterion {
        const char* name;
        std::function<void(Check&)> run;
    };
    std::vector<Criterion> criteria = {
        {"1 regulator/arithmetic suite",
         [](Check& c) { criterion_regulator_arithmetic(c); }},
        {"2 specker suite", [](Check& c) { criterion_specker(c); }},
        {"3 simplex oracle equivalence", [](Check& c) { criterion_simplex_oracle(c); }},
        {"4 case-analysis reproduction",
         [&](Check& c) { criterion_case_analysis(c, gallery); }},
        {"5 value/plan gap for H", [&](Check& c) { criterion_h_gap(c, gallery); }},
        {"6 fuel monotonicity", [&](Check& c) { criterion_monotonicity(c, gallery); }},
        {"7 exactness degeneration", [](Check& c) { criterion_exactness(c); }},
    };

    int failures = 0;
    for (const Criterion& cr : criteria) {
        Check c;
        cr.run(c);
        if (c.ok) {
            std::cout << "criterion " << cr.name << ": PASS\n";
        } else {
            std::cout << "criterion " << cr.name << ": FAIL -- " << c.detail << "\n";
            ++failures;
        }
    }
    if (failures == 0)
        std::cout << "acceptance: all criteria passed\n";
    else
        std::cout << "acceptance: " << failures << " criterion(s) failed\n";
    return failures;
}
