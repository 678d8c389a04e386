#include "crlp/gallery.hpp"

#include "crlp/simplex.hpp"

#include <chrono>
#include <utility>

namespace crlp {

using nlohmann::ordered_json;

HaltStatus ground_truth(const StepMachine& m, std::uint64_t n, std::uint64_t probe_budget) {
    if (auto h = probe_halt(m, n, probe_budget))
        return HaltStatus::halts(h->first, h->second);
    if (m.halt_free())
        return HaltStatus::never();
    return HaltStatus::unknown();
}

std::vector<std::uint32_t> fuel_schedule(std::uint32_t cap) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t f = 1; f < cap; f *= 2)
        out.push_back(f);
    out.push_back(cap);
    return out;
}

namespace {

ordered_json plan_json(const std::vector<Rational>& plan) {
    ordered_json arr = ordered_json::array();
    for (const Rational& q : plan)
        arr.push_back(q.str());
    return arr;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

struct InstanceRunner {
    const MachineEnv& env;
    const std::string& machine;
    std::uint64_t n;
    HaltStatus truth;
    Report& report;
    bool& ok;

    Clpp problem;
    std::string family;
    // Exact ground-truth instantiation, when the halting status is known.
    std::optional<RatLp> truth_lp;
    std::optional<LpOutcome> truth_outcome;

    void set_family(Family f) {
        family = family_name(f);
        problem = make_family(f, machine, n);
        truth_lp.reset();
        truth_outcome.reset();
        if (truth.kind != HaltStatus::Kind::Unknown) {
            GroundFn gfn = [this](const std::string& name, std::uint64_t input) {
                return (name == machine && input == n) ? truth : HaltStatus::unknown();
            };
            truth_lp = exact_ratlp_under(problem, gfn);
            if (truth_lp)
                truth_outcome = solve_rational_lp(*truth_lp);
        }
    }

    ReportRecord& emit(std::uint32_t fuel, std::string kind, ordered_json payload,
                       double wall_ms) {
        report.records.push_back(
            {family, machine, n, fuel, std::move(kind), std::move(payload), wall_ms});
        return report.records.back();
    }

    void flag_mismatch(ReportRecord& rec, const std::string& truth_text) {
        rec.payload["oracle_mismatch"] = true;
        rec.payload["oracle_truth"] = truth_text;
        report.invariant_violation = true;
        ok = false;
    }

    // --- queries ---

    void feasibility(std::uint32_t fuel) {
        auto t0 = std::chrono::steady_clock::now();
        auto v = decide_feasibility(problem, env, Fuel{fuel});
        double ms = ms_since(t0);
        ordered_json payload;
        if (v.decided) {
            payload["verdict"] = v.decided->feasible ? "feasible" : "infeasible";
            payload["decided_at_fuel"] = v.fuel.t;
            if (v.decided->feasible)
                payload["certificate"] = {{"plan", plan_json(v.decided->plan)}};
            else
                payload["certificate"] = {{"phase1_value", v.decided->phase1_value.str()}};
        } else {
            payload["verdict"] = "unknown";
        }
        ReportRecord& rec = emit(fuel, "decide_feasibility", std::move(payload), ms);
        if (v.decided && truth_outcome) {
            bool truly_feasible = !std::holds_alternative<Infeasible>(*truth_outcome);
            if (v.decided->feasible != truly_feasible)
                flag_mismatch(rec, truly_feasible ? "feasible" : "infeasible");
        }
    }

    void boundedness(std::uint32_t fuel) {
        auto t0 = std::chrono::steady_clock::now();
        auto v = decide_boundedness(problem, env, Fuel{fuel});
        double ms = ms_since(t0);
        ordered_json payload;
        if (v.decided) {
            payload["verdict"] = v.decided->bounded ? "bounded" : "unbounded";
            payload["decided_at_fuel"] = v.fuel.t;
            switch (v.decided->why) {
                case BoundednessAnswer::Why::OuterOptimal:
                    payload["certificate"] = {{"value_bound", v.decided->value_bound->str()}};
                    break;
                case BoundednessAnswer::Why::OuterInfeasible:
                    payload["certificate"] = {{"subcase", "region certified empty"}};
                    break;
                case BoundednessAnswer::Why::InnerRay:
                    payload["certificate"] = {{"ray", plan_json(v.decided->ray)},
                                              {"at", plan_json(v.decided->at)}};
                    break;
            }
        } else {
            payload["verdict"] = "unknown";
        }
        ReportRecord& rec = emit(fuel, "decide_boundedness", std::move(payload), ms);
        if (v.decided && truth_outcome) {
            bool truly_bounded = !std::holds_alternative<Unbounded>(*truth_outcome);
            if (v.decided->bounded != truly_bounded)
                flag_mismatch(rec, truly_bounded ? "bounded" : "unbounded");
        }
    }

    static const char* tern_text(Ternary t) {
        return t == Ternary::Yes ? "yes" : (t == Ternary::No ? "no" : "unknown");
    }

    void plan_feasible(std::uint32_t fuel, const std::vector<Rational>& plan,
                       const std::string& label) {
        auto t0 = std::chrono::steady_clock::now();
        TernaryVerdict v = check_plan_feasible(problem, env, plan, Fuel{fuel});
        double ms = ms_since(t0);
        ordered_json payload;
        payload["plan"] = label;
        payload["verdict"] = tern_text(v.value);
        if (v.value != Ternary::Unknown)
            payload["decided_at_fuel"] = v.fuel.t;
        ReportRecord& rec = emit(fuel, "check_plan_feasible", std::move(payload), ms);
        if (v.value != Ternary::Unknown && truth_lp) {
            bool truly = check_feasible_rational(*truth_lp, plan);
            if ((v.value == Ternary::Yes) != truly)
                flag_mismatch(rec, truly ? "feasible plan" : "infeasible plan");
        }
    }

    void plan_optimal(std::uint32_t fuel, const std::vector<Rational>& plan,
                      const std::string& label) {
        auto t0 = std::chrono::steady_clock::now();
        TernaryVerdict v = check_plan_optimal(problem, env, plan, Fuel{fuel});
        double ms = ms_since(t0);
        ordered_json payload;
        payload["plan"] = label;
        payload["verdict"] = tern_text(v.value);
        if (v.value != Ternary::Unknown)
            payload["decided_at_fuel"] = v.fuel.t;
        ReportRecord& rec = emit(fuel, "check_plan_optimal", std::move(payload), ms);
        if (v.value != Ternary::Unknown && truth_lp && truth_outcome) {
            bool truly = false;
            if (const auto* opt = std::get_if<Optimal>(&*truth_outcome)) {
                Rational value(0);
                for (std::size_t i = 0; i < plan.size(); ++i)
                    value += truth_lp->c[i] * plan[i];
                truly = check_feasible_rational(*truth_lp, plan) && value == opt->value;
            }
            if ((v.value == Ternary::Yes) != truly)
                flag_mismatch(rec, truly ? "optimal plan" : "non-optimal plan");
        }
    }

    void bounds(std::uint32_t fuel) {
        auto t0 = std::chrono::steady_clock::now();
        ValueBounds vb = value_bounds(problem, env, Fuel{fuel});
        double ms = ms_since(t0);
        ordered_json payload;
        payload["bounds"] = {{"lower", vb.lower.str()}, {"upper", vb.upper.str()}};
        ReportRecord& rec = emit(fuel, "value_bounds", std::move(payload), ms);
        if (!truth_outcome)
            return;
        // The claims are about the true optimal value, so each truth class
        // forbids specific bound shapes.
        if (const auto* opt = std::get_if<Optimal>(&*truth_outcome)) {
            bool bad = (vb.upper.finite_value() && vb.upper.value < opt->value) ||
                       (vb.lower.finite_value() && vb.lower.value > opt->value) ||
                       vb.lower.kind == Bound::Kind::PosInf ||
                       vb.upper.kind == Bound::Kind::NegInf;
            if (bad)
                flag_mismatch(rec, "optimal value " + opt->value.str());
        } else if (std::holds_alternative<Unbounded>(*truth_outcome)) {
            if (vb.upper.finite_value())
                flag_mismatch(rec, "objective unbounded");
        } else {
            if (vb.lower.finite_value() || vb.lower.kind == Bound::Kind::PosInf)
                flag_mismatch(rec, "region empty");
        }
    }

    void diagnose(std::uint32_t fuel) {
        auto t0 = std::chrono::steady_clock::now();
        DiagnoseVerdict v = diagnose_unsolvable(problem, env, Fuel{fuel});
        double ms = ms_since(t0);
        ordered_json payload;
        payload["verdict"] = v.reason == UnsolvableReason::Infeasible  ? "infeasible"
                             : v.reason == UnsolvableReason::Unbounded ? "unbounded"
                                                                       : "unknown";
        if (v.reason != UnsolvableReason::Unknown)
            payload["decided_at_fuel"] = v.fuel.t;
        payload["note"] =
            "family T is unsolvable either way: infeasible when s != 0, "
            "feasible with unbounded objective when s = 0";
        ReportRecord& rec = emit(fuel, "diagnose_unsolvable", std::move(payload), ms);
        if (v.reason != UnsolvableReason::Unknown && truth_outcome) {
            bool truly_infeasible = std::holds_alternative<Infeasible>(*truth_outcome);
            bool truly_unbounded = std::holds_alternative<Unbounded>(*truth_outcome);
            bool match = (v.reason == UnsolvableReason::Infeasible && truly_infeasible) ||
                         (v.reason == UnsolvableReason::Unbounded && truly_unbounded);
            if (!match)
                flag_mismatch(rec, truly_infeasible    ? "infeasible"
                                   : truly_unbounded   ? "unbounded"
                                                       : "solvable");
        }
    }

    /// H only: the optimal value is a computable Crn even though no optimal
    /// plan is; approximate it once to 2^-16.
    void h_value_approx() {
        auto t0 = std::chrono::steady_clock::now();
        Rational eps = Rational::pow2(-16);
        Rational v = approx(optimal_value_crn_h(env, machine, n), eps);
        double ms = ms_since(t0);
        ordered_json payload;
        payload["value_approx"] = v.str();
        payload["value_decimal"] = v.decimal(5);
        payload["eps"] = eps.str();
        ReportRecord& rec = emit(0, "optimal_value_approx", std::move(payload), ms);
        if (truth.kind == HaltStatus::Kind::Unknown)
            return;
        Rational expected =
            truth.kind == HaltStatus::Kind::Halts
                ? Rational(1) + Rational::pow2(-static_cast<long>(truth.step))
                : Rational(1);
        if (abs(v - expected) > eps)
            flag_mismatch(rec, "optimal value " + expected.str());
    }

    /// H only: locate the x-coordinate of the fuel-t outer plan estimate.
    /// The estimate carries no optimality claim; the record asserts only the
    /// locator's membership guarantee, and bits at different fuels are
    /// allowed to disagree.
    void h_plan_estimate_locate(std::uint32_t fuel) {
        auto t0 = std::chrono::steady_clock::now();
        RelaxedPair relax = outer_inner_relax(interval_snapshot(problem, env, Fuel{fuel}));
        LpOutcome outer = solve_rational_lp(relax.outer);
        ordered_json payload;
        ReportRecord* rec = nullptr;
        if (const auto* opt = std::get_if<Optimal>(&outer)) {
            Rational est = opt->plan[0];
            int bit = coarse_locate(Crn::from_rational(est), Interval(Rational(0), Rational(1)));
            bool member = bit == 0 ? est <= Rational(2, 3) : est >= Rational(1, 3);
            payload["estimate_x"] = est.str();
            payload["locate_bit"] = bit;
            payload["in_subinterval"] = member;
            rec = &emit(fuel, "plan_estimate_locate", std::move(payload), ms_since(t0));
            if (!member)
                flag_mismatch(*rec, "locator membership guarantee");
        } else {
            payload["estimate_x"] = nullptr;
            rec = &emit(fuel, "plan_estimate_locate", std::move(payload), ms_since(t0));
        }
    }
};

}  // namespace

GalleryResult run_gallery(const GalleryConfig& cfg) {
    GalleryResult res;
    MachineEnv env;
    for (const StepMachine& m : cfg.machines)
        env.bind(m);

    const std::vector<std::uint32_t> fuels = fuel_schedule(cfg.fuel_cap);
    for (const StepMachine& m : cfg.machines) {
        for (std::uint64_t n = cfg.n_min; n <= cfg.n_max; ++n) {
            HaltStatus truth = ground_truth(m, n, cfg.probe_budget);
            InstanceRunner run{env, m.name, n, truth, res.report, res.ok, {}, {}, {}, {}};

            ordered_json status;
            switch (truth.kind) {
                case HaltStatus::Kind::Halts:
                    status["halts"] = true;
                    status["bit"] = truth.bit;
                    status["step"] = truth.step;
                    break;
                case HaltStatus::Kind::NeverHalts:
                    status["halts"] = false;
                    status["proof"] = "no HALT instruction";
                    break;
                case HaltStatus::Kind::Unknown:
                    status["halts"] = nullptr;
                    status["probe_budget"] = cfg.probe_budget;
                    break;
            }
            run.family = "-";
            run.emit(0, "ground_truth", std::move(status), 0.0);

            run.set_family(Family::P);
            for (std::uint32_t f : fuels) {
                run.feasibility(f);
                run.plan_feasible(f, {Rational(1)}, "x=1");
                run.plan_optimal(f, {Rational(0)}, "x=0");
                run.bounds(f);
            }
            run.set_family(Family::H);
            run.h_value_approx();
            for (std::uint32_t f : fuels) {
                run.bounds(f);
                run.h_plan_estimate_locate(f);
            }
            run.set_family(Family::Q);
            for (std::uint32_t f : fuels)
                run.boundedness(f);
            run.set_family(Family::R);
            for (std::uint32_t f : fuels)
                run.feasibility(f);
            run.set_family(Family::T);
            for (std::uint32_t f : fuels)
                run.diagnose(f);
            run.set_family(Family::D);
            for (std::uint32_t f : fuels)
                run.feasibility(f);
        }
    }
    res.report.sort();
    return res;
}

}  // namespace crlp
