#include "crlp/cli.hpp"

#include "crlp/engine.hpp"
#include "crlp/gallery.hpp"
#include "crlp/machine.hpp"
#include "crlp/parse.hpp"
#include "crlp/report.hpp"
#include "crlp/simplex.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace crlp {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Loads every *.json machine spec in the directory, named by file stem,
/// in filename order.
std::vector<StepMachine> load_machine_dir(const fs::path& dir) {
    if (!fs::is_directory(dir))
        throw std::runtime_error("'" + dir.string() + "' is not a directory");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    std::vector<StepMachine> out;
    for (const fs::path& f : files)
        out.push_back(machine_from_json_text(read_file(f), f.stem().string()));
    return out;
}

struct LoadedProblem {
    ParsedProblem parsed;
    MachineEnv env;
};

/// Problem file plus its machine bindings (paths relative to the file) and
/// any machines from --machines.
LoadedProblem load_problem(const fs::path& file, const std::optional<fs::path>& machine_dir) {
    LoadedProblem lp;
    lp.parsed = parse_problem(read_file(file));
    if (machine_dir)
        for (const StepMachine& m : load_machine_dir(*machine_dir))
            lp.env.bind(m);
    for (const auto& [name, rel_path] : lp.parsed.machine_bindings) {
        fs::path p = file.parent_path() / rel_path;
        lp.env.bind(name, machine_from_json_text(read_file(p), name));
    }
    std::set<std::string> known;
    for (const auto& [name, _] : lp.env.machines)
        known.insert(name);
    require_machines_bound(lp.parsed, known);
    return lp;
}

std::vector<Rational> parse_plan_arg(const std::string& text, const Clpp& p) {
    std::map<std::string, Rational> values;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("--plan expects 'var=value' pairs: '" + item + "'");
        std::string var = item.substr(0, eq);
        var.erase(0, var.find_first_not_of(" \t"));
        var.erase(var.find_last_not_of(" \t") + 1);
        std::string val = item.substr(eq + 1);
        val.erase(0, val.find_first_not_of(" \t"));
        val.erase(val.find_last_not_of(" \t") + 1);
        auto q = Rational::parse(val);
        if (!q)
            throw std::runtime_error("--plan: malformed rational '" + val + "'");
        values[var] = *q;
    }
    std::vector<Rational> plan;
    for (const std::string& v : p.var_names) {
        auto it = values.find(v);
        if (it == values.end())
            throw std::runtime_error("--plan: missing variable '" + v + "'");
        plan.push_back(it->second);
        values.erase(it);
    }
    if (!values.empty())
        throw std::runtime_error("--plan: unknown variable '" + values.begin()->first + "'");
    return plan;
}

std::string plan_text(const std::vector<std::string>& names, const std::vector<Rational>& plan) {
    std::string out;
    for (std::size_t i = 0; i < plan.size(); ++i) {
        if (i)
            out += ", ";
        out += names[i] + "=" + plan[i].str();
    }
    return out;
}

unsigned decimal_digits_for(const Rational& eps) {
    unsigned d = 0;
    Rational acc = eps;
    while (acc < Rational(1) && d < 10000) {
        acc *= Rational(10);
        ++d;
    }
    return d;
}

int cmd_solve_rational(const fs::path& file, std::ostream& out) {
    LoadedProblem lp = load_problem(file, std::nullopt);
    RatLp rat = to_ratlp(lp.parsed);
    LpOutcome outcome = solve_rational_lp(rat);
    const auto& names = lp.parsed.problem.var_names;
    if (const auto* opt = std::get_if<Optimal>(&outcome)) {
        out << "optimal value: " << opt->value.str() << "\n";
        out << "plan: " << plan_text(names, opt->plan) << "\n";
    } else if (const auto* inf = std::get_if<Infeasible>(&outcome)) {
        out << "infeasible (phase-1 mass " << inf->phase1_value.str() << ")\n";
    } else {
        const auto& ray = std::get<Unbounded>(outcome).ray;
        out << "unbounded; improving ray: " << plan_text(names, ray) << "\n";
    }
    return 0;
}

int cmd_analyze(const fs::path& file, const std::optional<fs::path>& machine_dir,
                std::uint32_t fuel, const std::optional<std::string>& plan_arg, bool json,
                std::ostream& out) {
    LoadedProblem lp = load_problem(file, machine_dir);
    Clpp p = to_clpp(lp.parsed);
    Fuel budget{fuel};
    Report report;
    auto record = [&](std::string kind, nlohmann::ordered_json payload) {
        report.records.push_back({"-", "-", 0, fuel, std::move(kind), std::move(payload), 0.0});
    };

    auto feas = decide_feasibility(p, lp.env, budget);
    if (feas.decided) {
        if (feas.decided->feasible) {
            record("decide_feasibility",
                   {{"verdict", "feasible"},
                    {"decided_at_fuel", feas.fuel.t},
                    {"plan", plan_text(p.var_names, feas.decided->plan)}});
        } else {
            record("decide_feasibility",
                   {{"verdict", "infeasible"}, {"decided_at_fuel", feas.fuel.t}});
        }
    } else {
        record("decide_feasibility", {{"verdict", "unknown"}});
    }

    auto bnd = decide_boundedness(p, lp.env, budget);
    if (bnd.decided) {
        record("decide_boundedness", {{"verdict", bnd.decided->bounded ? "bounded" : "unbounded"},
                                      {"decided_at_fuel", bnd.fuel.t}});
    } else {
        record("decide_boundedness", {{"verdict", "unknown"}});
    }

    ValueBounds vb = value_bounds(p, lp.env, budget);
    record("value_bounds", {{"lower", vb.lower.str()}, {"upper", vb.upper.str()}});

    if (plan_arg) {
        std::vector<Rational> plan = parse_plan_arg(*plan_arg, p);
        TernaryVerdict pf = check_plan_feasible(p, lp.env, plan, budget);
        const char* pf_text = pf.value == Ternary::Yes    ? "yes"
                              : pf.value == Ternary::No   ? "no"
                                                          : "unknown";
        record("check_plan_feasible", {{"plan", plan_text(p.var_names, plan)},
                                       {"verdict", pf_text}});
        if (pf.value != Ternary::No) {
            TernaryVerdict po = check_plan_optimal(p, lp.env, plan, budget);
            const char* po_text = po.value == Ternary::Yes    ? "yes"
                                  : po.value == Ternary::No   ? "no"
                                                              : "unknown";
            record("check_plan_optimal", {{"plan", plan_text(p.var_names, plan)},
                                          {"verdict", po_text}});
        }
    }

    if (json) {
        out << report.to_jsonl(false);
    } else {
        for (const ReportRecord& r : report.records) {
            out << r.kind << ":";
            for (const auto& [key, value] : r.payload.items()) {
                out << " " << key << "=";
                if (value.is_string())
                    out << value.get<std::string>();
                else
                    out << value.dump();
            }
            out << "\n";
        }
    }
    return 0;
}

int cmd_gallery(const std::optional<fs::path>& machine_dir, std::uint64_t n_max,
                std::uint32_t fuel, std::uint64_t probe, bool with_wall,
                const std::optional<fs::path>& out_path, std::ostream& out, std::ostream& err) {
    GalleryConfig cfg;
    // A bad spec file skips that machine and the run continues.
    std::vector<ReportRecord> load_failures;
    if (machine_dir) {
        if (!fs::is_directory(*machine_dir))
            throw std::runtime_error("'" + machine_dir->string() + "' is not a directory");
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(*machine_dir))
            if (entry.is_regular_file() && entry.path().extension() == ".json")
                files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const fs::path& f : files) {
            try {
                cfg.machines.push_back(machine_from_json_text(read_file(f), f.stem().string()));
            } catch (const std::exception& e) {
                load_failures.push_back({"-", f.stem().string(), 0, 0, "load_error",
                                         {{"error", e.what()}}, 0.0});
            }
        }
    } else {
        cfg.machines = builtin_machines();
    }
    cfg.n_min = 1;
    cfg.n_max = n_max;
    cfg.fuel_cap = fuel;
    cfg.probe_budget = probe;
    GalleryResult result = run_gallery(cfg);
    result.report.records.insert(result.report.records.end(), load_failures.begin(),
                                 load_failures.end());
    result.report.sort();
    std::string text = result.report.to_jsonl(with_wall);
    if (out_path) {
        std::ofstream f(*out_path, std::ios::binary);
        if (!f)
            throw std::runtime_error("cannot write '" + out_path->string() + "'");
        f << text;
    } else {
        out << text;
    }
    if (!result.ok) {
        err << "gallery: a decided verdict contradicted ground truth\n";
        return 2;
    }
    return 0;
}

int cmd_approx(const std::string& expr_text, const std::string& eps_text,
               const std::optional<fs::path>& machine_dir, std::ostream& out) {
    auto eps = Rational::parse(eps_text);
    if (!eps || eps->sign() <= 0)
        throw std::runtime_error("--eps needs a positive rational like 1/1000");
    CrnExpr e = parse_expr(expr_text);
    MachineEnv env;
    if (machine_dir)
        for (const StepMachine& m : load_machine_dir(*machine_dir))
            env.bind(m);
    Rational value = approx(eval_expr(e, env), *eps);
    out << value.str() << "\n";
    out << value.decimal(decimal_digits_for(*eps)) << "\n";
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"constructive linear programming workbench"};
    app.require_subcommand(1);

    std::string file;
    std::string machines_dir;
    std::string plan;
    std::string expr_text;
    std::string eps_text = "1/1000000";
    std::string out_path;
    std::uint32_t fuel = 64;
    std::uint64_t n_max = 1;
    std::uint64_t probe = 1u << 14;
    bool json = false;
    bool no_wall = false;

    CLI::App* solve = app.add_subcommand("solve-rational", "solve an all-rational problem file");
    solve->add_option("file", file, "problem file")->required();

    CLI::App* analyze = app.add_subcommand("analyze", "fuel-bounded analysis of a problem file");
    analyze->add_option("file", file, "problem file")->required();
    analyze->add_option("--fuel", fuel, "fuel budget (precision 2^-fuel)");
    analyze->add_option("--plan", plan, "candidate plan, e.g. \"x=1,y=0\"");
    analyze->add_option("--machines", machines_dir, "directory of machine spec JSON files");
    analyze->add_flag("--json", json, "emit JSON Lines instead of text");

    CLI::App* gallery = app.add_subcommand("gallery", "run the counterexample families");
    gallery->add_option("--machines", machines_dir,
                        "directory of machine spec JSON files (default: built-ins)");
    gallery->add_option("--n-max", n_max, "run inputs n = 1..n-max");
    gallery->add_option("--fuel", fuel, "fuel cap for the doubling schedule");
    gallery->add_option("--probe", probe, "ground-truth halting probe budget");
    gallery->add_option("--out", out_path, "write the report here instead of stdout");
    gallery->add_flag("--no-wall", no_wall, "omit wall times for byte-stable output");

    CLI::App* approx_cmd = app.add_subcommand("approx", "approximate a coefficient expression");
    approx_cmd->add_option("expr", expr_text, "expression, e.g. \"max(1+s(M,1), 1-s(M,1))\"")
        ->required();
    approx_cmd->add_option("--eps", eps_text, "tolerance as a positive rational");
    approx_cmd->add_option("--machines", machines_dir, "directory of machine spec JSON files");

    std::vector<std::string> argv(args.rbegin(), args.rend());  // CLI11 consumes in reverse
    try {
        app.parse(argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 1;
    }

    auto dir_opt = [&]() -> std::optional<fs::path> {
        if (machines_dir.empty())
            return std::nullopt;
        return fs::path(machines_dir);
    };
    auto out_opt = [&]() -> std::optional<fs::path> {
        if (out_path.empty())
            return std::nullopt;
        return fs::path(out_path);
    };

    try {
        if (solve->parsed())
            return cmd_solve_rational(file, out);
        if (analyze->parsed())
            return cmd_analyze(file, dir_opt(), fuel,
                               plan.empty() ? std::nullopt : std::optional<std::string>(plan),
                               json, out);
        if (gallery->parsed())
            return cmd_gallery(dir_opt(), n_max, fuel, probe, !no_wall, out_opt(), out, err);
        if (approx_cmd->parsed())
            return cmd_approx(expr_text, eps_text, dir_opt(), out);
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const MachineSpecError& e) {
        err << "machine spec error: " << e.what() << "\n";
        return 1;
    } catch (const LpValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace crlp
