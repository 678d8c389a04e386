#include "crlp/simplex.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <utility>

namespace crlp {

void validate_lp(const RatLp& lp) {
    if (lp.c.size() != lp.nvars)
        throw LpValidationError("objective length does not match the variable count");
    if (!lp.vars.empty() && lp.vars.size() != lp.nvars)
        throw LpValidationError("bound list length does not match the variable count");
    for (std::size_t i = 0; i < lp.rows.size(); ++i)
        if (lp.rows[i].a.size() != lp.nvars)
            throw LpValidationError("row " + std::to_string(i) +
                                    " length does not match the variable count");
}

namespace {

VarBound bound_of(const RatLp& lp, std::size_t i) {
    return lp.vars.empty() ? VarBound{} : lp.vars[i];
}

Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& x) {
    Rational s(0);
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * x[i];
    return s;
}

// Standard form: max c.x, A x = b, x >= 0, b >= 0, with an initial basis of
// slacks and artificials. Columns are ordered structural, slack, artificial
// so that Bland's index rule prefers structural variables.
struct Tableau {
    std::size_t ncols = 0;
    std::vector<std::vector<Rational>> rows;  // each ncols + 1 wide, last = rhs
    std::vector<Rational> z;                  // reduced costs; last cell = -objective value
    std::vector<Rational> w;                  // phase-1 row, same layout
    std::vector<std::size_t> basis;
    std::vector<bool> artificial;
    std::vector<std::string> label;
    std::size_t pivots = 0;

    void pivot(std::size_t r, std::size_t e) {
        ++pivots;
        std::vector<Rational>& pr = rows[r];
        Rational inv = Rational(1) / pr[e];
        for (Rational& cell : pr)
            cell *= inv;
        auto eliminate = [&](std::vector<Rational>& row) {
            if (row[e].is_zero())
                return;
            Rational f = row[e];
            for (std::size_t j = 0; j <= ncols; ++j)
                row[j] -= f * pr[j];
        };
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (i != r)
                eliminate(rows[i]);
        eliminate(z);
        eliminate(w);
        basis[r] = e;
    }

    // Bland's rule: the lowest-index improving column enters, and among the
    // minimum-ratio rows the one whose basic variable has the lowest index
    // leaves. Returns the entering column when the objective is unbounded.
    enum class StepEnd { Optimal, Unbounded };
    StepEnd run(bool phase1, bool allow_artificial, std::size_t* unbounded_col) {
        const std::vector<Rational>& obj = phase1 ? w : z;
        for (;;) {
            std::size_t enter = ncols;
            for (std::size_t j = 0; j < ncols; ++j) {
                if (!allow_artificial && artificial[j])
                    continue;
                if (obj[j] > Rational(0)) {
                    enter = j;
                    break;
                }
            }
            if (enter == ncols)
                return StepEnd::Optimal;
            std::size_t leave = rows.size();
            Rational best(0);
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (rows[i][enter] > Rational(0)) {
                    Rational ratio = rows[i][ncols] / rows[i][enter];
                    if (leave == rows.size() || ratio < best ||
                        (ratio == best && basis[i] < basis[leave])) {
                        leave = i;
                        best = ratio;
                    }
                }
            }
            if (leave == rows.size()) {
                if (unbounded_col)
                    *unbounded_col = enter;
                return StepEnd::Unbounded;
            }
            pivot(leave, enter);
        }
    }
};

struct ColumnMap {
    // Per original variable: the column of its nonnegative part, and the
    // column of the negated part when the variable is free.
    struct Entry {
        std::size_t plus;
        std::optional<std::size_t> minus;
    };
    std::vector<Entry> entries;
};

std::vector<Rational> to_original_space(const ColumnMap& map, const std::vector<Rational>& std_x) {
    std::vector<Rational> out;
    out.reserve(map.entries.size());
    for (const auto& e : map.entries) {
        Rational v = std_x[e.plus];
        if (e.minus)
            v -= std_x[*e.minus];
        out.push_back(v);
    }
    return out;
}

}  // namespace

LpOutcome solve_rational_lp(const RatLp& lp, SolveStats* stats) {
    validate_lp(lp);

    // Structural columns, with free variables split x = x+ - x-.
    ColumnMap cmap;
    std::vector<Rational> cstd;  // per structural column, in max sense
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < lp.nvars; ++i) {
        VarBound vb = bound_of(lp, i);
        Rational ci = lp.sense == Sense::Max ? lp.c[i] : -lp.c[i];
        ColumnMap::Entry entry{cstd.size(), std::nullopt};
        cstd.push_back(ci);
        labels.push_back("x" + std::to_string(i));
        if (vb.free) {
            entry.minus = cstd.size();
            cstd.push_back(-ci);
            labels.push_back("x" + std::to_string(i) + "-");
        }
        cmap.entries.push_back(entry);
    }
    const std::size_t nstruct = cstd.size();

    // Gather rows: the LP's own plus one row per upper bound.
    struct StdRow {
        std::vector<Rational> a;  // over structural columns
        Rel rel;
        Rational b;
    };
    std::vector<StdRow> srows;
    auto expand = [&](const std::vector<Rational>& orig) {
        std::vector<Rational> a(nstruct, Rational(0));
        for (std::size_t i = 0; i < lp.nvars; ++i) {
            a[cmap.entries[i].plus] = orig[i];
            if (cmap.entries[i].minus)
                a[*cmap.entries[i].minus] = -orig[i];
        }
        return a;
    };
    for (const RatRow& r : lp.rows)
        srows.push_back({expand(r.a), r.rel, r.b});
    for (std::size_t i = 0; i < lp.nvars; ++i) {
        VarBound vb = bound_of(lp, i);
        if (vb.upper) {
            std::vector<Rational> unit(lp.nvars, Rational(0));
            unit[i] = Rational(1);
            srows.push_back({expand(unit), Rel::Le, *vb.upper});
        }
    }
    // Normalize to b >= 0.
    for (StdRow& r : srows) {
        if (r.b < Rational(0)) {
            for (Rational& cell : r.a)
                cell = -cell;
            r.b = -r.b;
            if (r.rel == Rel::Le)
                r.rel = Rel::Ge;
            else if (r.rel == Rel::Ge)
                r.rel = Rel::Le;
        }
    }

    const std::size_t m = srows.size();
    std::size_t nslack = 0;
    std::size_t nart = 0;
    for (const StdRow& r : srows) {
        if (r.rel != Rel::Eq)
            ++nslack;
        if (r.rel != Rel::Le)
            ++nart;
    }

    Tableau t;
    t.ncols = nstruct + nslack + nart;
    t.label = labels;
    for (std::size_t j = 0; j < nslack; ++j)
        t.label.push_back("s" + std::to_string(j));
    for (std::size_t j = 0; j < nart; ++j)
        t.label.push_back("a" + std::to_string(j));
    t.artificial.assign(t.ncols, false);
    for (std::size_t j = nstruct + nslack; j < t.ncols; ++j)
        t.artificial[j] = true;

    t.z.assign(t.ncols + 1, Rational(0));
    for (std::size_t j = 0; j < nstruct; ++j)
        t.z[j] = cstd[j];
    t.w.assign(t.ncols + 1, Rational(0));

    std::size_t next_slack = nstruct;
    std::size_t next_art = nstruct + nslack;
    for (const StdRow& r : srows) {
        std::vector<Rational> row(t.ncols + 1, Rational(0));
        for (std::size_t j = 0; j < nstruct; ++j)
            row[j] = r.a[j];
        row[t.ncols] = r.b;
        std::size_t basic;
        if (r.rel == Rel::Le) {
            row[next_slack] = Rational(1);
            basic = next_slack++;
        } else {
            if (r.rel == Rel::Ge)
                row[next_slack++] = Rational(-1);
            row[next_art] = Rational(1);
            basic = next_art++;
        }
        t.basis.push_back(basic);
        t.rows.push_back(std::move(row));
    }

    // Phase 1: maximize -(sum of artificials). Express the objective in terms
    // of the nonbasic columns by adding each artificial row into w.
    bool any_artificial = nart > 0;
    if (any_artificial) {
        for (std::size_t j = nstruct + nslack; j < t.ncols; ++j)
            t.w[j] = Rational(-1);
        for (std::size_t i = 0; i < m; ++i) {
            if (t.artificial[t.basis[i]]) {
                for (std::size_t j = 0; j <= t.ncols; ++j)
                    t.w[j] += t.rows[i][j];
            }
        }
        std::size_t dummy = 0;
        Tableau::StepEnd end = t.run(true, true, &dummy);
        assert(end == Tableau::StepEnd::Optimal);  // phase-1 objective is bounded by 0
        (void)end;
        if (stats)
            stats->pivots_phase1 = t.pivots;
        Rational infeas_mass = t.w[t.ncols];  // -value; >= 0 always
        if (infeas_mass > Rational(0))
            return Infeasible{infeas_mass};

        // Drive leftover artificials out of the basis; rows where that is
        // impossible are redundant and get dropped.
        for (std::size_t i = 0; i < t.rows.size();) {
            if (!t.artificial[t.basis[i]]) {
                ++i;
                continue;
            }
            std::size_t e = t.ncols;
            for (std::size_t j = 0; j < nstruct + nslack; ++j) {
                if (!t.rows[i][j].is_zero()) {
                    e = j;
                    break;
                }
            }
            if (e == t.ncols) {
                t.rows.erase(t.rows.begin() + static_cast<std::ptrdiff_t>(i));
                t.basis.erase(t.basis.begin() + static_cast<std::ptrdiff_t>(i));
            } else {
                t.pivot(i, e);
                ++i;
            }
        }
    }

    std::size_t pivots_before = t.pivots;
    std::size_t unbounded_col = 0;
    Tableau::StepEnd end = t.run(false, false, &unbounded_col);
    if (stats)
        stats->pivots_phase2 = t.pivots - pivots_before;

    if (end == Tableau::StepEnd::Unbounded) {
        std::vector<Rational> dir(t.ncols, Rational(0));
        dir[unbounded_col] = Rational(1);
        for (std::size_t i = 0; i < t.rows.size(); ++i)
            dir[t.basis[i]] = -t.rows[i][unbounded_col];
        return Unbounded{to_original_space(cmap, dir)};
    }

    std::vector<Rational> std_x(t.ncols, Rational(0));
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        std_x[t.basis[i]] = t.rows[i][t.ncols];
    std::vector<Rational> plan = to_original_space(cmap, std_x);
    Rational value = -t.z[t.ncols];
    if (lp.sense == Sense::Min)
        value = -value;
    std::vector<std::string> basis_labels;
    basis_labels.reserve(t.basis.size());
    for (std::size_t b : t.basis)
        basis_labels.push_back(t.label[b]);
    return Optimal{std::move(plan), std::move(value), std::move(basis_labels)};
}

bool check_feasible_rational(const RatLp& lp, const std::vector<Rational>& plan) {
    validate_lp(lp);
    if (plan.size() != lp.nvars)
        throw LpValidationError("plan length does not match the variable count");
    for (const RatRow& r : lp.rows) {
        Rational lhs = dot(r.a, plan);
        if (r.rel == Rel::Eq && lhs != r.b)
            return false;
        if (r.rel == Rel::Le && lhs > r.b)
            return false;
        if (r.rel == Rel::Ge && lhs < r.b)
            return false;
    }
    for (std::size_t i = 0; i < lp.nvars; ++i) {
        VarBound vb = bound_of(lp, i);
        if (!vb.free && plan[i] < Rational(0))
            return false;
        if (vb.upper && plan[i] > *vb.upper)
            return false;
    }
    return true;
}

bool check_improving_ray(const RatLp& lp, const std::vector<Rational>& ray) {
    validate_lp(lp);
    if (ray.size() != lp.nvars)
        throw LpValidationError("ray length does not match the variable count");
    for (const RatRow& r : lp.rows) {
        Rational lhs = dot(r.a, ray);
        if (r.rel == Rel::Eq && !lhs.is_zero())
            return false;
        if (r.rel == Rel::Le && lhs > Rational(0))
            return false;
        if (r.rel == Rel::Ge && lhs < Rational(0))
            return false;
    }
    for (std::size_t i = 0; i < lp.nvars; ++i) {
        VarBound vb = bound_of(lp, i);
        if (!vb.free && ray[i] < Rational(0))
            return false;
        if (vb.upper && ray[i] > Rational(0))
            return false;
    }
    Rational gain = dot(lp.c, ray);
    return lp.sense == Sense::Max ? gain > Rational(0) : gain < Rational(0);
}

namespace {

/// Solves square A x = b exactly; nullopt when A is singular.
std::optional<std::vector<Rational>> solve_square(std::vector<std::vector<Rational>> a,
                                                  std::vector<Rational> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = n;
        for (std::size_t r = col; r < n; ++r) {
            if (!a[r][col].is_zero()) {
                piv = r;
                break;
            }
        }
        if (piv == n)
            return std::nullopt;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        Rational inv = Rational(1) / a[col][col];
        for (std::size_t j = col; j < n; ++j)
            a[col][j] *= inv;
        b[col] *= inv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col].is_zero())
                continue;
            Rational f = a[r][col];
            for (std::size_t j = col; j < n; ++j)
                a[r][j] -= f * a[col][j];
            b[r] -= f * b[col];
        }
    }
    return b;
}

}  // namespace

std::vector<std::pair<std::vector<Rational>, Rational>> enumerate_vertices(const RatLp& lp) {
    validate_lp(lp);
    if (lp.nvars == 0 || lp.nvars > 6 || lp.rows.size() > 12)
        throw LpValidationError("enumerate_vertices is a test oracle: needs 1..6 variables "
                                "and at most 12 rows");

    // Candidate active hyperplanes: every row taken with equality, plus the
    // variable bounds.
    std::vector<std::pair<std::vector<Rational>, Rational>> planes;
    for (const RatRow& r : lp.rows)
        planes.emplace_back(r.a, r.b);
    for (std::size_t i = 0; i < lp.nvars; ++i) {
        VarBound vb = bound_of(lp, i);
        std::vector<Rational> unit(lp.nvars, Rational(0));
        unit[i] = Rational(1);
        if (!vb.free)
            planes.emplace_back(unit, Rational(0));
        if (vb.upper)
            planes.emplace_back(unit, *vb.upper);
    }

    const std::size_t nv = lp.nvars;
    std::set<std::vector<Rational>> seen;
    std::vector<std::pair<std::vector<Rational>, Rational>> out;
    std::vector<std::size_t> pick(nv);
    auto consider = [&]() {
        std::vector<std::vector<Rational>> a;
        std::vector<Rational> b;
        for (std::size_t k : pick) {
            a.push_back(planes[k].first);
            b.push_back(planes[k].second);
        }
        auto x = solve_square(std::move(a), std::move(b));
        if (!x || !check_feasible_rational(lp, *x) || !seen.insert(*x).second)
            return;
        Rational value = dot(lp.c, *x);
        out.emplace_back(std::move(*x), std::move(value));
    };
    // All size-nv index combinations of the plane list.
    auto recurse = [&](auto&& self, std::size_t depth, std::size_t start) -> void {
        if (depth == nv) {
            consider();
            return;
        }
        for (std::size_t k = start; k + (nv - depth - 1) < planes.size(); ++k) {
            pick[depth] = k;
            self(self, depth + 1, k + 1);
        }
    };
    if (planes.size() >= nv)
        recurse(recurse, 0, 0);
    return out;
}

}  // namespace crlp
