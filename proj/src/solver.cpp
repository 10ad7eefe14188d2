#include "helikon/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "helikon/parallel.hpp"

namespace helikon {

namespace {

bool opposite(double x, double y) { return (x < 0.0 && y > 0.0) || (x > 0.0 && y < 0.0); }

WeierstrassData data_at(double k, double theta_angle, double b) {
    const auto torus = make_torus(theta_angle);
    return WeierstrassData::build(torus, place_points(torus, k, b));
}

std::pair<double, double> b_bracket_for(double k, const SolverOptions& opt) {
    return opt.b_bracket ? *opt.b_bracket : default_b_bracket(k);
}

struct OuterSample {
    double b = 0.0;
    double h = 0.0;
    bool ok = false;
    std::string note;
};

OuterSample outer_sample(double k, double theta_angle, const SolverOptions& opt) {
    OuterSample s;
    try {
        const auto root = solve_vertical_for_b(k, theta_angle, b_bracket_for(k, opt), opt);
        if (const auto* nsc = std::get_if<NoSignChange>(&root)) {
            std::ostringstream os;
            os << "no vertical sign change (" << nsc->residual_lo << ", " << nsc->residual_hi << ")";
            s.note = os.str();
            return s;
        }
        s.b = std::get<double>(root);
        s.h = horizontal_residual(data_at(k, theta_angle, s.b), opt.periods);
        s.ok = true;
    } catch (const Error& e) {
        s.note = e.what();
    }
    return s;
}

Solution bracket_and_bisect(double k, std::pair<double, double> bracket, const SolverOptions& opt,
                            std::vector<ScanRow>& table) {
    const int n = std::max(2, opt.scan_points);
    std::vector<double> thetas(n);
    for (int i = 0; i < n; ++i)
        thetas[i] = bracket.first + (bracket.second - bracket.first) * static_cast<double>(i) / (n - 1);
    std::vector<OuterSample> samples(n);
    parallel_for(static_cast<std::size_t>(n), opt.threads,
                 [&](std::size_t i) { samples[i] = outer_sample(k, thetas[i], opt); });
    for (int i = 0; i < n; ++i)
        table.push_back({thetas[i], samples[i].ok ? std::optional<double>(samples[i].b) : std::nullopt,
                         samples[i].h, samples[i].note});

    int cell = -1;
    for (int i = 0; i + 1 < n; ++i)
        if (samples[i].ok && samples[i + 1].ok && opposite(samples[i].h, samples[i + 1].h)) {
            cell = i;
            break;
        }
    if (cell < 0) throw SolveFailure("horizontal residual has no sign change on the theta bracket", table);

    double lo = thetas[cell];
    double hi = thetas[cell + 1];
    double h_lo = samples[cell].h;
    OuterSample best = std::abs(samples[cell].h) < std::abs(samples[cell + 1].h) ? samples[cell] : samples[cell + 1];
    double best_theta = std::abs(samples[cell].h) < std::abs(samples[cell + 1].h) ? lo : hi;
    int iterations = 0;
    while (hi - lo > opt.theta_tol && iterations < opt.max_bisections) {
        ++iterations;
        const double mid = 0.5 * (lo + hi);
        const auto s = outer_sample(k, mid, opt);
        if (!s.ok) throw SolveFailure("vertical solve failed inside the bracket at theta " + std::to_string(mid), table);
        best = s;
        best_theta = mid;
        if (std::abs(s.h) < 1e-3 * opt.tol_h) break;
        if (opposite(s.h, h_lo)) {
            hi = mid;
        } else {
            lo = mid;
            h_lo = s.h;
        }
    }

    const auto data = data_at(k, best_theta, best.b);
    Solution sol{k, best_theta, best.b, data.points().a, 0.0, 0.0, 0.0, iterations, compute_periods(data, opt.periods)};
    sol.horiz_residual = sol.report.horiz_residual;
    sol.vert_residual = sol.report.vert_residual;
    sol.axis_turning = axis_turning(data, opt.periods.quad);
    if (std::abs(sol.horiz_residual) >= opt.tol_h || std::abs(sol.vert_residual) >= opt.tol_v)
        throw SolveFailure("bisection ended above the residual tolerances", table);
    return sol;
}

}  // namespace

std::pair<double, double> default_b_bracket(double k) {
    return {std::max(0.5, (k - 1.0) / k) + 1e-3, 1.0 - 1e-3};
}

double vertical_residual_at(double k, double theta_angle, double b, const PeriodOptions& opt) {
    return vertical_residual(data_at(k, theta_angle, b), opt);
}

VerticalRoot solve_vertical_for_b(double k, double theta_angle, std::pair<double, double> bracket,
                                  const SolverOptions& opt) {
    double lo = bracket.first;
    double hi = bracket.second;
    double r_lo = vertical_residual_at(k, theta_angle, lo, opt.periods);
    const double r_hi = vertical_residual_at(k, theta_angle, hi, opt.periods);
    if (r_lo == 0.0) return lo;
    if (r_hi == 0.0) return hi;
    if (!opposite(r_lo, r_hi)) return NoSignChange{r_lo, r_hi};
    for (int it = 0; it < opt.max_bisections && hi - lo > opt.b_tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double r = vertical_residual_at(k, theta_angle, mid, opt.periods);
        if (std::abs(r) < 1e-3 * opt.tol_v) return mid;
        if (opposite(r, r_lo)) {
            hi = mid;
        } else {
            lo = mid;
            r_lo = r;
        }
    }
    return 0.5 * (lo + hi);
}

Solution solve_k(double k, const SolverOptions& opt) {
    if (!(k > 0.5)) throw DomainError("k must exceed 1/2");
    std::vector<ScanRow> table;
    try {
        return bracket_and_bisect(k, opt.theta_bracket, opt, table);
    } catch (const SolveFailure&) {
        const std::pair<double, double> wide{std::max(0.05, opt.theta_bracket.first - 0.7),
                                             std::min(pi - 0.05, opt.theta_bracket.second + 0.7)};
        if (wide == opt.theta_bracket) throw;
        return bracket_and_bisect(k, wide, opt, table);
    }
}

std::vector<FamilyEntry> continue_family(const std::vector<double>& k_values, const SolverOptions& opt) {
    std::vector<FamilyEntry> out;
    std::optional<Solution> last;
    for (const double k : k_values) {
        FamilyEntry entry{k, std::nullopt, {}};
        try {
            if (last) {
                SolverOptions warm = opt;
                warm.theta_bracket = {std::max(0.05, last->theta_angle - 0.25), std::min(pi - 0.05, last->theta_angle + 0.25)};
                try {
                    entry.solution = solve_k(k, warm);
                } catch (const SolveFailure&) {
                    entry.solution = solve_k(k, opt);
                }
            } else {
                entry.solution = solve_k(k, opt);
            }
            last = entry.solution;
        } catch (const Error& e) {
            entry.failure = e.what();
        }
        out.push_back(std::move(entry));
    }
    return out;
}

std::vector<SweepRow> sweep(double k, const std::vector<double>& theta_grid, const std::vector<double>& b_grid,
                            const SolverOptions& opt) {
    std::vector<SweepRow> rows(theta_grid.size() * b_grid.size());
    parallel_for(rows.size(), opt.threads, [&](std::size_t idx) {
        const double th = theta_grid[idx / b_grid.size()];
        const double b = b_grid[idx % b_grid.size()];
        SweepRow row{k, th, b, std::nan(""), std::nan(""), std::nan(""), "ok"};
        try {
            const auto data = data_at(k, th, b);
            const auto rep = compute_periods(data, opt.periods);
            row.horiz_residual = rep.horiz_residual;
            row.vert_residual = rep.vert_residual;
            row.quad_err = rep.quadrature_error_estimate;
            if (data.degenerate()) row.flag = "degenerate";
        } catch (const PlacementError&) {
            row.flag = "inadmissible";
        } catch (const DomainError&) {
            row.flag = "domain";
        } catch (const AccuracyError&) {
            row.flag = "quadrature";
        } catch (const Error&) {
            row.flag = "failed";
        }
        rows[idx] = std::move(row);
    });
    return rows;
}

}  // namespace helikon
