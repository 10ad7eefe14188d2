#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "helikon/error.hpp"
#include "helikon/periods.hpp"

namespace helikon {

struct SolverOptions {
    double tol_h = 1e-6;
    double tol_v = 1e-6;
    double b_tol = 1e-10;
    double theta_tol = 1e-10;
    std::pair<double, double> theta_bracket{1.2, 2.2};
    /// Empty selects default_b_bracket(k).
    std::optional<std::pair<double, double>> b_bracket;
    int scan_points = 11;
    int max_bisections = 200;
    unsigned threads = 1;
    PeriodOptions periods{};
};

struct Solution {
    double k;
    double theta_angle;
    double b;
    double a;
    double horiz_residual;
    double vert_residual;
    double axis_turning;
    int iterations;
    PeriodReport report;
};

struct NoSignChange {
    double residual_lo;
    double residual_hi;
};

using VerticalRoot = std::variant<double, NoSignChange>;

/// One outer-scan sample: b solved from the vertical condition at theta.
struct ScanRow {
    double theta;
    std::optional<double> b;
    double horiz_residual;
    std::string note;
};

class SolveFailure : public Error {
public:
    SolveFailure(const std::string& what, std::vector<ScanRow> rows) : Error(what), table(std::move(rows)) {}
    std::vector<ScanRow> table;
};

/// [max(1/2, (k-1)/k) + 1e-3, 1 - 1e-3].
std::pair<double, double> default_b_bracket(double k);

/// Vertical residual at (k, theta, b); builds the data on the fly.
double vertical_residual_at(double k, double theta_angle, double b, const PeriodOptions& opt = {});

VerticalRoot solve_vertical_for_b(double k, double theta_angle, std::pair<double, double> bracket,
                                  const SolverOptions& opt = {});

/// Nested bisection: b(theta) from the vertical condition, then theta from the
/// horizontal one. The outer bracket is scanned first and bisected in the
/// first cell with a sign change; the bracket is widened once on failure.
Solution solve_k(double k, const SolverOptions& opt = {});

struct FamilyEntry {
    double k;
    std::optional<Solution> solution;
    std::string failure;
};

/// Warm-started sweep over ascending k; failures are recorded and skipped.
std::vector<FamilyEntry> continue_family(const std::vector<double>& k_values, const SolverOptions& opt = {});

struct SweepRow {
    double k;
    double theta;
    double b;
    double horiz_residual;
    double vert_residual;
    double quad_err;
    std::string flag;
};

/// Residual field on a theta-major grid; per-cell failures are flagged.
std::vector<SweepRow> sweep(double k, const std::vector<double>& theta_grid, const std::vector<double>& b_grid,
                            const SolverOptions& opt = {});

}  // namespace helikon
