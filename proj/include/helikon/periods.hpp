#pragma once

#include "helikon/quadrature.hpp"
#include "helikon/weierstrass.hpp"

namespace helikon {

enum class Form { dz, dh, gdh, invg_dh, dlog_g };

struct PeriodOptions {
    QuadratureOptions quad{};
    /// <= 0 selects default_clearance().
    double clearance = 0.0;
    int circle_points = 64;
};

/// Generator periods over B (class [1]) and T (class [tau]); end integrals over
/// small circles; residuals of the two period conditions on B.
struct PeriodReport {
    cplx period_gdh_1;
    cplx period_gdh_tau;
    cplx period_invg_1;
    cplx period_invg_tau;
    cplx period_dh_1;
    cplx period_dh_tau;
    /// Integrals of dh over counterclockwise circles around E1 and E2 (2 pi i Res).
    cplx residue_E1;
    cplx residue_E2;
    /// Im(P + Q) / (|P| + |Q|) with P, Q the B-periods of g dh and dh/g.
    double horiz_residual;
    /// Re of the B-period of dh.
    double vert_residual;
    /// |P - conj(Q)|.
    double cross_check;
    /// Im(P / P_tau), kept for diagnostics.
    double period_ratio_imag;
    double quadrature_error_estimate;
};

/// Integrates one form along the path, continuing the branch from `start`.
QuadratureResult<1> integrate_form(const WeierstrassData& data, Form form, const DomainPath& path,
                                   const BranchState& start, const QuadratureOptions& opt = {});

PeriodReport compute_periods(const WeierstrassData& data, const PeriodOptions& opt = {});

double horizontal_residual(const WeierstrassData& data, const PeriodOptions& opt = {});
double vertical_residual(const WeierstrassData& data, const PeriodOptions& opt = {});
double cross_check_hpc(const WeierstrassData& data, const PeriodOptions& opt = {});

/// Integral of dh over the circle of the given radius around E1 (end = 1) or E2.
/// radius <= 0 picks a quarter of the distance to the nearest other marked point.
/// The trapezoid value at `points` nodes is checked against 2*points nodes.
cplx end_residue(const WeierstrassData& data, int end, double radius = 0.0, int points = 64);

/// Periods alpha_1, alpha_2 of dg/g along the rhombus edges from `base`, and
/// |(alpha_2 - tau alpha_1)/(2 pi i (1 - tau)) - (a + k b)|.
double abel_bilinear_check(const WeierstrassData& data, cplx base = 0.0, const QuadratureOptions& opt = {});

/// Im of the integral of dg/g from the center to the top vertex 0.
double axis_turning(const WeierstrassData& data, const QuadratureOptions& opt = {});

}  // namespace helikon
