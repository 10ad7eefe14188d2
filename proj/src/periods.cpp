#include "helikon/periods.hpp"

#include <cmath>
#include <limits>

#include "helikon/error.hpp"

namespace helikon {

namespace {

struct FormWalker {
    const WeierstrassData* data;
    Form form;
    BranchState state;

    std::array<cplx, 1> at(cplx z) {
        switch (form) {
            case Form::dz: return {cplx{1.0}};
            case Form::dh: return {data->dh(z)};
            case Form::dlog_g: return {data->dlog_g(z)};
            case Form::gdh: return {data->eval_forms(z, state).gdh};
            case Form::invg_dh: return {data->eval_forms(z, state).one_over_g_dh};
        }
        return {cplx{}};
    }
};

double clearance_for(const WeierstrassData& data, const PeriodOptions& opt) {
    return opt.clearance > 0.0 ? opt.clearance : default_clearance(data.torus(), data.points());
}

double nearest_other(const WeierstrassData& data, cplx e) {
    double best = std::numeric_limits<double>::infinity();
    for (const cplx p : data.points().all()) {
        if (std::abs(p - e) == 0.0) continue;
        best = std::min(best, torus_distance(data.torus(), e, p));
    }
    // Translates of e itself.
    const auto& t = data.torus();
    best = std::min({best, 1.0, std::abs(1.0 - t.tau), std::abs(1.0 + t.tau)});
    return best;
}

}  // namespace

QuadratureResult<1> integrate_form(const WeierstrassData& data, Form form, const DomainPath& path,
                                   const BranchState& start, const QuadratureOptions& opt) {
    FormWalker w{&data, form, start};
    return integrate_polyline<1>(w, std::span<const cplx>(path.vertices), opt);
}

PeriodReport compute_periods(const WeierstrassData& data, const PeriodOptions& opt) {
    const double clearance = clearance_for(data, opt);
    const auto b_cycle = generator_cycle(data.torus(), data.points(), Generator::one, clearance);
    const auto t_cycle = generator_cycle(data.torus(), data.points(), Generator::tau, clearance);

    PhiWalker wb{&data, data.branch_at(b_cycle.vertices.front())};
    const auto rb = integrate_polyline<3>(wb, std::span<const cplx>(b_cycle.vertices), opt.quad);
    PhiWalker wt{&data, data.branch_at(t_cycle.vertices.front())};
    const auto rt = integrate_polyline<3>(wt, std::span<const cplx>(t_cycle.vertices), opt.quad);

    PeriodReport r{};
    r.period_gdh_1 = rb.value[0];
    r.period_invg_1 = rb.value[1];
    r.period_dh_1 = rb.value[2];
    r.period_gdh_tau = rt.value[0];
    r.period_invg_tau = rt.value[1];
    r.period_dh_tau = rt.value[2];
    r.residue_E1 = end_residue(data, 1, 0.0, opt.circle_points);
    r.residue_E2 = end_residue(data, 2, 0.0, opt.circle_points);

    const cplx p = r.period_gdh_1;
    const cplx q = r.period_invg_1;
    const double denom = std::abs(p) + std::abs(q);
    if (denom < 1e-12) throw DegeneratePeriodError("B-periods of g dh and dh/g vanish");
    r.horiz_residual = (p + q).imag() / denom;
    r.vert_residual = r.period_dh_1.real();
    r.cross_check = std::abs(p - std::conj(q));
    r.period_ratio_imag = std::abs(r.period_gdh_tau) > 1e-12 ? (p / r.period_gdh_tau).imag()
                                                             : std::numeric_limits<double>::quiet_NaN();
    r.quadrature_error_estimate = rb.error + rt.error;
    return r;
}

double horizontal_residual(const WeierstrassData& data, const PeriodOptions& opt) {
    return compute_periods(data, opt).horiz_residual;
}

double cross_check_hpc(const WeierstrassData& data, const PeriodOptions& opt) {
    return compute_periods(data, opt).cross_check;
}

double vertical_residual(const WeierstrassData& data, const PeriodOptions& opt) {
    const auto b_cycle = generator_cycle(data.torus(), data.points(), Generator::one, clearance_for(data, opt));
    FormWalker w{&data, Form::dh, data.branch_at_center()};
    return integrate_polyline<1>(w, std::span<const cplx>(b_cycle.vertices), opt.quad).value[0].real();
}

cplx end_residue(const WeierstrassData& data, int end, double radius, int points) {
    if (end != 1 && end != 2) throw ContractError("end index must be 1 or 2");
    const cplx e = end == 1 ? data.points().E1 : data.points().E2;
    const double limit = nearest_other(data, e);
    if (radius <= 0.0) radius = 0.25 * limit;
    if (radius >= limit) throw GeometryError("end cycle encloses another marked point");
    auto f = [&](cplx z) { return std::array<cplx, 1>{data.dh(z)}; };
    const cplx coarse = integrate_circle<1>(f, e, radius, points)[0];
    const cplx fine = integrate_circle<1>(f, e, radius, 2 * points)[0];
    const double diff = std::abs(fine - coarse);
    if (diff > 1e-9 * std::max(1.0, std::abs(fine)))
        throw AccuracyError("end cycle quadrature did not settle", fine, diff);
    return fine;
}

double abel_bilinear_check(const WeierstrassData& data, cplx base, const QuadratureOptions& opt) {
    const cplx tau = data.torus().tau;
    FormWalker w{&data, Form::dlog_g, data.branch_at_center()};
    const std::array<cplx, 2> edge1{base, base + 1.0};
    const std::array<cplx, 2> edge2{base, base + tau};
    const cplx alpha1 = integrate_polyline<1>(w, std::span<const cplx>(edge1), opt).value[0];
    const cplx alpha2 = integrate_polyline<1>(w, std::span<const cplx>(edge2), opt).value[0];
    const cplx result = (alpha2 - tau * alpha1) / (2.0 * pi * I * (1.0 - tau));
    const auto& pts = data.points();
    return std::abs(result - (pts.a + pts.k * pts.b));
}

double axis_turning(const WeierstrassData& data, const QuadratureOptions& opt) {
    FormWalker w{&data, Form::dlog_g, data.branch_at_center()};
    const std::array<cplx, 2> arc{data.torus().center, cplx{0.0}};
    return integrate_polyline<1>(w, std::span<const cplx>(arc), opt).value[0].imag();
}

}  // namespace helikon
