#include <doctest.h>

#include <cmath>
#include <tuple>

#include "helikon/error.hpp"
#include "helikon/periods.hpp"

using namespace helikon;

namespace {

// Solved (theta, b) for k = 1 and k = 2, cross-checked against an independent
// Weierstrass-p implementation during development.
constexpr double theta1 = 1.9074993767;
constexpr double b1 = 0.6290650538;
constexpr double theta2 = 1.7628837526;
constexpr double b2 = 0.8019304704;

WeierstrassData make(double theta, double k, double b) {
    const auto t = make_torus(theta);
    return WeierstrassData::build(t, place_points(t, k, b));
}

}  // namespace

TEST_CASE("periods of dz are the lattice generators") {
    const auto d = make(1.7, 1.0, 0.7);
    const auto& t = d.torus();
    for (const auto g : {Generator::one, Generator::tau}) {
        const auto cyc = generator_cycle(t, d.points(), g, default_clearance(t, d.points()));
        const auto r = integrate_form(d, Form::dz, cyc, d.branch_at(cyc.vertices.front()));
        CHECK(std::abs(r.value[0] - (g == Generator::one ? cplx(1.0) : t.tau)) < 1e-13);
    }
}

TEST_CASE("solved data has vanishing residuals") {
    for (const auto& [th, k, b] : {std::tuple{theta1, 1.0, b1}, std::tuple{theta2, 2.0, b2}}) {
        const auto d = make(th, k, b);
        const auto r = compute_periods(d);
        CHECK(std::abs(r.horiz_residual) < 1e-8);
        CHECK(std::abs(r.vert_residual) < 1e-8);
        CHECK(r.cross_check < 1e-7 * std::abs(r.period_gdh_1));
        CHECK(std::abs(r.residue_E1 + r.residue_E2) < 1e-10);
        CHECK(std::abs(r.residue_E1) == doctest::Approx(2.0 * pi * k).epsilon(1e-12));
        CHECK(vertical_residual(d) == doctest::Approx(r.vert_residual).epsilon(1e-9));
        CHECK(horizontal_residual(d) == doctest::Approx(r.horiz_residual).epsilon(1e-6));
    }
}

TEST_CASE("tau period is the conjugate of the B period at k = 1") {
    const auto r = compute_periods(make(theta1, 1.0, b1));
    CHECK(std::abs(r.period_gdh_tau - std::conj(r.period_gdh_1)) < 1e-8);
}

TEST_CASE("rho symmetry at b = 1/2 gives equal B periods") {
    // a = b = 1/2: each end sits on a vertical point, dh = c dz.
    for (const double th : {1.4, 1.8, 2.1}) {
        const auto d = make(th, 1.0, 0.5);
        CHECK(d.degenerate());
        const auto r = compute_periods(d);
        CHECK(std::abs(r.period_gdh_1 - r.period_invg_1) < 1e-8);
    }
}

TEST_CASE("dense trapezoid oracle for the B periods") {
    const auto d = make(1.75, 1.3, 0.75);
    const auto& t = d.torus();
    const auto cyc = generator_cycle(t, d.points(), Generator::one, default_clearance(t, d.points()));
    const auto rep = compute_periods(d);
    // Composite trapezoid with 10^6 points, branch advanced point by point.
    constexpr int n = 1000000;
    double total_len = 0.0;
    for (std::size_t s = 0; s + 1 < cyc.vertices.size(); ++s) total_len += std::abs(cyc.vertices[s + 1] - cyc.vertices[s]);
    cplx p_dh{}, p_gdh{};
    auto state = d.branch_at(cyc.vertices.front());
    for (std::size_t s = 0; s + 1 < cyc.vertices.size(); ++s) {
        const cplx a = cyc.vertices[s], b = cyc.vertices[s + 1];
        const int m = std::max(2, static_cast<int>(n * std::abs(b - a) / total_len));
        const cplx h = (b - a) / double(m);
        for (int j = 0; j <= m; ++j) {
            const cplx z = a + double(j) * h;
            const auto f = d.eval_forms(z, state);
            const double w = (j == 0 || j == m) ? 0.5 : 1.0;
            p_dh += w * f.dh * h;
            p_gdh += w * f.gdh * h;
        }
    }
    CHECK(std::abs(p_dh - rep.period_dh_1) < 1e-9 * std::max(1.0, std::abs(p_dh)));
    CHECK(std::abs(p_gdh - rep.period_gdh_1) < 1e-9 * std::max(1.0, std::abs(p_gdh)));
}

TEST_CASE("end residue quadrature") {
    const auto d = make(1.8, 1.5, 0.8);
    const cplx analytic = 2.0 * pi * I * d.residue_dh(1);
    CHECK(std::abs(end_residue(d, 1) - analytic) < 1e-10);
    CHECK(std::abs(end_residue(d, 2) + analytic) < 1e-10);
    CHECK_THROWS_AS(end_residue(d, 1, 5.0), GeometryError);
    CHECK_THROWS_AS(end_residue(d, 3), ContractError);
}

TEST_CASE("placement law through the bilinear relation") {
    for (const double k : {0.8, 1.0, 2.0, 2.5, 3.7}) {
        const auto d = make(1.65, k, k > 1.0 ? 0.5 * (1.0 + (k - 1.0) / k) + 0.3 * (1.0 / k) : 0.7);
        CHECK(abel_bilinear_check(d) < 1e-6);
        CHECK(abel_bilinear_check(d, cplx(0.013, -0.021)) < 1e-6);
    }
}

TEST_CASE("axis turning at solutions") {
    CHECK(std::abs(axis_turning(make(theta1, 1.0, b1))) < 1e-9);
    CHECK(axis_turning(make(theta2, 2.0, b2)) == doctest::Approx(-pi).epsilon(1e-9));
}
