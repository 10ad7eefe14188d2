#include <doctest.h>

#include <cmath>

#include "helikon/error.hpp"
#include "helikon/surface.hpp"

using namespace helikon;

namespace {

constexpr double theta1 = 1.9074993767;
constexpr double b1 = 0.6290650538;
constexpr double theta2 = 1.7628837526;
constexpr double b2 = 0.8019304704;

WeierstrassData make(double theta, double k, double b) {
    const auto t = make_torus(theta);
    return WeierstrassData::build(t, place_points(t, k, b));
}

double dist(const Vec3& a, const Vec3& b) { return std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]); }

double x3_extent(const Mesh& m) {
    double lo = 1e300, hi = -1e300;
    for (const auto& v : m.vertices) {
        lo = std::min(lo, v[2]);
        hi = std::max(hi, v[2]);
    }
    return hi - lo;
}

}  // namespace

TEST_CASE("H1 fundamental domain at resolution 64") {
    const auto d = make(theta1, 1.0, b1);
    ImmerseOptions o;
    o.threads = 2;
    const auto imm = immerse(d, o);
    const auto& m = imm.mesh;
    const int n = imm.resolution;
    const auto center = imm.node_vertex[static_cast<std::size_t>((n / 2) * (n + 1) + n / 2)][0];
    REQUIRE(center >= 0);
    CHECK(dist(m.vertices[static_cast<std::size_t>(center)], {0, 0, 0}) == 0.0);
    CHECK(imm.seam_mismatch < 1e-6);

    const auto g = verify_geometry(imm, d);
    CHECK(g.axis_max_xy < 1e-5 * g.diameter);
    CHECK(g.inner_x3_spread < 1e-5 * g.diameter);
    CHECK(g.outer_x3_spread < 1e-5 * g.diameter);
    CHECK(g.line_angle_error < 1e-3);
    CHECK(g.rho_symmetry < 1e-5 * g.diameter);
    CHECK(g.normal_at_center[0] == doctest::Approx(1.0).epsilon(1e-6));

    // Faces are nondegenerate and all coordinates finite.
    for (const auto& f : m.faces) {
        const auto& a = m.vertices[f[0]];
        const auto& b = m.vertices[f[1]];
        const auto& c = m.vertices[f[2]];
        const Vec3 e1{b[0] - a[0], b[1] - a[1], b[2] - a[2]}, e2{c[0] - a[0], c[1] - a[1], c[2] - a[2]};
        const double area = std::hypot(e1[1] * e2[2] - e1[2] * e2[1], e1[2] * e2[0] - e1[0] * e2[2], e1[0] * e2[1] - e1[1] * e2[0]);
        CHECK(area > 1e-14);
    }
    CHECK(self_intersection_check(m, 0.0, 2).pairs.empty());
}

namespace {

struct MetricError {
    double far = 0.0;  // edges at least 0.1 from both ends
    double all = 0.0;
};

MetricError metric_error(const WeierstrassData& d, int resolution) {
    ImmerseOptions o;
    o.resolution = resolution;
    o.threads = 2;
    const auto imm = immerse(d, o);
    const auto& m = imm.mesh;
    const auto& t = d.torus();
    const auto& pts = d.points();
    MetricError err;
    for (const auto& f : m.faces)
        for (int e = 0; e < 3; ++e) {
            const auto p = f[e], q = f[(e + 1) % 3];
            // Midpoint rule on the domain edge; cut copies share the domain point.
            const cplx za = m.domain_uv[p], zb = m.domain_uv[q];
            if (std::abs(zb - za) > 0.5) continue;  // welded edge across the rhombus boundary
            const cplx mid = 0.5 * (za + zb);
            const double predicted = d.metric_ds(mid) * std::abs(zb - za);
            const double actual = dist(m.vertices[p], m.vertices[q]);
            const double rel = std::abs(actual - predicted) / predicted;
            err.all = std::max(err.all, rel);
            if (std::min(torus_distance(t, mid, pts.E1), torus_distance(t, mid, pts.E2)) >= 0.1)
                err.far = std::max(err.far, rel);
        }
    return err;
}

}  // namespace

TEST_CASE("edge lengths follow the induced metric") {
    const auto d = make(theta1, 1.0, b1);
    const auto coarse = metric_error(d, 64);
    CHECK(coarse.far < 0.02);
    // Near the cutoff the error is dominated by (h/r)^2; halving h must cut it by about 4.
    const auto fine = metric_error(d, 128);
    CHECK(fine.far < coarse.far);
    CHECK(coarse.all / fine.all > 3.0);
}

TEST_CASE("spanning trees agree; periods show up only at the seams") {
    ImmerseOptions o;
    o.resolution = 32;
    o.threads = 2;
    CHECK(spanning_tree_discrepancy(make(theta1, 1.0, b1), o) < 1e-8);
    // Trees never cross the cut, so off solutions they still agree and the seam carries the period.
    const auto off = make(1.5, 1.0, 0.7);
    CHECK(spanning_tree_discrepancy(off, o) < 1e-8);
    o.allow_unsolved = true;
    CHECK(immerse(off, o).seam_mismatch > 1e-3);
    CHECK(immerse(make(theta1, 1.0, b1), o).seam_mismatch < 1e-6);
}

TEST_CASE("unsolved data needs the override") {
    const auto d = make(1.5, 1.0, 0.7);
    ImmerseOptions o;
    o.resolution = 16;
    CHECK_THROWS_AS(immerse(d, o), ContractError);
    o.allow_unsolved = true;
    CHECK(immerse(d, o).seam_mismatch > 1e-3);
    o.resolution = 15;
    CHECK_THROWS_AS(immerse(d, o), ContractError);
}

TEST_CASE("screw motion") {
    const auto d = make(theta2, 2.0, b2);
    const auto sigma = screw_motion(d);
    CHECK(sigma.translation == doctest::Approx(4.0 * pi).epsilon(1e-10));
    CHECK(sigma.angle == doctest::Approx(4.0 * pi));
    const auto inv = sigma.inverse();
    const Vec3 x{0.3, -1.2, 0.7};
    CHECK(dist(inv.apply(sigma.apply(x)), x) < 1e-14);

    ImmerseOptions o;
    o.resolution = 32;
    o.threads = 2;
    const auto imm = immerse(d, o);
    CHECK(screw_seam_mismatch(imm, sigma) < 1e-6);

    const auto one = apply_screw(imm.mesh, sigma, 1);
    CHECK(one.vertices == imm.mesh.vertices);
    CHECK(one.faces == imm.mesh.faces);
    const auto three = apply_screw(imm.mesh, sigma, 3);
    CHECK(three.faces.size() == 3 * imm.mesh.faces.size());
    // Welded seams remove the duplicated cut vertices.
    CHECK(three.vertices.size() < 3 * imm.mesh.vertices.size());
    // Residue-based translation oracle: each copy adds 2 pi k of height.
    CHECK(x3_extent(three) - x3_extent(imm.mesh) == doctest::Approx(2.0 * sigma.translation).epsilon(0.01));
    CHECK_THROWS_AS(apply_screw(imm.mesh, sigma, 0), ContractError);
}

TEST_CASE("helicoid mesh and its screw invariance") {
    for (const double k : {1.0, 2.0, 2.5}) {
        const HelicoidData h(k);
        const auto hm = helicoid_mesh(h, 25, 41);
        CHECK(hm.mesh.size() == 1025);
        CHECK(hm.max_closed_form_error < 1e-8);
    }
    // sigma_1 maps the k = 1 helicoid to itself: X(z) at arg - 2 pi lands on sigma(X(z)).
    const HelicoidData h(1.0);
    const ScrewMotion sigma{2.0 * pi, 2.0 * pi};
    double worst = 0.0;
    for (int j = 0; j < 50; ++j) {
        const cplx z = std::polar(0.5 + 0.03 * j, -2.0 + 0.07 * j);
        const double a = std::arg(z);
        worst = std::max(worst, dist(sigma.apply(h.immersion(z, a)), h.immersion(z, a - 2.0 * pi)));
    }
    CHECK(worst < 1e-8);
    CHECK_THROWS_AS(helicoid_mesh(h, 4, 4), ContractError);
}

TEST_CASE("end asymptotics") {
    CHECK(asymptotic_compare(HelicoidData(1.0), 0.1) < 1e-10);
    CHECK(asymptotic_compare(HelicoidData(2.5), 0.3) < 1e-10);
    const auto d = make(theta1, 1.0, b1);
    const double far = asymptotic_compare(d, 0.1);
    const double near = asymptotic_compare(d, 0.05);
    CHECK(near < far);
    CHECK_THROWS_AS(asymptotic_compare(d, 5.0), GeometryError);
    CHECK_THROWS_AS(asymptotic_compare(HelicoidData(1.0), 1.5), GeometryError);
}
