#include <doctest.h>

#include <cmath>

#include "helikon/error.hpp"
#include "helikon/torus.hpp"

using namespace helikon;

TEST_CASE("rhombic torus layout") {
    CHECK_THROWS_AS(make_torus(0.0), DomainError);
    CHECK_THROWS_AS(make_torus(pi), DomainError);
    const auto t = make_torus(1.7);
    CHECK(std::abs(std::abs(t.tau) - 1.0) < 1e-15);
    CHECK(std::abs(t.center - (1.0 + t.tau) / 2.0) < 1e-15);
    // The diagonals of a rhombus are perpendicular.
    CHECK(std::abs((t.half_horizontal() * std::conj(t.up())).real()) < 1e-15);
    const auto xy = t.lattice_coords(t.from_lattice(0.3, 0.8));
    CHECK(std::abs(xy[0] - 0.3) < 1e-14);
    CHECK(std::abs(xy[1] - 0.8) < 1e-14);
}

TEST_CASE("placement law") {
    const auto t = make_torus(1.8);
    for (const double k : {0.75, 1.0, 2.5}) {
        const double b = k > 1.0 ? 0.9 : 0.7;
        const auto p = place_points(t, k, b);
        CHECK(p.a + k * p.b == doctest::Approx(k).epsilon(1e-15));
        CHECK(std::abs(p.E1 + p.E2 - 2.0 * t.center) < 1e-15);
        CHECK(std::abs(p.V1 + p.V2 - 2.0 * t.center) < 1e-15);
        CHECK(std::abs(p.E1 - (t.center - b * t.half_horizontal())) < 1e-15);
    }
    CHECK_THROWS_AS(place_points(t, 0.5, 0.7), PlacementError);
    CHECK_THROWS_AS(place_points(t, 1.0, 1.0), PlacementError);
    CHECK_THROWS_AS(place_points(t, 3.0, 0.5), PlacementError);  // a = 1.5
    CHECK(place_points(t, 1.0, 0.5).degenerate);
}

TEST_CASE("torus distance against brute force translates") {
    const auto t = make_torus(1.9);
    const cplx p(0.2, 0.3);
    for (const cplx z : {cplx(0.9, 0.1), cplx(-0.4, 0.8), cplx(2.3, -1.2)}) {
        double brute = 1e300;
        for (int m = -5; m <= 5; ++m)
            for (int n = -5; n <= 5; ++n) brute = std::min(brute, std::abs(z - p - double(m) - double(n) * t.tau));
        CHECK(torus_distance(t, z, p) == doctest::Approx(brute).epsilon(1e-14));
    }
}

TEST_CASE("generator cycles avoid marked points and the cut") {
    for (const double th : {1.3, 1.72, 2.1}) {
        const auto t = make_torus(th);
        const auto pts = place_points(t, 1.0, 0.8);
        const double clr = default_clearance(t, pts);
        for (const auto g : {Generator::one, Generator::tau}) {
            const auto c = generator_cycle(t, pts, g, clr);
            CHECK(c.closed);
            CHECK(path_clearance(t, pts, c) >= clr);
            CHECK_FALSE(crosses_cut(t, pts, c));
            const cplx shift = c.vertices.back() - c.vertices.front();
            CHECK(std::abs(shift - (g == Generator::one ? cplx(1.0) : t.tau)) < 1e-12);
            // Brute-force sampling oracle for the clearance.
            double sampled = 1e300;
            for (std::size_t s = 0; s + 1 < c.vertices.size(); ++s)
                for (int j = 0; j <= 400; ++j) {
                    const cplx z = c.vertices[s] + (c.vertices[s + 1] - c.vertices[s]) * (j / 400.0);
                    for (const cplx p : pts.all()) sampled = std::min(sampled, torus_distance(t, z, p));
                }
            CHECK(sampled >= path_clearance(t, pts, c) - 1e-12);
        }
    }
    const auto t = make_torus(1.7);
    const auto pts = place_points(t, 1.0, 0.8);
    CHECK_THROWS_AS(generator_cycle(t, pts, Generator::one, 10.0), GeometryError);
}

TEST_CASE("cut crossing detection") {
    const auto t = make_torus(1.7);
    const auto pts = place_points(t, 1.0, 0.7);
    const cplx mid_cut = t.center + 0.85 * t.half_horizontal();
    DomainPath across;
    across.vertices = {mid_cut + 0.05 * t.up(), mid_cut - 0.05 * t.up()};
    CHECK(crosses_cut(t, pts, across));
    DomainPath inside;
    const cplx between = t.center + 0.2 * t.half_horizontal();
    inside.vertices = {between + 0.05 * t.up(), between - 0.05 * t.up()};
    CHECK_FALSE(crosses_cut(t, pts, inside));
}

TEST_CASE("symmetry images") {
    const auto t = make_torus(1.7);
    const cplx z = t.center + cplx(0.1, 0.05);
    const auto s = symmetry_images(t, z);
    CHECK(std::abs(s.rho - (2.0 * t.center - z)) < 1e-15);
    // Reflections fix their own diagonal.
    const cplx on_v = t.center + 0.2 * t.up();
    CHECK(std::abs(symmetry_images(t, on_v).mu_v - on_v) < 1e-14);
    const cplx on_h = t.center + 0.3 * t.half_horizontal();
    CHECK(std::abs(symmetry_images(t, on_h).mu_h - on_h) < 1e-14);
    CHECK(detail::segments_intersect(0.0, cplx(1, 1), cplx(0, 1), cplx(1, 0)));
    CHECK_FALSE(detail::segments_intersect(0.0, cplx(1, 0), cplx(0, 1), cplx(1, 1)));
    CHECK(detail::segment_point_distance(0.0, 2.0, cplx(1, 1)) == doctest::Approx(1.0));
}
