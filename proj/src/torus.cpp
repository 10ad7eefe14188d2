#include "helikon/torus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "helikon/error.hpp"

namespace helikon {

namespace {

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

// Calls fn(i, j) for lattice shifts whose translates may come near the box.
template <class Fn>
void for_shifts_near(const RhombicTorus& torus, cplx lo_pt, cplx hi_pt, Fn&& fn) {
    auto c1 = torus.lattice_coords(lo_pt);
    auto c2 = torus.lattice_coords(hi_pt);
    const int i0 = static_cast<int>(std::floor(std::min(c1[0], c2[0]))) - 2;
    const int i1 = static_cast<int>(std::ceil(std::max(c1[0], c2[0]))) + 2;
    const int j0 = static_cast<int>(std::floor(std::min(c1[1], c2[1]))) - 2;
    const int j1 = static_cast<int>(std::ceil(std::max(c1[1], c2[1]))) + 2;
    for (int i = i0; i <= i1; ++i)
        for (int j = j0; j <= j1; ++j) fn(i, j);
}

}  // namespace

namespace detail {

double segment_point_distance(cplx a, cplx b, cplx p) noexcept {
    const cplx d = b - a;
    const double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(p - a);
    const double t = std::clamp(((p - a) * std::conj(d)).real() / len2, 0.0, 1.0);
    return std::abs(p - (a + t * d));
}

bool segments_intersect(cplx p1, cplx p2, cplx q1, cplx q2) noexcept {
    const double d1 = cross(p2 - p1, q1 - p1);
    const double d2 = cross(p2 - p1, q2 - p1);
    const double d3 = cross(q2 - q1, p1 - q1);
    const double d4 = cross(q2 - q1, p2 - q1);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;
    constexpr double eps = 1e-14;
    auto on_seg = [](cplx a, cplx b, cplx p) { return segment_point_distance(a, b, p) <= eps; };
    return on_seg(p1, p2, q1) || on_seg(p1, p2, q2) || on_seg(q1, q2, p1) || on_seg(q1, q2, p2);
}

}  // namespace detail

std::array<double, 2> RhombicTorus::lattice_coords(cplx z) const noexcept {
    const double y = z.imag() / tau.imag();
    return {z.real() - y * tau.real(), y};
}

RhombicTorus make_torus(double theta_angle) {
    if (!(theta_angle > 0.0 && theta_angle < pi))
        throw DomainError("rhombic torus angle must lie in (0, pi)");
    const cplx tau = std::polar(1.0, theta_angle);
    return RhombicTorus{theta_angle, tau, (1.0 + tau) / 2.0, Lattice(tau)};
}

MarkedPoints place_points(const RhombicTorus& torus, double k, double b) {
    if (!(k > 0.5)) throw PlacementError("k must exceed 1/2");
    if (!(b > 0.0 && b < 1.0)) throw PlacementError("b must lie in (0, 1)");
    const double a = k * (1.0 - b);
    if (!(a > 0.0 && a < 1.0)) throw PlacementError("a = k(1-b) must lie in (0, 1)");
    const cplx u = torus.half_horizontal();
    const cplx o = torus.center;
    return MarkedPoints{k, b, a, o - b * u, o + b * u, o - a * u, o + a * u, std::abs(a - b) <= 1e-12};
}

double torus_distance(const RhombicTorus& torus, cplx z, cplx p) {
    int m = 0;
    int n = 0;
    const cplx w = torus.lattice.reduce(z - p, m, n);
    double best = std::numeric_limits<double>::infinity();
    for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j)
            best = std::min(best, std::abs(w - static_cast<double>(i) - static_cast<double>(j) * torus.tau));
    return best;
}

double default_clearance(const RhombicTorus& torus, const MarkedPoints& pts) {
    const auto all = pts.all();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i + 1; j < all.size(); ++j) {
            const double d = torus_distance(torus, all[i], all[j]);
            if (d > 1e-12) best = std::min(best, d);
        }
    return 0.02 * best;
}

double path_clearance(const RhombicTorus& torus, const MarkedPoints& pts, const DomainPath& path) {
    double best = std::numeric_limits<double>::infinity();
    const auto all = pts.all();
    for (std::size_t s = 0; s + 1 < path.vertices.size(); ++s) {
        const cplx a = path.vertices[s];
        const cplx b = path.vertices[s + 1];
        for_shifts_near(torus, a, b, [&](int i, int j) {
            const cplx shift = static_cast<double>(i) + static_cast<double>(j) * torus.tau;
            for (const cplx p : all)
                best = std::min(best, detail::segment_point_distance(a, b, p + shift));
        });
    }
    return best;
}

bool crosses_cut(const RhombicTorus& torus, const MarkedPoints& pts, const DomainPath& path) {
    const cplx u = torus.half_horizontal();
    const cplx c1 = torus.center + pts.b * u;
    const cplx c2 = torus.center + (2.0 - pts.b) * u;
    for (std::size_t s = 0; s + 1 < path.vertices.size(); ++s) {
        const cplx a = path.vertices[s];
        const cplx b = path.vertices[s + 1];
        bool hit = false;
        for_shifts_near(torus, a, b, [&](int i, int j) {
            const cplx shift = static_cast<double>(i) + static_cast<double>(j) * torus.tau;
            hit = hit || detail::segments_intersect(a, b, c1 + shift, c2 + shift);
        });
        if (hit) return true;
    }
    return false;
}

DomainPath generator_cycle(const RhombicTorus& torus, const MarkedPoints& pts, Generator which,
                           double clearance) {
    if (!(clearance > 0.0)) throw GeometryError("clearance must be positive");
    const cplx period = which == Generator::one ? cplx{1.0} : torus.tau;
    const Homology h = which == Generator::one ? Homology{1, 0} : Homology{0, 1};
    const cplx diag = (1.0 + torus.tau) / 2.0;
    // The cycle crosses a horizontal-diagonal translate at offset -t (or +t)
    // measured in units of (1-tau)/2; prefer the midpoint between O and a V.
    const double span = std::min(pts.a, pts.b);
    const double t0 = 0.5 * span;
    const double step = span / 200.0;
    for (int j = 0; j < 400; ++j) {
        const double t = t0 + ((j % 2 == 0) ? 1.0 : -1.0) * step * ((j + 1) / 2);
        if (std::abs(t) >= pts.b) continue;
        const cplx anchor = torus.center + t * diag;
        DomainPath path{{anchor, anchor + period}, clearance, true, h};
        DomainPath lead{{torus.center, anchor}, clearance, false, {}};
        if (path_clearance(torus, pts, path) < clearance) continue;
        if (path_clearance(torus, pts, lead) < clearance) continue;
        if (crosses_cut(torus, pts, path) || crosses_cut(torus, pts, lead)) continue;
        return path;
    }
    throw GeometryError("no generator representative keeps the requested clearance");
}

SymmetryImages symmetry_images(const RhombicTorus& torus, cplx z) {
    const cplx o = torus.center;
    const cplx dv = (1.0 + torus.tau) / std::abs(1.0 + torus.tau);
    const cplx dh = (1.0 - torus.tau) / std::abs(1.0 - torus.tau);
    const cplx mu_v = dv * dv * std::conj(z);
    const cplx mu_h = o + dh * dh * std::conj(z - o);
    return {2.0 * o - z, mu_v, mu_h};
}

}  // namespace helikon
