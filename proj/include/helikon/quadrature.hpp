#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>

#include "helikon/error.hpp"

namespace helikon {

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-12;
    int max_depth = 40;
    /// Segments are first split into panels no longer than this.
    double max_panel_length = 0.05;
};

template <std::size_t N>
struct QuadratureResult {
    std::array<std::complex<double>, N> value{};
    double error = 0.0;
    int panels = 0;
    bool converged = true;
};

namespace detail {

// Gauss-Kronrod 7/15 on [-1, 1]; nodes ordered from -1 to 1.
inline constexpr std::array<double, 15> gk15_nodes = {
    -0.991455371120812639206854697526329, -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926, -0.741531185599394439863864773280788,
    -0.586087235467691130294144845693013, -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245, 0.0,
    0.207784955007898467600689403773245,  0.405845151377397166906606412076961,
    0.586087235467691130294144845693013,  0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,  0.949107912342758524526189684047851,
    0.991455371120812639206854697526329};

inline constexpr std::array<double, 15> gk15_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
    0.204432940075298892414161999234649, 0.190350578064785409913256402421014,
    0.169004726639267902826583426598550, 0.140653259715525918745189590510238,
    0.104790010322250183839876322541518, 0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};

// Gauss 7-point weights live on the odd Kronrod slots.
inline constexpr std::array<double, 7> g7_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
    0.381830050505118944950369775488975, 0.279705391489276667901467771423780,
    0.129484966168869693270611432679082};

template <std::size_t N, class Walker>
void integrate_panel(Walker& walker, std::complex<double> a, std::complex<double> b, int depth,
                     const QuadratureOptions& opt, QuadratureResult<N>& out) {
    using C = std::complex<double>;
    const Walker saved = walker;
    const C mid = 0.5 * (a + b);
    const C half = 0.5 * (b - a);
    std::array<C, N> kron{};
    std::array<C, N> gauss{};
    for (std::size_t i = 0; i < 15; ++i) {
        const auto f = walker.at(mid + gk15_nodes[i] * half);
        for (std::size_t c = 0; c < N; ++c) {
            kron[c] += gk15_weights[i] * f[c];
            if (i % 2 == 1) gauss[c] += g7_weights[i / 2] * f[c];
        }
    }
    double err = 0.0;
    double mag = 0.0;
    for (std::size_t c = 0; c < N; ++c) {
        kron[c] *= half;
        gauss[c] *= half;
        err = std::max(err, std::abs(kron[c] - gauss[c]));
        mag = std::max(mag, std::abs(kron[c]));
    }
    if (!std::isfinite(err)) throw PoleError("non-finite integrand on quadrature panel");
    const bool ok = err <= opt.abs_tol || err <= opt.rel_tol * mag;
    if (ok || depth >= opt.max_depth) {
        if (!ok) out.converged = false;
        for (std::size_t c = 0; c < N; ++c) out.value[c] += kron[c];
        out.error += err;
        ++out.panels;
        return;
    }
    walker = saved;
    integrate_panel<N>(walker, a, mid, depth + 1, opt, out);
    integrate_panel<N>(walker, mid, b, depth + 1, opt, out);
}

}  // namespace detail

/// Adaptive Gauss-Kronrod quadrature of N coefficient functions along a polyline.
/// `walker.at(z)` returns the dz-coefficients at z and may carry continuation
/// state; it is visited in path order and copied to restart refined panels.
/// Throws AccuracyError when a panel cannot be refined to tolerance.
template <std::size_t N, class Walker>
QuadratureResult<N> integrate_polyline(Walker& walker, std::span<const std::complex<double>> vertices,
                                       const QuadratureOptions& opt = {}) {
    QuadratureResult<N> out;
    for (std::size_t s = 0; s + 1 < vertices.size(); ++s) {
        const auto a = vertices[s];
        const auto b = vertices[s + 1];
        const double len = std::abs(b - a);
        if (len == 0.0) continue;
        const int pieces = std::max(1, static_cast<int>(std::ceil(len / opt.max_panel_length)));
        for (int p = 0; p < pieces; ++p) {
            const auto pa = a + (b - a) * (static_cast<double>(p) / pieces);
            const auto pb = a + (b - a) * (static_cast<double>(p + 1) / pieces);
            detail::integrate_panel<N>(walker, pa, pb, 0, opt, out);
        }
    }
    if (!out.converged)
        throw AccuracyError("quadrature tolerance not met", out.value[0], out.error);
    return out;
}

/// Periodic trapezoid rule on the circle |z - c| = r, counterclockwise.
template <std::size_t N, class Fn>
std::array<std::complex<double>, N> integrate_circle(Fn&& fn, std::complex<double> c, double r, int points) {
    using C = std::complex<double>;
    std::array<C, N> acc{};
    constexpr double two_pi = 6.283185307179586476925286766559;
    for (int j = 0; j < points; ++j) {
        const C e = std::polar(1.0, two_pi * j / points);
        const auto f = fn(c + r * e);
        const C dz = C(0.0, 1.0) * r * e * (two_pi / points);
        for (std::size_t k = 0; k < N; ++k) acc[k] += f[k] * dz;
    }
    return acc;
}

}  // namespace helikon
