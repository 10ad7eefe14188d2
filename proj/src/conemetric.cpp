#include "helikon/conemetric.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "helikon/error.hpp"

namespace helikon::cone {

namespace {

constexpr double pi = 3.14159265358979323846264338327950288;

struct FnWalker {
    const std::function<cplx(cplx)>* fn;
    std::array<cplx, 1> at(cplx z) const { return {(*fn)(z)}; }
};

double integrate_real(const std::function<cplx(cplx)>& fn, double a, double b, const QuadratureOptions& opt) {
    FnWalker w{&fn};
    const std::array<cplx, 2> seg{cplx{a}, cplx{b}};
    return integrate_polyline<1>(w, std::span<const cplx>(seg), opt).value[0].real();
}

}  // namespace

ConePoint ConePoint::finite(double k, std::optional<cplx> at) {
    if (k == 0.0 || !std::isfinite(k)) throw DomainError("cone multiple k must be finite and nonzero");
    return {at, ConeKind::finite, k};
}

ConePoint ConePoint::exponential(std::optional<cplx> at) { return {at, ConeKind::exponential_simple, 0.0}; }

double gauss_bonnet_defect(const ConeMetricDesc& desc) {
    double sum = 0.0;
    int finite = 0;
    int exponential = 0;
    for (const auto& p : desc.points) {
        if (p.kind == ConeKind::finite) {
            sum += p.k;
            ++finite;
        } else {
            ++exponential;
        }
    }
    const double g = desc.genus;
    if (exponential == 0) return sum - (finite + 2.0 * (g - 1.0));
    return sum - (-(2.0 - 2.0 * g) + finite + 2.0 * exponential);
}

ConeMetricDesc sphere_dz() { return {0, {ConePoint::finite(-1.0)}}; }

ConeMetricDesc exponential_plane() { return {0, {ConePoint::exponential()}}; }

ConeMetricDesc slit_torus() { return {1, {ConePoint::finite(3.0, cplx{0.0}), ConePoint::finite(-1.0, cplx{0.5})}}; }

ConeMetricDesc quotient_torus(double k) {
    if (!(k > 0.0)) throw DomainError("quotient torus needs k > 0");
    return {1, {ConePoint::finite(3.0), ConePoint::finite(k), ConePoint::finite(-k)}};
}

double sk_line_element(double k, cplx w) {
    if (std::isinf(k)) return std::exp(w.real());
    if (k == 0.0 || std::isnan(k)) throw DomainError("sector parameter must be nonzero");
    const cplx base = 1.0 + w / k;
    if (base == cplx{}) throw DomainError("line element evaluated at its cone point w = -k");
    return std::pow(std::abs(base), k - 1.0);
}

double sk_sup_error(double k, double radius, int radial, int angular) {
    if (!(radius > 0.0) || radial < 1 || angular < 1) throw DomainError("sup error needs a positive radius and grid");
    double worst = 0.0;
    for (int i = 0; i <= radial; ++i)
        for (int j = 0; j < angular; ++j) {
            const cplx w = std::polar(radius * i / radial, 2.0 * pi * j / angular);
            worst = std::max(worst, std::abs(sk_line_element(k, w) - sk_line_element(infinite_k, w)));
        }
    return worst;
}

double mu_beta_density(double beta, double x) {
    const cplx z{x};
    return std::abs((z + 1.0) / (z - 1.0) * (z + 2.0) / (z - 2.0)) * std::exp(beta * x);
}

MuBetaLengths mu_beta_lengths(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("mu_beta needs beta > 0");
    const std::function<cplx(cplx)> density = [beta](cplx z) { return cplx{mu_beta_density(beta, z.real())}; };
    QuadratureOptions opt;
    opt.abs_tol = 1e-15;
    opt.rel_tol = 1e-13;
    MuBetaLengths out;
    out.g = integrate_real(density, -2.0, -1.0, opt);

    // Doubling intervals toward -infinity; the density is bounded by e^(beta x),
    // so the tail beyond x is at most e^(beta x)/beta.
    double x = -2.0;
    double width = std::min(1.0, 1.0 / beta);
    for (int guard = 0; guard < 200; ++guard) {
        QuadratureOptions o = opt;
        o.max_panel_length = width / 8.0;
        out.f += integrate_real(density, x, x - width, o) * -1.0;
        x -= width;
        width *= 2.0;
        const double tail = std::exp(beta * x) / beta;
        if (tail < 1e-12 * out.f) return out;
    }
    throw AccuracyError("mu_beta tail did not decay", out.f, std::exp(beta * x) / beta);
}

double annulus_modulus(double r1, double r2) {
    if (!(r1 > 0.0 && r2 > r1)) throw DomainError("annulus needs 0 < r1 < r2");
    return std::log(r2 / r1);
}

double annulus_core_extremal_length(double r1, double r2) { return 1.0 / annulus_modulus(r1, r2); }

cplx develop_segment(const std::function<cplx(cplx)>& omega, std::span<const cplx> path, const QuadratureOptions& opt) {
    FnWalker w{&omega};
    return integrate_polyline<1>(w, path, opt).value[0];
}

}  // namespace helikon::cone
