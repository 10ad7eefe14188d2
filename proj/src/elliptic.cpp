#include "helikon/elliptic.hpp"

#include <cmath>
#include <string>

#include "helikon/error.hpp"

namespace helikon {

namespace {

constexpr int min_half_terms = 8;
constexpr int max_half_terms = 400;
constexpr double rel_cutoff = 1e-16;

// sign (-1)^(m+n) times the automorphy factor of the reduction.
cplx reduction_factor(cplx z0, int m, int n, cplx tau) {
    const double sign = ((m + n) % 2 == 0) ? 1.0 : -1.0;
    const double dn = n;
    return sign * std::exp(-I * pi * dn * dn * tau - 2.0 * pi * I * dn * z0);
}

}  // namespace

Lattice::Lattice(cplx tau) : tau_(tau) {
    if (!(tau.imag() > 0.0) || !std::isfinite(tau.real()) || !std::isfinite(tau.imag()))
        throw DomainError("lattice parameter must satisfy Im(tau) > 0");
}

bool Lattice::rhombic() const noexcept { return std::abs(std::abs(tau_) - 1.0) <= 1e-12; }

cplx Lattice::reduce(cplx z, int& m, int& n) const noexcept {
    n = static_cast<int>(std::lround(z.imag() / tau_.imag()));
    const cplx z1 = z - static_cast<double>(n) * tau_;
    m = static_cast<int>(std::lround(z1.real()));
    return z1 - static_cast<double>(m);
}

namespace detail {

ThetaPair theta_series_pair(cplx z, cplx tau) {
    const cplx w = z + 0.5;
    cplx value = 0.0;
    cplx deriv = 0.0;
    for (int j = 0; j < max_half_terms; ++j) {
        const double m = j + 0.5;
        const cplx base = I * pi * m * m * tau;
        const cplx lin = 2.0 * pi * I * m * w;
        const cplx tp = std::exp(base + lin);
        const cplx tm = std::exp(base - lin);
        value += tp + tm;
        deriv += 2.0 * pi * I * m * (tp - tm);
        const double mag = std::abs(tp) + std::abs(tm);
        if (j + 1 >= min_half_terms && mag <= rel_cutoff * std::abs(value) &&
            2.0 * pi * m * mag <= rel_cutoff * std::abs(deriv))
            return {value, deriv};
        if (j + 1 >= min_half_terms && mag == 0.0) return {value, deriv};
    }
    throw DomainError("theta series did not converge");
}

}  // namespace detail

cplx theta(cplx z, const Lattice& lattice) {
    int m = 0;
    int n = 0;
    const cplx z0 = lattice.reduce(z, m, n);
    if (z0 == 0.0) return 0.0;
    return reduction_factor(z0, m, n, lattice.tau()) * detail::theta_series_pair(z0, lattice.tau()).value;
}

cplx theta_prime(cplx z, const Lattice& lattice) {
    int m = 0;
    int n = 0;
    const cplx z0 = lattice.reduce(z, m, n);
    const auto p = detail::theta_series_pair(z0, lattice.tau());
    return reduction_factor(z0, m, n, lattice.tau()) *
           (p.derivative - 2.0 * pi * I * static_cast<double>(n) * p.value);
}

cplx theta_quasi_factor(cplx z, const Lattice& lattice) {
    return std::exp(-2.0 * pi * I * (z + (lattice.tau() + 1.0) / 2.0));
}

cplx log_theta_derivative(cplx z, const Lattice& lattice) {
    int m = 0;
    int n = 0;
    const cplx z0 = lattice.reduce(z, m, n);
    if (std::abs(z0) < 1e-14) throw PoleError("log_theta_derivative evaluated at a lattice point");
    const auto p = detail::theta_series_pair(z0, lattice.tau());
    return p.derivative / p.value - 2.0 * pi * I * static_cast<double>(n);
}

cplx theta_product(cplx z, std::span<const ThetaFactor> factors, const Lattice& lattice) {
    double total = 0.0;
    double scale = 0.0;
    for (const auto& f : factors) {
        total += f.exponent;
        scale += std::abs(f.exponent);
    }
    if (std::abs(total) > 1e-12 * std::max(1.0, scale))
        throw ContractError("theta_product exponents must sum to zero, got " + std::to_string(total));
    cplx log_sum = 0.0;
    bool vanishes = false;
    for (const auto& f : factors) {
        if (f.exponent == 0.0) continue;
        const cplx t = theta(z - f.shift, lattice);
        if (t == 0.0) {
            if (f.exponent < 0.0) throw PoleError("theta_product evaluated at a pole shift");
            vanishes = true;
            continue;
        }
        log_sum += f.exponent * std::log(t);
    }
    return vanishes ? cplx{0.0} : std::exp(log_sum);
}

}  // namespace helikon
