#pragma once

#include <complex>
#include <span>

namespace helikon {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr cplx I{0.0, 1.0};

/// The lattice generated by 1 and tau, Im tau > 0.
class Lattice {
public:
    explicit Lattice(cplx tau);

    cplx tau() const noexcept { return tau_; }
    /// |tau| == 1 to 1e-12.
    bool rhombic() const noexcept;

    /// Writes z = z0 + m + n*tau with z0 in the centered fundamental cell.
    cplx reduce(cplx z, int& m, int& n) const noexcept;

private:
    cplx tau_;
};

/// Exponent > 0 marks a zero of that order at `shift`, exponent < 0 a pole.
struct ThetaFactor {
    cplx shift;
    double exponent;
};

/// theta(z) = sum_n exp(pi i (n+1/2)^2 tau + 2 pi i (n+1/2)(z+1/2)).
/// Odd, simple zeros on the lattice, theta(z+1) = -theta(z),
/// theta(z+tau) = theta_quasi_factor(z) theta(z).
cplx theta(cplx z, const Lattice& lattice);

/// d theta / dz.
cplx theta_prime(cplx z, const Lattice& lattice);

/// exp(-2 pi i (z + (tau+1)/2)).
cplx theta_quasi_factor(cplx z, const Lattice& lattice);

/// theta'(z)/theta(z). Throws PoleError on lattice points.
cplx log_theta_derivative(cplx z, const Lattice& lattice);

/// exp(sum e_i Log theta(z - s_i)) with principal logarithms at z.
/// The exponents must sum to zero.
cplx theta_product(cplx z, std::span<const ThetaFactor> factors, const Lattice& lattice);

namespace detail {

struct ThetaPair {
    cplx value;
    cplx derivative;
};

/// Series for theta and theta' at a reduced argument.
ThetaPair theta_series_pair(cplx z, cplx tau);

}  // namespace detail

}  // namespace helikon
