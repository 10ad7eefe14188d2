#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "helikon/quadrature.hpp"

namespace helikon::cone {

using cplx = std::complex<double>;

/// Marker for the exponential limit metric |e^w dw|.
inline constexpr double infinite_k = std::numeric_limits<double>::infinity();

enum class ConeKind { finite, exponential_simple };

/// A finite cone point of angle 2 pi k (model |w^(k-1) dw|), or a simple exponential point.
struct ConePoint {
    std::optional<cplx> position;  // nullopt: the point at infinity
    ConeKind kind = ConeKind::finite;
    double k = 1.0;                // ignored for exponential points

    static ConePoint finite(double k, std::optional<cplx> at = std::nullopt);
    static ConePoint exponential(std::optional<cplx> at = std::nullopt);
};

struct ConeMetricDesc {
    int genus = 0;
    std::vector<ConePoint> points;
};

/// Sum of k over finite points minus the value required by Gauss-Bonnet; zero iff admissible.
/// All finite: sum k - (n + 2(g - 1)). With l exponential points and r finite ones:
/// sum k - (-(2 - 2g) + r + 2l).
double gauss_bonnet_defect(const ConeMetricDesc& desc);

// Ledgers for the standard examples.
ConeMetricDesc sphere_dz();              // |dz| on the sphere: k = -1 at infinity
ConeMetricDesc exponential_plane();      // |e^w dw|: one simple exponential point at infinity
ConeMetricDesc slit_torus();             // the k = 1 slit model: vertex k = 3, double pole k = -1
/// Quotient torus of H_k: vertex k = 3, vertical point k, end -k.
ConeMetricDesc quotient_torus(double k);

/// Density of |(1 + w/k)^(k-1) dw|, or |e^w dw| for k = infinite_k.
double sk_line_element(double k, cplx w);

/// Max |sk_line_element(k, w) - sk_line_element(inf, w)| on a polar grid over |w| <= radius.
double sk_sup_error(double k, double radius, int radial = 200, int angular = 256);

struct MuBetaLengths {
    double f = 0.0;  // length of (-inf, -2]
    double g = 0.0;  // length of [-2, -1]
};

/// Lengths under |(z+1)/(z-1) (z+2)/(z-2) e^(beta z) dz| along the negative real axis.
MuBetaLengths mu_beta_lengths(double beta);
double mu_beta_density(double beta, double x);

double annulus_modulus(double r1, double r2);
/// Extremal length of the family of core curves of the round annulus r1 < |z| < r2.
double annulus_core_extremal_length(double r1, double r2);

/// F(end) - F(start) for F = integral of omega(z) dz along the polyline.
cplx develop_segment(const std::function<cplx(cplx)>& omega, std::span<const cplx> path,
                     const QuadratureOptions& opt = {});

}  // namespace helikon::cone
