#include <doctest.h>

#include <cmath>
#include <vector>

#include "helikon/conemetric.hpp"
#include "helikon/elliptic.hpp"
#include "helikon/error.hpp"

using namespace helikon;
using namespace helikon::cone;

TEST_CASE("Gauss-Bonnet ledgers") {
    CHECK(gauss_bonnet_defect(sphere_dz()) == 0.0);
    CHECK(gauss_bonnet_defect(slit_torus()) == 0.0);
    CHECK(gauss_bonnet_defect(exponential_plane()) == 0.0);
    for (const double k : {0.75, 1.0, 2.0, 2.5, 16.0}) CHECK(gauss_bonnet_defect(quotient_torus(k)) == 0.0);
    // The literal list {3, k, -(k+1)} misses by one for every k.
    for (const double k : {1.0, 2.5}) {
        const ConeMetricDesc literal{1, {ConePoint::finite(3.0), ConePoint::finite(k), ConePoint::finite(-(k + 1.0))}};
        CHECK(gauss_bonnet_defect(literal) == -1.0);
    }
    // Unbalanced: a single cone point of angle 4 pi on the sphere.
    CHECK(gauss_bonnet_defect({0, {ConePoint::finite(2.0)}}) == 3.0);
    CHECK_THROWS_AS(ConePoint::finite(0.0), DomainError);
}

TEST_CASE("S_k line element") {
    for (const double k : {1.0, 3.0, 1e6}) CHECK(sk_line_element(k, 0.0) == 1.0);
    CHECK(std::abs(sk_line_element(1e6, 1.0) - std::exp(1.0)) < 1e-5);
    CHECK(sk_line_element(infinite_k, cplx(0.5, 2.0)) == doctest::Approx(std::exp(0.5)));
    CHECK_THROWS_AS(sk_line_element(3.0, -3.0), DomainError);
    // Halving of the sup error per doubling of k.
    double prev = sk_sup_error(10.0, 2.0);
    for (const double k : {20.0, 40.0, 80.0, 160.0}) {
        const double e = sk_sup_error(k, 2.0);
        CHECK(e < prev);
        CHECK(prev / e == doctest::Approx(2.0).epsilon(0.15));
        prev = e;
    }
}

TEST_CASE("mu_beta lengths") {
    CHECK_THROWS_AS(mu_beta_lengths(0.0), DomainError);
    CHECK_THROWS_AS(mu_beta_lengths(-1.0), DomainError);
    CHECK(mu_beta_lengths(1.0).g <= (std::exp(-1.0) - std::exp(-2.0)));
    // Reference values from an independent arbitrary-precision quadrature.
    CHECK(mu_beta_lengths(1.0).f == doctest::Approx(0.0130401828635711).epsilon(1e-10));
    CHECK(mu_beta_lengths(1.0).g == doctest::Approx(0.00459116259456790).epsilon(1e-10));
    CHECK(mu_beta_lengths(0.1).f == doctest::Approx(3.89820433694081).epsilon(1e-10));
    CHECK(mu_beta_lengths(0.01).f == doctest::Approx(83.1278717982890).epsilon(1e-10));
    // Bound g(beta) <= (e^-beta - e^-2beta)/beta on a sample of 50 betas.
    for (int i = 1; i <= 50; ++i) {
        const double beta = 5.0 * i / 50.0;
        CHECK(mu_beta_lengths(beta).g <= (std::exp(-beta) - std::exp(-2.0 * beta)) / beta);
    }
    // f grows without bound as beta -> 0 while g stays bounded.
    double prev = 0.0;
    for (const double beta : {1.0, 0.1, 0.01, 0.001}) {
        const double f = mu_beta_lengths(beta).f;
        CHECK(f > prev);
        CHECK(f < std::exp(-2.0 * beta) / beta);
        prev = f;
    }
    CHECK(mu_beta_lengths(0.001).f > 100.0);
    // Non-homothety witness.
    const auto one = mu_beta_lengths(1.0), tenth = mu_beta_lengths(0.1);
    CHECK(std::abs(tenth.f / one.f - tenth.g / one.g) > 1.0);
}

TEST_CASE("annulus modulus and extremal length") {
    CHECK(annulus_modulus(1.0, std::exp(1.0)) == doctest::Approx(1.0));
    CHECK(annulus_modulus(1.0, std::exp(2.0)) == doctest::Approx(2.0));
    CHECK(annulus_core_extremal_length(2.0, 2.0 * std::exp(4.0)) == doctest::Approx(0.25));
    CHECK_THROWS_AS(annulus_modulus(2.0, 1.0), DomainError);
    CHECK_THROWS_AS(annulus_modulus(0.0, 1.0), DomainError);
}

TEST_CASE("developing map") {
    const std::vector<cplx> seg{cplx(0.2, 0.1), cplx(1.5, -0.7)};
    CHECK(std::abs(develop_segment([](cplx) { return cplx(1.0); }, seg) - (seg[1] - seg[0])) < 1e-14);
    for (const double k : {2.0, 3.0}) {
        const double r = 1.7;
        const std::vector<cplx> ray{cplx(1.0), cplx(r)};
        const auto f = develop_segment([k](cplx z) { return std::pow(z, k - 1.0); }, ray);
        CHECK(std::abs(f - (std::pow(r, k) - 1.0) / k) < 1e-12);
    }
    // Helicoid quotient g dh = k z^{k-1} dz develops the unit circle to a closed curve.
    std::vector<cplx> circle;
    for (int j = 0; j <= 200; ++j) circle.push_back(std::polar(1.0, 2.0 * pi * j / 200.0));
    CHECK(std::abs(develop_segment([](cplx z) { return 3.0 * z * z; }, circle)) < 1e-12);
}
