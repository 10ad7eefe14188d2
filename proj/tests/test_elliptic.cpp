#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "helikon/elliptic.hpp"
#include "helikon/error.hpp"

using namespace helikon;

namespace {

// Direct long-double summation over n in [-200, 200], no argument reduction.
cplx reference_theta(cplx z, cplx tau) {
    using L = std::complex<long double>;
    const long double p = 3.141592653589793238462643383279502884L;
    const L i(0.0L, 1.0L);
    const L zz(z.real(), z.imag()), tt(tau.real(), tau.imag());
    L sum = 0;
    for (int n = -200; n <= 200; ++n) {
        const long double h = n + 0.5L;
        sum += std::exp(p * i * h * h * tt + 2.0L * p * i * h * (zz + 0.5L));
    }
    return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace

TEST_CASE("lattice validation") {
    CHECK_THROWS_AS(Lattice(cplx(0.3, 0.0)), DomainError);
    CHECK_THROWS_AS(Lattice(cplx(0.3, -1.0)), DomainError);
    CHECK(Lattice(std::polar(1.0, 1.7)).rhombic());
    CHECK_FALSE(Lattice(cplx(0.0, 2.0)).rhombic());
    const Lattice lat(std::polar(1.0, 1.7));
    int m = 0, n = 0;
    const cplx z(3.3, -2.1);
    const cplx z0 = lat.reduce(z, m, n);
    CHECK(std::abs(z0 + double(m) + double(n) * lat.tau() - z) < 1e-14);
}

TEST_CASE("theta vanishes at the origin") {
    CHECK(std::abs(theta(0.0, Lattice(I))) < 1e-14);
    CHECK(std::abs(theta(1.0 + I, Lattice(I))) < 1e-13);
}

TEST_CASE("theta matches direct long double summation") {
    CHECK(rel(theta(cplx(0.3, 0.2), Lattice(I)), reference_theta(cplx(0.3, 0.2), I)) < 1e-13);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-0.7, 0.7), v(0.5, 2.0);
    double worst = 0.0;
    for (int s = 0; s < 200; ++s) {
        const cplx tau(u(rng), v(rng));
        const cplx z(u(rng), u(rng));
        worst = std::max(worst, rel(theta(z, Lattice(tau)), reference_theta(z, tau)));
    }
    CHECK(worst < 1e-13);
}

TEST_CASE("theta identities at random points") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-0.5, 0.5), v(0.5, 2.0);
    double per = 0.0, quasi = 0.0, odd = 0.0;
    for (int s = 0; s < 1000; ++s) {
        const Lattice lat(cplx(u(rng), v(rng)));
        const cplx z = u(rng) + u(rng) * lat.tau();
        per = std::max(per, rel(reference_theta(z + 1.0, lat.tau()), -theta(z, lat)));
        quasi = std::max(quasi, rel(reference_theta(z + lat.tau(), lat.tau()), theta_quasi_factor(z, lat) * theta(z, lat)));
        odd = std::max(odd, rel(theta(-z, lat), -theta(z, lat)));
    }
    CHECK(per < 1e-12);
    CHECK(quasi < 1e-12);
    CHECK(odd < 1e-12);
}

TEST_CASE("quasi factor values") {
    const Lattice sq(I);
    CHECK(rel(theta_quasi_factor(0.0, sq), cplx(-std::exp(pi))) < 1e-14);
    const Lattice rh(std::polar(1.0, 1.7));
    CHECK(std::abs(theta_quasi_factor(-(rh.tau() + 1.0) / 2.0, rh) - 1.0) < 1e-15);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    double worst = 0.0;
    for (int s = 0; s < 100; ++s) {
        const cplx z = u(rng) + u(rng) * rh.tau();
        worst = std::max(worst, rel(theta(z + rh.tau(), rh), theta_quasi_factor(z, rh) * theta(z, rh)));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("log derivative") {
    const Lattice lat(std::polar(1.0, 1.7));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-0.45, 0.45);
    for (int s = 0; s < 50; ++s) {
        const cplx z = u(rng) + u(rng) * lat.tau();
        if (std::abs(z) < 0.05) continue;
        CHECK(std::abs(log_theta_derivative(-z, lat) + log_theta_derivative(z, lat)) < 1e-10);
        const double h = 1e-5;
        const cplx fd = (std::log(theta(z + h, lat) / theta(z - h, lat))) / (2.0 * h);
        CHECK(std::abs(fd - log_theta_derivative(z, lat)) < 1e-8 * std::max(1.0, std::abs(fd)));
    }
    const cplx small(1e-3, 0.0);
    CHECK(std::abs(log_theta_derivative(small, lat) * small - 1.0) < 0.01);
    CHECK_THROWS_AS(log_theta_derivative(0.0, lat), PoleError);
    CHECK_THROWS_AS(log_theta_derivative(1.0 + lat.tau(), lat), PoleError);
}

TEST_CASE("theta product") {
    const Lattice lat(std::polar(1.0, 1.9));
    CHECK(theta_product(cplx(0.2, 0.1), {}, lat) == cplx(1.0));
    const std::vector<ThetaFactor> f{{cplx(0.1, 0.2), 2.0}, {cplx(-0.3, 0.1), -1.0}, {cplx(0.25, -0.2), -1.0}};
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int s = 0; s < 50; ++s) {
        const cplx z = u(rng) + u(rng) * lat.tau();
        const cplx direct = std::pow(theta(z - f[0].shift, lat), 2) / (theta(z - f[1].shift, lat) * theta(z - f[2].shift, lat));
        CHECK(rel(theta_product(z, f, lat), direct) < 1e-12);
        CHECK(rel(theta_product(z + 1.0, f, lat), theta_product(z, f, lat)) < 1e-12);
    }
    const std::vector<ThetaFactor> bad{{0.1, 1.0}, {0.2, -2.0}};
    CHECK_THROWS_AS(theta_product(0.3, bad, lat), ContractError);
    CHECK_THROWS_AS(theta_product(f[1].shift, f, lat), PoleError);
    CHECK(theta_product(f[0].shift, f, lat) == cplx(0.0));
}

TEST_CASE("no zeros away from the lattice") {
    const Lattice lat(std::polar(1.0, 1.7));
    double smallest = 1e300;
    for (int i = 0; i < 100; ++i)
        for (int j = 0; j < 100; ++j) {
            const cplx z = (i + 0.5) / 100.0 + (j + 0.5) / 100.0 * lat.tau();
            bool near = false;
            for (const cplx c : {cplx(0.0), cplx(1.0), lat.tau(), 1.0 + lat.tau()}) near = near || std::abs(z - c) < 0.05;
            if (!near) smallest = std::min(smallest, std::abs(theta(z, lat)));
        }
    CHECK(smallest > 1e-2);
}

TEST_CASE("series truncation is converged") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    const cplx tau = std::polar(1.0, 1.3);
    for (int s = 0; s < 100; ++s) {
        const cplx z = u(rng) + u(rng) * tau;
        CHECK(rel(detail::theta_series_pair(z, tau).value, reference_theta(z, tau)) < 1e-14 * 20);
    }
}
