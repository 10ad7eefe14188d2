#pragma once

#include <array>
#include <vector>

#include "helikon/elliptic.hpp"

namespace helikon {

/// C / {1, tau} with tau = e^{i theta}. The vertical diagonal runs 0 -> 1+tau,
/// the horizontal diagonal 1 -> tau; both pass through the center.
struct RhombicTorus {
    double theta_angle;
    cplx tau;
    cplx center;
    Lattice lattice;

    /// (1-tau)/2: the half horizontal diagonal, center -> vertex 1.
    cplx half_horizontal() const noexcept { return (1.0 - tau) / 2.0; }
    /// Unit vector along the vertical diagonal pointing at the top vertex 0.
    cplx up() const noexcept { return -(1.0 + tau) / std::abs(1.0 + tau); }

    /// z = x + y tau.
    std::array<double, 2> lattice_coords(cplx z) const noexcept;
    cplx from_lattice(double x, double y) const noexcept { return x + y * tau; }
};

RhombicTorus make_torus(double theta_angle);

/// Ends E1, E2 and vertical points V1, V2 on the horizontal diagonal, a = k(1-b).
struct MarkedPoints {
    double k;
    double b;
    double a;
    cplx E1;
    cplx E2;
    cplx V1;
    cplx V2;
    bool degenerate;

    std::array<cplx, 4> all() const noexcept { return {E1, E2, V1, V2}; }
};

MarkedPoints place_points(const RhombicTorus& torus, double k, double b);

enum class Generator { one, tau };

struct Homology {
    int m = 0;
    int n = 0;
};

struct DomainPath {
    std::vector<cplx> vertices;
    double clearance = 0.0;
    bool closed = false;
    Homology homology;
};

/// 0.02 times the smallest pairwise distance between marked points (with translates).
double default_clearance(const RhombicTorus& torus, const MarkedPoints& pts);

/// Distance from z to the nearest lattice translate of p.
double torus_distance(const RhombicTorus& torus, cplx z, cplx p);

/// Smallest distance between the path and any translate of a marked point.
double path_clearance(const RhombicTorus& torus, const MarkedPoints& pts, const DomainPath& path);

/// True if some segment meets a translate of the cut {O + s(1-tau)/2 : s in [b, 2-b]},
/// which runs from E2 through the vertex 1 to E1 + 1 - tau.
bool crosses_cut(const RhombicTorus& torus, const MarkedPoints& pts, const DomainPath& path);

/// Closed representative of [1] or [tau] that avoids the marked points and the cut.
/// The anchor lies on the vertical diagonal, so the branch reached by walking
/// straight from the center is the reference branch.
DomainPath generator_cycle(const RhombicTorus& torus, const MarkedPoints& pts, Generator which,
                           double clearance);

struct SymmetryImages {
    cplx rho;
    cplx mu_v;
    cplx mu_h;
};

SymmetryImages symmetry_images(const RhombicTorus& torus, cplx z);

namespace detail {
double segment_point_distance(cplx a, cplx b, cplx p) noexcept;
bool segments_intersect(cplx p1, cplx p2, cplx q1, cplx q2) noexcept;
}  // namespace detail

}  // namespace helikon
