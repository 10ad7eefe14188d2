#pragma once

#include <optional>
#include <vector>

#include "helikon/mesh.hpp"
#include "helikon/periods.hpp"

namespace helikon {

struct ImmerseOptions {
    /// Grid divisions per rhombus edge; must be even so the center is a node.
    int resolution = 64;
    /// Radius of the disks removed around E1 and E2.
    double end_cutoff = 0.05;
    /// Skip the check that the period residuals vanish.
    bool allow_unsolved = false;
    double solved_tol = 1e-6;
    /// Spanning-tree variant; different values give different trees.
    int tree_variant = 0;
    QuadratureOptions quad{};
    unsigned threads = 1;
};

/// Fundamental-domain mesh of X = Re int Phi from the center, plus diagnostics.
struct Immersion {
    Mesh mesh;
    /// Largest |X| difference between identified boundary nodes before welding.
    double seam_mismatch = 0.0;
    /// Mesh vertex index per grid node (i, j) and side (0 plain/cut side A, 1 cut side B); -1 if removed.
    std::vector<std::array<std::int64_t, 2>> node_vertex;
    int resolution = 0;
};

/// Integrates Phi along a spanning tree of the grid over the rhombus minus
/// the end disks. The grid is split along anti-diagonals so the horizontal
/// diagonal is made of edges; nodes on the cut are doubled, one copy per side.
/// Throws ContractError on unsolved data unless allowed.
Immersion immerse(const WeierstrassData& data, const ImmerseOptions& opt = {});

/// Max vertex distance between immersions built from two different spanning trees.
double spanning_tree_discrepancy(const WeierstrassData& data, const ImmerseOptions& opt = {});

/// Rotation by angle about x3 followed by translation along x3.
struct ScrewMotion {
    double angle;
    double translation;

    Vec3 apply(const Vec3& x) const noexcept;
    ScrewMotion inverse() const noexcept { return {-angle, -translation}; }
};

/// The screw motion taking the cut side A of the immersion to side B:
/// translation |int_beta dh| and rotation by 2 pi k in the sense fixed by the data.
/// Throws ConsistencyError if the residue translation differs from 2 pi k.
ScrewMotion screw_motion(const WeierstrassData& data);

/// Concatenates sigma^j(mesh), j = 0..copies-1. Side-A cut vertices of copy j+1 are
/// welded to the side-B cut vertices of copy j they land on (within weld_tol times
/// the diameter); other coincidences are left alone.
Mesh apply_screw(const Mesh& mesh, const ScrewMotion& sigma, int copies, double weld_tol = 1e-6);

/// Largest distance between side-B cut vertices and sigma(side-A) cut vertices.
double screw_seam_mismatch(const Immersion& imm, const ScrewMotion& sigma);

struct GeometryReport {
    double diameter = 0.0;
    /// Max |x1|, |x2| over the image of the vertical diagonal.
    double axis_max_xy = 0.0;
    /// x3 spread on the inner part (between the ends) and the cut part of the horizontal diagonal.
    double inner_x3_spread = 0.0;
    double outer_x3_spread = 0.0;
    /// Angle between the projected inner and outer lines, in [0, pi).
    double line_angle = 0.0;
    /// Distance of line_angle from +-pi k modulo pi.
    double line_angle_error = 0.0;
    /// Max |X(rho p) - R X(p)| with R the half turn about the normal line at X(center).
    double rho_symmetry = 0.0;
    Vec3 normal_at_center{};
};

GeometryReport verify_geometry(const Immersion& imm, const WeierstrassData& data);

/// Normalized deviation of the image of the circle of radius ring_radius about E1
/// from the best aligned helicoid: max distance to the ruling lines divided by
/// the ring's horizontal radius.
double asymptotic_compare(const WeierstrassData& data, double ring_radius, int samples = 256,
                          const QuadratureOptions& opt = {});
double asymptotic_compare(const HelicoidData& helicoid, double ring_radius, int samples = 256);

namespace detail {
/// Fit of ring points to a helicoid whose rulings turn at unit rate in x3.
double helicoid_fit_deviation(const std::vector<Vec3>& ring);
}  // namespace detail

/// Numerically integrated helicoid over the annulus r_in <= |z| <= r_out,
/// |arg z| <= pi - 1e-9, from the base point z = 1.
struct HelicoidMesh {
    Mesh mesh;
    /// Max |X_numeric - X_closed| over the vertices.
    double max_closed_form_error = 0.0;
};

HelicoidMesh helicoid_mesh(const HelicoidData& helicoid, int radial, int angular, double r_in = 0.5,
                           double r_out = 2.0, const QuadratureOptions& opt = {});

}  // namespace helikon
