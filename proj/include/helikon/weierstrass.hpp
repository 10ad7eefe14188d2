#pragma once

#include <array>
#include <utility>
#include <vector>

#include "helikon/torus.hpp"

namespace helikon {

struct FormValues {
    cplx g;
    cplx dh;
    cplx gdh;
    cplx one_over_g_dh;
};

/// Continuous determination of log g along a traversed path.
/// Each theta factor carries its own logarithm so that non-integer powers
/// pick up 2 pi i k exactly when a factor winds.
class BranchState {
public:
    cplx current_point() const noexcept { return z_; }
    cplx accumulated_log_g() const noexcept { return log_g_; }

private:
    friend class WeierstrassData;
    cplx z_{};
    // theta(z - V1), theta(z - V2), theta(z - E1), theta(z - E2)
    std::array<cplx, 4> theta_{};
    std::array<cplx, 4> log_{};
    cplx log_g_{};
};

/// dh = c theta(z-V1) theta(z-V2) / (theta(z-E1) theta(z-E2)) dz,
/// g  = rho e^{i phi} theta(z-V2) theta(z-E2-tau)^k / (theta(z-V1) theta(z-E1)^k).
/// c = s e^{it} is real positive on the upward direction at the center and is
/// scaled so that |2 pi i Res_{E1} dh| = 2 pi k. g(center) = 1.
class WeierstrassData {
public:
    static WeierstrassData build(const RhombicTorus& torus, const MarkedPoints& pts);

    const RhombicTorus& torus() const noexcept { return torus_; }
    const MarkedPoints& points() const noexcept { return pts_; }
    double k() const noexcept { return pts_.k; }
    double phase_t() const noexcept { return phase_t_; }
    double rho_scale() const noexcept { return rho_scale_; }
    double g_phase() const noexcept { return g_phase_; }
    double dh_scale() const noexcept { return dh_scale_; }
    bool degenerate() const noexcept { return pts_.degenerate; }

    /// The two pieces of the cut inside the rhombus: E2 -> 1 and tau -> E1.
    std::array<std::pair<cplx, cplx>, 2> branch_cut() const noexcept;

    /// dz-coefficient of dh; single valued.
    cplx dh(cplx z) const;
    /// dz-coefficient of dg/g; single valued.
    cplx dlog_g(cplx z) const;
    /// Analytic residue of dh at E1 or E2 (end index 1 or 2).
    cplx residue_dh(int end) const;

    BranchState branch_at_center() const;
    /// Continues along the straight segment from the center. Throws
    /// GeometryError if that segment meets the cut.
    BranchState branch_at(cplx z) const;
    /// Continues `state` along the straight segment to z.
    void advance(BranchState& state, cplx z) const;

    /// Branch at every vertex of the path, starting from `start`
    /// (which must sit at the first vertex).
    std::vector<BranchState> continue_g(const DomainPath& path, const BranchState& start) const;
    std::vector<BranchState> continue_g(const DomainPath& path) const;

    /// Advances `state` to z and evaluates. Throws PoleError closer than
    /// `min_distance` to a marked point.
    FormValues eval_forms(cplx z, BranchState& state, double min_distance = 1e-10) const;

    /// |g(z)|, which is single valued.
    double abs_g(cplx z) const;
    /// Induced metric (|g| + 1/|g|)|dh|/2 per unit |dz|.
    double metric_ds(cplx z) const;

    /// Limit value of g at the evaluated state.
    cplx g(const BranchState& state) const { return std::exp(state.log_g_); }

private:
    WeierstrassData(const RhombicTorus& torus, const MarkedPoints& pts) : torus_(torus), pts_(pts) {}

    std::array<cplx, 4> thetas(cplx z) const;
    cplx log_g_from(cplx z, const std::array<cplx, 4>& logs) const;
    void step(BranchState& s, cplx z, int depth) const;

    RhombicTorus torus_;
    MarkedPoints pts_;
    double phase_t_ = 0.0;
    double rho_scale_ = 1.0;
    double g_phase_ = 0.0;
    double dh_scale_ = 1.0;
    cplx dh_coeff_{1.0};
    cplx log_g_offset_{};
};

/// Quadrature walker yielding {g dh, dh/g, dh} along a path.
struct PhiWalker {
    const WeierstrassData* data;
    BranchState state;

    std::array<cplx, 3> at(cplx z) {
        const auto f = data->eval_forms(z, state);
        return {f.gdh, f.one_over_g_dh, f.dh};
    }
};

/// Reference helicoid: g = i z^k, dh = i k dz / z on C \ {0}.
class HelicoidData {
public:
    explicit HelicoidData(double k);

    double k() const noexcept { return k_; }
    /// g for a continuous choice of arg z.
    cplx g(cplx z, double arg_z) const;
    cplx dh(cplx z) const;
    /// Closed form X with 2(x1 + i x2) = -conj(z)^k + z^{-k}, x3 = -k arg z.
    std::array<double, 3> immersion(cplx z, double arg_z) const;

private:
    double k_;
};

/// Walker for the helicoid forms; tracks arg z continuously.
struct HelicoidWalker {
    const HelicoidData* data;
    cplx z;
    double arg;

    std::array<cplx, 3> at(cplx w);
};

}  // namespace helikon
