#include "helikon/weierstrass.hpp"

#include <cmath>

#include "helikon/error.hpp"

namespace helikon {

namespace {

constexpr double max_step_length = 0.05;
constexpr double max_step_phase = pi / 4.0;
constexpr int max_step_depth = 48;

}  // namespace

WeierstrassData WeierstrassData::build(const RhombicTorus& torus, const MarkedPoints& pts) {
    WeierstrassData d(torus, pts);
    const Lattice& lat = torus.lattice;
    const cplx o = torus.center;

    // Phase: dh(O) applied to the upward unit vector is real and positive.
    const auto th = d.thetas(o);
    const cplx raw = th[0] * th[1] / (th[2] * th[3]);
    const cplx along = raw * torus.up();
    d.phase_t_ = -std::arg(along);
    const cplx rot = std::polar(1.0, d.phase_t_);

    // Scale: translation 2 pi k read off the residue at E1.
    if (!pts.degenerate) {
        const cplx res = rot * theta(pts.E1 - pts.V1, lat) * theta(pts.E1 - pts.V2, lat) /
                         (theta_prime(0.0, lat) * theta(pts.E1 - pts.E2, lat));
        if (std::abs(res) > 1e-300) d.dh_scale_ = pts.k / std::abs(res);
    }
    d.dh_coeff_ = d.dh_scale_ * rot;

    // g(O) = 1: record the literal normalization constants, then fix the
    // branch offset so the continued logarithm vanishes at O.
    const double k = pts.k;
    const cplx raw_log_g = std::log(th[1]) + k * std::log(theta(o - pts.E2 - torus.tau, lat)) -
                           std::log(th[0]) - k * std::log(th[2]);
    d.rho_scale_ = std::exp(-raw_log_g.real());
    d.g_phase_ = -raw_log_g.imag();
    std::array<cplx, 4> logs{};
    for (std::size_t i = 0; i < 4; ++i) logs[i] = std::log(th[i]);
    d.log_g_offset_ = 0.0;
    d.log_g_offset_ = d.log_g_from(o, logs);
    return d;
}

std::array<std::pair<cplx, cplx>, 2> WeierstrassData::branch_cut() const noexcept {
    return {std::pair{pts_.E2, cplx{1.0}}, std::pair{torus_.tau, pts_.E1}};
}

std::array<cplx, 4> WeierstrassData::thetas(cplx z) const {
    const Lattice& lat = torus_.lattice;
    return {theta(z - pts_.V1, lat), theta(z - pts_.V2, lat), theta(z - pts_.E1, lat),
            theta(z - pts_.E2, lat)};
}

cplx WeierstrassData::log_g_from(cplx z, const std::array<cplx, 4>& logs) const {
    // theta(w - tau) = -e^{2 pi i w - pi i tau} theta(w); the constant is absorbed in the offset.
    const double k = pts_.k;
    return logs[1] - logs[0] + k * (logs[3] + 2.0 * pi * I * (z - pts_.E2) - logs[2]) - log_g_offset_;
}

cplx WeierstrassData::dh(cplx z) const {
    const auto th = thetas(z);
    if (th[2] == 0.0 || th[3] == 0.0) throw PoleError("dh evaluated at an end");
    return dh_coeff_ * th[0] * th[1] / (th[2] * th[3]);
}

cplx WeierstrassData::dlog_g(cplx z) const {
    const Lattice& lat = torus_.lattice;
    const double k = pts_.k;
    return log_theta_derivative(z - pts_.V2, lat) - log_theta_derivative(z - pts_.V1, lat) +
           k * (log_theta_derivative(z - pts_.E2, lat) + 2.0 * pi * I - log_theta_derivative(z - pts_.E1, lat));
}

cplx WeierstrassData::residue_dh(int end) const {
    const Lattice& lat = torus_.lattice;
    const cplx e = end == 1 ? pts_.E1 : pts_.E2;
    const cplx other = end == 1 ? pts_.E2 : pts_.E1;
    if (pts_.degenerate) return 0.0;
    return dh_coeff_ * theta(e - pts_.V1, lat) * theta(e - pts_.V2, lat) /
           (theta_prime(0.0, lat) * theta(e - other, lat));
}

BranchState WeierstrassData::branch_at_center() const {
    BranchState s;
    s.z_ = torus_.center;
    s.theta_ = thetas(s.z_);
    for (std::size_t i = 0; i < 4; ++i) s.log_[i] = std::log(s.theta_[i]);
    s.log_g_ = log_g_from(s.z_, s.log_);
    return s;
}

BranchState WeierstrassData::branch_at(cplx z) const {
    DomainPath seg{{torus_.center, z}, 0.0, false, {}};
    if (crosses_cut(torus_, pts_, seg)) throw GeometryError("straight path from the center meets the cut");
    BranchState s = branch_at_center();
    advance(s, z);
    return s;
}

void WeierstrassData::advance(BranchState& state, cplx z) const {
    const double len = std::abs(z - state.z_);
    if (len == 0.0) return;
    const int pieces = std::max(1, static_cast<int>(std::ceil(len / max_step_length)));
    const cplx start = state.z_;
    for (int p = 1; p <= pieces; ++p) step(state, start + (z - start) * (static_cast<double>(p) / pieces), 0);
}

void WeierstrassData::step(BranchState& s, cplx z, int depth) const {
    const auto th = thetas(z);
    std::array<cplx, 4> logs{};
    for (std::size_t i = 0; i < 4; ++i) {
        if (th[i] == 0.0) throw PoleError("branch continuation through a marked point");
        const double dphase = std::arg(th[i] / s.theta_[i]);
        if (std::abs(dphase) > max_step_phase) {
            if (depth >= max_step_depth) throw PoleError("branch continuation too close to a marked point");
            step(s, 0.5 * (s.z_ + z), depth + 1);
            step(s, z, depth + 1);
            return;
        }
        logs[i] = cplx(std::log(std::abs(th[i])), s.log_[i].imag() + dphase);
    }
    s.z_ = z;
    s.theta_ = th;
    s.log_ = logs;
    s.log_g_ = log_g_from(z, logs);
}

std::vector<BranchState> WeierstrassData::continue_g(const DomainPath& path, const BranchState& start) const {
    std::vector<BranchState> trace;
    if (path.vertices.empty()) return trace;
    if (std::abs(start.z_ - path.vertices.front()) > 1e-12)
        throw ContractError("branch state must sit at the first path vertex");
    trace.reserve(path.vertices.size());
    BranchState s = start;
    trace.push_back(s);
    for (std::size_t i = 1; i < path.vertices.size(); ++i) {
        advance(s, path.vertices[i]);
        trace.push_back(s);
    }
    return trace;
}

std::vector<BranchState> WeierstrassData::continue_g(const DomainPath& path) const {
    if (path.vertices.empty()) return {};
    return continue_g(path, branch_at(path.vertices.front()));
}

FormValues WeierstrassData::eval_forms(cplx z, BranchState& state, double min_distance) const {
    for (const cplx p : pts_.all())
        if (torus_distance(torus_, z, p) < min_distance) throw PoleError("form evaluated too close to a marked point");
    advance(state, z);
    const auto& th = state.theta_;
    const cplx dh = dh_coeff_ * th[0] * th[1] / (th[2] * th[3]);
    const cplx g = std::exp(state.log_g_);
    return {g, dh, g * dh, dh / g};
}

double WeierstrassData::abs_g(cplx z) const {
    const auto th = thetas(z);
    std::array<cplx, 4> logs{};
    for (std::size_t i = 0; i < 4; ++i) {
        if (th[i] == 0.0) throw PoleError("|g| evaluated at a marked point");
        logs[i] = std::log(th[i]);
    }
    // The real part of log g does not depend on the branch.
    return std::exp(log_g_from(z, logs).real());
}

double WeierstrassData::metric_ds(cplx z) const {
    const double m = abs_g(z);
    return 0.5 * (m + 1.0 / m) * std::abs(dh(z));
}

HelicoidData::HelicoidData(double k) : k_(k) {
    if (!(k > 0.0)) throw DomainError("helicoid needs k > 0");
}

cplx HelicoidData::g(cplx z, double arg_z) const {
    if (z == 0.0) throw PoleError("helicoid g at the origin");
    return I * std::exp(k_ * cplx(std::log(std::abs(z)), arg_z));
}

cplx HelicoidData::dh(cplx z) const {
    if (z == 0.0) throw PoleError("helicoid dh at the origin");
    return I * k_ / z;
}

std::array<double, 3> HelicoidData::immersion(cplx z, double arg_z) const {
    if (z == 0.0) throw PoleError("helicoid immersion at the origin");
    const cplx zk = std::exp(k_ * cplx(std::log(std::abs(z)), arg_z));
    const cplx xi = 0.5 * (-std::conj(zk) + 1.0 / zk);
    return {xi.real(), xi.imag(), -k_ * arg_z};
}

std::array<cplx, 3> HelicoidWalker::at(cplx w) {
    arg += std::arg(w / z);
    z = w;
    const cplx g = data->g(w, arg);
    const cplx dh = data->dh(w);
    return {g * dh, dh / g, dh};
}

}  // namespace helikon
