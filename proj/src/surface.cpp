#include "helikon/surface.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>

#include "helikon/error.hpp"
#include "helikon/parallel.hpp"

namespace helikon {

namespace {

struct GridNode {
    int i;
    int j;
    int side;  // 0: plain node or cut side A (toward the top vertex 0), 1: cut side B
};

Vec3 add_phi(const Vec3& x, const std::array<cplx, 3>& d) {
    // x1 + i x2 = (conj G - F)/2, x3 = Re H
    const cplx xi = 0.5 * (std::conj(d[0]) - d[1]);
    return {x[0] + xi.real(), x[1] + xi.imag(), x[2] + d[2].real()};
}

double dist3(const Vec3& a, const Vec3& b) {
    return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) + (a[2] - b[2]) * (a[2] - b[2]));
}

// Principal direction angle of planar points, in [0, pi).
double line_direction(const std::vector<std::array<double, 2>>& p) {
    double mx = 0.0, my = 0.0;
    for (const auto& q : p) {
        mx += q[0];
        my += q[1];
    }
    mx /= static_cast<double>(p.size());
    my /= static_cast<double>(p.size());
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (const auto& q : p) {
        sxx += (q[0] - mx) * (q[0] - mx);
        syy += (q[1] - my) * (q[1] - my);
        sxy += (q[0] - mx) * (q[1] - my);
    }
    double ang = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
    if (ang < 0.0) ang += pi;
    return ang;
}

// Angular distance between x and the nearest multiple of pi.
double mod_pi_distance(double x) {
    const double r = std::fmod(std::abs(x), pi);
    return std::min(r, pi - r);
}

class Grid {
public:
    Grid(const WeierstrassData& data, const ImmerseOptions& opt) : data_(data), n_(opt.resolution) {
        if (n_ < 8 || n_ % 2 != 0) throw ContractError("resolution must be even and at least 8");
        const auto& t = data.torus();
        const auto& pts = data.points();
        removed_.assign(static_cast<std::size_t>((n_ + 1) * (n_ + 1)), 0);
        for (int i = 0; i <= n_; ++i)
            for (int j = 0; j <= n_; ++j) {
                const cplx z = point(i, j);
                if (torus_distance(t, z, pts.E1) < opt.end_cutoff || torus_distance(t, z, pts.E2) < opt.end_cutoff)
                    removed_[idx(i, j)] = 1;
                if (torus_distance(t, z, pts.V1) < 1e-9 || torus_distance(t, z, pts.V2) < 1e-9)
                    throw GeometryError("grid node falls on a vertical point; change the resolution");
            }
    }

    int n() const { return n_; }
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i * (n_ + 1) + j); }
    cplx point(int i, int j) const {
        return data_.torus().from_lattice(static_cast<double>(i) / n_, static_cast<double>(j) / n_);
    }
    bool removed(int i, int j) const { return removed_[idx(i, j)] != 0; }
    double diag_offset(int i) const { return 2.0 * static_cast<double>(i) / n_ - 1.0; }
    bool on_cut(int i, int j) const {
        if ((i == 0 && j == 0) || (i == n_ && j == n_)) return true;
        return i + j == n_ && std::abs(diag_offset(i)) > data_.points().b;
    }

private:
    const WeierstrassData& data_;
    int n_;
    std::vector<char> removed_;
};

struct Built {
    std::vector<GridNode> nodes;          // one entry per (node, side)
    std::map<std::array<int, 3>, std::uint32_t> lookup;
    std::vector<std::array<std::uint32_t, 3>> faces;
    std::vector<std::vector<std::uint32_t>> adjacency;
};

Built build_graph(const Grid& grid) {
    Built b;
    const int n = grid.n();
    std::vector<std::array<std::array<int, 3>, 3>> tris;
    auto side_of = [&](const std::array<std::array<int, 2>, 3>& tri, int v) {
        const int line = tri[v][0] + tri[v][1];
        int total = 0;
        for (const auto& p : tri) total += p[0] + p[1];
        return 3 * line > total ? 0 : 1;  // centroid below the line: toward vertex 0
    };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const std::array<std::array<std::array<int, 2>, 3>, 2> cell{
                {{{{i, j}, {i + 1, j}, {i, j + 1}}}, {{{i + 1, j}, {i + 1, j + 1}, {i, j + 1}}}}};
            for (const auto& tri : cell) {
                bool gone = false;
                for (const auto& p : tri) gone = gone || grid.removed(p[0], p[1]);
                if (gone) continue;
                std::array<std::array<int, 3>, 3> keyed{};
                for (int v = 0; v < 3; ++v) {
                    const int side = grid.on_cut(tri[v][0], tri[v][1]) ? side_of(tri, v) : 0;
                    keyed[v] = {tri[v][0], tri[v][1], side};
                }
                tris.push_back(keyed);
            }
        }
    for (const auto& t : tris)
        for (const auto& k : t) b.lookup.emplace(k, 0);
    std::uint32_t next = 0;
    for (auto& [k, v] : b.lookup) {
        v = next++;
        b.nodes.push_back({k[0], k[1], k[2]});
    }
    b.adjacency.resize(b.nodes.size());
    for (const auto& t : tris) {
        std::array<std::uint32_t, 3> f{b.lookup.at(t[0]), b.lookup.at(t[1]), b.lookup.at(t[2])};
        b.faces.push_back(f);
        for (int e = 0; e < 3; ++e) {
            const auto& p = t[e];
            const auto& q = t[(e + 1) % 3];
            // Edges lying on the horizontal diagonal pass through V1, V2; keep them out of the tree.
            if (p[0] + p[1] == n && q[0] + q[1] == n) continue;
            b.adjacency[f[e]].push_back(f[(e + 1) % 3]);
            b.adjacency[f[(e + 1) % 3]].push_back(f[e]);
        }
    }
    for (auto& a : b.adjacency) {
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    return b;
}

struct TreeResult {
    std::vector<Vec3> x;
};

TreeResult integrate_tree(const WeierstrassData& data, const Grid& grid, const Built& g, const ImmerseOptions& opt) {
    const std::size_t count = g.nodes.size();
    const auto root_it = g.lookup.find({grid.n() / 2, grid.n() / 2, 0});
    if (root_it == g.lookup.end()) throw GeometryError("the center was removed from the grid");
    const std::uint32_t root = root_it->second;

    // Tree: breadth first (variant 0) or depth first with reversed neighbor order.
    std::vector<std::int64_t> parent(count, -1);
    std::vector<int> depth(count, -1);
    depth[root] = 0;
    if (opt.tree_variant == 0) {
        std::deque<std::uint32_t> queue{root};
        while (!queue.empty()) {
            const auto v = queue.front();
            queue.pop_front();
            for (const auto w : g.adjacency[v])
                if (depth[w] < 0) {
                    depth[w] = depth[v] + 1;
                    parent[w] = v;
                    queue.push_back(w);
                }
        }
    } else {
        std::vector<std::uint32_t> stack{root};
        std::vector<char> seen(count, 0);
        std::vector<std::int64_t> pending(count, -1);
        while (!stack.empty()) {
            const auto v = stack.back();
            stack.pop_back();
            if (seen[v]) continue;
            seen[v] = 1;
            if (v != root) {
                parent[v] = pending[v];
                depth[v] = depth[static_cast<std::size_t>(pending[v])] + 1;
            }
            for (const auto w : g.adjacency[v])
                if (!seen[w]) {
                    pending[w] = v;
                    stack.push_back(w);
                }
        }
    }
    int max_depth = 0;
    for (std::size_t v = 0; v < count; ++v) {
        if (depth[v] < 0) throw GeometryError("grid graph is disconnected");
        max_depth = std::max(max_depth, depth[v]);
    }
    std::vector<std::vector<std::uint32_t>> levels(static_cast<std::size_t>(max_depth) + 1);
    for (std::uint32_t v = 0; v < count; ++v) levels[static_cast<std::size_t>(depth[v])].push_back(v);

    TreeResult out;
    out.x.assign(count, Vec3{0.0, 0.0, 0.0});
    std::vector<std::optional<BranchState>> state(count);
    auto point_of = [&](std::uint32_t v) { return grid.point(g.nodes[v].i, g.nodes[v].j); };
    state[root] = data.branch_at_center();
    for (std::size_t level = 1; level < levels.size(); ++level) {
        const auto& lv = levels[level];
        parallel_for(lv.size(), opt.threads, [&](std::size_t s) {
            const auto v = lv[s];
            const auto p = static_cast<std::uint32_t>(parent[v]);
            PhiWalker w{&data, *state[p]};
            const std::array<cplx, 2> seg{point_of(p), point_of(v)};
            const auto r = integrate_polyline<3>(w, std::span<const cplx>(seg), opt.quad);
            data.advance(w.state, seg[1]);
            out.x[v] = add_phi(out.x[p], r.value);
            state[v] = w.state;
        });
    }
    return out;
}

}  // namespace

Immersion immerse(const WeierstrassData& data, const ImmerseOptions& opt) {
    if (!opt.allow_unsolved) {
        PeriodOptions po;
        po.quad = opt.quad;
        const auto rep = compute_periods(data, po);
        if (std::abs(rep.horiz_residual) > opt.solved_tol || std::abs(rep.vert_residual) > opt.solved_tol)
            throw ContractError("period residuals do not vanish; pass allow_unsolved for exploratory meshes");
    }
    const Grid grid(data, opt);
    const Built g = build_graph(grid);
    const auto tree = integrate_tree(data, grid, g, opt);
    const int n = grid.n();
    const double b = data.points().b;

    // Weld nodes identified by the lattice; keep the first copy.
    std::map<std::array<int, 3>, std::uint32_t> canonical;
    std::vector<std::uint32_t> remap(g.nodes.size());
    Immersion imm;
    imm.resolution = n;
    imm.node_vertex.assign(static_cast<std::size_t>((n + 1) * (n + 1)), {-1, -1});
    for (std::uint32_t v = 0; v < g.nodes.size(); ++v) {
        const auto& nd = g.nodes[v];
        const std::array<int, 3> key{nd.i % n, nd.j % n, nd.side};
        const auto [it, fresh] = canonical.emplace(key, static_cast<std::uint32_t>(imm.mesh.vertices.size()));
        if (fresh) {
            imm.mesh.vertices.push_back(tree.x[v]);
            imm.mesh.domain_uv.push_back(grid.point(nd.i, nd.j));
            imm.mesh.tags.push_back(0);
        } else {
            imm.seam_mismatch = std::max(imm.seam_mismatch, dist3(imm.mesh.vertices[it->second], tree.x[v]));
        }
        remap[v] = it->second;
        imm.node_vertex[grid.idx(nd.i, nd.j)][static_cast<std::size_t>(nd.side)] = it->second;
        std::uint8_t t = 0;
        if (nd.i == nd.j) t |= tag::axis;
        if (nd.i + nd.j == n && std::abs(grid.diag_offset(nd.i)) < b) t |= tag::horizontal_inner;
        if (grid.on_cut(nd.i, nd.j)) t |= nd.side == 0 ? tag::cut_a : tag::cut_b;
        if (nd.i == 0 || nd.j == 0 || nd.i == n || nd.j == n) t |= tag::boundary;
        for (int di = -1; di <= 1; ++di)
            for (int dj = -1; dj <= 1; ++dj) {
                const int ii = nd.i + di;
                const int jj = nd.j + dj;
                if (ii >= 0 && jj >= 0 && ii <= n && jj <= n && grid.removed(ii, jj)) t |= tag::end;
            }
        imm.mesh.tags[it->second] |= t;
    }
    for (const auto& f : g.faces) imm.mesh.faces.push_back({remap[f[0]], remap[f[1]], remap[f[2]]});
    return imm;
}

double spanning_tree_discrepancy(const WeierstrassData& data, const ImmerseOptions& opt) {
    ImmerseOptions a = opt;
    a.allow_unsolved = true;
    a.tree_variant = 0;
    ImmerseOptions b = a;
    b.tree_variant = 1;
    const Grid grid(data, a);
    const Built g = build_graph(grid);
    const auto xa = integrate_tree(data, grid, g, a);
    const auto xb = integrate_tree(data, grid, g, b);
    double worst = 0.0;
    for (std::size_t v = 0; v < xa.x.size(); ++v) worst = std::max(worst, dist3(xa.x[v], xb.x[v]));
    return worst;
}

Vec3 ScrewMotion::apply(const Vec3& x) const noexcept {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {c * x[0] - s * x[1], s * x[0] + c * x[1], x[2] + translation};
}

ScrewMotion screw_motion(const WeierstrassData& data) {
    const double k = data.k();
    const double translation = std::abs(end_residue(data, 1));
    if (std::abs(translation - 2.0 * pi * k) > 1e-6 * 2.0 * pi * k)
        throw ConsistencyError("residue translation differs from 2 pi k");
    // Crossing the cut from side A to side B: X_B = sigma(X_A).
    return {2.0 * pi * k, translation};
}

Mesh apply_screw(const Mesh& mesh, const ScrewMotion& sigma, int copies, double weld_tol) {
    if (copies < 1) throw ContractError("copies must be at least 1");
    const auto nv = mesh.vertices.size();
    auto has = [&](std::size_t v, std::uint8_t t) { return v < mesh.tags.size() && (mesh.tags[v] & t); };
    std::vector<std::size_t> side_a, side_b;
    for (std::size_t v = 0; v < nv; ++v) {
        if (has(v, tag::cut_a)) side_a.push_back(v);
        if (has(v, tag::cut_b)) side_b.push_back(v);
    }
    const double tol = weld_tol * std::max(1.0, mesh.diameter());

    Mesh out;
    std::vector<std::uint32_t> previous(nv);
    ScrewMotion power{0.0, 0.0};
    for (int c = 0; c < copies; ++c) {
        std::vector<std::uint32_t> index(nv, std::numeric_limits<std::uint32_t>::max());
        std::vector<Vec3> moved(nv);
        for (std::size_t v = 0; v < nv; ++v) moved[v] = power.apply(mesh.vertices[v]);
        if (c > 0)
            for (const auto a : side_a)
                for (const auto b : side_b)
                    if (dist3(moved[a], out.vertices[previous[b]]) < tol) {
                        index[a] = previous[b];
                        break;
                    }
        for (std::size_t v = 0; v < nv; ++v) {
            if (index[v] != std::numeric_limits<std::uint32_t>::max()) continue;
            index[v] = static_cast<std::uint32_t>(out.vertices.size());
            out.vertices.push_back(moved[v]);
            out.domain_uv.push_back(v < mesh.domain_uv.size() ? mesh.domain_uv[v] : cplx{});
            out.tags.push_back(v < mesh.tags.size() ? mesh.tags[v] : 0);
        }
        for (const auto& f : mesh.faces) out.faces.push_back({index[f[0]], index[f[1]], index[f[2]]});
        previous = index;
        power = {power.angle + sigma.angle, power.translation + sigma.translation};
    }
    return out;
}

double screw_seam_mismatch(const Immersion& imm, const ScrewMotion& sigma) {
    double worst = 0.0;
    for (const auto& nv : imm.node_vertex)
        if (nv[0] >= 0 && nv[1] >= 0 && nv[0] != nv[1]) {
            const auto& xa = imm.mesh.vertices[static_cast<std::size_t>(nv[0])];
            const auto& xb = imm.mesh.vertices[static_cast<std::size_t>(nv[1])];
            worst = std::max(worst, dist3(xb, sigma.apply(xa)));
        }
    return worst;
}

GeometryReport verify_geometry(const Immersion& imm, const WeierstrassData& data) {
    GeometryReport rep;
    const auto& mesh = imm.mesh;
    const int n = imm.resolution;
    rep.diameter = mesh.diameter();
    std::vector<std::array<double, 2>> inner, outer;
    double in_lo = std::numeric_limits<double>::infinity(), in_hi = -in_lo;
    double out_lo = in_lo, out_hi = -in_lo;
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
        const auto& x = mesh.vertices[v];
        const auto t = mesh.tags[v];
        if (t & tag::axis) rep.axis_max_xy = std::max({rep.axis_max_xy, std::abs(x[0]), std::abs(x[1])});
        if (t & tag::horizontal_inner) {
            inner.push_back({x[0], x[1]});
            in_lo = std::min(in_lo, x[2]);
            in_hi = std::max(in_hi, x[2]);
        }
        if (t & tag::cut_a) {
            outer.push_back({x[0], x[1]});
            out_lo = std::min(out_lo, x[2]);
            out_hi = std::max(out_hi, x[2]);
        }
    }
    if (inner.size() >= 2) rep.inner_x3_spread = in_hi - in_lo;
    if (outer.size() >= 2) rep.outer_x3_spread = out_hi - out_lo;
    if (inner.size() >= 2 && outer.size() >= 2) {
        rep.line_angle = std::fmod(line_direction(outer) - line_direction(inner) + pi, pi);
        // The lines meet at +-pi k; orientation of the two lines is not fixed.
        rep.line_angle_error = std::min(mod_pi_distance(rep.line_angle - pi * data.k()),
                                        mod_pi_distance(rep.line_angle + pi * data.k()));
    }

    // Half turn about the x1 axis (the normal line at X(center) = 0).
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j)
            for (int side = 0; side < 2; ++side) {
                const auto v = imm.node_vertex[static_cast<std::size_t>(i * (n + 1) + j)][static_cast<std::size_t>(side)];
                const auto& partner = imm.node_vertex[static_cast<std::size_t>((n - i) * (n + 1) + (n - j))];
                // rho swaps the two sides of the cut.
                const bool cut = partner[1] >= 0 || imm.node_vertex[static_cast<std::size_t>(i * (n + 1) + j)][1] >= 0 ||
                                 (i == 0 && j == 0) || (i == n && j == n);
                const auto w = cut ? partner[static_cast<std::size_t>(1 - side)] : partner[static_cast<std::size_t>(side)];
                if (v < 0 || w < 0) continue;
                const auto& x = mesh.vertices[static_cast<std::size_t>(v)];
                const auto& y = mesh.vertices[static_cast<std::size_t>(w)];
                rep.rho_symmetry = std::max(rep.rho_symmetry, dist3(y, Vec3{x[0], -x[1], -x[2]}));
            }

    // Normal at the center from the faces around it.
    const auto c = imm.node_vertex[static_cast<std::size_t>((n / 2) * (n + 1) + n / 2)][0];
    Vec3 acc{0.0, 0.0, 0.0};
    for (const auto& f : mesh.faces) {
        if (static_cast<std::int64_t>(f[0]) != c && static_cast<std::int64_t>(f[1]) != c && static_cast<std::int64_t>(f[2]) != c)
            continue;
        const auto& p0 = mesh.vertices[f[0]];
        const auto& p1 = mesh.vertices[f[1]];
        const auto& p2 = mesh.vertices[f[2]];
        const Vec3 e1{p1[0] - p0[0], p1[1] - p0[1], p1[2] - p0[2]};
        const Vec3 e2{p2[0] - p0[0], p2[1] - p0[1], p2[2] - p0[2]};
        const Vec3 nn{e1[1] * e2[2] - e1[2] * e2[1], e1[2] * e2[0] - e1[0] * e2[2], e1[0] * e2[1] - e1[1] * e2[0]};
        const double len = std::sqrt(nn[0] * nn[0] + nn[1] * nn[1] + nn[2] * nn[2]);
        if (len > 0.0)
            for (int q = 0; q < 3; ++q) acc[q] += nn[q] / len;
    }
    const double len = std::sqrt(acc[0] * acc[0] + acc[1] * acc[1] + acc[2] * acc[2]);
    if (len > 0.0) rep.normal_at_center = {acc[0] / len, acc[1] / len, acc[2] / len};
    return rep;
}

namespace detail {

double helicoid_fit_deviation(const std::vector<Vec3>& ring) {
    if (ring.size() < 4) throw ContractError("helicoid fit needs at least four ring points");
    auto residuals = [&](double sigma, double alpha, cplx& center) {
        // Least squares for the axis position with the ruling angle fixed.
        double a11 = 0, a12 = 0, a22 = 0, r1 = 0, r2 = 0;
        for (const auto& x : ring) {
            const double psi = sigma * x[2] + alpha;
            const double s = std::sin(psi), c = std::cos(psi);
            // residual = Im(xi e^{-i psi}) - (c_y cos psi - c_x sin psi)
            const double y = x[1] * c - x[0] * s;
            const double gx = -s, gy = c;
            a11 += gx * gx;
            a12 += gx * gy;
            a22 += gy * gy;
            r1 += gx * y;
            r2 += gy * y;
        }
        const double det = a11 * a22 - a12 * a12;
        center = std::abs(det) > 1e-300 ? cplx((a22 * r1 - a12 * r2) / det, (a11 * r2 - a12 * r1) / det) : cplx{};
        double worst = 0.0, ss = 0.0;
        for (const auto& x : ring) {
            const double psi = sigma * x[2] + alpha;
            const cplx xi(x[0] - center.real(), x[1] - center.imag());
            const double d = (xi * std::polar(1.0, -psi)).imag();
            worst = std::max(worst, std::abs(d));
            ss += d * d;
        }
        return std::pair{ss, worst};
    };
    double best = std::numeric_limits<double>::infinity();
    for (const double sigma : {1.0, -1.0}) {
        constexpr int scan = 720;
        double best_alpha = 0.0;
        double best_ss = std::numeric_limits<double>::infinity();
        cplx center;
        for (int s = 0; s < scan; ++s) {
            const double alpha = pi * s / scan;
            const double ss = residuals(sigma, alpha, center).first;
            if (ss < best_ss) {
                best_ss = ss;
                best_alpha = alpha;
            }
        }
        // Golden-section refinement around the best scan cell.
        double lo = best_alpha - pi / scan, hi = best_alpha + pi / scan;
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        for (int it = 0; it < 80; ++it) {
            const double m1 = hi - gr * (hi - lo), m2 = lo + gr * (hi - lo);
            if (residuals(sigma, m1, center).first < residuals(sigma, m2, center).first)
                hi = m2;
            else
                lo = m1;
        }
        const auto [ss, worst] = residuals(sigma, 0.5 * (lo + hi), center);
        double radius = 0.0;
        for (const auto& x : ring) radius = std::max(radius, std::abs(cplx(x[0], x[1]) - center));
        if (radius > 0.0) best = std::min(best, worst / radius);
    }
    return best;
}

}  // namespace detail

double asymptotic_compare(const WeierstrassData& data, double ring_radius, int samples, const QuadratureOptions& opt) {
    const auto& t = data.torus();
    const auto& pts = data.points();
    double nearest = std::numeric_limits<double>::infinity();
    for (const cplx p : {pts.E2, pts.V1, pts.V2}) nearest = std::min(nearest, torus_distance(t, pts.E1, p));
    if (!(ring_radius > 0.0) || ring_radius >= 0.5 * nearest)
        throw GeometryError("ring radius must be positive and below half the distance to other marked points");
    if (samples < 8) throw ContractError("asymptotic_compare needs at least 8 samples");

    const cplx e = pts.E1;
    const cplx normal = t.up();
    const double phi_cut = std::arg(-t.half_horizontal());
    double phi_start = std::arg(normal);
    while (phi_start < phi_cut) phi_start += 2.0 * pi;
    while (phi_start > phi_cut + 2.0 * pi) phi_start -= 2.0 * pi;
    const double margin = 1e-3;

    // Reach the ring point above E1 from the center, parallel to the diagonal.
    PhiWalker w{&data, data.branch_at_center()};
    const std::array<cplx, 4> lead{t.center, t.center + ring_radius * normal, e + ring_radius * normal,
                                   e + ring_radius * std::polar(1.0, phi_start)};
    const auto r0 = integrate_polyline<3>(w, std::span<const cplx>(lead), opt);
    data.advance(w.state, lead.back());
    const Vec3 x0 = add_phi({0.0, 0.0, 0.0}, r0.value);

    std::vector<double> phis(static_cast<std::size_t>(samples));
    for (int s = 0; s < samples; ++s)
        phis[static_cast<std::size_t>(s)] = phi_cut + margin + (2.0 * pi - 2.0 * margin) * s / (samples - 1);
    std::vector<Vec3> ring(phis.size());
    auto walk = [&](int from, int to, int dir) {
        PhiWalker ww = w;
        Vec3 x = x0;
        double phi = phi_start;
        for (int s = from; s != to; s += dir) {
            const double target = phis[static_cast<std::size_t>(s)];
            const int chords = std::max(1, static_cast<int>(std::ceil(std::abs(target - phi) / 0.05)));
            std::vector<cplx> arc;
            for (int c = 0; c <= chords; ++c) arc.push_back(e + ring_radius * std::polar(1.0, phi + (target - phi) * c / chords));
            const auto r = integrate_polyline<3>(ww, std::span<const cplx>(arc), opt);
            data.advance(ww.state, arc.back());
            x = add_phi(x, r.value);
            ring[static_cast<std::size_t>(s)] = x;
            phi = target;
        }
    };
    const int split = static_cast<int>(std::upper_bound(phis.begin(), phis.end(), phi_start) - phis.begin());
    walk(split, samples, 1);
    walk(split - 1, -1, -1);
    return detail::helicoid_fit_deviation(ring);
}

double asymptotic_compare(const HelicoidData& helicoid, double ring_radius, int samples) {
    if (!(ring_radius > 0.0 && ring_radius < 1.0)) throw GeometryError("helicoid ring radius must lie in (0, 1)");
    std::vector<Vec3> ring;
    for (int s = 0; s < samples; ++s) {
        const double phi = -pi + 1e-3 + (2.0 * pi - 2e-3) * s / (samples - 1);
        ring.push_back(helicoid.immersion(std::polar(ring_radius, phi), phi));
    }
    return detail::helicoid_fit_deviation(ring);
}

HelicoidMesh helicoid_mesh(const HelicoidData& helicoid, int radial, int angular, double r_in, double r_out,
                           const QuadratureOptions& opt) {
    if (radial < 2 || angular < 3 || angular % 2 == 0) throw ContractError("helicoid mesh needs radial >= 2 and odd angular >= 3");
    if (!(r_in > 0.0 && r_out > r_in)) throw DomainError("helicoid annulus needs 0 < r_in < r_out");
    const double span = pi - 1e-9;
    auto radius = [&](int i) { return r_in * std::pow(r_out / r_in, static_cast<double>(i) / (radial - 1)); };
    auto angle = [&](int j) { return -span + 2.0 * span * j / (angular - 1); };
    const int mid = (angular - 1) / 2;

    HelicoidMesh out;
    auto& mesh = out.mesh;
    mesh.vertices.assign(static_cast<std::size_t>(radial * angular), Vec3{});
    mesh.domain_uv.assign(mesh.vertices.size(), cplx{});
    mesh.tags.assign(mesh.vertices.size(), 0);
    auto id = [&](int i, int j) { return static_cast<std::size_t>(i * angular + j); };

    auto integrate = [&](HelicoidWalker& w, const std::vector<cplx>& path) {
        const auto r = integrate_polyline<3>(w, std::span<const cplx>(path), opt);
        w.at(path.back());
        return r.value;
    };
    for (int i = 0; i < radial; ++i) {
        // Spine along the positive real axis from the base point z = 1.
        HelicoidWalker w{&helicoid, cplx{1.0}, 0.0};
        const auto d = integrate(w, {cplx{1.0}, cplx{radius(i)}});
        Vec3 x = add_phi({0.0, 0.0, 0.0}, d);
        mesh.vertices[id(i, mid)] = x;
        for (const int dir : {1, -1}) {
            HelicoidWalker ww = w;
            Vec3 xx = x;
            for (int j = mid + dir; j >= 0 && j < angular; j += dir) {
                std::vector<cplx> arc;
                const double a0 = angle(j - dir), a1 = angle(j);
                const int chords = std::max(1, static_cast<int>(std::ceil(std::abs(a1 - a0) / 0.05)));
                for (int c = 0; c <= chords; ++c) arc.push_back(std::polar(radius(i), a0 + (a1 - a0) * c / chords));
                xx = add_phi(xx, integrate(ww, arc));
                mesh.vertices[id(i, j)] = xx;
            }
        }
    }
    for (int i = 0; i < radial; ++i)
        for (int j = 0; j < angular; ++j) {
            const cplx z = std::polar(radius(i), angle(j));
            mesh.domain_uv[id(i, j)] = z;
            const auto closed = helicoid.immersion(z, angle(j));
            out.max_closed_form_error = std::max(out.max_closed_form_error, dist3(closed, mesh.vertices[id(i, j)]));
        }
    for (int i = 0; i + 1 < radial; ++i)
        for (int j = 0; j + 1 < angular; ++j) {
            const auto a = static_cast<std::uint32_t>(id(i, j)), b = static_cast<std::uint32_t>(id(i + 1, j));
            const auto c = static_cast<std::uint32_t>(id(i + 1, j + 1)), d = static_cast<std::uint32_t>(id(i, j + 1));
            mesh.faces.push_back({a, b, c});
            mesh.faces.push_back({a, c, d});
        }
    return out;
}

}  // namespace helikon
