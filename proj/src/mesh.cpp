#include "helikon/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "helikon/error.hpp"
#include "helikon/parallel.hpp"
#include "helikon/version.hpp"

namespace helikon {

namespace {

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 cross3(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm3(const Vec3& a) { return std::sqrt(dot3(a, a)); }

// Closed segment p->q against closed triangle (a, b, c), non-coplanar case.
bool segment_hits_triangle(const Vec3& p, const Vec3& q, const Vec3& a, const Vec3& b, const Vec3& c, double eps) {
    const Vec3 e1 = sub(b, a);
    const Vec3 e2 = sub(c, a);
    const Vec3 d = sub(q, p);
    const Vec3 h = cross3(d, e2);
    const double det = dot3(e1, h);
    const double scale = norm3(e1) * norm3(e2) * norm3(d);
    if (std::abs(det) <= 1e-14 * scale) return false;
    const double inv = 1.0 / det;
    const Vec3 s = sub(p, a);
    const double u = dot3(s, h) * inv;
    if (u < -eps || u > 1.0 + eps) return false;
    const Vec3 qv = cross3(s, e1);
    const double v = dot3(d, qv) * inv;
    if (v < -eps || u + v > 1.0 + eps) return false;
    const double t = dot3(e2, qv) * inv;
    return t >= -eps && t <= 1.0 + eps;
}

using P2 = std::array<double, 2>;

double orient2(const P2& a, const P2& b, const P2& c) {
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

bool seg2_intersect(const P2& a, const P2& b, const P2& c, const P2& d) {
    const double o1 = orient2(a, b, c);
    const double o2 = orient2(a, b, d);
    const double o3 = orient2(c, d, a);
    const double o4 = orient2(c, d, b);
    if (((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0)) && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0) return true;
    auto on = [](const P2& p, const P2& q, const P2& r, double o) {
        return o == 0 && std::min(p[0], q[0]) <= r[0] && r[0] <= std::max(p[0], q[0]) &&
               std::min(p[1], q[1]) <= r[1] && r[1] <= std::max(p[1], q[1]);
    };
    return on(a, b, c, o1) || on(a, b, d, o2) || on(c, d, a, o3) || on(c, d, b, o4);
}

bool point_in_tri2(const P2& p, const P2& a, const P2& b, const P2& c) {
    const double d1 = orient2(a, b, p);
    const double d2 = orient2(b, c, p);
    const double d3 = orient2(c, a, p);
    const bool neg = d1 < 0 || d2 < 0 || d3 < 0;
    const bool pos = d1 > 0 || d2 > 0 || d3 > 0;
    return !(neg && pos);
}

bool coplanar_overlap(const std::array<Vec3, 3>& ta, const std::array<Vec3, 3>& tb, const Vec3& n) {
    int drop = 0;
    if (std::abs(n[1]) > std::abs(n[drop])) drop = 1;
    if (std::abs(n[2]) > std::abs(n[drop])) drop = 2;
    auto proj = [drop](const Vec3& v) -> P2 {
        if (drop == 0) return {v[1], v[2]};
        if (drop == 1) return {v[0], v[2]};
        return {v[0], v[1]};
    };
    std::array<P2, 3> a{proj(ta[0]), proj(ta[1]), proj(ta[2])};
    std::array<P2, 3> b{proj(tb[0]), proj(tb[1]), proj(tb[2])};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (seg2_intersect(a[i], a[(i + 1) % 3], b[j], b[(j + 1) % 3])) return true;
    return point_in_tri2(a[0], b[0], b[1], b[2]) || point_in_tri2(b[0], a[0], a[1], a[2]);
}

}  // namespace

double Mesh::diameter() const {
    if (vertices.empty()) return 0.0;
    Vec3 lo = vertices.front();
    Vec3 hi = vertices.front();
    for (const auto& v : vertices)
        for (int c = 0; c < 3; ++c) {
            lo[c] = std::min(lo[c], v[c]);
            hi[c] = std::max(hi[c], v[c]);
        }
    return norm3(sub(hi, lo));
}

namespace detail {

bool triangles_intersect(const Vec3& a0, const Vec3& a1, const Vec3& a2, const Vec3& b0, const Vec3& b1,
                         const Vec3& b2) {
    const std::array<Vec3, 3> ta{a0, a1, a2};
    const std::array<Vec3, 3> tb{b0, b1, b2};
    const Vec3 na = cross3(sub(a1, a0), sub(a2, a0));
    const Vec3 nb = cross3(sub(b1, b0), sub(b2, b0));
    const double la = norm3(na);
    const double lb = norm3(nb);
    if (la == 0.0 || lb == 0.0) return false;

    // Plane separation.
    std::array<double, 3> da{};
    std::array<double, 3> db{};
    for (int i = 0; i < 3; ++i) {
        da[i] = dot3(nb, sub(ta[i], b0)) / lb;
        db[i] = dot3(na, sub(tb[i], a0)) / la;
    }
    const double size = std::max({norm3(sub(a1, a0)), norm3(sub(a2, a0)), norm3(sub(b1, b0)), norm3(sub(b2, b0))});
    const double tol = 1e-12 * size;
    auto separated = [tol](const std::array<double, 3>& d) {
        return (d[0] > tol && d[1] > tol && d[2] > tol) || (d[0] < -tol && d[1] < -tol && d[2] < -tol);
    };
    if (separated(da) || separated(db)) return false;
    const bool coplanar = std::abs(da[0]) <= tol && std::abs(da[1]) <= tol && std::abs(da[2]) <= tol;
    if (coplanar) return coplanar_overlap(ta, tb, na);

    constexpr double eps = 1e-12;
    for (int i = 0; i < 3; ++i) {
        if (segment_hits_triangle(ta[i], ta[(i + 1) % 3], b0, b1, b2, eps)) return true;
        if (segment_hits_triangle(tb[i], tb[(i + 1) % 3], a0, a1, a2, eps)) return true;
    }
    return false;
}

}  // namespace detail

IntersectionReport self_intersection_check(const Mesh& mesh, double grid_cell, unsigned threads) {
    IntersectionReport report;
    const auto& V = mesh.vertices;
    const auto& F = mesh.faces;
    if (F.empty()) return report;
    if (grid_cell <= 0.0) {
        double total = 0.0;
        for (const auto& f : F)
            for (int e = 0; e < 3; ++e) total += norm3(sub(V[f[e]], V[f[(e + 1) % 3]]));
        grid_cell = 2.0 * total / (3.0 * static_cast<double>(F.size()));
        if (!(grid_cell > 0.0)) grid_cell = 1.0;
    }

    std::vector<char> degenerate(F.size(), 0);
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> cells;
    auto key = [](std::int64_t x, std::int64_t y, std::int64_t z) {
        const std::uint64_t m = (1u << 21) - 1;
        return (static_cast<std::uint64_t>(x) & m) | ((static_cast<std::uint64_t>(y) & m) << 21) |
               ((static_cast<std::uint64_t>(z) & m) << 42);
    };
    std::vector<std::array<std::int64_t, 6>> ranges(F.size());
    for (std::uint32_t i = 0; i < F.size(); ++i) {
        const auto& f = F[i];
        const Vec3 n = cross3(sub(V[f[1]], V[f[0]]), sub(V[f[2]], V[f[0]]));
        if (norm3(n) <= 1e-14) {
            degenerate[i] = 1;
            ++report.degenerate_skipped;
            continue;
        }
        std::array<std::int64_t, 6> r{};
        for (int c = 0; c < 3; ++c) {
            const double lo = std::min({V[f[0]][c], V[f[1]][c], V[f[2]][c]});
            const double hi = std::max({V[f[0]][c], V[f[1]][c], V[f[2]][c]});
            r[c] = static_cast<std::int64_t>(std::floor(lo / grid_cell));
            r[c + 3] = static_cast<std::int64_t>(std::floor(hi / grid_cell));
        }
        ranges[i] = r;
        for (auto x = r[0]; x <= r[3]; ++x)
            for (auto y = r[1]; y <= r[4]; ++y)
                for (auto z = r[2]; z <= r[5]; ++z) cells[key(x, y, z)].push_back(i);
    }

    std::vector<std::vector<std::uint32_t>> hits(F.size());
    std::vector<std::size_t> tested(F.size(), 0);
    parallel_for(F.size(), threads, [&](std::size_t i) {
        if (degenerate[i]) return;
        const auto& r = ranges[i];
        std::vector<std::uint32_t> cand;
        for (auto x = r[0]; x <= r[3]; ++x)
            for (auto y = r[1]; y <= r[4]; ++y)
                for (auto z = r[2]; z <= r[5]; ++z) {
                    const auto it = cells.find(key(x, y, z));
                    if (it == cells.end()) continue;
                    for (const auto j : it->second)
                        if (j > i) cand.push_back(j);
                }
        std::sort(cand.begin(), cand.end());
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
        const auto& fa = F[i];
        for (const auto j : cand) {
            const auto& fb = F[j];
            bool shared = false;
            for (const auto va : fa)
                for (const auto vb : fb) shared = shared || va == vb;
            if (shared) continue;
            ++tested[i];
            if (detail::triangles_intersect(V[fa[0]], V[fa[1]], V[fa[2]], V[fb[0]], V[fb[1]], V[fb[2]]))
                hits[i].push_back(j);
        }
    });
    for (std::uint32_t i = 0; i < F.size(); ++i) {
        report.candidate_pairs += tested[i];
        for (const auto j : hits[i]) report.pairs.push_back({i, j});
    }
    return report;
}

MeshFormat format_from_path(const std::filesystem::path& path) {
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".obj") return MeshFormat::obj;
    if (ext == ".ply") return MeshFormat::ply;
    throw DomainError("unknown mesh extension '" + ext + "' (expected .obj or .ply)");
}

void export_mesh(const Mesh& mesh, MeshFormat format, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << std::setprecision(17);
    if (format == MeshFormat::obj) {
        out << "# helikon " << version << "\n";
        for (const auto& v : mesh.vertices) out << "v " << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
        for (const auto& f : mesh.faces) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
    } else {
        out << "ply\nformat ascii 1.0\ncomment helikon " << version << "\n";
        out << "element vertex " << mesh.vertices.size() << "\nproperty double x\nproperty double y\nproperty double z\n";
        out << "element face " << mesh.faces.size() << "\nproperty list uchar int vertex_indices\nend_header\n";
        for (const auto& v : mesh.vertices) out << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
        for (const auto& f : mesh.faces) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
    }
    if (!out) throw Error("failed writing " + path.string());
}

Mesh import_mesh(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    Mesh mesh;
    std::string line;
    if (format_from_path(path) == MeshFormat::obj) {
        while (std::getline(in, line)) {
            std::istringstream ls(line);
            std::string t;
            ls >> t;
            if (t == "v") {
                Vec3 v{};
                ls >> v[0] >> v[1] >> v[2];
                mesh.vertices.push_back(v);
            } else if (t == "f") {
                std::array<std::uint32_t, 3> f{};
                for (auto& idx : f) {
                    std::string tok;
                    ls >> tok;
                    idx = static_cast<std::uint32_t>(std::stoul(tok.substr(0, tok.find('/')))) - 1;
                }
                mesh.faces.push_back(f);
            }
        }
    } else {
        std::size_t nv = 0;
        std::size_t nf = 0;
        while (std::getline(in, line) && line != "end_header") {
            std::istringstream ls(line);
            std::string a, b;
            std::size_t n = 0;
            ls >> a >> b >> n;
            if (a == "element" && b == "vertex") nv = n;
            if (a == "element" && b == "face") nf = n;
        }
        mesh.vertices.resize(nv);
        for (auto& v : mesh.vertices) in >> v[0] >> v[1] >> v[2];
        mesh.faces.resize(nf);
        for (auto& f : mesh.faces) {
            int cnt = 0;
            in >> cnt >> f[0] >> f[1] >> f[2];
            if (cnt != 3) throw Error("only triangle faces are supported");
        }
        if (!in) throw Error("truncated PLY file " + path.string());
    }
    mesh.domain_uv.assign(mesh.vertices.size(), cplx{});
    mesh.tags.assign(mesh.vertices.size(), 0);
    return mesh;
}

}  // namespace helikon
