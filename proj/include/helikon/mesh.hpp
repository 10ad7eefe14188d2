#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "helikon/elliptic.hpp"

namespace helikon {

using Vec3 = std::array<double, 3>;

namespace tag {
inline constexpr std::uint8_t axis = 1;
inline constexpr std::uint8_t horizontal_inner = 2;
inline constexpr std::uint8_t cut_a = 4;
inline constexpr std::uint8_t cut_b = 8;
inline constexpr std::uint8_t end = 16;
inline constexpr std::uint8_t boundary = 32;
}  // namespace tag

struct Mesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<std::uint32_t, 3>> faces;
    /// Source point on the torus (or in the parameter plane) per vertex.
    std::vector<cplx> domain_uv;
    std::vector<std::uint8_t> tags;

    std::size_t size() const noexcept { return vertices.size(); }
    /// Bounding-box diagonal.
    double diameter() const;
};

enum class MeshFormat { obj, ply };

MeshFormat format_from_path(const std::filesystem::path& path);

/// ASCII OBJ or PLY with 17 significant digits and a version comment.
void export_mesh(const Mesh& mesh, MeshFormat format, const std::filesystem::path& path);

/// Reads back vertices and triangles written by export_mesh.
Mesh import_mesh(const std::filesystem::path& path);

struct IntersectionReport {
    std::vector<std::array<std::uint32_t, 2>> pairs;
    std::size_t degenerate_skipped = 0;
    std::size_t candidate_pairs = 0;
};

/// Spatial-hash broad phase over cubic cells of side `grid_cell`, exact
/// triangle-triangle narrow phase. Faces sharing a vertex are not tested.
/// grid_cell <= 0 uses twice the mean edge length.
IntersectionReport self_intersection_check(const Mesh& mesh, double grid_cell = 0.0, unsigned threads = 1);

namespace detail {
bool triangles_intersect(const Vec3& a0, const Vec3& a1, const Vec3& a2, const Vec3& b0, const Vec3& b1,
                         const Vec3& b2);
}

}  // namespace helikon
