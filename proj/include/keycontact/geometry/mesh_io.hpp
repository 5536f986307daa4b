#pragma once

#include <filesystem>

#include "keycontact/geometry/mesh.hpp"
#include "keycontact/geometry/point_cloud.hpp"

namespace keycontact {

/// Wavefront OBJ; only triangular faces are accepted.
TriangleMesh read_obj(const std::filesystem::path& path);
void write_obj(const TriangleMesh& mesh, const std::filesystem::path& path);

/// PLY meshes (binary little-endian or ASCII on read; binary on write).
TriangleMesh read_ply_mesh(const std::filesystem::path& path);
void write_ply_mesh(const TriangleMesh& mesh, const std::filesystem::path& path);

/// Dispatches on extension (.obj / .ply).
TriangleMesh read_mesh(const std::filesystem::path& path);

/// PLY point clouds. Extra float properties named f_0 .. f_{D-1} become
/// per-point features.
PointCloud read_ply_cloud(const std::filesystem::path& path);
void write_ply_cloud(const PointCloud& cloud, const std::filesystem::path& path);

}  // namespace keycontact
