#include "keycontact/geometry/mesh_io.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "keycontact/common/error.hpp"

namespace keycontact {

namespace fs = std::filesystem;

TriangleMesh read_obj(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open " + path.string());
  TriangleMesh mesh;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      Vec3 v;
      if (!(ls >> v.x() >> v.y() >> v.z())) fail(ErrorKind::io, path.string() + ":" + std::to_string(line_no) + ": bad vertex");
      mesh.vertices.push_back(v);
    } else if (tag == "f") {
      std::vector<int> idx;
      std::string tok;
      while (ls >> tok) {
        const int i = std::stoi(tok.substr(0, tok.find('/')));
        idx.push_back(i > 0 ? i - 1 : static_cast<int>(mesh.vertices.size()) + i);
      }
      if (idx.size() != 3) {
        fail(ErrorKind::io, path.string() + ":" + std::to_string(line_no) + ": only triangular faces are supported");
      }
      mesh.faces.emplace_back(idx[0], idx[1], idx[2]);
    }
  }
  mesh.validate();
  return mesh;
}

void write_obj(const TriangleMesh& mesh, const fs::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::io, "cannot write " + path.string());
  out.precision(17);
  for (const auto& v : mesh.vertices) out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& f : mesh.faces) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
}

namespace {

enum class Scalar { i8, u8, i16, u16, i32, u32, f32, f64 };

Scalar parse_scalar(const std::string& s) {
  static const std::map<std::string, Scalar> table = {
      {"char", Scalar::i8},   {"int8", Scalar::i8},     {"uchar", Scalar::u8},   {"uint8", Scalar::u8},
      {"short", Scalar::i16}, {"int16", Scalar::i16},   {"ushort", Scalar::u16}, {"uint16", Scalar::u16},
      {"int", Scalar::i32},   {"int32", Scalar::i32},   {"uint", Scalar::u32},   {"uint32", Scalar::u32},
      {"float", Scalar::f32}, {"float32", Scalar::f32}, {"double", Scalar::f64}, {"float64", Scalar::f64}};
  auto it = table.find(s);
  if (it == table.end()) fail(ErrorKind::io, "unsupported PLY scalar type '" + s + "'");
  return it->second;
}

struct Property {
  std::string name;
  Scalar type;
  bool is_list = false;
  Scalar count_type = Scalar::u8;
};

struct Element {
  std::string name;
  std::size_t count = 0;
  std::vector<Property> props;
  // Parsed data: scalar properties per row; list property as vectors.
  std::vector<std::vector<double>> rows;
  std::vector<std::vector<std::int64_t>> lists;
};

double read_binary(std::istream& in, Scalar t) {
  auto get = [&](auto v) {
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    return static_cast<double>(v);
  };
  switch (t) {
    case Scalar::i8: return get(std::int8_t{});
    case Scalar::u8: return get(std::uint8_t{});
    case Scalar::i16: return get(std::int16_t{});
    case Scalar::u16: return get(std::uint16_t{});
    case Scalar::i32: return get(std::int32_t{});
    case Scalar::u32: return get(std::uint32_t{});
    case Scalar::f32: return get(float{});
    case Scalar::f64: return get(double{});
  }
  return 0.0;
}

std::vector<Element> read_ply(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  if (line.rfind("ply", 0) != 0) fail(ErrorKind::io, path.string() + ": not a PLY file");
  bool binary = false;
  std::vector<Element> elements;
  for (;;) {
    if (!std::getline(in, line)) fail(ErrorKind::io, path.string() + ": truncated PLY header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "format") {
      std::string fmt;
      ls >> fmt;
      if (fmt == "binary_little_endian") {
        binary = true;
      } else if (fmt != "ascii") {
        fail(ErrorKind::io, path.string() + ": unsupported PLY format " + fmt);
      }
    } else if (tag == "element") {
      Element e;
      ls >> e.name >> e.count;
      elements.push_back(std::move(e));
    } else if (tag == "property") {
      if (elements.empty()) fail(ErrorKind::io, path.string() + ": property before element");
      Property p;
      std::string type;
      ls >> type;
      if (type == "list") {
        std::string ct, it;
        ls >> ct >> it >> p.name;
        p.is_list = true;
        p.count_type = parse_scalar(ct);
        p.type = parse_scalar(it);
      } else {
        p.type = parse_scalar(type);
        ls >> p.name;
      }
      elements.back().props.push_back(p);
    } else if (tag == "end_header") {
      break;
    }
  }
  for (auto& e : elements) {
    e.rows.resize(e.count);
    for (std::size_t r = 0; r < e.count; ++r) {
      std::istringstream ascii_line;
      if (!binary) {
        if (!std::getline(in, line)) fail(ErrorKind::io, path.string() + ": truncated PLY body");
        ascii_line.str(line);
      }
      auto next = [&](Scalar t) {
        if (binary) return read_binary(in, t);
        double v;
        ascii_line >> v;
        return v;
      };
      for (const auto& p : e.props) {
        if (p.is_list) {
          const auto n = static_cast<std::size_t>(next(p.count_type));
          std::vector<std::int64_t> items(n);
          for (auto& item : items) item = static_cast<std::int64_t>(next(p.type));
          e.lists.push_back(std::move(items));
        } else {
          e.rows[r].push_back(next(p.type));
        }
      }
      if (!in && binary) fail(ErrorKind::io, path.string() + ": truncated PLY body");
    }
  }
  return elements;
}

int prop_index(const Element& e, const std::string& name) {
  int scalar_index = 0;
  for (const auto& p : e.props) {
    if (p.is_list) continue;
    if (p.name == name) return scalar_index;
    ++scalar_index;
  }
  return -1;
}

std::vector<Vec3> vertex_positions(const Element& e, const fs::path& path) {
  const int ix = prop_index(e, "x"), iy = prop_index(e, "y"), iz = prop_index(e, "z");
  if (ix < 0 || iy < 0 || iz < 0) fail(ErrorKind::io, path.string() + ": vertex element lacks x/y/z");
  std::vector<Vec3> pts;
  pts.reserve(e.count);
  for (const auto& row : e.rows) pts.emplace_back(row[ix], row[iy], row[iz]);
  return pts;
}

const Element* find_element(const std::vector<Element>& elements, const std::string& name) {
  for (const auto& e : elements) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

}  // namespace

TriangleMesh read_ply_mesh(const fs::path& path) {
  const auto elements = read_ply(path);
  const Element* v = find_element(elements, "vertex");
  const Element* f = find_element(elements, "face");
  if (!v || !f) fail(ErrorKind::io, path.string() + ": PLY mesh needs vertex and face elements");
  TriangleMesh mesh;
  mesh.vertices = vertex_positions(*v, path);
  for (const auto& list : f->lists) {
    if (list.size() != 3) fail(ErrorKind::io, path.string() + ": only triangular faces are supported");
    mesh.faces.emplace_back(static_cast<int>(list[0]), static_cast<int>(list[1]), static_cast<int>(list[2]));
  }
  mesh.validate();
  return mesh;
}

void write_ply_mesh(const TriangleMesh& mesh, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::io, "cannot write " + path.string());
  out << "ply\nformat binary_little_endian 1.0\n"
      << "element vertex " << mesh.vertices.size() << "\n"
      << "property double x\nproperty double y\nproperty double z\n"
      << "element face " << mesh.faces.size() << "\n"
      << "property list uchar int vertex_indices\nend_header\n";
  for (const auto& v : mesh.vertices) out.write(reinterpret_cast<const char*>(v.data()), 3 * sizeof(double));
  for (const auto& f : mesh.faces) {
    const std::uint8_t n = 3;
    out.write(reinterpret_cast<const char*>(&n), 1);
    out.write(reinterpret_cast<const char*>(f.data()), 3 * sizeof(int));
  }
}

TriangleMesh read_mesh(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".obj") return read_obj(path);
  if (ext == ".ply") return read_ply_mesh(path);
  fail(ErrorKind::io, "unsupported mesh extension '" + ext + "'");
}

PointCloud read_ply_cloud(const fs::path& path) {
  const auto elements = read_ply(path);
  const Element* v = find_element(elements, "vertex");
  if (!v) fail(ErrorKind::io, path.string() + ": PLY cloud needs a vertex element");
  PointCloud cloud;
  cloud.points = vertex_positions(*v, path);
  std::vector<int> feature_cols;
  for (int d = 0;; ++d) {
    const int idx = prop_index(*v, "f_" + std::to_string(d));
    if (idx < 0) break;
    feature_cols.push_back(idx);
  }
  if (!feature_cols.empty()) {
    cloud.features.resize(static_cast<Eigen::Index>(v->count), static_cast<Eigen::Index>(feature_cols.size()));
    for (std::size_t r = 0; r < v->count; ++r) {
      for (std::size_t d = 0; d < feature_cols.size(); ++d) {
        cloud.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(d)) = v->rows[r][feature_cols[d]];
      }
    }
  }
  cloud.validate();
  return cloud;
}

void write_ply_cloud(const PointCloud& cloud, const fs::path& path) {
  cloud.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::io, "cannot write " + path.string());
  out << "ply\nformat binary_little_endian 1.0\n"
      << "element vertex " << cloud.size() << "\n"
      << "property double x\nproperty double y\nproperty double z\n";
  for (int d = 0; d < cloud.feature_dim(); ++d) out << "property float f_" << d << "\n";
  out << "end_header\n";
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    out.write(reinterpret_cast<const char*>(cloud.points[i].data()), 3 * sizeof(double));
    for (int d = 0; d < cloud.feature_dim(); ++d) {
      const float f = static_cast<float>(cloud.features(static_cast<Eigen::Index>(i), d));
      out.write(reinterpret_cast<const char*>(&f), sizeof(f));
    }
  }
}

}  // namespace keycontact
