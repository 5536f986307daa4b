#include "keycontact/sim/profiles.hpp"

#include <cmath>

#include "keycontact/common/error.hpp"

namespace keycontact {

namespace {

struct NamedProfile {
  Profile profile;
  const char* name;
};
constexpr NamedProfile kNames[] = {
    {Profile::rectangle, "rectangle"}, {Profile::round, "round"},       {Profile::oval, "oval"},
    {Profile::hexagon, "hexagon"},     {Profile::star, "star"},         {Profile::triangle, "triangle"},
    {Profile::pentagon, "pentagon"},
};

std::vector<Vec2> regular(int n, double radius, double phase) {
  std::vector<Vec2> out;
  for (int i = 0; i < n; ++i) {
    const double a = phase + 2.0 * M_PI * i / n;
    out.emplace_back(radius * std::cos(a), radius * std::sin(a));
  }
  return out;
}

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

}  // namespace

const char* to_string(Profile p) {
  for (const auto& n : kNames)
    if (n.profile == p) return n.name;
  return "unknown";
}

Profile profile_from_string(const std::string& s) {
  for (const auto& n : kNames)
    if (s == n.name) return n.profile;
  fail(ErrorKind::invalid_argument, "unsupported profile '" + s + "'");
}

const std::vector<Profile>& all_profiles() {
  static const std::vector<Profile> v = [] {
    std::vector<Profile> out;
    for (const auto& n : kNames) out.push_back(n.profile);
    return out;
  }();
  return v;
}

std::vector<Vec2> profile_polygon(Profile p) {
  constexpr double r = 0.01;
  switch (p) {
    case Profile::round: return regular(64, r, 0.0);
    case Profile::oval: {
      std::vector<Vec2> out;
      for (int i = 0; i < 64; ++i) {
        const double a = 2.0 * M_PI * i / 64;
        out.emplace_back(0.012 * std::cos(a), 0.008 * std::sin(a));
      }
      return out;
    }
    case Profile::rectangle:
      return {{0.008, -0.005}, {0.008, 0.005}, {-0.008, 0.005}, {-0.008, -0.005}};
    case Profile::hexagon: return regular(6, r, 0.0);
    case Profile::triangle: return regular(3, r, M_PI / 2);
    case Profile::pentagon: return regular(5, r, M_PI / 2);
    case Profile::star: {
      std::vector<Vec2> out;
      for (int i = 0; i < 10; ++i) {
        const double a = M_PI / 2 + M_PI * i / 5;
        const double rad = i % 2 == 0 ? r : 0.5 * r;
        out.emplace_back(rad * std::cos(a), rad * std::sin(a));
      }
      return out;
    }
  }
  fail(ErrorKind::invalid_argument, "unsupported profile");
}

std::vector<Vec2> offset_polygon(const std::vector<Vec2>& poly, double distance) {
  const std::size_t n = poly.size();
  if (n < 3) fail(ErrorKind::invalid_argument, "offset_polygon: need at least 3 vertices");
  std::vector<Vec2> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 d0 = (poly[i] - poly[(i + n - 1) % n]).normalized();
    const Vec2 d1 = (poly[(i + 1) % n] - poly[i]).normalized();
    const Vec2 n0(d0.y(), -d0.x()), n1(d1.y(), -d1.x());
    out[i] = poly[i] + distance * (n0 + n1) / (1.0 + n0.dot(n1));
  }
  return out;
}

std::vector<Vec2> subdivide_by_angle(const std::vector<Vec2>& poly, double max_angle) {
  if (!(max_angle > 0.0)) fail(ErrorKind::invalid_argument, "subdivide_by_angle: max_angle must be > 0");
  std::vector<Vec2> out;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % poly.size()];
    const double span = std::atan2(cross2(a, b), a.dot(b));
    const int pieces = std::max(1, static_cast<int>(std::ceil(std::abs(span) / max_angle - 1e-9)));
    for (int k = 0; k < pieces; ++k) out.push_back(a + (b - a) * (static_cast<double>(k) / pieces));
  }
  return out;
}

TriangleMesh make_prism(const std::vector<Vec2>& poly, double length) {
  const int n = static_cast<int>(poly.size());
  if (n < 3 || !(length > 0.0)) fail(ErrorKind::invalid_argument, "make_prism: invalid outline or length");
  TriangleMesh m;
  for (const auto& p : poly) m.vertices.emplace_back(p.x(), p.y(), 0.0);
  for (const auto& p : poly) m.vertices.emplace_back(p.x(), p.y(), length);
  const int cb = 2 * n, ct = 2 * n + 1;
  m.vertices.emplace_back(0.0, 0.0, 0.0);
  m.vertices.emplace_back(0.0, 0.0, length);
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    m.faces.emplace_back(i, j, n + j);
    m.faces.emplace_back(i, n + j, n + i);
    m.faces.emplace_back(cb, j, i);
    m.faces.emplace_back(ct, n + i, n + j);
  }
  return m;
}

TriangleMesh make_block_with_hole(const std::vector<Vec2>& hole, double outer_radius, double cavity_depth,
                                  double height) {
  const int n = static_cast<int>(hole.size());
  if (n < 3) fail(ErrorKind::invalid_argument, "make_block_with_hole: outline needs at least 3 vertices");
  if (!(cavity_depth > 0.0 && height > cavity_depth)) {
    fail(ErrorKind::invalid_argument, "make_block_with_hole: need 0 < cavity_depth < height");
  }
  TriangleMesh m;
  // Rings: hole top, hole bottom, outer top, outer bottom.
  for (const auto& p : hole) m.vertices.emplace_back(p.x(), p.y(), 0.0);
  for (const auto& p : hole) m.vertices.emplace_back(p.x(), p.y(), -cavity_depth);
  for (const auto& p : hole) {
    if (p.norm() >= outer_radius) fail(ErrorKind::invalid_argument, "make_block_with_hole: hole exceeds block");
    const Vec2 o = outer_radius * p.normalized();
    m.vertices.emplace_back(o.x(), o.y(), 0.0);
  }
  for (const auto& p : hole) {
    const Vec2 o = outer_radius * p.normalized();
    m.vertices.emplace_back(o.x(), o.y(), -height);
  }
  const int ht = 0, hb = n, ot = 2 * n, ob = 3 * n;
  const int floor_c = 4 * n, bottom_c = 4 * n + 1;
  m.vertices.emplace_back(0.0, 0.0, -cavity_depth);
  m.vertices.emplace_back(0.0, 0.0, -height);
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    m.faces.emplace_back(ht + i, ot + i, ot + j);  // top annulus
    m.faces.emplace_back(ht + i, ot + j, ht + j);
    m.faces.emplace_back(ot + i, ob + i, ob + j);  // outer wall
    m.faces.emplace_back(ot + i, ob + j, ot + j);
    m.faces.emplace_back(ht + i, ht + j, hb + j);  // cavity wall
    m.faces.emplace_back(ht + i, hb + j, hb + i);
    m.faces.emplace_back(floor_c, hb + i, hb + j);  // cavity floor
    m.faces.emplace_back(bottom_c, ob + j, ob + i);  // bottom
  }
  return m;
}

}  // namespace keycontact
