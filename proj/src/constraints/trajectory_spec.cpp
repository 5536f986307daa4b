#include "keycontact/constraints/trajectory_spec.hpp"

#include <cmath>

#include "keycontact/common/error.hpp"

namespace keycontact {

void TrajectorySpec::validate() const {
  if (generator_id == "composite") {
    if (parts.empty()) fail(ErrorKind::invalid_argument, "composite trajectory needs parts");
    for (const auto& p : parts) p.validate();
    return;
  }
  if (resolution < 2) fail(ErrorKind::invalid_argument, "trajectory resolution must be at least 2");
}

double ParameterResolver::get(const std::string& name) const {
  auto it = spec_.bindings.find(name);
  if (it == spec_.bindings.end()) {
    fail(ErrorKind::invalid_argument, spec_.generator_id + ": parameter '" + name + "' is not bound");
  }
  try {
    return it->second.evaluate(box_);
  } catch (const Error& e) {
    fail(ErrorKind::invalid_argument, spec_.generator_id + ": parameter '" + name + "' failed: " + e.what());
  }
}

double ParameterResolver::get_or(const std::string& name, double fallback) const {
  return spec_.bindings.count(name) ? get(name) : fallback;
}

namespace {

Vec3 get3(const ParameterResolver& p, const std::string& prefix) {
  return {p.get(prefix + "_x"), p.get(prefix + "_y"), p.get(prefix + "_z")};
}

double frac(int i, int n) { return static_cast<double>(i) / static_cast<double>(n - 1); }

std::vector<Pose> line(const ParameterResolver& p, int n) {
  const Vec3 a = get3(p, "start"), b = get3(p, "end");
  std::vector<Pose> out;
  for (int i = 0; i < n; ++i) out.push_back(Pose::from_translation(a + frac(i, n) * (b - a)));
  return out;
}

std::vector<Pose> arc(const ParameterResolver& p, int n) {
  const Vec3 c = get3(p, "center");
  const double r = p.get("radius"), a0 = p.get("angle_start"), a1 = p.get("angle_end");
  if (r < 0.0) fail(ErrorKind::invalid_argument, "arc: parameter 'radius' must be non-negative");
  std::vector<Pose> out;
  for (int i = 0; i < n; ++i) {
    const double a = a0 + frac(i, n) * (a1 - a0);
    out.push_back(Pose::from_translation(c + Vec3(r * std::cos(a), r * std::sin(a), 0.0)));
  }
  return out;
}

std::vector<Pose> spiral(const ParameterResolver& p, int n) {
  const Vec3 c = get3(p, "center");
  const double r0 = p.get("r0"), r1 = p.get("r1"), turns = p.get("turns"), pitch = p.get("pitch");
  if (r0 < 0.0 || r1 < 0.0) fail(ErrorKind::invalid_argument, "spiral: radii must be non-negative");
  std::vector<Pose> out;
  for (int i = 0; i < n; ++i) {
    const double s = frac(i, n);
    const double a = 2.0 * M_PI * turns * s;
    const double r = r0 + s * (r1 - r0);
    out.push_back(Pose::from_translation(c + Vec3(r * std::cos(a), r * std::sin(a), pitch * turns * s)));
  }
  return out;
}

WaypointPath generate_impl(const TrajectorySpec& spec, const Obb& box, const GeneratorRegistry& registry) {
  ParameterResolver params(spec, box);
  const double duration = params.get_or("duration", 1.0);
  if (!(duration > 0.0)) fail(ErrorKind::invalid_argument, spec.generator_id + ": parameter 'duration' must be positive");
  WaypointPath path;
  if (spec.generator_id == "composite") {
    double t0 = 0.0;
    for (const auto& part : spec.parts) {
      WaypointPath sub = generate_impl(part, box, registry);
      for (std::size_t i = 0; i < sub.size(); ++i) {
        const bool joint = i == 0 && !path.waypoints.empty() &&
                           (sub.waypoints[0].translation() - path.waypoints.back().translation()).norm() < 1e-12;
        if (joint) continue;
        path.waypoints.push_back(sub.waypoints[i]);
        path.timestamps.push_back(t0 + sub.timestamps[i] + (i == 0 && !path.timestamps.empty() ? 1e-6 : 0.0));
      }
      t0 = path.timestamps.back();
    }
    return path;
  }
  const GeneratorFn* fn = registry.find(spec.generator_id);
  if (!fn) fail(ErrorKind::invalid_argument, "unknown trajectory generator '" + spec.generator_id + "'");
  path.waypoints = (*fn)(params, spec.resolution);
  for (int i = 0; i < spec.resolution; ++i) path.timestamps.push_back(duration * frac(i, spec.resolution));
  return path;
}

}  // namespace

const GeneratorRegistry& GeneratorRegistry::builtin() {
  static const GeneratorRegistry registry = [] {
    GeneratorRegistry r;
    r.register_generator("line", line);
    r.register_generator("arc", arc);
    r.register_generator("spiral", spiral);
    return r;
  }();
  return registry;
}

void GeneratorRegistry::register_generator(const std::string& id, GeneratorFn fn) {
  if (id == "composite") fail(ErrorKind::invalid_argument, "'composite' is reserved");
  generators_[id] = std::move(fn);
}

const GeneratorFn* GeneratorRegistry::find(const std::string& id) const {
  auto it = generators_.find(id);
  return it == generators_.end() ? nullptr : &it->second;
}

WaypointPath generate_waypoints(const TrajectorySpec& spec, const Obb& master_props, const GeneratorRegistry& registry) {
  spec.validate();
  WaypointPath path = generate_impl(spec, master_props, registry);
  if (path.waypoints.size() != path.timestamps.size()) {
    fail(ErrorKind::invalid_argument, spec.generator_id + ": generator returned the wrong number of waypoints");
  }
  path.validate();
  return path;
}

}  // namespace keycontact
