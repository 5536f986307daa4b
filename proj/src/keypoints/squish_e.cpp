#include "keycontact/keypoints/squish_e.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "keycontact/common/error.hpp"

namespace keycontact {

double synchronized_distance(const Vec3& p, double t, const Vec3& a, double ta, const Vec3& b, double tb) {
  const double s = tb > ta ? (t - ta) / (tb - ta) : 0.0;
  return (p - (a + s * (b - a))).norm();
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Priority queue over a doubly linked list of surviving points. Priority of
// an interior point is its SED plus the error it inherited from removed
// neighbours, so the priority bounds the error of everything it absorbed.
class Squisher {
 public:
  explicit Squisher(const WaypointPath& path)
      : path_(path), prio_(path.size(), kInf), inherited_(path.size(), 0.0), prev_(path.size(), kNone),
        next_(path.size(), kNone), queued_(path.size(), false) {}

  void insert(std::size_t i) {
    if (last_ != kNone) {
      next_[last_] = i;
      prev_[i] = last_;
    }
    set_priority(i, kInf);
    const std::size_t before = last_;
    last_ = i;
    if (before != kNone) refresh(before);
  }

  std::size_t size() const { return queue_.size(); }
  double min_priority() const { return queue_.begin()->first; }

  void reduce() {
    const auto [p, j] = *queue_.begin();
    queue_.erase(queue_.begin());
    queued_[j] = false;
    const std::size_t a = prev_[j], b = next_[j];
    inherited_[a] = std::max(p, inherited_[a]);
    inherited_[b] = std::max(p, inherited_[b]);
    next_[a] = b;
    prev_[b] = a;
    refresh(a);
    refresh(b);
  }

  std::vector<std::size_t> kept() const {
    std::vector<std::size_t> out;
    for (const auto& [p, i] : queue_) out.push_back(i);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  void set_priority(std::size_t i, double p) {
    if (queued_[i]) queue_.erase({prio_[i], i});
    prio_[i] = p;
    queue_.insert({p, i});
    queued_[i] = true;
  }

  void refresh(std::size_t i) {
    const std::size_t a = prev_[i], b = next_[i];
    if (a == kNone || b == kNone) {
      set_priority(i, kInf);
      return;
    }
    const auto& w = path_.waypoints;
    const auto& t = path_.timestamps;
    set_priority(i, inherited_[i] + synchronized_distance(w[i].translation(), t[i], w[a].translation(), t[a],
                                                          w[b].translation(), t[b]));
  }

  const WaypointPath& path_;
  std::vector<double> prio_, inherited_;
  std::vector<std::size_t> prev_, next_;
  std::vector<bool> queued_;
  std::set<std::pair<double, std::size_t>> queue_;
  std::size_t last_ = kNone;
};

}  // namespace

std::vector<std::size_t> squishe_indices(const WaypointPath& path, const SquishMode& mode) {
  path.validate();
  const bool ratio = mode.kind == SquishMode::Kind::ratio;
  if (ratio && !(mode.value > 0.0 && mode.value <= 1.0)) fail(ErrorKind::invalid_argument, "lambda must be in (0, 1]");
  if (!ratio && !(mode.value > 0.0)) fail(ErrorKind::invalid_argument, "mu must be positive");

  Squisher q(path);
  for (std::size_t i = 0; i < path.size(); ++i) {
    q.insert(i);
    if (ratio) {
      const auto capacity =
          std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(mode.value * static_cast<double>(i + 1) - 1e-9)));
      while (q.size() > capacity) q.reduce();
    }
  }
  if (!ratio) {
    while (q.size() > 2 && q.min_priority() <= mode.value) q.reduce();
  }
  return q.kept();
}

WaypointPath compress_squishe(const WaypointPath& path, const SquishMode& mode) {
  WaypointPath out;
  for (std::size_t i : squishe_indices(path, mode)) {
    out.waypoints.push_back(path.waypoints[i]);
    out.timestamps.push_back(path.timestamps[i]);
  }
  return out;
}

}  // namespace keycontact
