#include "keycontact/transfer/region.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "keycontact/common/error.hpp"

namespace keycontact {

std::vector<double> region_similarity(const FeatureGrid& grid, const Eigen::VectorXd& query) {
  if (query.size() != grid.features.cols())
    fail(ErrorKind::invalid_argument, "region_similarity: query dimension does not match grid features");
  const double qn = query.norm();
  std::vector<double> out(grid.size(), 0.0);
  if (qn == 0.0) return out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto f = grid.features.row(static_cast<Eigen::Index>(i));
    const double fn = f.norm();
    if (fn == 0.0) continue;
    out[i] = std::clamp(f.dot(query) / (fn * qn), -1.0, 1.0);
  }
  return out;
}

OtsuResult otsu_region(std::span<const double> values) {
  constexpr int kBins = 256;
  if (values.size() < 2) fail(ErrorKind::degenerate, "otsu_region: need at least two values");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const double lo = v.front(), hi = v.back();
  if (!(hi > lo)) fail(ErrorKind::degenerate, "otsu_region: constant input has no split");
  const double width = (hi - lo) / kBins;

  std::array<double, kBins> count{}, sum{};
  for (double x : v) {
    const int b = std::min(kBins - 1, static_cast<int>((x - lo) / width));
    count[b] += 1;
    sum[b] += x;
  }
  const double n = static_cast<double>(v.size());
  double total = 0;
  for (double s : sum) total += s;

  double best = -1.0;
  int first = 0, last = 0;
  double c0 = 0, s0 = 0;
  for (int k = 0; k + 1 < kBins; ++k) {
    c0 += count[k];
    s0 += sum[k];
    const double c1 = n - c0;
    if (c0 == 0 || c1 == 0) continue;
    const double m0 = s0 / c0, m1 = (total - s0) / c1;
    const double between = (c0 / n) * (c1 / n) * (m0 - m1) * (m0 - m1);
    if (between > best) {
      best = between;
      first = last = k;
    } else if (between == best) {
      last = k;
    }
  }
  OtsuResult r;
  r.threshold = lo + width * (0.5 * (first + last) + 1.0);
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] > r.threshold) r.selected.push_back(i);
  return r;
}

}  // namespace keycontact
