#include "keycontact/refiner/information_gain.hpp"

#include <cmath>

#include "keycontact/common/error.hpp"

namespace keycontact {

double weight_entropy(std::span<const double> w) {
  if (w.empty()) fail(ErrorKind::invalid_argument, "weight_entropy: empty weights");
  double h = 0.0;
  for (double x : w) {
    if (!(x >= 0.0) || !std::isfinite(x)) fail(ErrorKind::invalid_argument, "weight_entropy: invalid weight");
    if (x > 0.0) h -= x * std::log(x);
  }
  return h;
}

double information_gain(std::span<const double> w) {
  return std::log(static_cast<double>(w.size())) - weight_entropy(w);
}

}  // namespace keycontact
