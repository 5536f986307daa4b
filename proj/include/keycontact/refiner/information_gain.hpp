#pragma once

#include <span>

namespace keycontact {

/// -sum w log w, with 0 log 0 = 0. Weights must sum to 1.
double weight_entropy(std::span<const double> w);
/// log N + sum w log w: entropy drop from a uniform prior over N particles.
double information_gain(std::span<const double> w);

}  // namespace keycontact
