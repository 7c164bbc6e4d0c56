#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "meboost/dataset.hpp"

namespace meboost::testing {

inline Label lab(int v) { return v ? Label::positive : Label::negative; }

/// Dataset from row-major values and 0/1 labels.
inline Dataset make_dataset(std::vector<double> x, std::size_t p, const std::vector<int>& y) {
  std::vector<Label> labels;
  labels.reserve(y.size());
  for (int v : y) labels.push_back(lab(v));
  std::vector<std::string> names;
  for (std::size_t f = 0; f < p; ++f) names.push_back("f" + std::to_string(f));
  return Dataset(std::move(x), p, std::move(labels), std::move(names), "pos", "neg");
}

/// Gaussian features, labels with a linear signal plus flips. Both classes
/// are guaranteed present.
inline Dataset random_dataset(std::mt19937_64& rng, std::size_t n, std::size_t p, double positive_rate,
                              double noise) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> x(n * p);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t f = 0; f < p; ++f) {
      x[i * p + f] = gauss(rng);
    }
    y[i] = (unit(rng) < positive_rate ? 1 : 0);
    if (y[i] == 1) x[i * p] += 1.5;
    if (unit(rng) < noise) y[i] = 1 - y[i];
  }
  y[0] = 1;
  y[n - 1] = 0;
  return make_dataset(std::move(x), p, y);
}

}  // namespace meboost::testing
