#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "gbsc/stochastic_space.hpp"

namespace gbsc {

using SampleFunction = std::function<double(std::span<const double>)>;

struct McStudy {
  std::vector<std::size_t> budgets;  // strictly increasing
  int repetitions = 10;
  std::uint64_t seed = 0;

  void validate() const;
  static McStudy defaults();  // budgets 4, 8, ..., 4096
};

// The k-th draw of a seeded stream; draws are a prefix-stable sequence, so
// the first eta draws of a larger run coincide with an eta-sample run.
std::vector<std::vector<double>> draw_samples(const RandomSpace& space, std::size_t count,
                                              std::uint64_t seed);

// Sample mean of f over eta draws (evaluated in parallel, summed pairwise in
// sample order).
double mc_estimate(const SampleFunction& f, const RandomSpace& space, std::size_t eta,
                   std::uint64_t seed);

// Sample means over every budget of a study for one seed, reusing the values
// of the largest budget.
std::vector<double> mc_prefix_estimates(const SampleFunction& f, const RandomSpace& space,
                                        std::span<const std::size_t> budgets, std::uint64_t seed);

// Negated least-squares slope of log(error) against log(eta).
double regression_rate(std::span<const std::pair<double, double>> points);

}  // namespace gbsc
