#include "gbsc/montecarlo.hpp"

#include <algorithm>
#include <cmath>

#include "gbsc/errors.hpp"
#include "gbsc/parallel.hpp"
#include "gbsc/summation.hpp"

namespace gbsc {

void McStudy::validate() const {
  if (budgets.empty()) throw ConfigError("monte carlo study needs at least one budget");
  if (budgets.front() < 1) throw ConfigError("monte carlo budgets must be >= 1");
  for (std::size_t i = 1; i < budgets.size(); ++i) {
    if (budgets[i] <= budgets[i - 1]) throw ConfigError("monte carlo budgets must increase");
  }
  if (repetitions < 1) throw ConfigError("monte carlo repetitions must be >= 1");
}

McStudy McStudy::defaults() {
  McStudy s;
  for (std::size_t eta = 4; eta <= 4096; eta *= 2) s.budgets.push_back(eta);
  return s;
}

std::vector<std::vector<double>> draw_samples(const RandomSpace& space, std::size_t count,
                                              std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<std::vector<double>> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(sample(space, rng));
  return out;
}

namespace {

std::vector<double> evaluate(const SampleFunction& f, const std::vector<std::vector<double>>& ys) {
  std::vector<double> values(ys.size());
  parallel_for(ys.size(), [&](std::size_t k) { values[k] = f(ys[k]); });
  return values;
}

}  // namespace

double mc_estimate(const SampleFunction& f, const RandomSpace& space, std::size_t eta,
                   std::uint64_t seed) {
  if (eta < 1) throw ParameterError("monte carlo needs at least one sample");
  const auto values = evaluate(f, draw_samples(space, eta, seed));
  return pairwise_sum<double>(values) / static_cast<double>(eta);
}

std::vector<double> mc_prefix_estimates(const SampleFunction& f, const RandomSpace& space,
                                        std::span<const std::size_t> budgets, std::uint64_t seed) {
  if (budgets.empty()) return {};
  std::size_t largest = 0;
  for (auto b : budgets) {
    if (b < 1) throw ParameterError("monte carlo needs at least one sample");
    largest = std::max(largest, b);
  }
  const auto values = evaluate(f, draw_samples(space, largest, seed));
  std::vector<double> out;
  for (auto b : budgets) {
    out.push_back(pairwise_sum<double>(std::span<const double>(values.data(), b)) /
                  static_cast<double>(b));
  }
  return out;
}

double regression_rate(std::span<const std::pair<double, double>> points) {
  if (points.size() < 2) throw DataError("regression needs at least two points");
  double sx = 0, sy = 0;
  for (const auto& [eta, err] : points) {
    if (!(eta > 0)) throw DataError("sample budgets must be positive");
    if (!(err > 0) || !std::isfinite(err)) throw DataError("errors must be positive");
    sx += std::log(eta);
    sy += std::log(err);
  }
  const double n = static_cast<double>(points.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& [eta, err] : points) {
    const double dx = std::log(eta) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(err) - my);
  }
  if (sxx == 0) throw DataError("regression needs at least two distinct budgets");
  return -sxy / sxx;
}

}  // namespace gbsc
