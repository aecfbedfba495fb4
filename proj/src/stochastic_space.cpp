#include "gbsc/stochastic_space.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gbsc/errors.hpp"

namespace gbsc {

namespace {

// Roundoff slack (relative to the interval width) accepted at the box faces.
constexpr double kBoundarySlack = 1e-12;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void check_dimension(std::size_t got, const RandomSpace& space) {
  if (got != space.dimension()) {
    throw DomainError("point has " + std::to_string(got) + " coordinates, random space has " +
                      std::to_string(space.dimension()));
  }
}

}  // namespace

RandomSpace::RandomSpace(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
  for (std::size_t n = 0; n < intervals_.size(); ++n) {
    const auto& iv = intervals_[n];
    if (!(iv.lower < iv.upper) || !std::isfinite(iv.lower) || !std::isfinite(iv.upper)) {
      throw DomainError("random coordinate y" + std::to_string(n + 1) +
                        " needs finite lower < upper");
    }
  }
}

bool RandomSpace::contains(std::span<const double> y) const {
  if (y.size() != dimension()) return false;
  for (std::size_t n = 0; n < y.size(); ++n) {
    if (y[n] < intervals_[n].lower || y[n] > intervals_[n].upper) return false;
  }
  return true;
}

std::vector<double> map_to_reference(std::span<const double> y, const RandomSpace& space) {
  check_dimension(y.size(), space);
  std::vector<double> xi(y.size());
  for (std::size_t n = 0; n < y.size(); ++n) {
    const Interval& iv = space[n];
    const double slack = kBoundarySlack * iv.width();
    if (!(y[n] >= iv.lower - slack && y[n] <= iv.upper + slack)) {
      throw DomainError("coordinate y" + std::to_string(n + 1) + " = " + std::to_string(y[n]) +
                        " lies outside [" + std::to_string(iv.lower) + ", " +
                        std::to_string(iv.upper) + "]");
    }
    const double v = (2.0 * y[n] - (iv.lower + iv.upper)) / iv.width();
    xi[n] = std::clamp(v, -1.0, 1.0);
  }
  return xi;
}

std::vector<double> map_from_reference(std::span<const double> xi, const RandomSpace& space) {
  check_dimension(xi.size(), space);
  std::vector<double> y(xi.size());
  for (std::size_t n = 0; n < xi.size(); ++n) {
    if (!(xi[n] >= -1.0 - kBoundarySlack && xi[n] <= 1.0 + kBoundarySlack)) {
      throw DomainError("reference coordinate " + std::to_string(n + 1) + " = " +
                        std::to_string(xi[n]) + " lies outside [-1, 1]");
    }
    const Interval& iv = space[n];
    const double t = std::clamp(xi[n], -1.0, 1.0);
    y[n] = 0.5 * (iv.lower + iv.upper) + 0.5 * iv.width() * t;
  }
  return y;
}

double density(std::span<const double> y, const RandomSpace& space) {
  if (!space.contains(y)) return 0.0;
  double rho = 1.0;
  for (const Interval& iv : space.intervals()) rho /= iv.width();
  return rho;
}

std::uint64_t CounterRng::next_u64() {
  const std::uint64_t word = splitmix64(seed_ ^ splitmix64(counter_));
  ++counter_;
  return word;
}

double CounterRng::next_uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::vector<double> sample(const RandomSpace& space, CounterRng& rng) {
  std::vector<double> y(space.dimension());
  for (std::size_t n = 0; n < y.size(); ++n) {
    const Interval& iv = space[n];
    y[n] = iv.lower + iv.width() * rng.next_uniform();
  }
  return y;
}

}  // namespace gbsc
