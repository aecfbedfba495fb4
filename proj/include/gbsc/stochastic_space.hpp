#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace gbsc {

struct Interval {
  double lower = 0.0;
  double upper = 1.0;

  double width() const { return upper - lower; }
};

// Only uniform densities are implemented; the enum leaves room for other
// bounded densities.
enum class DensityKind { uniform };

// Random parameter domain: a box of independent coordinates, each with a
// bounded density.
class RandomSpace {
 public:
  RandomSpace() = default;
  explicit RandomSpace(std::vector<Interval> intervals);

  std::size_t dimension() const { return intervals_.size(); }
  const Interval& operator[](std::size_t n) const { return intervals_[n]; }
  std::span<const Interval> intervals() const { return intervals_; }
  DensityKind density_kind(std::size_t) const { return DensityKind::uniform; }

  bool contains(std::span<const double> y) const;

 private:
  std::vector<Interval> intervals_;
};

// Affine map from the parameter box onto [-1, 1]^N.
std::vector<double> map_to_reference(std::span<const double> y, const RandomSpace& space);
std::vector<double> map_from_reference(std::span<const double> xi, const RandomSpace& space);

// Joint density: product of 1/(upper - lower) inside the box, zero outside.
double density(std::span<const double> y, const RandomSpace& space);

// Counter-based generator (splitmix64 finalizer over seed and counter).
// The stream is fully determined by (seed, counter) on every platform, so a
// Monte Carlo run is reproducible from its seed alone.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t counter = 0)
      : seed_(seed), counter_(counter) {}

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double next_uniform();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

std::vector<double> sample(const RandomSpace& space, CounterRng& rng);

}  // namespace gbsc
