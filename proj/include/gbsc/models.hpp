#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gbsc/linalg.hpp"

namespace gbsc {

// Scalar model parameter that is either a constant or an affine function of
// one random coordinate: offset + scale * y[index].
struct Param {
  double offset = 0.0;
  double scale = 0.0;
  std::optional<std::size_t> index;

  static Param constant(double value) { return Param{value, 0.0, std::nullopt}; }
  static Param coordinate(std::size_t index, double scale = 1.0, double offset = 0.0) {
    return Param{offset, scale, index};
  }

  double operator()(std::span<const double> y) const;
};

// ---------------------------------------------------------------------------
// Wave speed

struct SpeedSample {
  double c = 0.0;
  Vec grad;
  Mat hess;
};

// c(x, y) = value(y), any dimension.
struct ConstantSpeed {
  Param value;
};

// 1D: c = 1 + (exp(-(x-1)^2) + bump * exp(-(x+1)^2)) / 2.
struct Example2Speed {
  Param bump;
};

// 2D: c = 1 - strength * exp(-(width1 * x1^2 - width2 * x2^2)).
struct LensSpeed {
  Param strength;
  Param width1;
  Param width2;
};

using SpeedModel = std::variant<ConstantSpeed, Example2Speed, LensSpeed>;

class SpeedField {
 public:
  SpeedField(SpeedModel model, int dimension);

  int dimension() const { return dimension_; }
  const SpeedModel& model() const { return model_; }
  std::string key() const;

  SpeedSample eval(const Vec& x, std::span<const double> y) const;

 private:
  SpeedModel model_;
  int dimension_;
};

SpeedSample speed_eval(const SpeedField& field, const Vec& x, std::span<const double> y);

// Builds a speed field from its catalog key (`constant-speed`, `example2-speed`,
// `lens-speed`); parameters are given in catalog order.
SpeedField make_speed_field(const std::string& key, std::vector<Param> params, int dimension);

// ---------------------------------------------------------------------------
// Initial phase

struct PhaseSample {
  double value = 0.0;
  Vec grad;
  Mat hess;
};

enum class PhaseKind {
  abs,             // |x1|
  square,          // |x|^2
  abs_plus_square, // |x1| + x2^2
  linear,          // -x1
};

class PhaseModel {
 public:
  PhaseModel(PhaseKind kind, int dimension);

  PhaseKind kind() const { return kind_; }
  int dimension() const { return dimension_; }
  std::string key() const;

  // Points where the gradient is undefined ({x1 = 0} for the |x1| phases).
  bool is_singular(const Vec& z) const;
  PhaseSample eval(const Vec& z) const;

 private:
  PhaseKind kind_;
  int dimension_;
};

PhaseModel make_phase_model(const std::string& key, int dimension);

// ---------------------------------------------------------------------------
// Amplitude pulses and initial data

// g(x - s, d) = exp(-sum_i d_i (x_i - s_i)^2). A zero shape component means
// the pulse does not decay along that axis (plane-wave data).
struct GaussianPulse {
  std::vector<Param> center;
  std::vector<Param> shape;
  // +1 or -1; 0 picks the direction whose initial ray points toward the origin.
  int mode = 0;
};

struct PulseAt {
  Vec center;
  Vec shape;
  int mode = 1;

  double value(const Vec& z) const;
};

class InitialWaveData {
 public:
  InitialWaveData(std::vector<GaussianPulse> pulses, PhaseModel phase,
                  std::optional<Box> launch_box = std::nullopt);

  int dimension() const { return phase_.dimension(); }
  const PhaseModel& phase() const { return phase_; }
  const std::vector<GaussianPulse>& pulses() const { return pulses_; }
  const std::optional<Box>& launch_box() const { return launch_box_; }

  PulseAt pulse_at(std::size_t k, std::span<const double> y) const;

  // K0: the configured launch box, or the bounding box of every pulse's
  // region where it exceeds `amplitude_floor`.
  Box launch_region(std::span<const double> y, double amplitude_floor = 1e-8) const;

 private:
  std::vector<GaussianPulse> pulses_;
  PhaseModel phase_;
  std::optional<Box> launch_box_;
};

double initial_amplitude(const InitialWaveData& data, const Vec& z, std::span<const double> y);
PhaseSample initial_phase(const InitialWaveData& data, const Vec& z, std::span<const double> y);

// Throws ConfigError when c <= 0 at any point of a coarse lattice over `region`
// for any corner or midpoint of the parameter box.
class RandomSpace;
// With a mask only the lattice points it accepts are checked.
void check_speed_positive(const SpeedField& field, const Box& region, const RandomSpace& space,
                          int points_per_axis = 21,
                          const std::function<bool(const Vec&)>& mask = {});

}  // namespace gbsc
