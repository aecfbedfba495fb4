#include "gbsc/models.hpp"

#include <cmath>
#include <string>

#include "gbsc/errors.hpp"
#include "gbsc/stochastic_space.hpp"

namespace gbsc {

namespace {

// |x1| below this counts as lying on the kink of the |x1| phases.
constexpr double kSingularTolerance = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

SpeedSample zero_sample(int n) {
  SpeedSample s;
  s.grad = Vec::Zero(n);
  s.hess = Mat::Zero(n, n);
  return s;
}

double sign(double v) { return v > 0.0 ? 1.0 : -1.0; }

}  // namespace

double Param::operator()(std::span<const double> y) const {
  if (!index) return offset;
  if (*index >= y.size()) {
    throw DomainError("model parameter refers to y" + std::to_string(*index + 1) + " but only " +
                      std::to_string(y.size()) + " random coordinates were given");
  }
  return offset + scale * y[*index];
}

// ---------------------------------------------------------------------------

SpeedField::SpeedField(SpeedModel model, int dimension)
    : model_(std::move(model)), dimension_(dimension) {
  if (dimension_ < 1 || dimension_ > kMaxSpatialDim) {
    throw ConfigError("spatial dimension must be 1 or 2");
  }
  if (std::holds_alternative<Example2Speed>(model_) && dimension_ != 1) {
    throw ConfigError("example2-speed is one-dimensional");
  }
  if (std::holds_alternative<LensSpeed>(model_) && dimension_ != 2) {
    throw ConfigError("lens-speed is two-dimensional");
  }
}

std::string SpeedField::key() const {
  return std::visit(Overloaded{[](const ConstantSpeed&) { return std::string("constant-speed"); },
                               [](const Example2Speed&) { return std::string("example2-speed"); },
                               [](const LensSpeed&) { return std::string("lens-speed"); }},
                    model_);
}

SpeedSample SpeedField::eval(const Vec& x, std::span<const double> y) const {
  SpeedSample s = zero_sample(dimension_);
  std::visit(Overloaded{
                 [&](const ConstantSpeed& m) { s.c = m.value(y); },
                 [&](const Example2Speed& m) {
                   const double b = m.bump(y);
                   const double xm = x[0] - 1.0;
                   const double xp = x[0] + 1.0;
                   const double e1 = std::exp(-xm * xm);
                   const double e2 = std::exp(-xp * xp);
                   s.c = 1.0 + 0.5 * (e1 + b * e2);
                   s.grad[0] = -xm * e1 - b * xp * e2;
                   s.hess(0, 0) = e1 * (2.0 * xm * xm - 1.0) + b * e2 * (2.0 * xp * xp - 1.0);
                 },
                 [&](const LensSpeed& m) {
                   const double a = m.strength(y);
                   const double w1 = m.width1(y);
                   const double w2 = m.width2(y);
                   const double x1 = x[0];
                   const double x2 = x[1];
                   const double e = std::exp(-(w1 * x1 * x1 - w2 * x2 * x2));
                   s.c = 1.0 - a * e;
                   s.grad[0] = 2.0 * a * w1 * x1 * e;
                   s.grad[1] = -2.0 * a * w2 * x2 * e;
                   s.hess(0, 0) = 2.0 * a * w1 * e * (1.0 - 2.0 * w1 * x1 * x1);
                   s.hess(1, 1) = -2.0 * a * w2 * e * (1.0 + 2.0 * w2 * x2 * x2);
                   s.hess(0, 1) = 4.0 * a * w1 * w2 * x1 * x2 * e;
                   s.hess(1, 0) = s.hess(0, 1);
                 }},
             model_);
  return s;
}

SpeedSample speed_eval(const SpeedField& field, const Vec& x, std::span<const double> y) {
  return field.eval(x, y);
}

SpeedField make_speed_field(const std::string& key, std::vector<Param> params, int dimension) {
  auto need = [&](std::size_t count) {
    if (params.size() != count) {
      throw ConfigError(key + " takes " + std::to_string(count) + " parameter(s), got " +
                        std::to_string(params.size()));
    }
  };
  if (key == "constant-speed") {
    need(1);
    return SpeedField(ConstantSpeed{params[0]}, dimension);
  }
  if (key == "example2-speed") {
    need(1);
    return SpeedField(Example2Speed{params[0]}, dimension);
  }
  if (key == "lens-speed") {
    need(3);
    return SpeedField(LensSpeed{params[0], params[1], params[2]}, dimension);
  }
  throw ConfigError("unknown speed model '" + key + "'");
}

// ---------------------------------------------------------------------------

PhaseModel::PhaseModel(PhaseKind kind, int dimension) : kind_(kind), dimension_(dimension) {
  if (dimension_ < 1 || dimension_ > kMaxSpatialDim) {
    throw ConfigError("spatial dimension must be 1 or 2");
  }
  if (kind_ == PhaseKind::abs_plus_square && dimension_ != 2) {
    throw ConfigError("phase-abs-plus-square is two-dimensional");
  }
}

std::string PhaseModel::key() const {
  switch (kind_) {
    case PhaseKind::abs: return "phase-abs";
    case PhaseKind::square: return "phase-square";
    case PhaseKind::abs_plus_square: return "phase-abs-plus-square";
    case PhaseKind::linear: return "phase-linear";
  }
  return "?";
}

bool PhaseModel::is_singular(const Vec& z) const {
  switch (kind_) {
    case PhaseKind::abs:
    case PhaseKind::abs_plus_square: return std::abs(z[0]) <= kSingularTolerance;
    default: return false;
  }
}

PhaseSample PhaseModel::eval(const Vec& z) const {
  if (is_singular(z)) {
    throw SingularityError(key() + " has no gradient at x1 = " + std::to_string(z[0]));
  }
  const int n = dimension_;
  PhaseSample s;
  s.grad = Vec::Zero(n);
  s.hess = Mat::Zero(n, n);
  switch (kind_) {
    case PhaseKind::abs:
      s.value = std::abs(z[0]);
      s.grad[0] = sign(z[0]);
      break;
    case PhaseKind::square:
      s.value = z.squaredNorm();
      s.grad = 2.0 * z;
      s.hess = 2.0 * Mat::Identity(n, n);
      break;
    case PhaseKind::abs_plus_square:
      s.value = std::abs(z[0]) + z[1] * z[1];
      s.grad[0] = sign(z[0]);
      s.grad[1] = 2.0 * z[1];
      s.hess(1, 1) = 2.0;
      break;
    case PhaseKind::linear:
      s.value = -z[0];
      s.grad[0] = -1.0;
      break;
  }
  return s;
}

PhaseModel make_phase_model(const std::string& key, int dimension) {
  if (key == "phase-abs") return PhaseModel(PhaseKind::abs, dimension);
  if (key == "phase-square") return PhaseModel(PhaseKind::square, dimension);
  if (key == "phase-abs-plus-square") return PhaseModel(PhaseKind::abs_plus_square, dimension);
  if (key == "phase-linear") return PhaseModel(PhaseKind::linear, dimension);
  throw ConfigError("unknown phase model '" + key + "'");
}

// ---------------------------------------------------------------------------

double PulseAt::value(const Vec& z) const {
  double exponent = 0.0;
  for (int i = 0; i < center.size(); ++i) {
    const double d = z[i] - center[i];
    exponent += shape[i] * d * d;
  }
  return std::exp(-exponent);
}

InitialWaveData::InitialWaveData(std::vector<GaussianPulse> pulses, PhaseModel phase,
                                 std::optional<Box> launch_box)
    : pulses_(std::move(pulses)), phase_(phase), launch_box_(std::move(launch_box)) {
  const auto n = static_cast<std::size_t>(phase_.dimension());
  for (const auto& p : pulses_) {
    if (p.center.size() != n || p.shape.size() != n) {
      throw ConfigError("pulse center and shape must have " + std::to_string(n) + " components");
    }
    if (p.mode != 0 && p.mode != 1 && p.mode != -1) {
      throw ConfigError("pulse mode must be +1, -1, or 0 (automatic)");
    }
  }
  if (launch_box_ && launch_box_->dimension() != phase_.dimension()) {
    throw ConfigError("launch box dimension does not match the phase dimension");
  }
}

PulseAt InitialWaveData::pulse_at(std::size_t k, std::span<const double> y) const {
  const GaussianPulse& p = pulses_.at(k);
  const int n = dimension();
  PulseAt out;
  out.center = Vec(n);
  out.shape = Vec(n);
  for (int i = 0; i < n; ++i) {
    out.center[i] = p.center[i](y);
    out.shape[i] = p.shape[i](y);
    if (!(out.shape[i] >= 0.0)) {
      throw DomainError("pulse shape exponent must be nonnegative, got " +
                        std::to_string(out.shape[i]));
    }
  }
  if (p.mode != 0) {
    out.mode = p.mode;
  } else if (phase_.is_singular(out.center)) {
    out.mode = 1;
  } else {
    // Travel direction is mode * grad(Phi0); choose it to point at the origin.
    const double outward = out.center.dot(phase_.eval(out.center).grad);
    out.mode = outward > 0.0 ? -1 : 1;
  }
  return out;
}

Box InitialWaveData::launch_region(std::span<const double> y, double amplitude_floor) const {
  if (launch_box_) return *launch_box_;
  if (pulses_.empty()) throw ConfigError("initial data has no pulses");
  const double log_floor = -std::log(amplitude_floor);
  std::optional<Box> region;
  for (std::size_t k = 0; k < pulses_.size(); ++k) {
    const PulseAt p = pulse_at(k, y);
    Box b{p.center, p.center};
    for (int i = 0; i < dimension(); ++i) {
      if (p.shape[i] <= 0.0) {
        throw ConfigError("a pulse without decay along x" + std::to_string(i + 1) +
                          " needs an explicit launch box");
      }
      const double half = std::sqrt(log_floor / p.shape[i]);
      b.lower[i] -= half;
      b.upper[i] += half;
    }
    region = region ? bounding_box(*region, b) : b;
  }
  return *region;
}

double initial_amplitude(const InitialWaveData& data, const Vec& z, std::span<const double> y) {
  double a = 0.0;
  for (std::size_t k = 0; k < data.pulses().size(); ++k) a += data.pulse_at(k, y).value(z);
  return a;
}

PhaseSample initial_phase(const InitialWaveData& data, const Vec& z, std::span<const double>) {
  return data.phase().eval(z);
}

void check_speed_positive(const SpeedField& field, const Box& region, const RandomSpace& space,
                          int points_per_axis, const std::function<bool(const Vec&)>& mask) {
  const std::size_t dims = space.dimension();
  // Each random coordinate visits lower, midpoint and upper.
  std::size_t combos = 1;
  for (std::size_t i = 0; i < dims; ++i) combos *= 3;
  const int n = field.dimension();
  const int per_axis = std::max(points_per_axis, 2);
  const int spatial = n == 1 ? per_axis : per_axis * per_axis;
  std::vector<double> y(dims);
  Vec x(n);
  for (std::size_t c = 0; c < combos; ++c) {
    std::size_t code = c;
    for (std::size_t i = 0; i < dims; ++i) {
      const Interval& iv = space[i];
      const int which = static_cast<int>(code % 3);
      code /= 3;
      y[i] = which == 0 ? iv.lower : (which == 1 ? 0.5 * (iv.lower + iv.upper) : iv.upper);
    }
    for (int s = 0; s < spatial; ++s) {
      int rest = s;
      for (int i = 0; i < n; ++i) {
        const int k = rest % per_axis;
        rest /= per_axis;
        x[i] = region.lower[i] + (region.upper[i] - region.lower[i]) * k / (per_axis - 1);
      }
      if (mask && !mask(x)) continue;
      const double c_val = field.eval(x, y).c;
      if (!(c_val > 0.0)) {
        throw ConfigError(field.key() + " is not positive on the computational domain (c = " +
                          std::to_string(c_val) + ")");
      }
    }
  }
}

}  // namespace gbsc
