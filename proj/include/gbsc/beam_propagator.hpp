#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "gbsc/linalg.hpp"
#include "gbsc/models.hpp"

namespace gbsc {

// One first-order Gaussian beam at time t: ray position q, slowness p,
// complex symmetric phase Hessian M (Im M > 0), phase constant phi0 and
// complex amplitude a0.
struct BeamState {
  double t = 0.0;
  Vec q;
  Vec p;
  CMat M;
  double phi0 = 0.0;
  Complex a0{0.0, 0.0};

  int dimension() const { return static_cast<int>(q.size()); }
};

// Time derivative of every BeamState component.
struct BeamDerivative {
  Vec q;
  Vec p;
  CMat M;
  double phi0 = 0.0;
  Complex a0{0.0, 0.0};
};

// Coefficients of dM/dt = D + B^T M + M B + M C M.
struct RiccatiCoefficients {
  Mat D;  // |p| hess(c)
  Mat B;  // (p outer grad c) / |p|
  Mat C;  // (c/|p|) I - (c/|p|^3) p outer p
};

RiccatiCoefficients riccati_coefficients(const SpeedSample& speed, const Vec& p);

struct PropagationConfig {
  double dt = 1e-3;
  double final_time = 0.0;
  // +1 integrates the forward eikonal branch, -1 the opposite one (all
  // right-hand sides change sign).
  int mode = 1;
  std::size_t max_steps = 10'000'000;

  // min(1e-3, T/1000).
  static double default_dt(double final_time);
};

// Initial beam launched from z: q = z, p = grad Phi0, M = hess Phi0 + iI,
// phi0 = Phi0(z), a0 = amplitude.
BeamState init_beam(const Vec& z, const PhaseSample& phase, double amplitude);
// Same, with a0 = A0(z) summed over every pulse of the initial data.
BeamState init_beam(const Vec& z, std::span<const double> y, const InitialWaveData& data);

// `slowness_floor` is the |p| below which the ray direction is meaningless.
BeamDerivative beam_rhs(const BeamState& state, std::span<const double> y, const SpeedField& speed,
                        int mode, double slowness_floor = 1e-12);

// Enforces M = M^T by averaging with the transpose.
void symmetrize(CMat& m);

// Classical fourth-order Runge-Kutta step of all components together.
template <typename Rhs>
BeamState rk4_step(const BeamState& s, double dt, const Rhs& rhs) {
  auto advance = [&s](const BeamDerivative& k, double h) {
    BeamState out = s;
    out.t = s.t + h;
    out.q += h * k.q;
    out.p += h * k.p;
    out.M += h * k.M;
    symmetrize(out.M);
    out.phi0 += h * k.phi0;
    out.a0 += h * k.a0;
    return out;
  };
  const BeamDerivative k1 = rhs(s);
  const BeamDerivative k2 = rhs(advance(k1, 0.5 * dt));
  const BeamDerivative k3 = rhs(advance(k2, 0.5 * dt));
  const BeamDerivative k4 = rhs(advance(k3, dt));
  const double w = dt / 6.0;
  BeamState out = s;
  out.t = s.t + dt;
  out.q += w * (k1.q + 2.0 * k2.q + 2.0 * k3.q + k4.q);
  out.p += w * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p);
  out.M += w * (k1.M + 2.0 * k2.M + 2.0 * k3.M + k4.M);
  symmetrize(out.M);
  out.phi0 += w * (k1.phi0 + 2.0 * k2.phi0 + 2.0 * k3.phi0 + k4.phi0);
  out.a0 += w * (k1.a0 + 2.0 * k2.a0 + 2.0 * k3.a0 + k4.a0);
  return out;
}

using StepObserver = std::function<void(const BeamState&)>;

// Integrates from beam.t to config.final_time with a fixed step (dt is shrunk
// slightly so that an integer number of steps lands on the final time).
// The observer, if given, sees the initial state and every accepted step.
BeamState propagate(const BeamState& beam, const PropagationConfig& config,
                    std::span<const double> y, const SpeedField& speed,
                    const StepObserver& observer = {});

// Ray Hamiltonian c(q) |p|.
double hamiltonian(const BeamState& state, std::span<const double> y, const SpeedField& speed);

}  // namespace gbsc
