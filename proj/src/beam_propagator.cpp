#include "gbsc/beam_propagator.hpp"

#include <cmath>
#include <sstream>

#include "gbsc/errors.hpp"

namespace gbsc {

double PropagationConfig::default_dt(double final_time) {
  return final_time > 0.0 ? std::min(1e-3, final_time / 1000.0) : 1e-3;
}

RiccatiCoefficients riccati_coefficients(const SpeedSample& speed, const Vec& p) {
  const int n = static_cast<int>(p.size());
  const double norm = p.norm();
  RiccatiCoefficients r;
  r.D = norm * speed.hess;
  r.B = (p * speed.grad.transpose()) / norm;
  r.C = (speed.c / norm) * Mat::Identity(n, n) -
        (speed.c / (norm * norm * norm)) * (p * p.transpose());
  return r;
}

BeamState init_beam(const Vec& z, const PhaseSample& phase, double amplitude) {
  const int n = static_cast<int>(z.size());
  BeamState s;
  s.t = 0.0;
  s.q = z;
  s.p = phase.grad;
  s.M = phase.hess.cast<Complex>() + Complex(0.0, 1.0) * CMat::Identity(n, n);
  s.phi0 = phase.value;
  s.a0 = Complex(amplitude, 0.0);
  return s;
}

BeamState init_beam(const Vec& z, std::span<const double> y, const InitialWaveData& data) {
  return init_beam(z, initial_phase(data, z, y), initial_amplitude(data, z, y));
}

void symmetrize(CMat& m) {
  if (m.rows() == 2) {
    const Complex off = 0.5 * (m(0, 1) + m(1, 0));
    m(0, 1) = off;
    m(1, 0) = off;
  }
}

BeamDerivative beam_rhs(const BeamState& state, std::span<const double> y, const SpeedField& speed,
                        int mode, double slowness_floor) {
  const double norm = state.p.norm();
  if (!(norm > slowness_floor)) {
    std::ostringstream msg;
    msg << "slowness |p| = " << norm << " fell below " << slowness_floor << " at t = " << state.t;
    throw DegenerateSlownessError(msg.str());
  }
  const SpeedSample s = speed.eval(state.q, y);
  const RiccatiCoefficients r = riccati_coefficients(s, state.p);
  const double sigma = mode < 0 ? -1.0 : 1.0;
  const CMat& M = state.M;

  BeamDerivative d;
  d.q = sigma * s.c * state.p / norm;
  d.p = -sigma * norm * s.grad;
  d.M = r.D.cast<Complex>() + r.B.transpose().cast<Complex>() * M + M * r.B.cast<Complex>() +
        M * r.C.cast<Complex>() * M;
  symmetrize(d.M);
  d.M *= sigma;
  d.phi0 = 0.0;
  const Complex pMp = state.p.cast<Complex>().dot(M * state.p.cast<Complex>());
  const Complex rate =
      (s.c * M.trace() - s.grad.dot(state.p) - s.c * pMp / (norm * norm)) / (2.0 * norm);
  d.a0 = sigma * rate * state.a0;
  return d;
}

BeamState propagate(const BeamState& beam, const PropagationConfig& config,
                    std::span<const double> y, const SpeedField& speed,
                    const StepObserver& observer) {
  if (!(config.dt > 0.0)) throw ParameterError("time step dt must be positive");
  if (!(config.final_time >= 0.0)) throw ParameterError("final time must be nonnegative");
  const double span = config.final_time - beam.t;
  if (observer) observer(beam);
  if (span <= 0.0) return beam;

  const double raw_steps = std::ceil(span / config.dt - 1e-9);
  if (raw_steps > static_cast<double>(config.max_steps)) {
    std::ostringstream msg;
    msg << "integration to T = " << config.final_time << " with dt = " << config.dt << " needs "
        << raw_steps << " steps, above the budget of " << config.max_steps;
    throw IntegrationError(msg.str());
  }
  const auto steps = static_cast<std::size_t>(std::max(1.0, raw_steps));
  const double h = span / static_cast<double>(steps);
  const double floor = 1e-12 * beam.p.norm();
  auto rhs = [&](const BeamState& s) { return beam_rhs(s, y, speed, config.mode, floor); };

  BeamState state = beam;
  for (std::size_t k = 0; k < steps; ++k) {
    state = rk4_step(state, h, rhs);
    if (k + 1 == steps) state.t = config.final_time;
    const double lambda = min_symmetric_eigenvalue(state.M.imag());
    if (!(lambda > 0.0) || !std::isfinite(std::abs(state.a0))) {
      std::ostringstream msg;
      msg << "Im(M) lost positive definiteness (smallest eigenvalue " << lambda << ") at t = "
          << state.t << "; try a smaller dt than " << h;
      throw IntegrationError(msg.str());
    }
    if (observer) observer(state);
  }
  return state;
}

double hamiltonian(const BeamState& state, std::span<const double> y, const SpeedField& speed) {
  return speed.eval(state.q, y).c * state.p.norm();
}

}  // namespace gbsc
