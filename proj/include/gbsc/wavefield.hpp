#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "gbsc/beam_propagator.hpp"
#include "gbsc/linalg.hpp"
#include "gbsc/models.hpp"

namespace gbsc {

struct WaveConfig {
  double epsilon = 1.0 / 40.0;
  int dimension = 1;
};

struct LaunchOptions {
  // Lattice points where a pulse is below this amplitude launch no beam.
  double amplitude_threshold = 1e-8;
  // A beam is skipped at x once its Gaussian factor drops below this value.
  // Zero disables truncation.
  double truncation = 1e-12;
};

struct LaunchedBeam {
  BeamState state;
  Vec launch_point;
  std::size_t pulse = 0;
  int mode = 1;
  // Squared radius beyond which the beam's Gaussian factor is below the truncation.
  double cutoff_sq = 0.0;
};

// Beams launched from a lattice over K0 and propagated to a common final time.
class BeamEnsemble {
 public:
  BeamEnsemble(std::vector<LaunchedBeam> beams, double spacing, Box region, double epsilon,
               int dimension);

  const std::vector<LaunchedBeam>& beams() const { return beams_; }
  std::size_t size() const { return beams_.size(); }
  double spacing() const { return spacing_; }
  const Box& region() const { return region_; }
  double epsilon() const { return epsilon_; }
  int dimension() const { return dimension_; }
  // (2 pi eps)^(-n/2) dz^n.
  double weight() const;

  // Ensemble holding this ensemble's beams followed by `other`'s.
  BeamEnsemble concatenated(const BeamEnsemble& other) const;

 private:
  std::vector<LaunchedBeam> beams_;
  double spacing_;
  Box region_;
  double epsilon_;
  int dimension_;
};

// Cell-centred launch lattice with spacing dz over the box, shifted by half a
// cell when a node would land on a singular set of the phase.
std::vector<Vec> launch_lattice(const Box& region, double spacing, const PhaseModel& phase);

BeamEnsemble launch_ensemble(const InitialWaveData& data, std::span<const double> y,
                             const SpeedField& speed, const WaveConfig& wave,
                             const PropagationConfig& config, const LaunchOptions& options = {});

// a0 exp(i [phi0 + (x-q).p + (x-q).M(x-q)/2] / eps).
Complex beam_value(const BeamState& beam, const Vec& x, double epsilon);

// Squared cutoff radius for a beam and truncation tolerance (infinity when
// the tolerance is zero).
double beam_cutoff_sq(const BeamState& beam, double epsilon, double truncation);

Complex superpose(const BeamEnsemble& ensemble, const Vec& x);

// Uniform axis-aligned lattice: node(i) = lower + i * spacing per axis.
struct Grid {
  Vec lower;
  double spacing = 0.0;
  std::array<std::size_t, 2> counts{1, 1};

  int dimension() const { return static_cast<int>(lower.size()); }
  std::size_t size() const { return counts[0] * counts[1]; }
  Vec node(std::size_t flat) const;
  double coordinate(int axis, std::size_t i) const {
    return lower[axis] + static_cast<double>(i) * spacing;
  }
};

// Superposition at every grid node, flat index i0 + counts[0] * i1.
std::vector<Complex> field_on_grid(const BeamEnsemble& ensemble, const Grid& grid);

// Exact solution for one-dimensional constant speed: every pulse travels
// rigidly, u = sum_k g_k(x - v_k t) exp(i Phi0(x - v_k t) / eps), where v_k is
// c times the pulse's initial ray direction.
Complex exact_dalembert(const InitialWaveData& data, const SpeedField& speed, double t, double x,
                        std::span<const double> y, double epsilon);

}  // namespace gbsc
