#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gbsc/beam_propagator.hpp"
#include "gbsc/models.hpp"
#include "gbsc/montecarlo.hpp"
#include "gbsc/qoi.hpp"
#include "gbsc/sparse_grid.hpp"
#include "gbsc/stochastic_space.hpp"
#include "gbsc/wavefield.hpp"

namespace gbsc {

enum class FieldSource { beam, exact };

struct GridSettings {
  IndexSetKind index_set = IndexSetKind::total_degree;
  NodeFamily family;
  int max_level = 4;
  int reference_level = 5;
};

struct SweepSettings {
  ParameterLine line;
  double r_min = 0.0;
  double r_max = 0.5;
  int points = 101;
  double h = 1e-2;
  int order = 2;

  std::vector<double> r_grid() const;
};

// One fully specified experiment: model, wave parameters and study settings.
struct Problem {
  std::string name;
  RandomSpace space;
  std::optional<SpeedField> speed;
  std::optional<InitialWaveData> data;
  TestFunction psi;
  double final_time = 1.0;
  int points_per_wavelength = 10;
  std::optional<double> dt;
  FieldSource source = FieldSource::beam;
  LaunchOptions launch;
  std::vector<double> epsilons{1.0 / 20.0, 1.0 / 40.0};
  std::vector<double> full_epsilons;
  std::vector<double> nominal;  // default parameter point for single runs
  GridSettings grid;
  McStudy mc = McStudy::defaults();
  std::optional<SweepSettings> sweep;

  int dimension() const { return data ? data->dimension() : 0; }
  PropagationConfig propagation() const;
  QoIConfig qoi_config() const;
  WaveConfig wave(double epsilon) const;

  // Positivity of the speed over the launch region and the QoI support, and
  // the basic consistency checks; throws ConfigError.
  void validate() const;
};

Problem parse_problem(const std::string& json_text);
Problem load_problem(const std::string& path);

// Beam ensemble at the final time.
BeamEnsemble build_ensemble(const Problem& problem, std::span<const double> y, double epsilon);

// Wave field at the final time on the QoI quadrature grid.
std::vector<Complex> field_values(const Problem& problem, std::span<const double> y,
                                  double epsilon, const Grid& grid);

// Q(y) for the configured field source.
double qoi_eval(const Problem& problem, std::span<const double> y, double epsilon);
double qoi_eval(const Problem& problem, std::span<const double> y, double epsilon,
                int points_per_wavelength);

std::string to_string(FieldSource source);

}  // namespace gbsc
