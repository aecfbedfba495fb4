#include "gbsc/wavefield.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <variant>

#include "gbsc/errors.hpp"
#include "gbsc/parallel.hpp"

namespace gbsc {

namespace {

constexpr std::size_t kSegment = 64;

std::vector<Vec> lattice_nodes(const Box& region, double spacing, double offset) {
  const int n = region.dimension();
  std::array<std::size_t, 2> counts{1, 1};
  for (int i = 0; i < n; ++i) {
    const double length = region.upper[i] - region.lower[i];
    // Nodes lower + (k + offset) dz that stay below the upper face.
    const double c = std::ceil(length / spacing - offset);
    counts[i] = c < 1.0 ? 1 : static_cast<std::size_t>(c);
  }
  std::vector<Vec> nodes;
  nodes.reserve(counts[0] * counts[1]);
  for (std::size_t i1 = 0; i1 < counts[1]; ++i1) {
    for (std::size_t i0 = 0; i0 < counts[0]; ++i0) {
      Vec z(n);
      z[0] = region.lower[0] + (static_cast<double>(i0) + offset) * spacing;
      if (n == 2) z[1] = region.lower[1] + (static_cast<double>(i1) + offset) * spacing;
      nodes.push_back(z);
    }
  }
  return nodes;
}

}  // namespace

BeamEnsemble::BeamEnsemble(std::vector<LaunchedBeam> beams, double spacing, Box region,
                           double epsilon, int dimension)
    : beams_(std::move(beams)),
      spacing_(spacing),
      region_(std::move(region)),
      epsilon_(epsilon),
      dimension_(dimension) {
  if (!(spacing_ > 0.0)) throw ParameterError("launch spacing must be positive");
  if (!(epsilon_ > 0.0)) throw ParameterError("epsilon must be positive");
}

double BeamEnsemble::weight() const {
  const double n = static_cast<double>(dimension_);
  return std::pow(2.0 * std::numbers::pi * epsilon_, -0.5 * n) * std::pow(spacing_, n);
}

BeamEnsemble BeamEnsemble::concatenated(const BeamEnsemble& other) const {
  if (other.spacing_ != spacing_ || other.epsilon_ != epsilon_ ||
      other.dimension_ != dimension_) {
    throw ParameterError("only ensembles with equal spacing and epsilon can be concatenated");
  }
  std::vector<LaunchedBeam> all = beams_;
  all.insert(all.end(), other.beams_.begin(), other.beams_.end());
  return BeamEnsemble(std::move(all), spacing_, bounding_box(region_, other.region_), epsilon_,
                      dimension_);
}

std::vector<Vec> launch_lattice(const Box& region, double spacing, const PhaseModel& phase) {
  if (!(spacing > 0.0)) throw ParameterError("launch spacing must be positive");
  for (double offset : {0.5, 0.0}) {
    auto nodes = lattice_nodes(region, spacing, offset);
    bool collides = false;
    for (const Vec& z : nodes) {
      if (phase.is_singular(z)) {
        collides = true;
        break;
      }
    }
    if (!collides) return nodes;
  }
  throw SingularityError("launch lattice cannot avoid the singular set of " + phase.key());
}

double beam_cutoff_sq(const BeamState& beam, double epsilon, double truncation) {
  if (truncation <= 0.0) return std::numeric_limits<double>::infinity();
  const double lambda = min_symmetric_eigenvalue(beam.M.imag());
  return 2.0 * epsilon * std::log(1.0 / truncation) / lambda;
}

BeamEnsemble launch_ensemble(const InitialWaveData& data, std::span<const double> y,
                             const SpeedField& speed, const WaveConfig& wave,
                             const PropagationConfig& config, const LaunchOptions& options) {
  if (!(wave.epsilon > 0.0)) throw ParameterError("epsilon must be positive");
  if (wave.dimension != data.dimension() || speed.dimension() != data.dimension()) {
    throw ConfigError("speed field, initial data and wave configuration disagree on dimension");
  }
  const double spacing = std::sqrt(wave.epsilon);
  const Box region = data.launch_region(y, options.amplitude_threshold > 0.0
                                               ? options.amplitude_threshold
                                               : 1e-8);
  const std::vector<Vec> lattice = launch_lattice(region, spacing, data.phase());

  struct Job {
    std::size_t node;
    std::size_t pulse;
    int mode;
    double amplitude;
  };
  std::vector<Job> jobs;
  for (std::size_t k = 0; k < data.pulses().size(); ++k) {
    const PulseAt pulse = data.pulse_at(k, y);
    for (std::size_t j = 0; j < lattice.size(); ++j) {
      const double a = pulse.value(lattice[j]);
      if (a < options.amplitude_threshold) continue;
      jobs.push_back({j, k, pulse.mode, a});
    }
  }

  std::vector<LaunchedBeam> beams(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) {
    const Job& job = jobs[i];
    const Vec& z = lattice[job.node];
    PropagationConfig cfg = config;
    cfg.mode = job.mode;
    LaunchedBeam& out = beams[i];
    out.launch_point = z;
    out.pulse = job.pulse;
    out.mode = job.mode;
    try {
      out.state = propagate(init_beam(z, data.phase().eval(z), job.amplitude), cfg, y, speed);
    } catch (const IntegrationError& e) {
      std::ostringstream msg;
      msg << "beam launched from z = (" << z[0];
      if (z.size() > 1) msg << ", " << z[1];
      msg << "): " << e.what();
      throw IntegrationError(msg.str());
    }
    out.cutoff_sq = beam_cutoff_sq(out.state, wave.epsilon, options.truncation);
  });
  return BeamEnsemble(std::move(beams), spacing, region, wave.epsilon, wave.dimension);
}

Complex beam_value(const BeamState& beam, const Vec& x, double epsilon) {
  const Vec d = x - beam.q;
  Complex quad;
  if (d.size() == 1) {
    quad = beam.M(0, 0) * (d[0] * d[0]);
  } else {
    quad = beam.M(0, 0) * (d[0] * d[0]) + 2.0 * beam.M(0, 1) * (d[0] * d[1]) +
           beam.M(1, 1) * (d[1] * d[1]);
  }
  const Complex phase = beam.phi0 + d.dot(beam.p) + 0.5 * quad;
  return beam.a0 * std::exp(Complex(0.0, 1.0) * phase / epsilon);
}

Complex superpose(const BeamEnsemble& ensemble, const Vec& x) {
  Complex sum{0.0, 0.0};
  for (const LaunchedBeam& b : ensemble.beams()) {
    if ((x - b.state.q).squaredNorm() > b.cutoff_sq) continue;
    sum += beam_value(b.state, x, ensemble.epsilon());
  }
  return ensemble.weight() * sum;
}

Vec Grid::node(std::size_t flat) const {
  Vec x(dimension());
  x[0] = coordinate(0, flat % counts[0]);
  if (dimension() == 2) x[1] = coordinate(1, flat / counts[0]);
  return x;
}

std::vector<Complex> field_on_grid(const BeamEnsemble& ensemble, const Grid& grid) {
  if (!(grid.spacing > 0.0)) throw ParameterError("grid spacing must be positive");
  if (grid.dimension() != ensemble.dimension()) {
    throw ParameterError("grid and ensemble dimensions differ");
  }
  const std::size_t n0 = grid.counts[0];
  const std::size_t rows = grid.dimension() == 2 ? grid.counts[1] : 1;
  const std::size_t segments = (n0 + kSegment - 1) / kSegment;
  std::vector<Complex> sums(n0 * rows, Complex{0.0, 0.0});
  const double eps = ensemble.epsilon();

  parallel_for(rows * segments, [&](std::size_t task) {
    const std::size_t row = task / segments;
    const std::size_t begin = (task % segments) * kSegment;
    const std::size_t end = std::min(n0, begin + kSegment);
    for (const LaunchedBeam& b : ensemble.beams()) {
      const Vec& q = b.state.q;
      double reach_sq = b.cutoff_sq;
      if (grid.dimension() == 2) {
        const double dy = grid.coordinate(1, row) - q[1];
        reach_sq -= dy * dy;
        if (reach_sq < 0.0) continue;
      }
      // Candidate index window along axis 0, widened by one node; the exact
      // test below matches superpose().
      std::size_t lo = begin;
      std::size_t hi = end;
      if (std::isfinite(reach_sq)) {
        const double reach = std::sqrt(reach_sq);
        const double first = std::floor((q[0] - reach - grid.lower[0]) / grid.spacing) - 1.0;
        const double last = std::ceil((q[0] + reach - grid.lower[0]) / grid.spacing) + 1.0;
        if (last < static_cast<double>(begin) || first >= static_cast<double>(end)) continue;
        lo = std::max(begin, first <= 0.0 ? std::size_t{0} : static_cast<std::size_t>(first));
        hi = std::min(end, static_cast<std::size_t>(last) + 1);
      }
      for (std::size_t i0 = lo; i0 < hi; ++i0) {
        const std::size_t flat = i0 + n0 * row;
        const Vec x = grid.node(flat);
        if ((x - q).squaredNorm() > b.cutoff_sq) continue;
        sums[flat] += beam_value(b.state, x, eps);
      }
    }
  });
  const double w = ensemble.weight();
  for (Complex& v : sums) v = w * v;
  return sums;
}

Complex exact_dalembert(const InitialWaveData& data, const SpeedField& speed, double t, double x,
                        std::span<const double> y, double epsilon) {
  if (data.dimension() != 1 || speed.dimension() != 1) {
    throw ConfigError("the exact solution is available in one dimension only");
  }
  const auto* constant = std::get_if<ConstantSpeed>(&speed.model());
  if (constant == nullptr) {
    throw ConfigError("the exact solution needs constant-speed, got " + speed.key());
  }
  const double c = constant->value(y);
  const PhaseModel& phase = data.phase();
  Complex u{0.0, 0.0};
  Vec z(1);
  for (std::size_t k = 0; k < data.pulses().size(); ++k) {
    const PulseAt pulse = data.pulse_at(k, y);
    double direction = static_cast<double>(pulse.mode);
    if (!phase.is_singular(pulse.center)) {
      direction *= phase.eval(pulse.center).grad[0] >= 0.0 ? 1.0 : -1.0;
    }
    z[0] = x - direction * c * t;
    double phi = 0.0;
    switch (phase.kind()) {
      case PhaseKind::abs: phi = std::abs(z[0]); break;
      case PhaseKind::square: phi = z[0] * z[0]; break;
      case PhaseKind::linear: phi = -z[0]; break;
      case PhaseKind::abs_plus_square: break;  // rejected by PhaseModel in 1D
    }
    u += pulse.value(z) * std::exp(Complex(0.0, phi / epsilon));
  }
  return u;
}

}  // namespace gbsc
