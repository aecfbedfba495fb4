#include "gbsc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gbsc/errors.hpp"

namespace gbsc {

std::string Table::to_csv() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string format_number(std::size_t value) { return std::to_string(value); }
std::string format_number(int value) { return std::to_string(value); }

std::string epsilon_tag(double epsilon) {
  const double inv = 1.0 / epsilon;
  if (std::abs(inv - std::round(inv)) < 1e-9 * inv) {
    return "1_" + std::to_string(static_cast<long long>(std::round(inv)));
  }
  std::string s = format_number(epsilon);
  std::replace(s.begin(), s.end(), '.', 'p');
  return s;
}

void write_csv(const std::string& path, const Table& table) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << table.to_csv();
}

// ---------------------------------------------------------------------------

ConvergenceStudy run_convergence_study(const RandomSpace& space, const GridSettings& settings,
                                       const Integrand& f, double epsilon, NodeCache* cache) {
  if (settings.reference_level <= settings.max_level) {
    throw ConfigError("reference level must exceed the largest study level");
  }
  NodeCache local;
  NodeCache& values = cache ? *cache : local;
  const std::size_t before = values.evaluations();

  ConvergenceStudy study;
  study.epsilon = epsilon;
  study.reference_level = settings.reference_level;
  // The reference rule holds every node of the nested coarser rules, so it
  // is filled first and the study levels are pure cache hits.
  const SparseRule ref =
      assemble_rule(space, settings.index_set, settings.reference_level, settings.family);
  study.reference = integrate(ref, f, values);
  study.reference_eta = ref.size();
  if (std::abs(study.reference) < 1e-14) {
    throw DataError("reference expectation is degenerate (|E| < 1e-14)");
  }
  for (int level = 1; level <= settings.max_level; ++level) {
    const SparseRule rule = assemble_rule(space, settings.index_set, level, settings.family);
    ConvergenceRow row;
    row.level = level;
    row.eta = rule.size();
    row.expectation = integrate(rule, f, values);
    row.error = std::abs(study.reference - row.expectation) / std::abs(study.reference);
    study.rows.push_back(row);
  }
  study.evaluations = values.evaluations() - before;
  return study;
}

ConvergenceStudy run_convergence_study(const Problem& problem, double epsilon) {
  return run_convergence_study(
      problem.space, problem.grid,
      [&](std::span<const double> y) { return qoi_eval(problem, y, epsilon); }, epsilon);
}

Table convergence_table(const ConvergenceStudy& study) {
  Table t;
  t.header = {"epsilon", "level", "eta", "expectation", "reference", "error"};
  for (const auto& r : study.rows) {
    t.rows.push_back({format_number(study.epsilon), format_number(r.level), format_number(r.eta),
                      format_number(r.expectation), format_number(study.reference),
                      format_number(r.error)});
  }
  t.rows.push_back({format_number(study.epsilon), format_number(study.reference_level),
                    format_number(study.reference_eta), format_number(study.reference),
                    format_number(study.reference), format_number(0.0)});
  return t;
}

// ---------------------------------------------------------------------------

McResult run_mc_study(const RandomSpace& space, const McStudy& study, const SampleFunction& f,
                      double reference, double epsilon) {
  study.validate();
  if (reference == 0.0) throw DataError("monte carlo errors need a nonzero reference");
  McResult result;
  result.epsilon = epsilon;
  result.reference = reference;
  std::vector<double> sums(study.budgets.size(), 0.0);
  for (int run = 0; run < study.repetitions; ++run) {
    const auto estimates =
        mc_prefix_estimates(f, space, study.budgets, study.seed + static_cast<std::uint64_t>(run));
    for (std::size_t b = 0; b < study.budgets.size(); ++b) {
      McRow row;
      row.eta = study.budgets[b];
      row.run = run;
      row.estimate = estimates[b];
      row.error = std::abs(estimates[b] - reference) / std::abs(reference);
      sums[b] += row.error;
      result.rows.push_back(row);
    }
  }
  bool positive = true;
  for (std::size_t b = 0; b < study.budgets.size(); ++b) {
    const double mean = sums[b] / study.repetitions;
    positive = positive && mean > 0.0;
    result.mean_errors.emplace_back(static_cast<double>(study.budgets[b]), mean);
  }
  if (positive && result.mean_errors.size() >= 2) result.rate = regression_rate(result.mean_errors);
  return result;
}

Table mc_table(const McResult& result) {
  Table t;
  t.header = {"epsilon", "eta", "run", "estimate", "error"};
  for (const auto& r : result.rows) {
    t.rows.push_back({format_number(result.epsilon), format_number(r.eta), format_number(r.run),
                      format_number(r.estimate), format_number(r.error)});
  }
  return t;
}

Table mc_mean_table(const McResult& result) {
  Table t;
  t.header = {"epsilon", "eta", "mean_error", "rate"};
  const std::string rate = result.rate ? format_number(*result.rate) : std::string("nan");
  for (const auto& [eta, err] : result.mean_errors) {
    t.rows.push_back({format_number(result.epsilon), format_number(eta), format_number(err), rate});
  }
  return t;
}

// ---------------------------------------------------------------------------

SweepResult run_regularity_sweep(const Problem& problem, double epsilon) {
  if (!problem.sweep) throw ConfigError("config has no sweep section");
  const SweepSettings& s = *problem.sweep;
  const auto r = s.r_grid();
  SweepResult out;
  out.epsilon = epsilon;
  out.probe = derivative_probe(s.line, r, s.order, s.h, [&](std::span<const double> y) {
    return qoi_eval(problem, y, epsilon);
  });
  return out;
}

Table sweep_table(const SweepResult& result) {
  Table t;
  t.header = {"r", "Q", "dQ", "d2Q", "epsilon"};
  const auto& p = result.probe;
  for (std::size_t i = 0; i < p.r.size(); ++i) {
    t.rows.push_back({format_number(p.r[i]), format_number(p.value[i]), format_number(p.first[i]),
                      format_number(p.second[i]), format_number(result.epsilon)});
  }
  return t;
}

Table propagate_table(const Problem& problem, std::span<const double> y, double epsilon) {
  const BeamEnsemble ens = build_ensemble(problem, y, epsilon);
  const int n = problem.dimension();
  Table t;
  t.header = {"beam", "pulse", "mode"};
  const char* axes[2] = {"1", "2"};
  for (int i = 0; i < n; ++i) t.header.push_back(std::string("z") + axes[i]);
  for (int i = 0; i < n; ++i) t.header.push_back(std::string("q") + axes[i]);
  for (int i = 0; i < n; ++i) t.header.push_back(std::string("p") + axes[i]);
  for (const char* h : {"phi0", "a0_re", "a0_im", "im_m_min", "hamiltonian", "epsilon"}) {
    t.header.push_back(h);
  }
  for (std::size_t b = 0; b < ens.size(); ++b) {
    const LaunchedBeam& lb = ens.beams()[b];
    std::vector<std::string> row{format_number(b), format_number(lb.pulse), format_number(lb.mode)};
    for (int i = 0; i < n; ++i) row.push_back(format_number(lb.launch_point[i]));
    for (int i = 0; i < n; ++i) row.push_back(format_number(lb.state.q[i]));
    for (int i = 0; i < n; ++i) row.push_back(format_number(lb.state.p[i]));
    row.push_back(format_number(lb.state.phi0));
    row.push_back(format_number(lb.state.a0.real()));
    row.push_back(format_number(lb.state.a0.imag()));
    const Mat im = lb.state.M.imag();
    row.push_back(format_number(min_symmetric_eigenvalue(im)));
    row.push_back(format_number(hamiltonian(lb.state, y, *problem.speed)));
    row.push_back(format_number(epsilon));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table field_table(const Problem& problem, std::span<const double> y, double epsilon) {
  const Grid grid = quadrature_grid(problem.psi, problem.qoi_config(), epsilon);
  const auto u = field_values(problem, y, epsilon, grid);
  const int n = problem.dimension();
  Table t;
  t.header = {"x1"};
  if (n == 2) t.header.push_back("x2");
  for (const char* h : {"re", "im", "abs", "epsilon"}) t.header.push_back(h);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Vec x = grid.node(k);
    std::vector<std::string> row;
    for (int i = 0; i < n; ++i) row.push_back(format_number(x[i]));
    row.push_back(format_number(u[k].real()));
    row.push_back(format_number(u[k].imag()));
    row.push_back(format_number(std::abs(u[k])));
    row.push_back(format_number(epsilon));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table qoi_table(const Problem& problem, std::span<const double> y, double epsilon) {
  Table t;
  for (std::size_t i = 0; i < y.size(); ++i) t.header.push_back("y" + std::to_string(i + 1));
  t.header.insert(t.header.end(), {"Q", "epsilon", "points_per_wavelength", "source"});
  std::vector<std::string> row;
  for (double v : y) row.push_back(format_number(v));
  row.push_back(format_number(qoi_eval(problem, y, epsilon)));
  row.push_back(format_number(epsilon));
  row.push_back(format_number(problem.points_per_wavelength));
  row.push_back(to_string(problem.source));
  t.rows.push_back(std::move(row));
  return t;
}

Table grid_table(const SparseRule& rule) {
  Table t;
  t.header = {"key"};
  const std::size_t n = rule.nodes.empty() ? 0 : rule.nodes.front().point.size();
  for (std::size_t i = 0; i < n; ++i) t.header.push_back("y" + std::to_string(i + 1));
  t.header.push_back("theta");
  for (const auto& node : rule.nodes) {
    std::vector<std::string> row{format_key(node.key)};
    for (double v : node.point) row.push_back(format_number(v));
    row.push_back(format_number(node.weight));
    t.rows.push_back(std::move(row));
  }
  return t;
}

// ---------------------------------------------------------------------------

Problem apply_overrides(Problem problem, const RunOptions& options) {
  if (options.dt) {
    if (!(*options.dt > 0)) throw ConfigError("--dt must be positive");
    problem.dt = *options.dt;
  }
  if (options.level) {
    if (*options.level < 0) throw ConfigError("--level must be nonnegative");
    problem.grid.max_level = *options.level;
    if (problem.grid.reference_level <= *options.level) {
      problem.grid.reference_level = *options.level + 1;
    }
  }
  if (options.seed) problem.mc.seed = *options.seed;
  return problem;
}

std::vector<double> study_epsilons(const Problem& problem, const RunOptions& options) {
  if (options.epsilon) {
    if (!(*options.epsilon > 0)) throw ConfigError("--epsilon must be positive");
    return {*options.epsilon};
  }
  if (options.full && !problem.full_epsilons.empty()) return problem.full_epsilons;
  return problem.epsilons;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"propagate", "field", "qoi",  "sweep",
                                              "grid",      "converge", "mc"};
  return names;
}

std::vector<std::string> run_command(const std::string& command, const Problem& base,
                                     const RunOptions& options) {
  const Problem problem = apply_overrides(base, options);
  std::vector<std::string> written;
  auto path = [&](const std::string& study, const std::string& suffix) {
    return (std::filesystem::path(options.out_dir) / (problem.name + "_" + study + "_" + suffix + ".csv"))
        .string();
  };
  auto emit = [&](const std::string& p, const Table& t) {
    write_csv(p, t);
    written.push_back(p);
  };

  if (command == "grid") {
    const int level = options.level.value_or(problem.grid.max_level);
    const SparseRule rule =
        assemble_rule(problem.space, problem.grid.index_set, level, problem.grid.family);
    emit(path("grid", "l" + std::to_string(level)), grid_table(rule));
    return written;
  }

  for (double eps : study_epsilons(problem, options)) {
    const std::string tag = "eps" + epsilon_tag(eps);
    if (command == "propagate") {
      emit(path("propagate", tag), propagate_table(problem, problem.nominal, eps));
    } else if (command == "field") {
      emit(path("field", tag), field_table(problem, problem.nominal, eps));
    } else if (command == "qoi") {
      emit(path("qoi", tag), qoi_table(problem, problem.nominal, eps));
    } else if (command == "sweep") {
      emit(path("sweep", tag), sweep_table(run_regularity_sweep(problem, eps)));
    } else if (command == "converge") {
      emit(path("converge", tag), convergence_table(run_convergence_study(problem, eps)));
    } else if (command == "mc") {
      auto f = [&](std::span<const double> y) { return qoi_eval(problem, y, eps); };
      NodeCache cache;
      const SparseRule ref = assemble_rule(problem.space, problem.grid.index_set,
                                           problem.grid.reference_level, problem.grid.family);
      const double reference = integrate(ref, f, cache);
      const McResult mc = run_mc_study(problem.space, problem.mc, f, reference, eps);
      emit(path("mc", tag), mc_table(mc));
      emit(path("mc_mean", tag), mc_mean_table(mc));
    } else {
      throw ConfigError("unknown command '" + command + "'");
    }
  }
  return written;
}

}  // namespace gbsc
