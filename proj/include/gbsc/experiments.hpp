#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gbsc/montecarlo.hpp"
#include "gbsc/problem.hpp"
#include "gbsc/qoi.hpp"
#include "gbsc/sparse_grid.hpp"

namespace gbsc {

// A CSV table with a header row. Numbers are written with 17 significant
// digits so that reruns can be compared byte for byte.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const;
};

std::string format_number(double value);
std::string format_number(std::size_t value);
std::string format_number(int value);
// "1_40" for 1/40, otherwise the decimal value with '.' replaced by 'p'.
std::string epsilon_tag(double epsilon);

void write_csv(const std::string& path, const Table& table);

// ---------------------------------------------------------------------------
// Collocation convergence

struct ConvergenceRow {
  int level = 0;
  std::size_t eta = 0;
  double expectation = 0.0;
  double error = 0.0;
};

struct ConvergenceStudy {
  double epsilon = 0.0;
  int reference_level = 0;
  std::size_t reference_eta = 0;
  double reference = 0.0;
  std::vector<ConvergenceRow> rows;
  std::size_t evaluations = 0;
};

// Relative error of the level-l expectation against the reference level for
// l = 1..max_level. One cache serves all levels, so every distinct node is
// evaluated once. Throws DataError if the reference is below 1e-14.
ConvergenceStudy run_convergence_study(const RandomSpace& space, const GridSettings& settings,
                                       const Integrand& f, double epsilon = 0.0,
                                       NodeCache* cache = nullptr);
ConvergenceStudy run_convergence_study(const Problem& problem, double epsilon);

Table convergence_table(const ConvergenceStudy& study);

// ---------------------------------------------------------------------------
// Monte Carlo baseline

struct McRow {
  std::size_t eta = 0;
  int run = 0;
  double estimate = 0.0;
  double error = 0.0;
};

struct McResult {
  double epsilon = 0.0;
  double reference = 0.0;
  std::vector<McRow> rows;                         // budgets inner, runs outer
  std::vector<std::pair<double, double>> mean_errors;  // (eta, mean over runs)
  std::optional<double> rate;  // absent when some mean error is zero
};

// Run r draws with seed + r; budgets reuse prefixes of the largest draw.
McResult run_mc_study(const RandomSpace& space, const McStudy& study, const SampleFunction& f,
                      double reference, double epsilon = 0.0);

Table mc_table(const McResult& result);
Table mc_mean_table(const McResult& result);

// ---------------------------------------------------------------------------
// Regularity sweeps and single runs

struct SweepResult {
  double epsilon = 0.0;
  DerivativeProbe probe;
};

SweepResult run_regularity_sweep(const Problem& problem, double epsilon);
Table sweep_table(const SweepResult& result);

Table propagate_table(const Problem& problem, std::span<const double> y, double epsilon);
Table field_table(const Problem& problem, std::span<const double> y, double epsilon);
Table qoi_table(const Problem& problem, std::span<const double> y, double epsilon);
Table grid_table(const SparseRule& rule);

// ---------------------------------------------------------------------------
// Command driver

struct RunOptions {
  std::optional<double> epsilon;
  std::optional<int> level;
  std::optional<double> dt;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
  bool full = false;
};

// Applies the dt, level and seed overrides.
Problem apply_overrides(Problem problem, const RunOptions& options);

// Wavelengths a command runs: --epsilon, else the full list with --full,
// else the desk-scale list.
std::vector<double> study_epsilons(const Problem& problem, const RunOptions& options);

// Runs one of propagate, field, qoi, sweep, grid, converge, mc and writes
// one CSV per (study, wavelength). Returns the written paths.
std::vector<std::string> run_command(const std::string& command, const Problem& problem,
                                     const RunOptions& options);

const std::vector<std::string>& command_names();

}  // namespace gbsc
