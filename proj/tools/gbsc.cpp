#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gbsc/errors.hpp"
#include "gbsc/experiments.hpp"
#include "gbsc/parallel.hpp"
#include "gbsc/problem.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Gaussian beam solver with sparse-grid stochastic collocation"};
  app.require_subcommand(1);

  std::string config;
  std::optional<std::string> epsilon;
  std::optional<int> level;
  std::optional<double> dt;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
  bool full = false;
  int threads = 0;

  const std::string descriptions[] = {
      "propagate the beam ensemble at the nominal parameters",
      "wave field at the final time on the QoI grid",
      "quantity of interest at the nominal parameters",
      "QoI and its derivatives along the configured parameter line",
      "sparse-grid nodes and weights",
      "collocation convergence study against the reference level",
      "Monte Carlo baseline against the collocation reference",
  };
  std::size_t i = 0;
  for (const auto& name : gbsc::command_names()) {
    auto* sub = app.add_subcommand(name, descriptions[i++]);
    sub->add_option("--config", config, "study config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--epsilon", epsilon, "single wavelength, e.g. 0.025 or 1/40");
    sub->add_option("--level", level, "sparse-grid level (largest study level for converge)");
    sub->add_option("--dt", dt, "RK4 time step");
    sub->add_option("--seed", seed, "Monte Carlo base seed");
    sub->add_option("--out", out, "output directory")->capture_default_str();
    sub->add_flag("--full", full, "use the full wavelength list (long runs)");
    sub->add_option("--threads", threads, "worker threads (0 = runtime default)");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (threads > 0) gbsc::set_thread_count(threads);
    gbsc::RunOptions opts;
    if (epsilon) {
      const auto slash = epsilon->find('/');
      opts.epsilon = slash == std::string::npos
                         ? std::stod(*epsilon)
                         : std::stod(epsilon->substr(0, slash)) / std::stod(epsilon->substr(slash + 1));
    }
    opts.level = level;
    opts.dt = dt;
    opts.seed = seed;
    opts.out_dir = out;
    opts.full = full;

    const gbsc::Problem problem = gbsc::load_problem(config);
    const std::string command = app.get_subcommands().front()->get_name();
    for (const auto& path : gbsc::run_command(command, problem, opts)) std::cout << path << '\n';
  } catch (const gbsc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument&) {
    std::cerr << "error: --epsilon is not a number\n";
    return 2;
  }
  return 0;
}
