#include "gbsc/problem.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gbsc/errors.hpp"

namespace gbsc {

using nlohmann::json;

namespace {

double parse_real(const json& v, const std::string& what) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    // Accept "1/40" style fractions for wavelengths.
    const std::string s = v.get<std::string>();
    const auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return std::stod(s);
      return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
    } catch (const std::exception&) {
    }
  }
  throw ConfigError("expected a number for " + what);
}

std::vector<double> parse_reals(const json& v, const std::string& what) {
  if (!v.is_array()) throw ConfigError("expected a list for " + what);
  std::vector<double> out;
  for (const auto& e : v) out.push_back(parse_real(e, what));
  return out;
}

Vec to_vec(const std::vector<double>& v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
  return out;
}

Param parse_param(const json& v, std::size_t random_dims) {
  if (v.is_number() || v.is_string()) return Param::constant(parse_real(v, "parameter"));
  if (!v.is_object() || !v.contains("y")) throw ConfigError("bad model parameter " + v.dump());
  const auto idx = v.at("y").get<std::size_t>();
  if (idx >= random_dims) {
    throw ConfigError("parameter refers to y" + std::to_string(idx) + " outside the random space");
  }
  return Param::coordinate(idx, v.value("scale", 1.0), v.value("offset", 0.0));
}

std::vector<Param> parse_params(const json& v, std::size_t random_dims) {
  std::vector<Param> out;
  if (!v.is_array()) throw ConfigError("expected a parameter list");
  for (const auto& e : v) out.push_back(parse_param(e, random_dims));
  return out;
}

Box parse_box(const json& v, int dim) {
  const auto lo = parse_reals(v.at("lower"), "box lower");
  const auto hi = parse_reals(v.at("upper"), "box upper");
  if (static_cast<int>(lo.size()) != dim || static_cast<int>(hi.size()) != dim) {
    throw ConfigError("box dimension does not match the spatial dimension");
  }
  for (int i = 0; i < dim; ++i) {
    if (!(lo[i] < hi[i])) throw ConfigError("box lower corner must lie below the upper corner");
  }
  return Box{to_vec(lo), to_vec(hi)};
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw ConfigError("unknown key '" + it.key() + "' in " + where);
  }
}

// Lower, midpoint and upper of every random coordinate.
std::vector<std::vector<double>> corner_points(const RandomSpace& space) {
  std::size_t combos = 1;
  for (std::size_t i = 0; i < space.dimension(); ++i) combos *= 3;
  std::vector<std::vector<double>> out;
  for (std::size_t c = 0; c < combos; ++c) {
    std::vector<double> y(space.dimension());
    std::size_t code = c;
    for (std::size_t i = 0; i < space.dimension(); ++i) {
      const int which = static_cast<int>(code % 3);
      code /= 3;
      y[i] = space[i].lower + 0.5 * which * space[i].width();
    }
    out.push_back(std::move(y));
  }
  return out;
}

}  // namespace

std::vector<double> SweepSettings::r_grid() const {
  std::vector<double> r;
  if (points == 1) return {r_min};
  for (int k = 0; k < points; ++k) r.push_back(r_min + (r_max - r_min) * k / (points - 1));
  return r;
}

PropagationConfig Problem::propagation() const {
  PropagationConfig c;
  c.final_time = final_time;
  c.dt = dt.value_or(PropagationConfig::default_dt(final_time));
  return c;
}

QoIConfig Problem::qoi_config() const {
  QoIConfig q;
  q.final_time = final_time;
  q.points_per_wavelength = points_per_wavelength;
  return q;
}

WaveConfig Problem::wave(double epsilon) const { return WaveConfig{epsilon, dimension()}; }

void Problem::validate() const {
  if (!speed || !data) throw ConfigError("problem needs a speed model and initial data");
  if (speed->dimension() != data->dimension() || psi.dimension() != data->dimension()) {
    throw ConfigError("speed, initial data and test function differ in spatial dimension");
  }
  if (!(final_time > 0)) throw ConfigError("final time must be positive");
  if (dt && !(*dt > 0)) throw ConfigError("time step must be positive");
  if (points_per_wavelength < 2) throw ConfigError("need at least 2 points per wavelength");
  if (epsilons.empty()) throw ConfigError("need at least one wavelength");
  for (double e : epsilons) {
    if (!(e > 0)) throw ConfigError("wavelengths must be positive");
  }
  for (double e : full_epsilons) {
    if (!(e > 0)) throw ConfigError("wavelengths must be positive");
  }
  if (grid.reference_level <= grid.max_level) {
    throw ConfigError("reference level must exceed the largest study level");
  }
  if (grid.max_level < 0) throw ConfigError("levels must be nonnegative");
  mc.validate();
  if (nominal.size() != space.dimension() || !space.contains(nominal)) {
    throw ConfigError("nominal parameter point must lie in the random space");
  }
  if (source == FieldSource::exact) {
    if (dimension() != 1 || !std::holds_alternative<ConstantSpeed>(speed->model())) {
      throw ConfigError("the exact field source needs a 1D constant-speed problem");
    }
  }
  if (sweep) {
    if (sweep->line.origin.size() != space.dimension() ||
        sweep->line.direction.size() != space.dimension()) {
      throw ConfigError("sweep line dimension does not match the random space");
    }
    if (sweep->points < 1 || !(sweep->h > 0)) throw ConfigError("bad sweep grid");
  }

  std::optional<Box> region;
  for (const auto& y : corner_points(space)) {
    const Box b = data->launch_region(y);
    region = region ? bounding_box(*region, b) : b;
  }
  check_speed_positive(*speed, *region, space);
  const TestFunction& test = psi;
  check_speed_positive(*speed, psi.support_box(), space, 41,
                       [&test](const Vec& x) { return test.eval(x) > 0.0; });
}

Problem parse_problem(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text, nullptr, true, true);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    check_keys(root,
               {"name", "random_space", "dimension", "speed", "phase", "pulses", "launch_box",
                "test_function", "final_time", "points_per_wavelength", "dt", "source", "epsilon",
                "full_epsilon", "nominal", "sparse_grid", "montecarlo", "sweep", "launch", "notes"},
               "config");
    Problem p;
    p.name = root.value("name", std::string("study"));

    std::vector<Interval> intervals;
    for (const auto& iv : root.at("random_space")) {
      if (!iv.is_array() || iv.size() != 2) throw ConfigError("random_space entries are [lower, upper]");
      intervals.push_back(Interval{parse_real(iv[0], "interval"), parse_real(iv[1], "interval")});
    }
    p.space = RandomSpace(std::move(intervals));
    const std::size_t nrand = p.space.dimension();
    const int dim = root.at("dimension").get<int>();
    if (dim < 1 || dim > kMaxSpatialDim) throw ConfigError("spatial dimension must be 1 or 2");

    const auto& sp = root.at("speed");
    p.speed = make_speed_field(sp.at("model").get<std::string>(),
                               parse_params(sp.value("params", json::array()), nrand), dim);

    PhaseModel phase = make_phase_model(root.at("phase").get<std::string>(), dim);
    std::vector<GaussianPulse> pulses;
    for (const auto& pj : root.at("pulses")) {
      check_keys(pj, {"center", "shape", "mode"}, "pulse");
      GaussianPulse g;
      g.center = parse_params(pj.at("center"), nrand);
      g.shape = parse_params(pj.at("shape"), nrand);
      g.mode = pj.value("mode", 0);
      if (static_cast<int>(g.center.size()) != dim || static_cast<int>(g.shape.size()) != dim) {
        throw ConfigError("pulse center and shape need one entry per spatial axis");
      }
      if (g.mode != 0 && g.mode != 1 && g.mode != -1) throw ConfigError("pulse mode is -1, 0 or 1");
      pulses.push_back(std::move(g));
    }
    if (pulses.empty()) throw ConfigError("need at least one pulse");
    std::optional<Box> launch_box;
    if (root.contains("launch_box")) launch_box = parse_box(root.at("launch_box"), dim);
    p.data = InitialWaveData(std::move(pulses), phase, launch_box);

    const auto& tf = root.at("test_function");
    const std::string kind = tf.value("kind", std::string("bump"));
    if (kind == "bump") {
      p.psi.kind = TestFunctionKind::bump;
    } else if (kind == "characteristic") {
      p.psi.kind = TestFunctionKind::characteristic;
    } else {
      throw ConfigError("unknown test function '" + kind + "'");
    }
    p.psi.scale = tf.contains("scale") ? to_vec(parse_reals(tf.at("scale"), "scale"))
                                       : Vec::Constant(dim, 1.0);
    p.psi.shift = tf.contains("shift") ? to_vec(parse_reals(tf.at("shift"), "shift"))
                                       : Vec::Zero(dim);
    if (p.psi.scale.size() != dim || p.psi.shift.size() != dim) {
      throw ConfigError("test function scale and shift need one entry per spatial axis");
    }

    p.final_time = parse_real(root.at("final_time"), "final_time");
    p.points_per_wavelength = root.value(
        "points_per_wavelength", p.psi.kind == TestFunctionKind::characteristic ? 50 : 10);
    if (root.contains("dt")) p.dt = parse_real(root.at("dt"), "dt");
    const std::string source = root.value("source", std::string("beam"));
    if (source == "beam") {
      p.source = FieldSource::beam;
    } else if (source == "exact") {
      p.source = FieldSource::exact;
    } else {
      throw ConfigError("unknown field source '" + source + "'");
    }
    if (root.contains("epsilon")) p.epsilons = parse_reals(root.at("epsilon"), "epsilon");
    if (root.contains("full_epsilon")) p.full_epsilons = parse_reals(root.at("full_epsilon"), "full_epsilon");

    if (root.contains("nominal")) {
      p.nominal = parse_reals(root.at("nominal"), "nominal");
    } else {
      for (const auto& iv : p.space.intervals()) p.nominal.push_back(0.5 * (iv.lower + iv.upper));
    }

    if (root.contains("launch")) {
      const auto& l = root.at("launch");
      check_keys(l, {"amplitude_threshold", "truncation"}, "launch");
      p.launch.amplitude_threshold = l.value("amplitude_threshold", p.launch.amplitude_threshold);
      p.launch.truncation = l.value("truncation", p.launch.truncation);
    }

    // Reference level defaults by stochastic dimension.
    p.grid.reference_level = nrand <= 3 ? 6 : 5;
    p.grid.max_level = p.grid.reference_level - 1;
    if (root.contains("sparse_grid")) {
      const auto& g = root.at("sparse_grid");
      check_keys(g, {"index_set", "family", "growth", "max_level", "reference_level"}, "sparse_grid");
      if (g.contains("index_set")) p.grid.index_set = parse_index_set_kind(g.at("index_set"));
      if (g.contains("family")) p.grid.family.kind = parse_node_family(g.at("family"));
      if (g.contains("growth")) p.grid.family.growth = parse_growth_rule(g.at("growth"));
      p.grid.reference_level = g.value("reference_level", p.grid.reference_level);
      p.grid.max_level = g.value("max_level", p.grid.reference_level - 1);
    }

    if (root.contains("montecarlo")) {
      const auto& m = root.at("montecarlo");
      check_keys(m, {"budgets", "repetitions", "seed"}, "montecarlo");
      if (m.contains("budgets")) p.mc.budgets = m.at("budgets").get<std::vector<std::size_t>>();
      p.mc.repetitions = m.value("repetitions", p.mc.repetitions);
      p.mc.seed = m.value("seed", p.mc.seed);
    }

    if (root.contains("sweep")) {
      const auto& s = root.at("sweep");
      check_keys(s, {"origin", "direction", "r_min", "r_max", "points", "h"}, "sweep");
      SweepSettings sw;
      sw.line.origin = parse_reals(s.at("origin"), "sweep origin");
      sw.line.direction = parse_reals(s.at("direction"), "sweep direction");
      sw.r_min = s.value("r_min", sw.r_min);
      sw.r_max = s.value("r_max", sw.r_max);
      sw.points = s.value("points", sw.points);
      sw.h = s.value("h", sw.h);
      p.sweep = sw;
    }

    p.validate();
    return p;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config error: ") + e.what());
  }
}

Problem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_problem(text.str());
}

BeamEnsemble build_ensemble(const Problem& problem, std::span<const double> y, double epsilon) {
  return launch_ensemble(*problem.data, y, *problem.speed, problem.wave(epsilon),
                         problem.propagation(), problem.launch);
}

std::vector<Complex> field_values(const Problem& problem, std::span<const double> y,
                                  double epsilon, const Grid& grid) {
  if (problem.source == FieldSource::exact) {
    std::vector<Complex> out(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
      out[k] = exact_dalembert(*problem.data, *problem.speed, problem.final_time, grid.node(k)[0],
                               y, epsilon);
    }
    return out;
  }
  return field_on_grid(build_ensemble(problem, y, epsilon), grid);
}

double qoi_eval(const Problem& problem, std::span<const double> y, double epsilon,
                int points_per_wavelength) {
  QoIConfig cfg = problem.qoi_config();
  cfg.points_per_wavelength = points_per_wavelength;
  const Grid grid = quadrature_grid(problem.psi, cfg, epsilon);
  if (problem.source == FieldSource::exact) {
    const auto& data = *problem.data;
    const auto& speed = *problem.speed;
    const double t = problem.final_time;
    return quadratic_qoi(
        [&](const Vec& x) { return exact_dalembert(data, speed, t, x[0], y, epsilon); }, grid,
        problem.psi);
  }
  return quadratic_qoi(field_on_grid(build_ensemble(problem, y, epsilon), grid), grid, problem.psi);
}

double qoi_eval(const Problem& problem, std::span<const double> y, double epsilon) {
  return qoi_eval(problem, y, epsilon, problem.points_per_wavelength);
}

std::string to_string(FieldSource source) {
  return source == FieldSource::beam ? "beam" : "exact";
}

}  // namespace gbsc
