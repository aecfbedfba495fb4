#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gbsc/errors.hpp"
#include "gbsc/experiments.hpp"
#include "gbsc/montecarlo.hpp"
#include "gbsc/parallel.hpp"
#include "gbsc/problem.hpp"
#include "gbsc/sparse_grid.hpp"
#include "gbsc/stochastic_space.hpp"

namespace py = pybind11;
using namespace gbsc;

namespace {

// Python callables must run on the thread holding the GIL, so library loops
// that call back into Python are forced onto one thread.
class SerialScope {
 public:
  SerialScope() : saved_(thread_count()) { set_thread_count(1); }
  ~SerialScope() { set_thread_count(saved_); }
  SerialScope(const SerialScope&) = delete;
  SerialScope& operator=(const SerialScope&) = delete;

 private:
  int saved_;
};

using PyFn = std::function<double(py::array_t<double>)>;

py::array_t<double> vector_array(std::span<const double> v) {
  const auto n = static_cast<py::ssize_t>(v.size());
  return py::array_t<double>({n}, {static_cast<py::ssize_t>(sizeof(double))}, v.data());
}

Integrand wrap(const PyFn& f) {
  return [f](std::span<const double> y) {
    return f(vector_array(y));
  };
}

py::array_t<double> matrix(const std::vector<std::vector<double>>& rows, std::size_t cols) {
  py::array_t<double> out({static_cast<py::ssize_t>(rows.size()), static_cast<py::ssize_t>(cols)});
  auto m = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  return out;
}

NodeFamily family_of(const std::string& family, const std::string& growth) {
  return NodeFamily{parse_node_family(family), parse_growth_rule(growth)};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Gaussian-beam wave propagation and sparse-grid stochastic collocation";

  auto base = py::register_exception<Error>(m, "GbscError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<ParameterError>(m, "ParameterError", base.ptr());
  py::register_exception<StructureError>(m, "StructureError", base.ptr());
  py::register_exception<DataError>(m, "DataError", base.ptr());

  m.def("set_thread_count", &set_thread_count, py::arg("threads"));
  m.def("thread_count", &thread_count);

  py::class_<RandomSpace>(m, "RandomSpace")
      .def(py::init([](const std::vector<std::pair<double, double>>& iv) {
             std::vector<Interval> v;
             for (auto [a, b] : iv) v.push_back(Interval{a, b});
             return RandomSpace(std::move(v));
           }),
           py::arg("intervals"))
      .def_property_readonly("dimension", &RandomSpace::dimension)
      .def_property_readonly("intervals",
                             [](const RandomSpace& s) {
                               std::vector<std::pair<double, double>> out;
                               for (const auto& i : s.intervals()) out.emplace_back(i.lower, i.upper);
                               return out;
                             })
      .def("contains", [](const RandomSpace& s, const std::vector<double>& y) { return s.contains(y); })
      .def("to_reference", [](const RandomSpace& s, const std::vector<double>& y) { return map_to_reference(y, s); })
      .def("from_reference", [](const RandomSpace& s, const std::vector<double>& xi) { return map_from_reference(xi, s); })
      .def("__repr__", [](const RandomSpace& s) { return "RandomSpace(dimension=" + std::to_string(s.dimension()) + ")"; });

  m.def("growth", [](const std::string& rule, int j) { return growth(parse_growth_rule(rule), j); },
        py::arg("rule"), py::arg("j"));
  m.def("index_set",
        [](const std::string& kind, int level, std::size_t dim) {
          return index_set(parse_index_set_kind(kind), level, dim).members();
        },
        py::arg("kind"), py::arg("level"), py::arg("dimension"));
  m.def("combination_coeffs",
        [](const std::string& kind, int level, std::size_t dim) {
          return combination_coeffs(index_set(parse_index_set_kind(kind), level, dim));
        },
        py::arg("kind"), py::arg("level"), py::arg("dimension"));
  m.def("univariate_nodes", [](const std::string& f, int mm) { return univariate_nodes(parse_node_family(f), mm); },
        py::arg("family"), py::arg("m"));
  m.def("univariate_weights", [](const std::string& f, int mm) { return univariate_weights(parse_node_family(f), mm); },
        py::arg("family"), py::arg("m"));

  py::class_<SparseRule>(m, "SparseRule")
      .def_property_readonly("size", &SparseRule::size)
      .def("__len__", &SparseRule::size)
      .def_property_readonly("points",
                             [](const SparseRule& r) {
                               std::vector<std::vector<double>> rows;
                               for (const auto& n : r.nodes) rows.push_back(n.point);
                               return matrix(rows, r.nodes.empty() ? 0 : r.nodes[0].point.size());
                             })
      .def_property_readonly("weights",
                             [](const SparseRule& r) {
                               std::vector<double> w;
                               for (const auto& n : r.nodes) w.push_back(n.weight);
                               return vector_array(w);
                             })
      .def_property_readonly("keys",
                             [](const SparseRule& r) {
                               std::vector<std::string> k;
                               for (const auto& n : r.nodes) k.push_back(format_key(n.key));
                               return k;
                             })
      .def("weight_sum", &SparseRule::weight_sum);

  m.def("sparse_rule",
        [](const RandomSpace& space, const std::string& kind, int level, const std::string& family,
           const std::string& growth_rule) {
          return assemble_rule(space, parse_index_set_kind(kind), level, family_of(family, growth_rule));
        },
        py::arg("space"), py::arg("kind") = "total-degree", py::arg("level"),
        py::arg("family") = "clenshaw-curtis", py::arg("growth") = "nested");
  m.def("tensor_rule",
        [](const RandomSpace& space, int mm, const std::string& family, const std::string& growth_rule) {
          return tensor_rule(space, family_of(family, growth_rule), mm);
        },
        py::arg("space"), py::arg("m"), py::arg("family") = "clenshaw-curtis", py::arg("growth") = "nested");
  m.def("integrate",
        [](const SparseRule& rule, const PyFn& f) {
          SerialScope serial;
          return integrate(rule, wrap(f));
        },
        py::arg("rule"), py::arg("f"));
  m.def("interpolate",
        [](const RandomSpace& space, const std::string& kind, int level, const PyFn& f, const std::vector<double>& y,
           const std::string& family, const std::string& growth_rule) {
          SerialScope serial;
          return interpolate(space, index_set(parse_index_set_kind(kind), level, space.dimension()),
                             family_of(family, growth_rule), wrap(f), y);
        },
        py::arg("space"), py::arg("kind"), py::arg("level"), py::arg("f"), py::arg("y"),
        py::arg("family") = "clenshaw-curtis", py::arg("growth") = "nested");

  m.def("draw_samples",
        [](const RandomSpace& space, std::size_t count, std::uint64_t seed) {
          return matrix(draw_samples(space, count, seed), space.dimension());
        },
        py::arg("space"), py::arg("count"), py::arg("seed"));
  m.def("mc_estimate",
        [](const PyFn& f, const RandomSpace& space, std::size_t eta, std::uint64_t seed) {
          SerialScope serial;
          return mc_estimate(wrap(f), space, eta, seed);
        },
        py::arg("f"), py::arg("space"), py::arg("eta"), py::arg("seed"));
  m.def("regression_rate",
        [](const std::vector<std::pair<double, double>>& pts) { return regression_rate(pts); },
        py::arg("points"));

  py::class_<Problem>(m, "Problem")
      .def_readonly("name", &Problem::name)
      .def_readonly("space", &Problem::space)
      .def_readonly("epsilons", &Problem::epsilons)
      .def_readonly("nominal", &Problem::nominal)
      .def_readonly("final_time", &Problem::final_time)
      .def_readonly("points_per_wavelength", &Problem::points_per_wavelength)
      .def_property_readonly("dimension", &Problem::dimension)
      .def_property_readonly("source", [](const Problem& p) { return to_string(p.source); })
      .def(
          "qoi",
          [](const Problem& p, const std::vector<double>& y, double eps, std::optional<int> ppw) {
            py::gil_scoped_release nogil;
            return ppw ? qoi_eval(p, y, eps, *ppw) : qoi_eval(p, y, eps);
          },
          py::arg("y"), py::arg("epsilon"), py::arg("points_per_wavelength") = py::none())
      .def(
          "run",
          [](const Problem& p, const std::string& command, const std::string& out_dir, std::optional<double> eps,
             std::optional<int> level, std::optional<double> dt, std::optional<std::uint64_t> seed, bool full) {
            RunOptions o;
            o.out_dir = out_dir;
            o.epsilon = eps;
            o.level = level;
            o.dt = dt;
            o.seed = seed;
            o.full = full;
            py::gil_scoped_release nogil;
            return run_command(command, p, o);
          },
          py::arg("command"), py::arg("out_dir") = "out", py::arg("epsilon") = py::none(),
          py::arg("level") = py::none(), py::arg("dt") = py::none(), py::arg("seed") = py::none(),
          py::arg("full") = false);

  m.def("load_problem", &load_problem, py::arg("path"));
  m.def("parse_problem", &parse_problem, py::arg("text"));
  m.def("commands", &command_names);
}
