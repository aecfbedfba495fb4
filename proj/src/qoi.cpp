#include "gbsc/qoi.hpp"

#include <cmath>
#include <numbers>

#include "gbsc/errors.hpp"
#include "gbsc/parallel.hpp"
#include "gbsc/summation.hpp"

namespace gbsc {

double TestFunction::eval(const Vec& x) const {
  double r2 = 0.0;
  for (int i = 0; i < dimension(); ++i) {
    const double s = scale[i] * (x[i] - shift[i]);
    r2 += s * s;
  }
  switch (kind) {
    case TestFunctionKind::bump: return r2 < 1.0 ? std::exp(-r2 / (1.0 - r2)) : 0.0;
    case TestFunctionKind::characteristic: return r2 <= 1.0 ? 1.0 : 0.0;
  }
  return 0.0;
}

Box TestFunction::support_box() const {
  Box b{shift, shift};
  for (int i = 0; i < dimension(); ++i) {
    const double half = 1.0 / std::abs(scale[i]);
    b.lower[i] -= half;
    b.upper[i] += half;
  }
  return b;
}

double test_function_eval(const TestFunction& psi, const Vec& x) { return psi.eval(x); }

Grid quadrature_grid(const TestFunction& psi, const QoIConfig& config, double epsilon) {
  if (config.points_per_wavelength < 2) {
    throw ParameterError("points_per_wavelength must be at least 2");
  }
  if (!(epsilon > 0.0)) throw ParameterError("epsilon must be positive");
  const double dx = 2.0 * std::numbers::pi * epsilon / config.points_per_wavelength;
  Box box;
  if (config.box) {
    box = *config.box;
  } else {
    box = psi.support_box();
    box.lower.array() -= dx;
    box.upper.array() += dx;
  }
  Grid grid;
  grid.lower = box.lower;
  grid.spacing = dx;
  for (int i = 0; i < box.dimension(); ++i) {
    grid.counts[i] =
        static_cast<std::size_t>(std::floor((box.upper[i] - box.lower[i]) / dx + 1e-9)) + 1;
  }
  return grid;
}

double quadratic_qoi(std::span<const Complex> field, const Grid& grid, const TestFunction& psi) {
  if (field.size() != grid.size()) throw ParameterError("field and grid sizes differ");
  std::vector<double> terms(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    const double w = psi.eval(grid.node(i));
    terms[i] = w == 0.0 ? 0.0 : std::norm(field[i]) * w;
  }
  const double cell = std::pow(grid.spacing, grid.dimension());
  return pairwise_sum<double>(terms) * cell;
}

double quadratic_qoi(const PointField& field, const Grid& grid, const TestFunction& psi) {
  std::vector<Complex> values(grid.size(), Complex{0.0, 0.0});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vec x = grid.node(i);
    if (psi.eval(x) != 0.0) values[i] = field(x);
  }
  return quadratic_qoi(values, grid, psi);
}

std::vector<double> ParameterLine::at(double r) const {
  std::vector<double> y(origin.size());
  for (std::size_t n = 0; n < y.size(); ++n) y[n] = origin[n] + r * direction[n];
  return y;
}

DerivativeProbe derivative_probe(const ParameterLine& line, std::span<const double> r_grid,
                                 int order, double h,
                                 const std::function<double(std::span<const double>)>& qoi) {
  if (!(h > 0.0)) throw ParameterError("finite-difference step h must be positive");
  if (order < 0 || order > 2) throw ParameterError("derivative order must be 0, 1 or 2");
  if (line.origin.size() != line.direction.size()) {
    throw ParameterError("line origin and direction differ in length");
  }
  const std::size_t m = r_grid.size();
  const bool stencil = order > 0;
  // Three evaluations per r: r - h, r, r + h.
  std::vector<double> values(m * (stencil ? 3 : 1));
  parallel_for(values.size(), [&](std::size_t i) {
    const std::size_t k = stencil ? i / 3 : i;
    const double offset = stencil ? (static_cast<double>(i % 3) - 1.0) * h : 0.0;
    const std::vector<double> y = line.at(r_grid[k] + offset);
    values[i] = qoi(y);
  });

  DerivativeProbe out;
  out.r.assign(r_grid.begin(), r_grid.end());
  out.value.resize(m);
  if (order >= 1) out.first.resize(m);
  if (order >= 2) out.second.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    if (!stencil) {
      out.value[k] = values[k];
      continue;
    }
    const double minus = values[3 * k];
    const double mid = values[3 * k + 1];
    const double plus = values[3 * k + 2];
    out.value[k] = mid;
    out.first[k] = (plus - minus) / (2.0 * h);
    if (order >= 2) out.second[k] = (plus - 2.0 * mid + minus) / (h * h);
  }
  return out;
}

}  // namespace gbsc
