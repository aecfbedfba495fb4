#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "gbsc/linalg.hpp"
#include "gbsc/wavefield.hpp"

namespace gbsc {

enum class TestFunctionKind {
  bump,            // exp(-|s|^2 / (1 - |s|^2)) for |s| < 1
  characteristic,  // indicator of |s| <= 1
};

// psi(x) = base(scale * (x - shift)), componentwise scale.
struct TestFunction {
  TestFunctionKind kind = TestFunctionKind::bump;
  Vec scale;
  Vec shift;

  int dimension() const { return static_cast<int>(scale.size()); }
  double eval(const Vec& x) const;
  // Bounding box of the support.
  Box support_box() const;
};

double test_function_eval(const TestFunction& psi, const Vec& x);

struct QoIConfig {
  double final_time = 1.0;
  // Quadrature spacing dx = 2 pi eps / points_per_wavelength.
  int points_per_wavelength = 10;
  // Integration box; defaults to the support box padded by one dx.
  std::optional<Box> box;
};

// Trapezoidal lattice for the QoI integral at wavelength eps.
Grid quadrature_grid(const TestFunction& psi, const QoIConfig& config, double epsilon);

// sum_i |u_i|^2 psi(x_i) dx^n over the grid (pairwise summation in node order).
double quadratic_qoi(std::span<const Complex> field, const Grid& grid, const TestFunction& psi);

// Field source for a QoI evaluation: value of u(T, x) at a point.
using PointField = std::function<Complex(const Vec&)>;
double quadratic_qoi(const PointField& field, const Grid& grid, const TestFunction& psi);

// Straight line r -> origin + r * direction in parameter space.
struct ParameterLine {
  std::vector<double> origin;
  std::vector<double> direction;

  std::vector<double> at(double r) const;
};

struct DerivativeProbe {
  std::vector<double> r;
  std::vector<double> value;
  std::vector<double> first;
  std::vector<double> second;
};

// Central differences of Q(y(r)) on the r grid: first (Q(r+h)-Q(r-h))/2h,
// second (Q(r+h)-2Q(r)+Q(r-h))/h^2. Orders above `order` are left empty.
DerivativeProbe derivative_probe(const ParameterLine& line, std::span<const double> r_grid,
                                 int order, double h,
                                 const std::function<double(std::span<const double>)>& qoi);

}  // namespace gbsc
