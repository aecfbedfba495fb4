#include <doctest.h>

#include <cmath>
#include <vector>

#include "gbsc/errors.hpp"
#include "gbsc/qoi.hpp"
#include "gbsc/summation.hpp"

using namespace gbsc;

namespace {

Vec v1(double a) {
  Vec v(1);
  v << a;
  return v;
}

TestFunction bump1d(double scale) {
  TestFunction t;
  t.kind = TestFunctionKind::bump;
  t.scale = v1(scale);
  t.shift = v1(0.0);
  return t;
}

// Dense composite Simpson oracle for the integral of psi.
double dense_integral(const TestFunction& psi, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = psi.eval(v1(a)) + psi.eval(v1(b));
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * psi.eval(v1(a + k * h));
  return s * h / 3.0;
}

}  // namespace

TEST_SUITE("qoi") {

TEST_CASE("bump test function") {
  const auto psi = bump1d(1.0);
  CHECK(psi.eval(v1(0.0)) == 1.0);
  CHECK(psi.eval(v1(1.0)) == 0.0);
  CHECK(psi.eval(v1(-1.0)) == 0.0);
  CHECK(psi.eval(v1(0.6)) == doctest::Approx(std::exp(-0.36 / 0.64)).epsilon(1e-15));
  CHECK(psi.eval(v1(0.6)) == doctest::Approx(0.56978).epsilon(1e-5));
  CHECK(psi.eval(v1(0.999)) < 1e-200);

  TestFunction shifted;
  shifted.kind = TestFunctionKind::bump;
  shifted.scale = Vec::Ones(2);
  shifted.shift = Vec::Zero(2);
  shifted.shift[0] = 1.0;
  Vec x(2);
  x << 1.0, 0.0;
  CHECK(shifted.eval(x) == 1.0);
  const Box b = shifted.support_box();
  CHECK(b.lower[0] == 0.0);
  CHECK(b.upper[0] == 2.0);
}

TEST_CASE("characteristic test function") {
  TestFunction chi;
  chi.kind = TestFunctionKind::characteristic;
  chi.scale = v1(2.0);
  chi.shift = v1(0.0);
  CHECK(chi.eval(v1(0.5)) == 1.0);
  CHECK(chi.eval(v1(-0.5)) == 1.0);
  CHECK(chi.eval(v1(0.51)) == 0.0);
}

TEST_CASE("quadrature of trivial fields") {
  const auto psi = bump1d(2.0);
  QoIConfig cfg;
  const double eps = 1.0 / 80;
  const Grid g = quadrature_grid(psi, cfg, eps);
  CHECK(g.spacing == doctest::Approx(2 * M_PI * eps / 10));
  std::vector<Complex> zero(g.size(), Complex(0, 0));
  CHECK(quadratic_qoi(zero, g, psi) == 0.0);

  std::vector<Complex> ones(g.size(), Complex(1, 0));
  const double q = quadratic_qoi(ones, g, psi);
  const double oracle = dense_integral(psi, -0.5, 0.5, 400000);
  CHECK(std::abs(q - oracle) < 1e-10);
  CHECK(quadratic_qoi([](const Vec&) { return Complex(0, 1); }, g, psi) == doctest::Approx(q).epsilon(1e-14));
}

TEST_CASE("smooth quadrature self-convergence") {
  const auto psi = bump1d(2.0);
  const double eps = 1.0 / 20;
  // Oscillatory intensity |u|^2 with variation on the wavelength scale.
  const PointField u = [eps](const Vec& x) {
    return Complex(1.0 + 0.5 * std::cos(x[0] / eps), 0.3 * std::sin(2 * x[0] / eps + 0.4));
  };
  QoIConfig c10, c20;
  c20.points_per_wavelength = 20;
  const double q10 = quadratic_qoi(u, quadrature_grid(psi, c10, eps), psi);
  const double q20 = quadratic_qoi(u, quadrature_grid(psi, c20, eps), psi);
  CHECK(q10 > 0.0);
  CHECK(std::abs(q10 - q20) <= 1e-6 * std::abs(q20));
}

TEST_CASE("qoi is nonnegative") {
  const auto psi = bump1d(1.0);
  QoIConfig cfg;
  const Grid g = quadrature_grid(psi, cfg, 0.05);
  const PointField u = [](const Vec& x) { return std::sin(7 * x[0]) * std::exp(Complex(0, 3.0 * x[0])); };
  CHECK(quadratic_qoi(u, g, psi) >= 0.0);
}

TEST_CASE("derivative probe") {
  ParameterLine line{{0.0}, {1.0}};
  std::vector<double> r{0.0, 0.5, 1.0};
  auto sq = [](std::span<const double> y) { return y[0] * y[0]; };
  auto p = derivative_probe(line, r, 2, 1e-2, sq);
  for (std::size_t i = 0; i < r.size(); ++i) {
    CHECK(p.value[i] == doctest::Approx(r[i] * r[i]));
    CHECK(p.first[i] == doctest::Approx(2 * r[i]).epsilon(1e-10));
    CHECK(p.second[i] == doctest::Approx(2.0).epsilon(1e-8));
  }
  auto flat = derivative_probe(line, r, 1, 1e-2, [](std::span<const double>) { return 3.0; });
  for (double d : flat.first) CHECK(d == 0.0);
  CHECK_THROWS_AS(derivative_probe(line, r, 2, 0.0, sq), ParameterError);
  CHECK_THROWS_AS(derivative_probe(line, r, 3, 1e-2, sq), ParameterError);

  ParameterLine l2{{1.0, 1.0}, {1.0, -2.0}};
  const auto y = l2.at(0.25);
  CHECK(y[0] == 1.25);
  CHECK(y[1] == 0.5);
}

TEST_CASE("pairwise summation") {
  std::vector<double> v(1000, 0.1);
  CHECK(pairwise_sum<double>(v) == doctest::Approx(100.0).epsilon(1e-14));
  std::vector<double> empty;
  CHECK(pairwise_sum<double>(empty) == 0.0);
}

}
