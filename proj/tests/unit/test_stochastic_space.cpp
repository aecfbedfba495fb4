#include <doctest.h>

#include <cmath>
#include <vector>

#include "gbsc/errors.hpp"
#include "gbsc/stochastic_space.hpp"

using namespace gbsc;

TEST_SUITE("stochastic_space") {

TEST_CASE("construction rejects empty intervals") {
  CHECK_THROWS_AS(RandomSpace({{1.0, 1.0}}), DomainError);
  CHECK_THROWS_AS(RandomSpace({{0.0, 1.0}, {2.0, 1.0}}), DomainError);
  CHECK_THROWS_AS(RandomSpace({{0.0, INFINITY}}), DomainError);
}

TEST_CASE("map to reference") {
  RandomSpace s({{0.8, 1.0}});
  std::vector<double> y{0.9};
  CHECK(std::abs(map_to_reference(y, s)[0]) < 1e-14);
  y[0] = 1.0;
  CHECK(map_to_reference(y, s)[0] == 1.0);

  RandomSpace s2({{0.0, 0.4}, {0.65, 0.85}});
  std::vector<double> y2{0.1, 0.7};
  auto xi = map_to_reference(y2, s2);
  CHECK(xi[0] == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(xi[1] == doctest::Approx(-0.5).epsilon(1e-14));
  auto back = map_from_reference(xi, s2);
  CHECK(std::abs(back[0] - 0.1) < 1e-15);
  CHECK(std::abs(back[1] - 0.7) < 1e-15);
}

TEST_CASE("out of bounds names the coordinate") {
  RandomSpace s({{0.0, 1.0}, {0.0, 1.0}});
  std::vector<double> y{0.5, 1.5};
  try {
    map_to_reference(y, s);
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("y2") != std::string::npos);
  }
  std::vector<double> xi{0.0, -1.2};
  CHECK_THROWS_AS(map_from_reference(xi, s), DomainError);
}

TEST_CASE("map from reference") {
  RandomSpace s({{0.8, 1.0}});
  std::vector<double> xi{0.0};
  CHECK(map_from_reference(xi, s)[0] == doctest::Approx(0.9).epsilon(1e-15));
  RandomSpace s2({{0.0, 0.4}});
  xi[0] = -1.0;
  CHECK(map_from_reference(xi, s2)[0] == 0.0);
}

TEST_CASE("round trip on random points") {
  RandomSpace s({{0.8, 1.0}, {1.0, 1.5}, {0.0, 0.5}, {5.0, 10.0}});
  CounterRng rng(7);
  for (int k = 0; k < 1000; ++k) {
    auto y = sample(s, rng);
    auto back = map_from_reference(map_to_reference(y, s), s);
    for (std::size_t n = 0; n < y.size(); ++n) CHECK(std::abs(back[n] - y[n]) <= 1e-14 * std::abs(y[n]) + 1e-15);
  }
}

TEST_CASE("density") {
  RandomSpace s({{0.0, 0.4}});
  std::vector<double> y{0.2};
  CHECK(density(y, s) == doctest::Approx(2.5));
  y[0] = 0.5;
  CHECK(density(y, s) == 0.0);
  RandomSpace s2({{0.8, 1.0}, {1.0, 1.5}});
  std::vector<double> y2{0.85, 1.2};
  CHECK(density(y2, s2) == doctest::Approx(10.0));
}

TEST_CASE("sampling is deterministic and inside the box") {
  RandomSpace s({{0.8, 1.0}, {-3.0, 2.0}});
  CounterRng a(42), b(42), c(43);
  bool differs = false;
  for (int k = 0; k < 100; ++k) {
    auto ya = sample(s, a);
    auto yb = sample(s, b);
    auto yc = sample(s, c);
    CHECK(ya == yb);
    differs = differs || ya != yc;
    CHECK(s.contains(ya));
  }
  CHECK(differs);
}

TEST_CASE("sample mean within three standard errors") {
  RandomSpace s({{0.8, 1.0}});
  CounterRng rng(2024);
  const int n = 100000;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) sum += sample(s, rng)[0];
  const double stderr_ = 0.2 / std::sqrt(12.0) / std::sqrt(double(n));
  CHECK(std::abs(sum / n - 0.9) < 3 * stderr_);
}

TEST_CASE("sample mean error decays like eta^-1/2") {
  // Mean absolute error over 50 streams at each budget, regressed in log-log.
  RandomSpace s({{0.0, 1.0}});
  std::vector<double> lx, ly;
  for (int eta = 100; eta <= 100000; eta *= 10) {
    double err = 0.0;
    for (int r = 0; r < 50; ++r) {
      CounterRng rng(1000 + r);
      double sum = 0.0;
      for (int k = 0; k < eta; ++k) sum += sample(s, rng)[0];
      err += std::abs(sum / eta - 0.5);
    }
    lx.push_back(std::log(double(eta)));
    ly.push_back(std::log(err / 50));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) mx += lx[i], my += ly[i];
  mx /= lx.size();
  my /= ly.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  CHECK(sxy / sxx == doctest::Approx(-0.5).epsilon(0.2));
}

TEST_CASE("counter stream restarts from (seed, counter)") {
  CounterRng a(5);
  for (int k = 0; k < 10; ++k) a.next_u64();
  const auto v = a.next_u64();
  CounterRng b(5, 10);
  CHECK(b.next_u64() == v);
  CounterRng u(9);
  for (int k = 0; k < 1000; ++k) {
    const double x = u.next_uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}

}
