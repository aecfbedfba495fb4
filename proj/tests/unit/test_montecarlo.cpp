#include <doctest.h>

#include <cmath>
#include <vector>

#include "gbsc/errors.hpp"
#include "gbsc/montecarlo.hpp"
#include "gbsc/parallel.hpp"

using namespace gbsc;

TEST_SUITE("montecarlo") {

TEST_CASE("constant integrand") {
  const RandomSpace space({Interval{0.0, 1.0}, Interval{-2.0, 2.0}});
  for (std::size_t eta : {1u, 7u, 100u}) {
    CHECK(mc_estimate([](std::span<const double>) { return 2.5; }, space, eta, 3) == doctest::Approx(2.5).epsilon(1e-15));
  }
}

TEST_CASE("mean of y1 on [0.8, 1]") {
  const RandomSpace space({Interval{0.8, 1.0}});
  const std::size_t eta = 100000;
  const double est = mc_estimate([](std::span<const double> y) { return y[0]; }, space, eta, 11);
  const double sd = 0.2 / std::sqrt(12.0);
  CHECK(std::abs(est - 0.9) < 4 * sd / std::sqrt(double(eta)));
}

TEST_CASE("determinism and prefix reuse") {
  const RandomSpace space({Interval{0.0, 1.0}, Interval{1.0, 2.0}, Interval{5.0, 10.0}});
  auto f = [](std::span<const double> y) { return y[0] * y[1] + std::sin(y[2]); };
  const int saved = thread_count();
  set_thread_count(1);
  const double a = mc_estimate(f, space, 512, 99);
  set_thread_count(3);
  const double b = mc_estimate(f, space, 512, 99);
  set_thread_count(saved);
  CHECK(a == b);
  CHECK(mc_estimate(f, space, 512, 100) != a);

  const auto big = draw_samples(space, 64, 5);
  const auto small = draw_samples(space, 16, 5);
  for (std::size_t k = 0; k < small.size(); ++k) CHECK(small[k] == big[k]);
  for (const auto& y : big) CHECK(space.contains(y));

  std::vector<std::size_t> budgets{4, 16, 64};
  const auto prefix = mc_prefix_estimates(f, space, budgets, 5);
  REQUIRE(prefix.size() == 3);
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    CHECK(prefix[i] == doctest::Approx(mc_estimate(f, space, budgets[i], 5)).epsilon(1e-15));
  }
}

TEST_CASE("regression rate") {
  std::vector<std::pair<double, double>> half, flat;
  for (double eta : {4.0, 16.0, 64.0, 256.0}) {
    half.push_back({eta, 3.0 / std::sqrt(eta)});
    flat.push_back({eta, 0.1});
  }
  CHECK(regression_rate(half) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(regression_rate(flat)) < 1e-12);
  std::vector<std::pair<double, double>> one{{4.0, 0.1}};
  CHECK_THROWS_AS(regression_rate(one), DataError);
  std::vector<std::pair<double, double>> zero{{4.0, 0.1}, {8.0, 0.0}};
  CHECK_THROWS_AS(regression_rate(zero), DataError);
  std::vector<std::pair<double, double>> same{{4.0, 0.1}, {4.0, 0.2}};
  CHECK_THROWS_AS(regression_rate(same), DataError);
}

TEST_CASE("study validation") {
  McStudy s = McStudy::defaults();
  CHECK(s.budgets.front() == 4);
  CHECK(s.budgets.back() == 4096);
  CHECK_NOTHROW(s.validate());
  s.budgets = {8, 4};
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s.budgets = {4, 8};
  s.repetitions = 0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
}

}
