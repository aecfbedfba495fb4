#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include "gbsc/errors.hpp"
#include "gbsc/sparse_grid.hpp"

using namespace gbsc;

namespace {

RandomSpace reference_box(std::size_t n) {
  return RandomSpace(std::vector<Interval>(n, Interval{-1.0, 1.0}));
}

// Closed-form Clenshaw-Curtis weights for m = n + 1 nodes, scaled to the density 1/2.
std::vector<double> cc_closed_form(int m) {
  if (m == 1) return {1.0};
  const int n = m - 1;
  std::vector<double> w(m);
  for (int k = 0; k <= n; ++k) {
    const double c = (k == 0 || k == n) ? 1.0 : 2.0;
    double s = 1.0;
    for (int j = 1; j <= n / 2; ++j) {
      const double b = (2 * j == n) ? 1.0 : 2.0;
      s -= b / (4.0 * j * j - 1.0) * std::cos(2.0 * j * k * std::numbers::pi / n);
    }
    w[k] = c / n * s / 2.0;
  }
  return w;
}

// Mean of prod x_n^a_n under the uniform density on [-1, 1]^N.
double monomial_mean(const std::vector<int>& a) {
  double r = 1.0;
  for (int e : a) r *= (e % 2) ? 0.0 : 1.0 / (e + 1);
  return r;
}

double monomial(const std::vector<int>& a, std::span<const double> x) {
  double r = 1.0;
  for (std::size_t n = 0; n < a.size(); ++n) r *= std::pow(x[n], a[n]);
  return r;
}

std::set<NodeKey> keys_of(const SparseRule& rule) {
  std::set<NodeKey> out;
  for (const auto& node : rule.nodes) out.insert(node.key);
  return out;
}

int binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  int r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST_SUITE("sparse_grid") {

TEST_CASE("growth rules") {
  CHECK(growth(GrowthRule::linear, 0) == 0);
  CHECK(growth(GrowthRule::linear, 3) == 3);
  CHECK(growth(GrowthRule::nested, 0) == 0);
  CHECK(growth(GrowthRule::nested, 1) == 2);
  CHECK(growth(GrowthRule::nested, 2) == 4);
  CHECK(growth(GrowthRule::nested, 3) == 8);
  CHECK(node_count(GrowthRule::nested, 4) == 17);
}

TEST_CASE("index sets") {
  CHECK(index_set(IndexSetKind::total_degree, 2, 2).size() == 6);
  CHECK(index_set(IndexSetKind::total_degree, 4, 5).size() == 126);
  CHECK(index_set(IndexSetKind::full_tensor, 2, 3).size() == 27);
  CHECK(index_set(IndexSetKind::total_degree, 0, 4).size() == 1);

  // Brute-force enumeration oracle for the hyperbolic cross.
  for (int level : {1, 3, 5}) {
    std::size_t count = 0;
    for (int a = 0; a <= level; ++a)
      for (int b = 0; b <= level; ++b)
        for (int c = 0; c <= level; ++c)
          if ((a + 1) * (b + 1) * (c + 1) <= level + 1) ++count;
    const auto hc = index_set(IndexSetKind::hyperbolic_cross, level, 3);
    CHECK(hc.size() == count);
    CHECK(hc.is_downward_closed());
    for (const auto& j : hc.members()) CHECK((j[0] + 1) * (j[1] + 1) * (j[2] + 1) <= level + 1);
  }
  const auto td = index_set(IndexSetKind::total_degree, 3, 3);
  CHECK(td.is_downward_closed());
  CHECK(td.contains({1, 1, 1}));
  CHECK_FALSE(td.contains({2, 2, 0}));
}

TEST_CASE("combination coefficients") {
  const auto c1 = combination_coeffs(index_set(IndexSetKind::total_degree, 1, 2));
  CHECK(c1.size() == 3);
  CHECK(c1.at({0, 0}) == -1);
  CHECK(c1.at({1, 0}) == 1);
  CHECK(c1.at({0, 1}) == 1);

  // Total degree: C(j) = (-1)^(L-|j|) binom(N-1, L-|j|).
  const int level = 4;
  const std::size_t dim = 3;
  const auto set = index_set(IndexSetKind::total_degree, level, dim);
  const auto c = combination_coeffs(set);
  int total = 0;
  for (const auto& j : set.members()) {
    int s = 0;
    for (int v : j) s += v;
    const int expect = ((level - s) % 2 ? -1 : 1) * binom(dim - 1, level - s);
    const auto it = c.find(j);
    CHECK((it == c.end() ? 0 : it->second) == expect);
    if (it != c.end()) total += it->second;
  }
  CHECK(total == 1);

  const auto ft = combination_coeffs(index_set(IndexSetKind::full_tensor, 3, 2));
  CHECK(ft.size() == 1);
  CHECK(ft.at({3, 3}) == 1);

  IndexSet holey(2, {{0, 0}, {2, 0}});
  CHECK_FALSE(holey.is_downward_closed());
  CHECK_THROWS_AS(combination_coeffs(holey), StructureError);
  CHECK_THROWS_AS(combination_coeffs(IndexSet(2, {{1, 0}})), StructureError);
}

TEST_CASE("univariate Clenshaw-Curtis") {
  CHECK(univariate_nodes(NodeFamilyKind::clenshaw_curtis, 1) == std::vector<double>{0.0});
  const auto x3 = univariate_nodes(NodeFamilyKind::clenshaw_curtis, 3);
  CHECK(x3[0] == -1.0);
  CHECK(x3[1] == 0.0);
  CHECK(x3[2] == 1.0);
  const auto x5 = univariate_nodes(NodeFamilyKind::clenshaw_curtis, 5);
  CHECK(x5[1] == doctest::Approx(-std::sqrt(0.5)).epsilon(1e-15));
  CHECK(x5[2] == 0.0);
  CHECK(x5[3] == -x5[1]);

  const auto w3 = univariate_weights(NodeFamilyKind::clenshaw_curtis, 3);
  CHECK(w3[0] == doctest::Approx(1.0 / 6).epsilon(1e-15));
  CHECK(w3[1] == doctest::Approx(2.0 / 3).epsilon(1e-15));
  CHECK(w3[2] == doctest::Approx(1.0 / 6).epsilon(1e-15));
  for (int m : {2, 3, 5, 9, 17, 33, 65}) {
    const auto w = univariate_weights(NodeFamilyKind::clenshaw_curtis, m);
    const auto oracle = cc_closed_form(m);
    for (int k = 0; k < m; ++k) CHECK(std::abs(w[k] - oracle[k]) < 1e-14);
  }
}

TEST_CASE("univariate Gauss-Legendre") {
  const auto x2 = univariate_nodes(NodeFamilyKind::gauss_legendre, 2);
  CHECK(x2[1] == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-15));
  const auto w2 = univariate_weights(NodeFamilyKind::gauss_legendre, 2);
  CHECK(w2[0] == doctest::Approx(0.5));
  const auto x3 = univariate_nodes(NodeFamilyKind::gauss_legendre, 3);
  CHECK(x3[2] == doctest::Approx(std::sqrt(0.6)).epsilon(1e-15));
  const auto w3 = univariate_weights(NodeFamilyKind::gauss_legendre, 3);
  CHECK(w3[1] == doctest::Approx(4.0 / 9).epsilon(1e-15));
  // m nodes integrate degree 2m - 1 exactly.
  for (int m : {4, 7, 12}) {
    const auto x = univariate_nodes(NodeFamilyKind::gauss_legendre, m);
    const auto w = univariate_weights(NodeFamilyKind::gauss_legendre, m);
    for (int e = 0; e <= 2 * m - 1; ++e) {
      double s = 0;
      for (int k = 0; k < m; ++k) s += w[k] * std::pow(x[k], e);
      CHECK(std::abs(s - monomial_mean({e})) < 1e-14);
    }
  }
}

TEST_CASE("node keys") {
  using K = NodeFamilyKind;
  CHECK(axis_key(K::clenshaw_curtis, 1, 0) == axis_key(K::clenshaw_curtis, 3, 1));
  CHECK(axis_key(K::clenshaw_curtis, 3, 2) == axis_key(K::clenshaw_curtis, 9, 8));
  CHECK(axis_key(K::clenshaw_curtis, 5, 1) == axis_key(K::clenshaw_curtis, 9, 2));
  CHECK_FALSE(axis_key(K::clenshaw_curtis, 5, 1) == axis_key(K::clenshaw_curtis, 9, 1));
  CHECK(format_key({axis_key(K::clenshaw_curtis, 3, 0)}) == "1:0");
  CHECK(format_key({axis_key(K::clenshaw_curtis, 1, 0)}) == "1:1");
  CHECK(format_key({axis_key(K::clenshaw_curtis, 3, 2)}) == "1:2");
  CHECK(format_key({axis_key(K::clenshaw_curtis, 9, 3), axis_key(K::clenshaw_curtis, 5, 1)}) ==
        "3:3.2:1");
}

TEST_CASE("sparse rule node counts and collapse") {
  NodeFamily cc;
  const auto space2 = reference_box(2);
  CHECK(assemble_rule(space2, IndexSetKind::total_degree, 1, cc).size() == 5);
  CHECK(assemble_rule(space2, IndexSetKind::total_degree, 2, cc).size() == 13);
  CHECK(assemble_rule(reference_box(5), IndexSetKind::total_degree, 4, cc).size() == 801);

  // One dimension: the sparse rule is the univariate rule.
  const RandomSpace line({Interval{2.0, 5.0}});
  for (int level = 0; level <= 5; ++level) {
    const auto sparse = assemble_rule(line, IndexSetKind::total_degree, level, cc);
    const auto tensor = tensor_rule(line, cc, node_count(GrowthRule::nested, level));
    REQUIRE(sparse.size() == tensor.size());
    for (std::size_t k = 0; k < sparse.size(); ++k) {
      CHECK(sparse.nodes[k].key == tensor.nodes[k].key);
      CHECK(std::abs(sparse.nodes[k].weight - tensor.nodes[k].weight) < 1e-15);
      CHECK(sparse.nodes[k].point[0] == doctest::Approx(tensor.nodes[k].point[0]));
    }
  }

  // A full-tensor set reproduces the tensor rule.
  const auto ft = assemble_rule(space2, IndexSetKind::full_tensor, 3, cc);
  const auto t9 = tensor_rule(space2, cc, 9);
  REQUIRE(ft.size() == t9.size());
  for (std::size_t k = 0; k < ft.size(); ++k) {
    CHECK(ft.nodes[k].key == t9.nodes[k].key);
    CHECK(std::abs(ft.nodes[k].weight - t9.nodes[k].weight) < 1e-14);
  }
}

TEST_CASE("weights sum to one") {
  for (auto kind : {IndexSetKind::total_degree, IndexSetKind::hyperbolic_cross, IndexSetKind::full_tensor}) {
    for (std::size_t n : {1u, 2u, 3u}) {
      const auto rule = assemble_rule(reference_box(n), kind, 3, NodeFamily{});
      CHECK(std::abs(rule.weight_sum() - 1.0) < 1e-13);
    }
  }
  const NodeFamily gl{NodeFamilyKind::gauss_legendre, GrowthRule::linear};
  CHECK(std::abs(assemble_rule(reference_box(3), IndexSetKind::total_degree, 4, gl).weight_sum() - 1.0) < 1e-13);
  CHECK_THROWS_AS(assemble_rule(reference_box(2), IndexSetKind::total_degree, 2,
                                NodeFamily{NodeFamilyKind::gauss_legendre, GrowthRule::nested}),
                  ParameterError);
}

TEST_CASE("polynomial exactness") {
  // Exact for every monomial with a_n <= p(j_n) for some j in the index set.
  const std::size_t dim = 3;
  const int level = 3;
  const auto space = reference_box(dim);
  for (const NodeFamily family : {NodeFamily{}, NodeFamily{NodeFamilyKind::clenshaw_curtis, GrowthRule::linear},
                                  NodeFamily{NodeFamilyKind::gauss_legendre, GrowthRule::linear}}) {
    const auto set = index_set(IndexSetKind::total_degree, level, dim);
    const auto rule = assemble_rule(space, set, family);
    for (const auto& j : set.members()) {
      std::vector<int> a(dim);
      for (std::size_t n = 0; n < dim; ++n) a[n] = growth(family.growth, j[n]);
      const double q = integrate(rule, [&](std::span<const double> y) { return monomial(a, y); });
      CHECK(std::abs(q - monomial_mean(a)) < 1e-13);
    }
  }
  // Mean of prod y_n^2 on a shifted box.
  const RandomSpace box({Interval{1.0, 2.0}, Interval{0.0, 3.0}});
  const auto rule = assemble_rule(box, IndexSetKind::total_degree, 2, NodeFamily{});
  const double q = integrate(rule, [](std::span<const double> y) { return y[0] * y[0] * y[1] * y[1]; });
  CHECK(q == doctest::Approx(7.0 / 3 * 3.0).epsilon(1e-14));
}

TEST_CASE("nested rules share nodes") {
  const auto space = reference_box(3);
  std::set<NodeKey> prev;
  for (int level = 0; level <= 4; ++level) {
    const auto keys = keys_of(assemble_rule(space, IndexSetKind::total_degree, level, NodeFamily{}));
    CHECK(std::includes(keys.begin(), keys.end(), prev.begin(), prev.end()));
    prev = keys;
  }
}

TEST_CASE("interpolation") {
  const RandomSpace space({Interval{0.0, 1.0}, Interval{1.0, 3.0}});
  const auto set = index_set(IndexSetKind::total_degree, 3, 2);
  const NodeFamily cc;
  auto f = [](std::span<const double> y) { return std::exp(y[0]) * std::sin(y[1]); };
  const auto rule = assemble_rule(space, set, cc);
  for (const auto& node : rule.nodes) {
    CHECK(interpolate(space, set, cc, f, node.point) == doctest::Approx(f(node.point)).epsilon(1e-12));
  }
  auto cubic = [](std::span<const double> y) { return 1.0 + y[0] * y[0] * y[0] - 2 * y[1] * y[1] + y[0] * y[1]; };
  for (double a : {0.13, 0.77})
    for (double b : {1.1, 2.6}) {
      std::vector<double> y{a, b};
      CHECK(interpolate(space, set, cc, cubic, y) == doctest::Approx(cubic(y)).epsilon(1e-12));
    }
  std::vector<double> y{0.3, 2.2};
  CHECK(interpolate(space, set, cc, [](std::span<const double>) { return 4.0; }, y) == doctest::Approx(4.0));

  NodeCache cache;
  const double first = interpolate(space, set, cc, f, y, &cache);
  const std::size_t calls = cache.evaluations();
  CHECK(calls == rule.size());
  CHECK(interpolate(space, set, cc, f, y, &cache) == first);
  CHECK(cache.evaluations() == calls);
}

TEST_CASE("cache evaluates each node once") {
  const auto space = reference_box(3);
  NodeCache cache;
  int calls = 0;
  auto f = [&calls](std::span<const double> y) {
#pragma omp atomic
    ++calls;
    return std::cos(y[0] + 2 * y[1] - y[2]);
  };
  SparseRule last;
  for (int level = 1; level <= 4; ++level) {
    last = assemble_rule(space, IndexSetKind::total_degree, level, NodeFamily{});
    const double cached = integrate(last, f, cache);
    CHECK(cached == integrate(last, [](std::span<const double> y) { return std::cos(y[0] + 2 * y[1] - y[2]); }));
  }
  CHECK(cache.evaluations() == last.size());
  CHECK(cache.size() == last.size());
  CHECK_THROWS_AS(cache.at(NodeKey{AxisKey{7, 3}}), ParameterError);
}

TEST_CASE("enum strings") {
  CHECK(parse_index_set_kind("hyperbolic-cross") == IndexSetKind::hyperbolic_cross);
  CHECK(to_string(IndexSetKind::total_degree) == "total-degree");
  CHECK(parse_node_family("gauss-legendre") == NodeFamilyKind::gauss_legendre);
  CHECK(parse_growth_rule("linear") == GrowthRule::linear);
  CHECK_THROWS_AS(parse_index_set_kind("smolyak"), ConfigError);
}

}
