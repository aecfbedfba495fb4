#include "gbsc/sparse_grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

#include <Eigen/Dense>

#include "gbsc/errors.hpp"
#include "gbsc/parallel.hpp"
#include "gbsc/summation.hpp"

namespace gbsc {

namespace {

struct UnivariateRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<AxisKey> keys;
};

class UnivariateTable {
 public:
  explicit UnivariateTable(NodeFamilyKind family) : family_(family) {}

  const UnivariateRule& get(int m) {
    auto it = rules_.find(m);
    if (it != rules_.end()) return it->second;
    UnivariateRule r;
    r.nodes = univariate_nodes(family_, m);
    r.weights = univariate_weights(family_, m);
    for (int k = 0; k < m; ++k) r.keys.push_back(axis_key(family_, m, k));
    return rules_.emplace(m, std::move(r)).first->second;
  }

 private:
  NodeFamilyKind family_;
  std::map<int, UnivariateRule> rules_;
};

template <typename Keep>
void enumerate(std::size_t dimension, int bound, const Keep& keep, MultiIndex& current,
               std::size_t axis, std::vector<MultiIndex>& out) {
  if (axis == dimension) {
    out.push_back(current);
    return;
  }
  for (int v = 0; v <= bound; ++v) {
    current[axis] = v;
    // Remaining axes at zero: every admissible set here is downward closed,
    // so once this fails larger v fail too.
    if (!keep(current)) break;
    enumerate(dimension, bound, keep, current, axis + 1, out);
  }
  current[axis] = 0;
}

// Legendre P_m and its derivative at x.
std::pair<double, double> legendre(int m, double x) {
  double p0 = 1.0;
  double p1 = x;
  if (m == 0) return {1.0, 0.0};
  for (int k = 2; k <= m; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  const double dp = m * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

std::vector<double> gauss_nodes_and_weights(int m, std::vector<double>* weights) {
  std::vector<double> x(m);
  std::vector<double> w(m);
  for (int k = 0; k < m; ++k) {
    // Descending Chebyshev-like initial guess, refined by Newton.
    double r = std::cos(std::numbers::pi * (k + 0.75) / (m + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(m, r);
      const double step = p / dp;
      r -= step;
      if (std::abs(step) < 1e-16) break;
    }
    const auto [p, dp] = legendre(m, r);
    (void)p;
    x[m - 1 - k] = r;
    w[m - 1 - k] = 1.0 / ((1.0 - r * r) * dp * dp);  // 2/(...) halved for density 1/2
  }
  if (m % 2 == 1) x[m / 2] = 0.0;
  for (int k = 0; k < m / 2; ++k) {
    // Enforce exact symmetry.
    const double a = 0.5 * (x[m - 1 - k] - x[k]);
    x[k] = -a;
    x[m - 1 - k] = a;
    const double b = 0.5 * (w[k] + w[m - 1 - k]);
    w[k] = b;
    w[m - 1 - k] = b;
  }
  if (weights) *weights = std::move(w);
  return x;
}

bool is_power_of_two(std::int32_t v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace

// ---------------------------------------------------------------------------

int growth(GrowthRule rule, int j) {
  if (j < 0) throw ParameterError("growth rule index must be nonnegative");
  switch (rule) {
    case GrowthRule::linear: return j;
    case GrowthRule::nested: return j == 0 ? 0 : (1 << j);
  }
  return j;
}

IndexSet::IndexSet(std::size_t dimension, std::vector<MultiIndex> members, IndexSetKind kind,
                   int level)
    : dimension_(dimension), members_(std::move(members)), kind_(kind), level_(level) {
  if (dimension_ == 0) throw ParameterError("index sets need dimension >= 1");
  for (const auto& j : members_) {
    if (j.size() != dimension_) throw ParameterError("multi-index has the wrong dimension");
    for (int v : j) {
      if (v < 0) throw ParameterError("multi-index components must be nonnegative");
    }
  }
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

bool IndexSet::contains(const MultiIndex& j) const {
  return std::binary_search(members_.begin(), members_.end(), j);
}

bool IndexSet::is_downward_closed() const {
  for (const auto& j : members_) {
    MultiIndex lower = j;
    for (std::size_t n = 0; n < dimension_; ++n) {
      if (j[n] == 0) continue;
      lower[n] = j[n] - 1;
      if (!contains(lower)) return false;
      lower[n] = j[n];
    }
  }
  return true;
}

IndexSet index_set(IndexSetKind kind, int level, std::size_t dimension) {
  if (level < 0) throw ParameterError("level must be nonnegative");
  if (dimension == 0) throw ParameterError("dimension must be at least 1");
  std::vector<MultiIndex> out;
  MultiIndex current(dimension, 0);
  switch (kind) {
    case IndexSetKind::total_degree:
      enumerate(dimension, level,
                [level](const MultiIndex& j) {
                  return std::accumulate(j.begin(), j.end(), 0) <= level;
                },
                current, 0, out);
      break;
    case IndexSetKind::hyperbolic_cross:
      enumerate(dimension, level,
                [level](const MultiIndex& j) {
                  long long prod = 1;
                  for (int v : j) prod *= (v + 1);
                  return prod <= level + 1;
                },
                current, 0, out);
      break;
    case IndexSetKind::full_tensor:
      enumerate(dimension, level, [](const MultiIndex&) { return true; }, current, 0, out);
      break;
    case IndexSetKind::custom:
      throw ParameterError("custom index sets are built from an explicit member list");
  }
  return IndexSet(dimension, std::move(out), kind, level);
}

std::map<MultiIndex, int> combination_coeffs(const IndexSet& set) {
  if (!set.is_downward_closed()) {
    throw StructureError("combination coefficients need a downward-closed index set");
  }
  const std::size_t n = set.dimension();
  if (n > 20) throw ParameterError("dimension too large for subset enumeration");
  const std::size_t corners = std::size_t{1} << n;
  std::map<MultiIndex, int> coeffs;
  MultiIndex shifted(n);
  for (const auto& j : set.members()) {
    int c = 0;
    for (std::size_t mask = 0; mask < corners; ++mask) {
      int parity = 1;
      for (std::size_t d = 0; d < n; ++d) {
        const int bit = static_cast<int>((mask >> d) & 1U);
        shifted[d] = j[d] + bit;
        if (bit) parity = -parity;
      }
      if (set.contains(shifted)) c += parity;
    }
    if (c != 0) coeffs.emplace(j, c);
  }
  return coeffs;
}

// ---------------------------------------------------------------------------

std::vector<double> univariate_nodes(NodeFamilyKind family, int m) {
  if (m < 1) throw ParameterError("a univariate rule needs at least one node");
  if (family == NodeFamilyKind::gauss_legendre) return gauss_nodes_and_weights(m, nullptr);
  if (m == 1) return {0.0};
  std::vector<double> x(m);
  const double n = m - 1;
  for (int k = 0; k < m; ++k) {
    // -cos(pi k / n) written as a sine so the midpoint is exactly zero and
    // the rule is exactly symmetric.
    x[k] = std::sin(std::numbers::pi * (2.0 * k - n) / (2.0 * n));
  }
  return x;
}

std::vector<double> univariate_weights(NodeFamilyKind family, int m) {
  if (m < 1) throw ParameterError("a univariate rule needs at least one node");
  if (m == 1) return {1.0};
  if (family == NodeFamilyKind::gauss_legendre) {
    std::vector<double> w;
    gauss_nodes_and_weights(m, &w);
    return w;
  }
  // Match the Chebyshev moments: sum_k w_k T_r(x_k) = (1/2) int T_r over
  // [-1, 1], which is 1/(1 - r^2) for even r and 0 for odd r.
  const double n = m - 1;
  Eigen::MatrixXd v(m, m);
  Eigen::VectorXd moments(m);
  for (int r = 0; r < m; ++r) {
    for (int k = 0; k < m; ++k) {
      // x_k = cos(pi (n - k) / n), so T_r(x_k) = cos(r pi (n - k) / n).
      v(r, k) = std::cos(r * std::numbers::pi * (n - k) / n);
    }
    moments[r] = (r % 2 == 0) ? 1.0 / (1.0 - static_cast<double>(r) * r) : 0.0;
  }
  const Eigen::VectorXd w = v.partialPivLu().solve(moments);
  std::vector<double> out(w.data(), w.data() + m);
  for (int k = 0; k < m / 2; ++k) {
    const double s = 0.5 * (out[k] + out[m - 1 - k]);
    out[k] = s;
    out[m - 1 - k] = s;
  }
  return out;
}

AxisKey axis_key(NodeFamilyKind family, int m, int k) {
  if (m < 1 || k < 0 || k >= m) throw ParameterError("node index out of range");
  const bool midpoint = (m % 2 == 1) && (2 * k == m - 1);
  if (midpoint) return AxisKey{2, 1};
  if (family == NodeFamilyKind::clenshaw_curtis) {
    const std::int32_t den = m - 1;
    const std::int32_t g = std::gcd(k, den);
    return AxisKey{den / g, k / g};
  }
  return AxisKey{-m, k};
}

std::string format_key(const NodeKey& key) {
  std::ostringstream out;
  for (std::size_t n = 0; n < key.size(); ++n) {
    if (n) out << '.';
    const AxisKey& a = key[n];
    if (is_power_of_two(a.den)) {
      if (a.den == 1) {
        out << "1:" << 2 * a.num;
      } else {
        out << std::countr_zero(static_cast<std::uint32_t>(a.den)) << ':' << a.num;
      }
    } else {
      out << a.num << '/' << a.den;
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------

double SparseRule::weight_sum() const {
  std::vector<double> w;
  w.reserve(nodes.size());
  for (const auto& n : nodes) w.push_back(n.weight);
  return pairwise_sum<double>(w);
}

SparseRule assemble_rule(const RandomSpace& space, const IndexSet& set, const NodeFamily& family) {
  if (set.dimension() != space.dimension()) {
    throw ParameterError("index set and random space differ in dimension");
  }
  if (family.kind == NodeFamilyKind::gauss_legendre && family.growth == GrowthRule::nested) {
    throw ParameterError("gauss-legendre nodes are not nested; use linear growth");
  }
  const std::size_t dims = space.dimension();
  const auto coeffs = combination_coeffs(set);
  UnivariateTable table(family.kind);

  struct Accum {
    std::vector<double> reference;
    std::vector<double> terms;
  };
  std::map<NodeKey, Accum> acc;
  std::vector<const UnivariateRule*> axes(dims);
  std::vector<int> counter(dims);
  NodeKey key(dims);
  std::vector<double> ref(dims);

  for (const auto& [j, c] : coeffs) {
    for (std::size_t n = 0; n < dims; ++n) axes[n] = &table.get(node_count(family.growth, j[n]));
    std::fill(counter.begin(), counter.end(), 0);
    while (true) {
      double w = static_cast<double>(c);
      for (std::size_t n = 0; n < dims; ++n) {
        const UnivariateRule& r = *axes[n];
        key[n] = r.keys[counter[n]];
        ref[n] = r.nodes[counter[n]];
        w *= r.weights[counter[n]];
      }
      auto [it, inserted] = acc.try_emplace(key);
      if (inserted) it->second.reference = ref;
      it->second.terms.push_back(w);

      std::size_t d = 0;
      for (; d < dims; ++d) {
        if (++counter[d] < static_cast<int>(axes[d]->nodes.size())) break;
        counter[d] = 0;
      }
      if (d == dims) break;
    }
  }

  SparseRule rule;
  rule.kind = set.kind();
  rule.level = set.level();
  rule.family = family;
  rule.nodes.reserve(acc.size());
  for (auto& [k, a] : acc) {
    RuleNode node;
    node.key = k;
    node.weight = pairwise_sum<double>(a.terms);
    node.point = map_from_reference(a.reference, space);
    node.reference = std::move(a.reference);
    rule.nodes.push_back(std::move(node));
  }
  return rule;
}

SparseRule assemble_rule(const RandomSpace& space, IndexSetKind kind, int level,
                         const NodeFamily& family) {
  return assemble_rule(space, index_set(kind, level, space.dimension()), family);
}

SparseRule tensor_rule(const RandomSpace& space, const NodeFamily& family, int m) {
  const std::size_t dims = space.dimension();
  const auto x = univariate_nodes(family.kind, m);
  const auto w = univariate_weights(family.kind, m);
  std::map<NodeKey, RuleNode> nodes;
  std::vector<int> counter(dims, 0);
  while (true) {
    RuleNode node;
    node.key.resize(dims);
    node.reference.resize(dims);
    node.weight = 1.0;
    for (std::size_t n = 0; n < dims; ++n) {
      node.key[n] = axis_key(family.kind, m, counter[n]);
      node.reference[n] = x[counter[n]];
      node.weight *= w[counter[n]];
    }
    node.point = map_from_reference(node.reference, space);
    nodes.emplace(node.key, std::move(node));
    std::size_t d = 0;
    for (; d < dims; ++d) {
      if (++counter[d] < m) break;
      counter[d] = 0;
    }
    if (d == dims) break;
  }
  SparseRule rule;
  rule.kind = IndexSetKind::full_tensor;
  rule.level = -1;
  rule.family = family;
  for (auto& [k, n] : nodes) rule.nodes.push_back(std::move(n));
  return rule;
}

// ---------------------------------------------------------------------------

void NodeCache::fill(const SparseRule& rule, const Integrand& f) {
  std::vector<NodeKey> keys;
  std::vector<std::vector<double>> points;
  for (const auto& n : rule.nodes) {
    keys.push_back(n.key);
    points.push_back(n.point);
  }
  fill(keys, points, f);
}

void NodeCache::fill(std::span<const NodeKey> keys, std::span<const std::vector<double>> points,
                     const Integrand& f) {
  std::vector<std::size_t> missing;
  std::set<NodeKey> queued;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (values_.count(keys[i]) == 0 && queued.insert(keys[i]).second) missing.push_back(i);
  }
  std::vector<double> results(missing.size());
  parallel_for(missing.size(), [&](std::size_t i) { results[i] = f(points[missing[i]]); });
  for (std::size_t i = 0; i < missing.size(); ++i) values_.emplace(keys[missing[i]], results[i]);
  evaluations_ += missing.size();
}

double NodeCache::at(const NodeKey& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ParameterError("node " + format_key(key) + " is not cached");
  return it->second;
}

double integrate(const SparseRule& rule, const Integrand& f, NodeCache& cache) {
  cache.fill(rule, f);
  std::vector<double> terms(rule.size());
  for (std::size_t k = 0; k < rule.size(); ++k) {
    terms[k] = rule.nodes[k].weight * cache.at(rule.nodes[k].key);
  }
  return pairwise_sum<double>(terms);
}

double integrate(const SparseRule& rule, const Integrand& f) {
  NodeCache cache;
  return integrate(rule, f, cache);
}

double interpolate(const RandomSpace& space, const IndexSet& set, const NodeFamily& family,
                   const Integrand& f, std::span<const double> y, NodeCache* cache) {
  const std::size_t dims = space.dimension();
  if (set.dimension() != dims) throw ParameterError("index set and random space differ");
  const std::vector<double> xi = map_to_reference(y, space);
  const auto coeffs = combination_coeffs(set);
  NodeCache local;
  NodeCache& values = cache ? *cache : local;
  UnivariateTable table(family.kind);

  // Lagrange basis values per (axis, node count).
  std::map<std::pair<std::size_t, int>, std::vector<double>> basis;
  auto lagrange = [&](std::size_t axis, int m) -> const std::vector<double>& {
    auto it = basis.find({axis, m});
    if (it != basis.end()) return it->second;
    const auto& x = table.get(m).nodes;
    std::vector<double> l(m, 0.0);
    const double t = xi[axis];
    auto hit = std::find(x.begin(), x.end(), t);
    if (hit != x.end()) {
      l[hit - x.begin()] = 1.0;
    } else {
      // Barycentric form with weights 1 / prod_{i != k} (x_k - x_i).
      std::vector<double> lam(m, 1.0);
      for (int k = 0; k < m; ++k) {
        for (int i = 0; i < m; ++i) {
          if (i != k) lam[k] /= (x[k] - x[i]);
        }
      }
      double denom = 0.0;
      for (int k = 0; k < m; ++k) denom += lam[k] / (t - x[k]);
      for (int k = 0; k < m; ++k) l[k] = lam[k] / (t - x[k]) / denom;
    }
    return basis.emplace(std::make_pair(axis, m), std::move(l)).first->second;
  };

  std::vector<double> partial;
  std::vector<int> counter(dims);
  NodeKey key(dims);
  std::vector<double> ref(dims);
  for (const auto& [j, c] : coeffs) {
    std::vector<int> m(dims);
    for (std::size_t n = 0; n < dims; ++n) m[n] = node_count(family.growth, j[n]);

    // Gather the grid's nodes and make sure the cache holds them.
    std::vector<NodeKey> keys;
    std::vector<std::vector<double>> points;
    std::vector<double> weights;
    std::fill(counter.begin(), counter.end(), 0);
    while (true) {
      double w = 1.0;
      for (std::size_t n = 0; n < dims; ++n) {
        const UnivariateRule& r = table.get(m[n]);
        key[n] = r.keys[counter[n]];
        ref[n] = r.nodes[counter[n]];
        w *= lagrange(n, m[n])[counter[n]];
      }
      keys.push_back(key);
      points.push_back(map_from_reference(ref, space));
      weights.push_back(w);
      std::size_t d = 0;
      for (; d < dims; ++d) {
        if (++counter[d] < m[d]) break;
        counter[d] = 0;
      }
      if (d == dims) break;
    }
    values.fill(keys, points, f);
    std::vector<double> terms(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) terms[i] = weights[i] * values.at(keys[i]);
    partial.push_back(static_cast<double>(c) * pairwise_sum<double>(terms));
  }
  return pairwise_sum<double>(partial);
}

// ---------------------------------------------------------------------------

std::string to_string(IndexSetKind kind) {
  switch (kind) {
    case IndexSetKind::total_degree: return "total-degree";
    case IndexSetKind::hyperbolic_cross: return "hyperbolic-cross";
    case IndexSetKind::full_tensor: return "full-tensor";
    case IndexSetKind::custom: return "custom";
  }
  return "?";
}

std::string to_string(NodeFamilyKind kind) {
  return kind == NodeFamilyKind::clenshaw_curtis ? "clenshaw-curtis" : "gauss-legendre";
}

std::string to_string(GrowthRule rule) { return rule == GrowthRule::linear ? "linear" : "nested"; }

IndexSetKind parse_index_set_kind(const std::string& text) {
  if (text == "total-degree") return IndexSetKind::total_degree;
  if (text == "hyperbolic-cross") return IndexSetKind::hyperbolic_cross;
  if (text == "full-tensor") return IndexSetKind::full_tensor;
  throw ConfigError("unknown index set '" + text + "'");
}

NodeFamilyKind parse_node_family(const std::string& text) {
  if (text == "clenshaw-curtis") return NodeFamilyKind::clenshaw_curtis;
  if (text == "gauss-legendre") return NodeFamilyKind::gauss_legendre;
  throw ConfigError("unknown node family '" + text + "'");
}

GrowthRule parse_growth_rule(const std::string& text) {
  if (text == "linear") return GrowthRule::linear;
  if (text == "nested") return GrowthRule::nested;
  throw ConfigError("unknown growth rule '" + text + "'");
}

}  // namespace gbsc
