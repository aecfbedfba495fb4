#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gbsc/stochastic_space.hpp"

namespace gbsc {

// ---------------------------------------------------------------------------
// Growth rules and index sets

enum class GrowthRule {
  linear,  // p(j) = j
  nested,  // p(0) = 0, p(j) = 2^j
};

// Polynomial degree p(j); the level-j univariate rule has p(j) + 1 nodes.
int growth(GrowthRule rule, int j);
inline int node_count(GrowthRule rule, int j) { return growth(rule, j) + 1; }

using MultiIndex = std::vector<int>;

enum class IndexSetKind {
  total_degree,      // sum j_n <= level
  hyperbolic_cross,  // prod (j_n + 1) <= level + 1
  full_tensor,       // max j_n <= level
  custom,
};

class IndexSet {
 public:
  // Arbitrary member list (deduplicated and sorted); used for custom sets.
  IndexSet(std::size_t dimension, std::vector<MultiIndex> members,
           IndexSetKind kind = IndexSetKind::custom, int level = -1);

  IndexSetKind kind() const { return kind_; }
  int level() const { return level_; }
  std::size_t dimension() const { return dimension_; }
  const std::vector<MultiIndex>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool contains(const MultiIndex& j) const;
  bool is_downward_closed() const;

 private:
  std::size_t dimension_;
  std::vector<MultiIndex> members_;
  IndexSetKind kind_;
  int level_;
};

IndexSet index_set(IndexSetKind kind, int level, std::size_t dimension);

// C(j) = sum over i in {0,1}^N with i + j in I of (-1)^|i|; zero entries are
// omitted. Throws StructureError unless I is downward closed.
std::map<MultiIndex, int> combination_coeffs(const IndexSet& set);

// ---------------------------------------------------------------------------
// Univariate rules on [-1, 1]

enum class NodeFamilyKind { clenshaw_curtis, gauss_legendre };

struct NodeFamily {
  NodeFamilyKind kind = NodeFamilyKind::clenshaw_curtis;
  GrowthRule growth = GrowthRule::nested;
};

// Sorted ascending. Clenshaw-Curtis: {0} for m = 1, else -cos(pi k / (m-1)).
std::vector<double> univariate_nodes(NodeFamilyKind family, int m);

// Quadrature weights against the normalized uniform density 1/2 on [-1, 1]
// (they sum to one). Clenshaw-Curtis weights come from matching the
// Chebyshev moments, Gauss-Legendre from the Newton-refined nodes.
std::vector<double> univariate_weights(NodeFamilyKind family, int m);

// ---------------------------------------------------------------------------
// Node keys

// Exact identity of a univariate node. Clenshaw-Curtis node k of m sits at
// the Chebyshev angle k/(m-1) (times pi), stored as the reduced fraction
// num/den; the single-node rule shares the midpoint 1/2. Keys of nodes that
// are not Chebyshev extrema carry a negative den.
struct AxisKey {
  std::int32_t den = 0;
  std::int32_t num = 0;

  auto operator<=>(const AxisKey&) const = default;
};

AxisKey axis_key(NodeFamilyKind family, int m, int k);

using NodeKey = std::vector<AxisKey>;

// Text form used in CSV output. Dyadic Clenshaw-Curtis keys print as
// "level:index" with odd index (level 1 holds the endpoints 0 and 2 and the
// midpoint 1); other keys print as "num/den". Axes are joined by '.'.
std::string format_key(const NodeKey& key);

// ---------------------------------------------------------------------------
// Assembled rules

struct RuleNode {
  NodeKey key;
  std::vector<double> reference;  // coordinates in [-1, 1]^N
  std::vector<double> point;      // coordinates in the parameter box
  double weight = 0.0;
};

struct SparseRule {
  std::vector<RuleNode> nodes;  // ascending key order
  IndexSetKind kind = IndexSetKind::total_degree;
  int level = 0;
  NodeFamily family;

  std::size_t size() const { return nodes.size(); }
  double weight_sum() const;
};

// Combination-technique quadrature: every tensor grid with C(j) != 0
// contributes C(j) times its product weights to exactly keyed nodes.
SparseRule assemble_rule(const RandomSpace& space, const IndexSet& set, const NodeFamily& family);
SparseRule assemble_rule(const RandomSpace& space, IndexSetKind kind, int level,
                         const NodeFamily& family);

// Full tensor rule built directly from the univariate rule with m nodes per axis.
SparseRule tensor_rule(const RandomSpace& space, const NodeFamily& family, int m);

using Integrand = std::function<double(std::span<const double>)>;

// Integrand values keyed by node identity, so that refinements of a nested
// rule only evaluate the new nodes.
class NodeCache {
 public:
  // Evaluates the integrand at the rule's nodes that are not cached yet
  // (in parallel).
  void fill(const SparseRule& rule, const Integrand& f);
  void fill(std::span<const NodeKey> keys, std::span<const std::vector<double>> points,
            const Integrand& f);

  bool contains(const NodeKey& key) const { return values_.count(key) != 0; }
  double at(const NodeKey& key) const;
  std::size_t size() const { return values_.size(); }
  std::size_t evaluations() const { return evaluations_; }

 private:
  std::map<NodeKey, double> values_;
  std::size_t evaluations_ = 0;
};

// sum_k theta_k f(y_k).
double integrate(const SparseRule& rule, const Integrand& f);
double integrate(const SparseRule& rule, const Integrand& f, NodeCache& cache);

// Smolyak interpolant sum_j C(j) (tensor Lagrange interpolant on grid j)
// evaluated at y (a point of the parameter box). Barycentric evaluation.
double interpolate(const RandomSpace& space, const IndexSet& set, const NodeFamily& family,
                   const Integrand& f, std::span<const double> y, NodeCache* cache = nullptr);

std::string to_string(IndexSetKind kind);
std::string to_string(NodeFamilyKind kind);
std::string to_string(GrowthRule rule);
IndexSetKind parse_index_set_kind(const std::string& text);
NodeFamilyKind parse_node_family(const std::string& text);
GrowthRule parse_growth_rule(const std::string& text);

}  // namespace gbsc
