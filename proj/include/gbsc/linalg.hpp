#pragma once

#include <complex>

#include <Eigen/Dense>

namespace gbsc {

// Spatial dimension is 1 or 2. The types below are runtime-sized but stored
// inline, so no heap traffic happens inside the beam integrator.
inline constexpr int kMaxSpatialDim = 2;

using Complex = std::complex<double>;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxSpatialDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor,
                          kMaxSpatialDim, kMaxSpatialDim>;
using CVec = Eigen::Matrix<Complex, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxSpatialDim, 1>;
using CMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor,
                           kMaxSpatialDim, kMaxSpatialDim>;

// Smallest eigenvalue of a real symmetric 1x1 or 2x2 matrix.
inline double min_symmetric_eigenvalue(const Mat& a) {
  if (a.rows() == 1) return a(0, 0);
  const double mean = 0.5 * (a(0, 0) + a(1, 1));
  const double half_diff = 0.5 * (a(0, 0) - a(1, 1));
  return mean - std::hypot(half_diff, a(0, 1));
}

// Axis-aligned box in physical space.
struct Box {
  Vec lower;
  Vec upper;

  int dimension() const { return static_cast<int>(lower.size()); }
  bool contains(const Vec& x) const {
    for (int i = 0; i < dimension(); ++i) {
      if (x[i] < lower[i] || x[i] > upper[i]) return false;
    }
    return true;
  }
};

inline Box bounding_box(const Box& a, const Box& b) {
  return Box{a.lower.cwiseMin(b.lower), a.upper.cwiseMax(b.upper)};
}

}  // namespace gbsc
