#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <functional>
#include <vector>

namespace rockrelax {

/// Axis-aligned box [lo, hi] in R^n.
struct Box {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  Box() = default;
  Box(Eigen::VectorXd lo, Eigen::VectorXd hi);
  static Box cube(Eigen::Index n, double lo, double hi);

  Eigen::Index dimension() const { return lo.size(); }
  Eigen::VectorXd center() const { return 0.5 * (lo + hi); }
  bool contains(const Eigen::VectorXd& x, double tol = 0.0) const;
  Eigen::VectorXd project(const Eigen::VectorXd& x) const;
};

/// Regular grid over a box with spacing close to `resolution`, enumerated in
/// lexicographic order (first coordinate slowest). Coordinates are computed as
/// lo + k (hi - lo) / N so that grid points land exactly on representable
/// values such as 0.5.
class Grid {
 public:
  Grid(Box box, double resolution);

  std::size_t size() const { return size_; }
  Eigen::Index dimension() const { return box_.dimension(); }
  const Box& box() const { return box_; }
  double resolution() const { return resolution_; }
  const std::vector<long>& intervals() const { return intervals_; }

  Eigen::VectorXd point(std::size_t index) const;

 private:
  Box box_;
  double resolution_;
  std::vector<long> intervals_;
  std::size_t size_ = 1;
};

/// Values of fn at every grid point, in grid order, computed in parallel.
std::vector<double> evaluate_grid(const Grid& grid, const std::function<double(const Eigen::VectorXd&)>& fn);

/// First index attaining the minimum (lexicographic tie-break); size() when
/// every value is +inf.
std::size_t first_argmin(const std::vector<double>& values);

}  // namespace rockrelax
