#include "rockrelax/grid.hpp"

#include <cmath>
#include <limits>

#include "rockrelax/errors.hpp"
#include "rockrelax/parallel.hpp"

namespace rockrelax {

Box::Box(Eigen::VectorXd l, Eigen::VectorXd h) : lo(std::move(l)), hi(std::move(h)) {
  if (lo.size() != hi.size() || lo.size() == 0) throw DimensionError("Box: bounds must have equal positive length");
  if (!lo.allFinite() || !hi.allFinite() || (hi.array() < lo.array()).any()) throw DomainError("Box: need finite lo <= hi");
}

Box Box::cube(Eigen::Index n, double l, double h) {
  return Box(Eigen::VectorXd::Constant(n, l), Eigen::VectorXd::Constant(n, h));
}

bool Box::contains(const Eigen::VectorXd& x, double tol) const {
  return x.size() == lo.size() && (x.array() >= lo.array() - tol).all() && (x.array() <= hi.array() + tol).all();
}

Eigen::VectorXd Box::project(const Eigen::VectorXd& x) const { return x.cwiseMax(lo).cwiseMin(hi); }

Grid::Grid(Box box, double resolution) : box_(std::move(box)), resolution_(resolution) {
  if (!(resolution > 0.0)) throw DomainError("Grid: resolution must be positive");
  for (Eigen::Index j = 0; j < box_.dimension(); ++j) {
    const double width = box_.hi(j) - box_.lo(j);
    const long n = std::max(0L, std::lround(width / resolution));
    intervals_.push_back(n);
    const double count = static_cast<double>(n + 1);
    if (static_cast<double>(size_) * count > 1e12) throw BudgetError("Grid: too many points");
    size_ *= static_cast<std::size_t>(n + 1);
  }
}

Eigen::VectorXd Grid::point(std::size_t index) const {
  const Eigen::Index n = dimension();
  Eigen::VectorXd x(n);
  for (Eigen::Index j = n - 1; j >= 0; --j) {
    const long steps = intervals_[static_cast<std::size_t>(j)];
    const auto count = static_cast<std::size_t>(steps + 1);
    const auto k = static_cast<long>(index % count);
    index /= count;
    x(j) = steps == 0 ? box_.lo(j) : box_.lo(j) + (static_cast<double>(k) * (box_.hi(j) - box_.lo(j))) / static_cast<double>(steps);
  }
  return x;
}

std::vector<double> evaluate_grid(const Grid& grid, const std::function<double(const Eigen::VectorXd&)>& fn) {
  return parallel_map<double>(grid.size(), [&](std::size_t k) { return fn(grid.point(k)); });
}

std::size_t first_argmin(const std::vector<double>& values) {
  std::size_t best = values.size();
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] < best_value) {
      best_value = values[k];
      best = k;
    }
  }
  return best;
}

}  // namespace rockrelax
