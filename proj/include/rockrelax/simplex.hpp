#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "rockrelax/errors.hpp"

namespace rockrelax {

/// Absolute tolerance on simplex membership: sum within this of 1, entries
/// no smaller than its negative.
inline constexpr double kSimplexTol = 1e-12;

/// True when q is a probability vector up to kSimplexTol.
template <typename Derived>
bool in_simplex(const Eigen::MatrixBase<Derived>& q, double tol = kSimplexTol) {
  if (q.size() == 0) return false;
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    if (!std::isfinite(static_cast<double>(q(i))) || q(i) < -tol) return false;
  }
  return std::abs(static_cast<double>(q.sum()) - 1.0) <= tol;
}

/// A point of the probability simplex.
///
/// Construction clamps entries in [-1e-12, 0) to exact zeros and renormalizes,
/// so zero-probability scenarios are exact zeros downstream.
class ProbVector {
 public:
  explicit ProbVector(Eigen::VectorXd entries);

  const Eigen::VectorXd& entries() const { return entries_; }
  operator const Eigen::VectorXd&() const { return entries_; }  // NOLINT
  Eigen::Index size() const { return entries_.size(); }
  double operator()(Eigen::Index i) const { return entries_(i); }

  /// Smallest strictly positive entry.
  double min_positive() const;

 private:
  Eigen::VectorXd entries_;
};

template <typename Scalar>
struct SimplexProjection {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> point;
  /// Threshold tau with point_i = max(0, z_i - tau).
  Scalar threshold;
};

/// Euclidean projection onto the probability simplex by the sort-and-threshold
/// method, O(s log s). Inputs already in the simplex (to a few ulps) are
/// returned unchanged, which makes the map idempotent bit for bit.
template <typename Derived>
SimplexProjection<typename Derived::Scalar> simplex_projection(const Eigen::MatrixBase<Derived>& z) {
  using Scalar = typename Derived::Scalar;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index s = z.size();
  if (s == 0) throw DimensionError("project_to_simplex: empty input");
  for (Eigen::Index i = 0; i < s; ++i) {
    if (!std::isfinite(static_cast<double>(z(i)))) throw DomainError("project_to_simplex: nonfinite entry");
  }

  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  if ((z.array() >= Scalar(0)).all() && std::abs(z.sum() - Scalar(1)) <= Scalar(8) * Scalar(s) * eps) {
    return {Vec(z), Scalar(0)};
  }

  std::vector<Scalar> sorted(static_cast<std::size_t>(s));
  for (Eigen::Index i = 0; i < s; ++i) sorted[static_cast<std::size_t>(i)] = z(i);
  std::sort(sorted.begin(), sorted.end(), std::greater<Scalar>());

  Scalar running = 0;
  Scalar tau = 0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    running += sorted[j];
    const Scalar candidate = (running - Scalar(1)) / Scalar(j + 1);
    if (sorted[j] - candidate > Scalar(0)) tau = candidate;
  }
  Vec q = (z.array() - tau).cwiseMax(Scalar(0)).matrix();
  return {std::move(q), tau};
}

/// argmin over q in the simplex of ||q - z||_2.
ProbVector project_to_simplex(const Eigen::Ref<const Eigen::VectorXd>& z);

/// Distance from w to the normal cone of the simplex at q,
///   N(q) = { v | v_i = mu for q_i > 0, v_i <= mu for q_i = 0 }.
/// The one-dimensional problem in mu is piecewise quadratic and is solved
/// exactly by walking the sorted zero-coordinate breakpoints.
template <typename DerivedQ, typename DerivedW>
typename DerivedW::Scalar simplex_normal_cone_distance(const Eigen::MatrixBase<DerivedQ>& q,
                                                       const Eigen::MatrixBase<DerivedW>& w) {
  using Scalar = typename DerivedW::Scalar;
  if (q.size() != w.size()) throw DimensionError("normal_cone_distance: size mismatch");
  if (!in_simplex(q)) throw DomainError("normal_cone_distance: q is not in the simplex");

  Scalar positive_sum = 0;
  Eigen::Index positive_count = 0;
  std::vector<Scalar> zero_coords;
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    if (q(i) > 0) {
      positive_sum += w(i);
      ++positive_count;
    } else {
      zero_coords.push_back(w(i));
    }
  }
  std::sort(zero_coords.begin(), zero_coords.end(), std::greater<Scalar>());

  // Active zero coordinates are a prefix of the descending order.
  Scalar sum = positive_sum;
  Scalar mu = sum / Scalar(positive_count);
  for (std::size_t k = 0; k < zero_coords.size(); ++k) {
    if (zero_coords[k] <= mu) break;
    sum += zero_coords[k];
    mu = sum / Scalar(positive_count + Eigen::Index(k) + 1);
  }

  Scalar d2 = 0;
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    const Scalar gap = w(i) - mu;
    if (q(i) > 0) {
      d2 += gap * gap;
    } else if (gap > 0) {
      d2 += gap * gap;
    }
  }
  return std::sqrt(d2);
}

double normal_cone_distance(const ProbVector& q, const Eigen::Ref<const Eigen::VectorXd>& w);

/// Streams i.i.d. category draws from p and tracks relative frequencies.
/// Draw k of a stream depends only on (p, seed, k), so frequencies after
/// `count` draws equal sample_empirical(p, count, seed).
class EmpiricalSampler {
 public:
  EmpiricalSampler(const ProbVector& p, std::uint64_t seed);

  void draw(std::uint64_t count);
  std::uint64_t drawn() const { return drawn_; }
  ProbVector frequencies() const;

 private:
  std::vector<double> cumulative_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t state_;
  std::uint64_t drawn_ = 0;
};

ProbVector sample_empirical(const ProbVector& p, std::uint64_t count, std::uint64_t seed);

/// All points of the simplex grid { k / resolution } in dimension s, in
/// lexicographic order of k.
std::vector<Eigen::VectorXd> simplex_grid(Eigen::Index s, int resolution);

/// Vertices e_1, ..., e_s of the simplex.
std::vector<Eigen::VectorXd> simplex_vertices(Eigen::Index s);

}  // namespace rockrelax
