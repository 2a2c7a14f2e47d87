#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <vector>

#include "rockrelax/program.hpp"
#include "rockrelax/rockafellian.hpp"
#include "rockrelax/solver.hpp"

namespace rockrelax {

/// Value used by theta_schedule when p_nu = p.
inline constexpr double kThetaCap = 1e12;

/// Constants of the rate bound for the quadratic-penalty relaxation.
struct RateCertificate {
  double rho = 0.0;
  double epsilon = 0.0;
  double y_sup = 0.0;
  double kappa = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double sigma = 1.0;
  double tau = 0.0;
  /// Spacing of the grid that certified kappa.
  double grid_resolution = 0.0;
  Eigen::Index s = 0;

  double theta_threshold() const { return 9.0 * beta * beta / (alpha * alpha); }
  double p_distance_threshold() const { return alpha / 3.0; }
};

struct Applicability {
  bool theta_large_enough = false;
  bool p_close_enough = false;
  bool applicable() const { return theta_large_enough && p_close_enough; }
};

/// kappa from grid infima of f0 and of each f_i over the rho-ball (f_i only
/// where f0 is finite), then alpha = min positive p_i,
/// beta = sqrt(2 rho + 2 rho y_sup + 4 kappa),
/// sigma = max{1, y_sup + sqrt(s) (max{kappa, sqrt(3 / (2 alpha)) beta} + kappa)},
/// tau = beta sigma. Throws UnboundedError when a grid infimum is below -1e15.
RateCertificate rate_constants(const StochasticProgram& program, double rho, double epsilon, double y_sup,
                               const XOracle& x_oracle, double oracle_resolution);

Applicability rate_applicability(const RateCertificate& cert, const Eigen::VectorXd& p_nu, const Eigen::VectorXd& p,
                                 double theta_nu);

/// eta = sigma |p_nu - p| + max{theta |p_nu - p|^2 / 2, tau / sqrt(theta)}.
double eta_bound(const RateCertificate& cert, const Eigen::VectorXd& p_nu, const Eigen::VectorXd& p, double theta_nu);

/// max(floor, |p_nu - p|^(-4/3)), or max(floor, kThetaCap) when p_nu = p.
double theta_schedule(const Eigen::VectorXd& p_nu, const Eigen::VectorXd& p, double floor = 1.0);

struct RateCase {
  double nu = 0.0;
  StochasticProgram perturbed;
  RockafellianSpec spec;
};

struct RateRow {
  double nu = 0.0;
  double theta = 0.0;
  double p_distance = 0.0;
  double eta = 0.0;
  bool applicable = false;
  Point x_nu;
  /// dist(x_nu, (epsilon + 2 eta)-argmin of the actual problem).
  double distance = 0.0;
  double margin = 0.0;
  bool passed = true;
};

struct RateTable {
  std::vector<RateRow> rows;
  bool passed() const;
  std::size_t applicable_rows() const;
};

/// Solves each relaxed problem with solve_joint and checks the distance bound
/// against the actual problem's grid argmin sets. Rows outside the
/// applicability thresholds are reported but never fail.
RateTable verify_rate_inequality(const StochasticProgram& actual, const std::vector<RateCase>& cases,
                                 const RateCertificate& cert, const SolveConfig& config);

struct EmpiricalRateReport {
  std::vector<double> nus;
  /// statistics[trial][k] = nus[k]^(1/2 - epsilon) |p_nu - p|.
  std::vector<std::vector<double>> statistics;
  std::vector<double> median;
  bool median_strictly_decreasing = false;
  /// Fraction of trials whose statistic at the largest nu is not below its
  /// value at the smallest nu (trials with both exactly zero count as decreasing).
  double failure_rate = 0.0;
};

/// Monte Carlo check of nu^(1/2 - epsilon) |p_nu - p| -> 0 for empirical p_nu.
/// Each trial draws one sample stream and reads it at the increasing nus.
EmpiricalRateReport empirical_rate_check(const ProbVector& p, double epsilon, const std::vector<std::uint64_t>& nus,
                                         std::size_t trials, std::uint64_t seed);

struct ResidualReport {
  Eigen::VectorXd u;
  Point x;
  double block1 = 0.0;
  double block2 = 0.0;
  double total = 0.0;
};

/// Distance from (y_nu, 0) to the subdifferential of the quadratic-penalty f_nu
/// at (u, x): block1 = dist(y - F(x) - theta u, N_simplex(p_nu + u)),
/// block2 = dist(-sum q_i grad f_i(x), subdifferential of f0 at x).
/// Both are +inf where the subdifferential is empty.
ResidualReport optimality_residual(const StochasticProgram& program, const RockafellianSpec& spec,
                                   const Eigen::VectorXd& u, const Point& x, const Eigen::VectorXd& y_nu);

struct EpiDistance {
  double estimate = 0.0;
  double resolution = 0.0;
};

/// Grid estimate of the rho-truncated distance between epigraphs under the
/// max of block norms (Euclidean within each block; one block by default).
/// Throws BudgetError beyond 1e8 points.
EpiDistance epi_distance_estimate(const std::function<ExtReal(const Eigen::VectorXd&)>& fn_a,
                                  const std::function<ExtReal(const Eigen::VectorXd&)>& fn_b, double rho,
                                  const std::vector<Eigen::VectorXd>& points, double resolution,
                                  const std::vector<Eigen::Index>& block_sizes = {});

/// Least-squares slope of log y against log x.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace rockrelax
