#include "rockrelax/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rockrelax/errors.hpp"
#include "rockrelax/parallel.hpp"
#include "rockrelax/random.hpp"

namespace rockrelax {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n == 0) return 0.0;
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double block_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const std::vector<Eigen::Index>& blocks) {
  if (blocks.empty()) return (a - b).norm();
  double worst = 0.0;
  Eigen::Index offset = 0;
  for (Eigen::Index size : blocks) {
    worst = std::max(worst, (a.segment(offset, size) - b.segment(offset, size)).norm());
    offset += size;
  }
  return worst;
}

}  // namespace

RateCertificate rate_constants(const StochasticProgram& program, double rho, double epsilon, double y_sup,
                               const XOracle& x_oracle, double oracle_resolution) {
  if (!(rho >= 0.0) || !(epsilon >= 0.0) || epsilon > 2.0 * rho) throw DomainError("rate_constants: need 0 <= epsilon <= 2 rho");
  if (!(y_sup >= 0.0)) throw DomainError("rate_constants: y_sup must be nonnegative");
  auto check = [](const ExtReal& inf) {
    if (inf.is_neg_inf() || inf.value() < -1e15) throw UnboundedError("rate_constants: unbounded below on the ball");
    return inf;
  };
  const ExtReal inf_f0 = check(x_oracle([&](const Point& x) {
    return x.norm() <= rho ? program.f0()(x) : ExtReal::pos_inf();
  }));
  if (!inf_f0.is_finite()) throw DomainError("rate_constants: f0 is +inf on the whole rho-ball");
  double kappa = std::max(0.0, -inf_f0.value());
  for (Eigen::Index i = 0; i < program.s(); ++i) {
    const ExtReal inf_fi = check(x_oracle([&](const Point& x) {
      if (x.norm() > rho || program.f0()(x).is_pos_inf()) return ExtReal::pos_inf();
      return program.scenario(i)(x);
    }));
    if (inf_fi.is_finite()) kappa = std::max(kappa, -inf_fi.value());
  }

  RateCertificate cert;
  cert.rho = rho;
  cert.epsilon = epsilon;
  cert.y_sup = y_sup;
  cert.kappa = kappa;
  cert.alpha = program.p().min_positive();
  cert.beta = std::sqrt(2.0 * rho + 2.0 * rho * y_sup + 4.0 * kappa);
  const double s_root = std::sqrt(static_cast<double>(program.s()));
  cert.sigma = std::max(1.0, y_sup + s_root * (std::max(kappa, std::sqrt(3.0 / (2.0 * cert.alpha)) * cert.beta) + kappa));
  cert.tau = cert.beta * cert.sigma;
  cert.grid_resolution = oracle_resolution;
  cert.s = program.s();
  return cert;
}

Applicability rate_applicability(const RateCertificate& cert, const Eigen::VectorXd& p_nu, const Eigen::VectorXd& p,
                                 double theta_nu) {
  Applicability a;
  a.theta_large_enough = theta_nu >= cert.theta_threshold();
  a.p_close_enough = (p_nu - p).lpNorm<Eigen::Infinity>() <= cert.p_distance_threshold();
  return a;
}

double eta_bound(const RateCertificate& cert, const Eigen::VectorXd& p_nu, const Eigen::VectorXd& p, double theta_nu) {
  if (p_nu.size() != p.size()) throw DimensionError("eta_bound: size mismatch");
  if (!(theta_nu > 0.0)) throw DomainError("eta_bound: theta must be positive");
  const double d = (p_nu - p).norm();
  return cert.sigma * d + std::max(0.5 * theta_nu * d * d, cert.tau / std::sqrt(theta_nu));
}

double theta_schedule(const Eigen::VectorXd& p_nu, const Eigen::VectorXd& p, double floor) {
  if (p_nu.size() != p.size()) throw DimensionError("theta_schedule: size mismatch");
  const double d = (p_nu - p).norm();
  if (d == 0.0) return std::max(floor, kThetaCap);
  return std::max(floor, std::pow(d, -4.0 / 3.0));
}

bool RateTable::passed() const {
  return std::all_of(rows.begin(), rows.end(), [](const RateRow& r) { return r.passed; });
}

std::size_t RateTable::applicable_rows() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const RateRow& r) { return r.applicable; }));
}

RateTable verify_rate_inequality(const StochasticProgram& actual, const std::vector<RateCase>& cases,
                                 const RateCertificate& cert, const SolveConfig& config) {
  const auto* grid_method = std::get_if<GridMethod>(&config.x_method);
  if (!grid_method) throw DomainError("verify_rate_inequality: needs a grid x-method for the oracle");
  RateTable table;
  for (const auto& c : cases) {
    if (c.spec.variant != Variant::kQuadraticPenalty) throw DomainError("verify_rate_inequality: quadratic variant only");
    RateRow row;
    row.nu = c.nu;
    row.theta = c.spec.theta;
    const Eigen::VectorXd& p_nu = c.spec.p_nu->entries();
    row.p_distance = (p_nu - actual.p().entries()).norm();
    row.eta = eta_bound(cert, p_nu, actual.p().entries(), row.theta);
    row.applicable = rate_applicability(cert, p_nu, actual.p().entries(), row.theta).applicable();

    const SolveReport solved = solve_joint(c.perturbed, c.spec, config);
    row.x_nu = solved.x_final;
    const double level = cert.epsilon + 2.0 * row.eta;
    const OracleResult oracle = brute_force_oracle(actual, RockafellianSpec::exact(), 0.0, grid_method->box,
                                                   grid_method->resolution, {level}, config);
    row.distance = kInf;
    for (const auto& x : oracle.argmin_sets.front()) row.distance = std::min(row.distance, (x - row.x_nu).norm());
    row.margin = row.eta - row.distance;
    row.passed = !row.applicable || row.distance <= row.eta;
    table.rows.push_back(std::move(row));
  }
  return table;
}

EmpiricalRateReport empirical_rate_check(const ProbVector& p, double epsilon, const std::vector<std::uint64_t>& nus,
                                         std::size_t trials, std::uint64_t seed) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw DomainError("empirical_rate_check: epsilon must lie in (0, 1/2)");
  if (nus.empty() || !std::is_sorted(nus.begin(), nus.end()) || nus.front() == 0 ||
      std::adjacent_find(nus.begin(), nus.end()) != nus.end())
    throw DomainError("empirical_rate_check: nus must be positive and strictly increasing");
  if (trials == 0) throw DomainError("empirical_rate_check: need at least one trial");

  EmpiricalRateReport report;
  for (auto nu : nus) report.nus.push_back(static_cast<double>(nu));
  report.statistics = parallel_map<std::vector<double>>(trials, [&](std::size_t trial) {
    EmpiricalSampler sampler(p, derive_seed(seed, trial));
    std::vector<double> row;
    for (auto nu : nus) {
      sampler.draw(nu - sampler.drawn());
      const double d = (sampler.frequencies().entries() - p.entries()).norm();
      row.push_back(std::pow(static_cast<double>(nu), 0.5 - epsilon) * d);
    }
    return row;
  });

  for (std::size_t k = 0; k < nus.size(); ++k) {
    std::vector<double> column;
    for (const auto& row : report.statistics) column.push_back(row[k]);
    report.median.push_back(median_of(std::move(column)));
  }
  report.median_strictly_decreasing = true;
  for (std::size_t k = 1; k < report.median.size(); ++k) {
    if (!(report.median[k] < report.median[k - 1])) report.median_strictly_decreasing = false;
  }
  std::size_t failures = 0;
  for (const auto& row : report.statistics) {
    const bool both_zero = row.front() == 0.0 && row.back() == 0.0;
    if (!both_zero && !(row.back() < row.front())) ++failures;
  }
  report.failure_rate = static_cast<double>(failures) / static_cast<double>(trials);
  return report;
}

ResidualReport optimality_residual(const StochasticProgram& program, const RockafellianSpec& spec,
                                   const Eigen::VectorXd& u, const Point& x, const Eigen::VectorXd& y_nu) {
  if (spec.variant != Variant::kQuadraticPenalty) throw DomainError("optimality_residual: quadratic variant only");
  spec.validate(program);
  const Eigen::Index s = program.s();
  if (u.size() != s || y_nu.size() != s) throw DimensionError("optimality_residual: u or y has wrong length");
  if (x.size() != program.n()) throw DimensionError("optimality_residual: x has wrong dimension");

  ResidualReport report;
  report.u = u;
  report.x = x;
  const Eigen::VectorXd q = spec.p_nu->entries() + u;
  const auto values = program.scenario_values(x);
  const bool finite = std::all_of(values.begin(), values.end(), [](const ExtReal& v) { return v.is_finite(); });
  if (!in_simplex(q) || program.f0()(x).is_pos_inf() || !finite) {
    report.block1 = report.block2 = report.total = kInf;
    return report;
  }
  Eigen::VectorXd costs(s);
  for (Eigen::Index i = 0; i < s; ++i) costs(i) = values[static_cast<std::size_t>(i)].value();
  const ProbVector weights(q);
  report.block1 = normal_cone_distance(weights, y_nu - costs - spec.theta * u);

  Eigen::VectorXd pull = Eigen::VectorXd::Zero(program.n());
  for (Eigen::Index i = 0; i < s; ++i) {
    if (!program.scenario(i).gradient_valid_at(x)) throw DomainError("optimality_residual: scenario gradient unavailable at x");
    pull += weights(i) * program.scenario(i).gradient(x);
  }
  if (!program.f0().has_subgradient_distance()) throw DomainError("optimality_residual: f0 has no subdifferential oracle");
  report.block2 = program.f0().subgradient_distance(x, -pull);
  report.total = std::max(report.block1, report.block2);
  return report;
}

EpiDistance epi_distance_estimate(const std::function<ExtReal(const Eigen::VectorXd&)>& fn_a,
                                  const std::function<ExtReal(const Eigen::VectorXd&)>& fn_b, double rho,
                                  const std::vector<Eigen::VectorXd>& points, double resolution,
                                  const std::vector<Eigen::Index>& block_sizes) {
  if (!(rho > 0.0)) throw DomainError("epi_distance_estimate: rho must be positive");
  if (points.size() > 100'000'000) throw BudgetError("epi_distance_estimate: more than 1e8 points");
  const std::size_t n = points.size();
  const auto a = parallel_map<double>(n, [&](std::size_t k) { return fn_a(points[k]).value(); });
  const auto b = parallel_map<double>(n, [&](std::size_t k) { return fn_b(points[k]).value(); });
  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(points.empty() ? 0 : points.front().size());

  // One direction: lowest epigraph point of `from` above each ball point,
  // matched against the epigraph of `to`.
  auto one_way = [&](const std::vector<double>& from, const std::vector<double>& to) {
    const auto worst = parallel_map<double>(n, [&](std::size_t i) {
      if (!(from[i] < kInf) || block_distance(points[i], origin, block_sizes) > rho) return 0.0;
      const double level = std::max(from[i], -rho);
      if (level > rho) return 0.0;
      double best = kInf;
      for (std::size_t j = 0; j < n; ++j) {
        if (!(to[j] < kInf)) continue;
        const double d = block_distance(points[i], points[j], block_sizes);
        if (d >= best) continue;
        best = std::min(best, std::max(d, std::max(0.0, to[j] - level)));
      }
      return best;
    });
    return worst.empty() ? 0.0 : *std::max_element(worst.begin(), worst.end());
  };
  EpiDistance out;
  out.estimate = std::max(one_way(a, b), one_way(b, a));
  out.resolution = resolution;
  return out;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DimensionError("log_log_slope: need two or more paired values");
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::VectorXd lx(n), ly(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(x[static_cast<std::size_t>(i)] > 0.0) || !(y[static_cast<std::size_t>(i)] > 0.0))
      throw DomainError("log_log_slope: values must be positive");
    lx(i) = std::log(x[static_cast<std::size_t>(i)]);
    ly(i) = std::log(y[static_cast<std::size_t>(i)]);
  }
  const double mx = lx.mean(), my = ly.mean();
  return (lx.array() - mx).matrix().dot((ly.array() - my).matrix()) / (lx.array() - mx).matrix().squaredNorm();
}

}  // namespace rockrelax
