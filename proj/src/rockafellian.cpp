#include "rockrelax/rockafellian.hpp"

#include <cmath>
#include <string>

#include "rockrelax/errors.hpp"
#include "rockrelax/parallel.hpp"
#include "rockrelax/random.hpp"

namespace rockrelax {
namespace {

struct VariantName {
  Variant variant;
  std::string_view name;
};
constexpr VariantName kVariantNames[] = {
    {Variant::kExactIndicator, "exact"}, {Variant::kQuadraticPenalty, "quadratic"},
    {Variant::kPhiDivergence, "phi"},    {Variant::kSupportPerturbation, "support"},
    {Variant::kL1Penalty, "l1"},         {Variant::kComposite, "composite"}};

// p + u with round-off negatives clamped to exact zeros; nullopt outside the simplex.
std::optional<Eigen::VectorXd> perturbed_weights(const Eigen::VectorXd& p, const Eigen::VectorXd& u) {
  if (u.size() == 0) return p;
  if (u.size() != p.size()) throw DimensionError("perturbation u has wrong length");
  Eigen::VectorXd q = p + u;
  if (!in_simplex(q)) return std::nullopt;
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    if (q(i) < 0.0) q(i) = 0.0;
  }
  return q;
}

bool is_zero(const Eigen::VectorXd& v) { return v.size() == 0 || (v.array() == 0.0).all(); }

double squared_norm(const Eigen::VectorXd& v) { return v.size() == 0 ? 0.0 : v.squaredNorm(); }

}  // namespace

std::string_view variant_name(Variant variant) {
  for (const auto& entry : kVariantNames) {
    if (entry.variant == variant) return entry.name;
  }
  return "unknown";
}

Variant variant_from_name(std::string_view name) {
  for (const auto& entry : kVariantNames) {
    if (entry.name == name) return entry.variant;
  }
  throw ConfigError("unknown Rockafellian variant '" + std::string(name) + "'");
}

RockafellianSpec RockafellianSpec::exact() { return RockafellianSpec{}; }

RockafellianSpec RockafellianSpec::quadratic(ProbVector p_nu, double theta, Eigen::VectorXd y_nu) {
  RockafellianSpec spec;
  spec.variant = Variant::kQuadraticPenalty;
  spec.p_nu = std::move(p_nu);
  spec.theta = theta;
  spec.y_nu = std::move(y_nu);
  return spec;
}

RockafellianSpec RockafellianSpec::phi_divergence(ProbVector p_nu, double theta, PhiFamily family) {
  RockafellianSpec spec;
  spec.variant = Variant::kPhiDivergence;
  spec.p_nu = std::move(p_nu);
  spec.theta = theta;
  spec.phi = family;
  return spec;
}

RockafellianSpec RockafellianSpec::support(ProbVector p_nu, std::vector<Eigen::VectorXd> xi_nu, double theta,
                                           double lambda) {
  RockafellianSpec spec;
  spec.variant = Variant::kSupportPerturbation;
  spec.p_nu = std::move(p_nu);
  spec.xi_nu = std::move(xi_nu);
  spec.theta = theta;
  spec.lambda = lambda;
  return spec;
}

RockafellianSpec RockafellianSpec::l1(ProbVector p_nu, double theta) {
  RockafellianSpec spec;
  spec.variant = Variant::kL1Penalty;
  spec.p_nu = std::move(p_nu);
  spec.theta = theta;
  return spec;
}

RockafellianSpec RockafellianSpec::composite(ProbVector p_nu, double theta, bool perturb_weights) {
  RockafellianSpec spec;
  spec.variant = Variant::kComposite;
  spec.p_nu = std::move(p_nu);
  spec.theta = theta;
  spec.perturb_weights = perturb_weights;
  return spec;
}

void RockafellianSpec::validate(const StochasticProgram& program) const {
  const Eigen::Index s = program.s();
  if (variant == Variant::kExactIndicator) return;
  if (!p_nu) throw DomainError(std::string(variant_name(variant)) + ": p_nu is required");
  if (p_nu->size() != s) throw DimensionError("p_nu length does not match the scenario count");
  if (!(theta >= 0.0) || !(lambda >= 0.0)) throw DomainError("penalty parameters must be nonnegative");
  if (y_nu.size() != 0 && y_nu.size() != s) throw DimensionError("tilt y_nu has wrong length");
  switch (variant) {
    case Variant::kPhiDivergence:
      if (!phi) throw DomainError("phi variant needs a divergence family");
      break;
    case Variant::kSupportPerturbation: {
      if (!program.support()) throw DomainError("support variant needs a program with a support model");
      const Eigen::Index m = program.support()->m;
      if (static_cast<Eigen::Index>(xi_nu.size()) != s) throw DimensionError("xi_nu needs one point per scenario");
      for (const auto& xi : xi_nu) {
        if (xi.size() != m) throw DimensionError("xi_nu point has wrong dimension");
      }
      if (y_shift.size() != 0 && y_shift.size() != s * m) throw DimensionError("support tilt has wrong length");
      break;
    }
    case Variant::kComposite:
      if (!program.composite()) throw DomainError("composite variant needs a program with a composite block");
      if (!(theta > 0.0)) throw DomainError("composite variant needs theta > 0");
      if (y_shift.size() != 0 && y_shift.size() != program.composite()->m())
        throw DimensionError("composite tilt has wrong length");
      break;
    default:
      break;
  }
}

const ProbVector& RockafellianSpec::weights(const StochasticProgram& program) const {
  if (variant == Variant::kExactIndicator || !p_nu) return program.p();
  return *p_nu;
}

Eigen::VectorXd RockafellianSpec::tilt_u(Eigen::Index s) const {
  return y_nu.size() == 0 ? Eigen::VectorXd::Zero(s) : y_nu;
}

Eigen::VectorXd RockafellianSpec::tilt_v(Eigen::Index size) const {
  return y_shift.size() == 0 ? Eigen::VectorXd::Zero(size) : y_shift;
}

PerturbationPoint PerturbationPoint::zero(const StochasticProgram& program, const RockafellianSpec& spec) {
  PerturbationPoint point;
  point.u = Eigen::VectorXd::Zero(program.s());
  if (spec.variant == Variant::kSupportPerturbation && program.support())
    point.v = Eigen::VectorXd::Zero(program.s() * program.support()->m);
  if (spec.variant == Variant::kComposite && program.composite()) point.v = Eigen::VectorXd::Zero(program.composite()->m());
  return point;
}

ExtReal eval_exact(const StochasticProgram& program, const PerturbationPoint& perturbation, const Point& x) {
  if (perturbation.u.size() != 0 && perturbation.u.size() != program.s())
    throw DimensionError("eval_exact: u has wrong length");
  if (x.size() != program.n()) throw DimensionError("eval_exact: x has wrong dimension");
  if (!is_zero(perturbation.u) || !is_zero(perturbation.v)) return ExtReal::pos_inf();
  return actual_objective(program, x);
}

ExtReal eval_approx(const RockafellianSpec& spec, const StochasticProgram& program,
                    const PerturbationPoint& perturbation, const Point& x, bool include_tilt) {
  if (spec.variant == Variant::kExactIndicator) throw DomainError("eval_approx: ExactIndicator has no approximation");
  spec.validate(program);
  if (x.size() != program.n()) throw DimensionError("eval_approx: x has wrong dimension");
  const Eigen::Index s = program.s();
  const Eigen::VectorXd& p_nu = spec.p_nu->entries();
  const Eigen::VectorXd u = perturbation.u.size() == 0 ? Eigen::VectorXd::Zero(s) : perturbation.u;
  if (u.size() != s) throw DimensionError("eval_approx: u has wrong length");

  if (spec.variant == Variant::kComposite && !spec.perturb_weights && !is_zero(u)) return ExtReal::pos_inf();
  const auto q = perturbed_weights(p_nu, u);
  if (!q) return ExtReal::pos_inf();

  ExtReal value = program.f0()(x);
  if (value.is_pos_inf()) return value;

  // Scenario values, with moved support points for the support variant.
  std::vector<ExtReal> scenario_values;
  Eigen::VectorXd v;
  if (spec.variant == Variant::kSupportPerturbation) {
    const auto& support = *program.support();
    const Eigen::Index m = support.m;
    v = perturbation.v.size() == 0 ? Eigen::VectorXd::Zero(s * m) : perturbation.v;
    if (v.size() != s * m) throw DimensionError("eval_approx: support shift has wrong length");
    scenario_values.reserve(static_cast<std::size_t>(s));
    for (Eigen::Index i = 0; i < s; ++i) {
      const ExtReal g = support.generator(spec.xi_nu[static_cast<std::size_t>(i)] + v.segment(i * m, m), x);
      if (g.is_neg_inf()) throw ImproperFunctionError("support generator returned -inf");
      scenario_values.push_back(g);
    }
  } else {
    scenario_values = program.scenario_values(x);
  }
  value += weighted_sum(*q, scenario_values);
  if (value.is_pos_inf()) return value;

  if (program.composite()) {
    const auto& block = *program.composite();
    Eigen::VectorXd lhs = block.aggregate(*q, x);
    if (spec.variant == Variant::kComposite) {
      v = perturbation.v.size() == 0 ? Eigen::VectorXd::Zero(block.m()) : perturbation.v;
      if (v.size() != block.m()) throw DimensionError("eval_approx: constraint shift has wrong length");
      lhs += v;
    }
    if (!block.satisfied(lhs)) return ExtReal::pos_inf();
  }

  const Eigen::VectorXd du = *q - p_nu;
  double penalty = 0.0;
  switch (spec.variant) {
    case Variant::kQuadraticPenalty:
      penalty = 0.5 * spec.theta * du.squaredNorm();
      break;
    case Variant::kPhiDivergence: {
      if (spec.theta == 0.0) break;
      const ExtReal d = phi_divergence(*spec.phi, *q, p_nu);
      if (d.is_pos_inf()) return ExtReal::pos_inf();
      penalty = spec.theta * d.value();
      break;
    }
    case Variant::kSupportPerturbation:
      penalty = 0.5 * spec.theta * du.squaredNorm() + 0.5 * spec.lambda * squared_norm(v);
      break;
    case Variant::kL1Penalty:
      penalty = spec.theta * du.lpNorm<1>();
      break;
    case Variant::kComposite:
      penalty = 0.5 * spec.theta * (du.squaredNorm() + squared_norm(v));
      break;
    case Variant::kExactIndicator:
      break;
  }
  value += penalty;
  if (include_tilt) {
    value += -spec.tilt_u(s).dot(du);
    if (v.size() > 0) value += -spec.tilt_v(v.size()).dot(v);
  }
  return value;
}

ExtReal eval_rockafellian(const RockafellianSpec& spec, const StochasticProgram& program,
                          const PerturbationPoint& perturbation, const Point& x) {
  if (spec.variant == Variant::kExactIndicator) return eval_exact(program, perturbation, x);
  return eval_approx(spec, program, perturbation, x, false);
}

ExactnessCertificate check_exactness_certificate(const RockafellianSpec& spec, const StochasticProgram& program,
                                                 const Eigen::VectorXd& y_bar,
                                                 const std::vector<PerturbationPoint>& u_samples,
                                                 const XOracle& x_oracle, double tol) {
  if (y_bar.size() != program.s()) throw DimensionError("check_exactness_certificate: y_bar has wrong length");
  const PerturbationPoint anchor = PerturbationPoint::zero(program, spec);
  const ExtReal anchor_inf = x_oracle([&](const Point& x) { return eval_rockafellian(spec, program, anchor, x); });
  if (!anchor_inf.is_finite()) throw DomainError("check_exactness_certificate: anchor infimum is not finite");

  ExactnessCertificate cert;
  cert.anchor_value = anchor_inf.value();
  cert.gaps = parallel_map<double>(u_samples.size(), [&](std::size_t k) {
    const PerturbationPoint& sample = u_samples[k];
    const ExtReal inf_u = x_oracle([&](const Point& x) { return eval_rockafellian(spec, program, sample, x); });
    const double shift = sample.u.size() == 0 ? 0.0 : y_bar.dot(sample.u);
    return (inf_u - ExtReal(cert.anchor_value + shift)).value();
  });

  const double slack = tol * std::max(1.0, std::abs(cert.anchor_value));
  for (std::size_t k = 0; k < u_samples.size(); ++k) {
    const double gap = cert.gaps[k];
    if (gap < cert.worst_gap) {
      cert.worst_gap = gap;
      cert.worst_index = k;
    }
    if (gap < -slack) {
      cert.passed = false;
      ++cert.violations;
    }
    const bool at_anchor = is_zero(u_samples[k].u) && is_zero(u_samples[k].v);
    if (!at_anchor && !(gap > slack)) cert.strict = false;
  }
  if (!cert.passed) cert.strict = false;
  return cert;
}

std::vector<PerturbationPoint> default_u_samples(const ProbVector& base, std::size_t count, std::uint64_t seed) {
  std::vector<PerturbationPoint> samples;
  for (const auto& vertex : simplex_vertices(base.size())) samples.push_back({vertex - base.entries(), {}});
  SplitMix64 rng(seed);
  for (std::size_t k = 0; k < count; ++k) {
    // Normalized exponentials are uniform on the simplex.
    Eigen::VectorXd e(base.size());
    for (Eigen::Index i = 0; i < e.size(); ++i) e(i) = -std::log1p(-rng.uniform01());
    samples.push_back({e / e.sum() - base.entries(), {}});
  }
  return samples;
}

}  // namespace rockrelax
