#include "rockrelax/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <set>

#include "rockrelax/analysis.hpp"
#include "rockrelax/config.hpp"
#include "rockrelax/divergence.hpp"
#include "rockrelax/errors.hpp"
#include "rockrelax/parallel.hpp"
#include "rockrelax/random.hpp"
#include "rockrelax/report.hpp"

namespace rockrelax {
namespace {

namespace cfg = config;
using nlohmann::json;

constexpr std::string_view kBuiltinPrefix = "builtin:";
constexpr double kGapTolerance = 1e-6;

struct NuSetup {
  StochasticProgram actual;
  StochasticProgram perturbed;
  std::optional<RockafellianSpec> example_spec;
  Box box;
  double resolution;
};

NuSetup setup_for(const ExperimentPlan& plan, std::uint64_t nu, std::uint64_t seed) {
  if (!plan.builtin.empty()) {
    ExampleInstance ex = build_example(plan.builtin, nu, plan.zbar);
    return {std::move(ex.actual), std::move(ex.perturbed), std::move(ex.spec), ex.box, ex.resolution};
  }
  const InstanceDef& def = *plan.instance;
  return {def.actual(), def.perturbed(nu, seed), std::nullopt, def.box, 1e-3};
}

Variant resolved_variant(const ExperimentPlan& plan, const NuSetup& setup) {
  if (plan.variant) return *plan.variant;
  return setup.example_spec ? setup.example_spec->variant : Variant::kQuadraticPenalty;
}

XMethod resolved_method(const ExperimentPlan& plan, const NuSetup& setup) {
  if (plan.x_method) return parse_x_method(*plan.x_method, setup.box, "/x_method");
  return GridMethod{setup.box, setup.resolution};
}

double method_resolution(const XMethod& method) {
  if (const auto* grid = std::get_if<GridMethod>(&method)) return grid->resolution;
  return 1e-3;
}

RockafellianSpec relaxed_spec(const ExperimentPlan& plan, const NuSetup& setup, Variant variant, double theta,
                              std::uint64_t nu) {
  const ProbVector& p_nu = setup.perturbed.p();
  const double lambda = plan.lambda.value_or(std::pow(static_cast<double>(nu), 4.0 / 3.0));
  if (setup.example_spec && setup.example_spec->variant == variant) {
    RockafellianSpec spec = *setup.example_spec;
    spec.theta = theta;
    if (variant == Variant::kSupportPerturbation && plan.lambda) spec.lambda = *plan.lambda;
    return spec;
  }
  switch (variant) {
    case Variant::kExactIndicator:
      return RockafellianSpec::exact();
    case Variant::kQuadraticPenalty:
      return RockafellianSpec::quadratic(p_nu, theta);
    case Variant::kPhiDivergence:
      return RockafellianSpec::phi_divergence(p_nu, theta, phi_family_from_tag(plan.phi));
    case Variant::kL1Penalty:
      return RockafellianSpec::l1(p_nu, theta);
    case Variant::kComposite:
      return RockafellianSpec::composite(p_nu, theta, true);
    case Variant::kSupportPerturbation:
      if (!setup.perturbed.support()) throw ConfigError("/variant: support needs a support model");
      return RockafellianSpec::support(p_nu, setup.perturbed.support()->points, theta, lambda);
  }
  throw ConfigError("/variant: unsupported");
}

double corner_norm(const Box& box) { return box.lo.cwiseAbs().cwiseMax(box.hi.cwiseAbs()).norm(); }

std::pair<ResultRow, ResultRow> solve_at(const ExperimentPlan& plan, std::size_t k) {
  const std::uint64_t nu = plan.nus[k];
  const std::uint64_t seed = derive_seed(plan.seed, k);
  const NuSetup setup = setup_for(plan, nu, seed);
  const XMethod method = resolved_method(plan, setup);
  const double resolution = method_resolution(method);
  SolveConfig config;
  config.x_method = method;
  config.seed = seed;
  config.oracle = plan.oracle;

  auto fill = [&](ResultRow& row, const SolveReport& report) {
    row.nu = nu;
    row.seed = plan.seed;
    row.x = report.x_final;
    row.u_norm = report.perturbation.u.norm();
    row.objective = actual_objective(setup.actual, report.x_final).value();
    row.relaxed_value = report.value.value();
    row.residual = report.residual;
    row.oracle_gap = report.epsilon_certificate;
    if (row.oracle_gap) {
      const bool ok = *row.oracle_gap <= kGapTolerance * std::max(1.0, std::abs(row.relaxed_value));
      row.certificate_passed = ok;
      row.certificate_note = ok ? "oracle gap ok" : "oracle gap too large";
    }
  };

  ResultRow naive;
  naive.formulation = "naive";
  {
    const auto start = std::chrono::steady_clock::now();
    const SolveReport report = solve_joint(setup.perturbed, RockafellianSpec::exact(), config);
    fill(naive, report);
    naive.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }

  ResultRow relaxed;
  relaxed.formulation = "rockafellian";
  const auto start = std::chrono::steady_clock::now();
  const Variant variant = resolved_variant(plan, setup);
  const double theta = plan.fixed_theta.empty()
                           ? theta_schedule(setup.perturbed.p(), setup.actual.p(), plan.theta_floor)
                           : plan.fixed_theta[k];
  const RockafellianSpec spec = relaxed_spec(plan, setup, variant, theta, nu);
  const SolveReport report = solve_joint(setup.perturbed, spec, config);
  fill(relaxed, report);
  relaxed.theta = theta;

  if (variant == Variant::kQuadraticPenalty) {
    const double rho = plan.rate.rho.value_or(corner_norm(setup.box));
    const double epsilon = plan.rate.epsilon.value_or(resolution);
    try {
      const RateCertificate cert =
          rate_constants(setup.actual, rho, epsilon, plan.rate.y_sup, grid_x_oracle(setup.box, resolution), resolution);
      const Eigen::VectorXd& p_nu = spec.p_nu->entries();
      relaxed.eta_nu = eta_bound(cert, p_nu, setup.actual.p(), theta);
      if (plan.oracle && rate_applicability(cert, p_nu, setup.actual.p(), theta).applicable()) {
        const OracleResult actual = brute_force_oracle(setup.actual, RockafellianSpec::exact(), 0.0, setup.box,
                                                       resolution, {epsilon + 2.0 * *relaxed.eta_nu}, config);
        double distance = std::numeric_limits<double>::infinity();
        for (const auto& x : actual.argmin_sets.front()) distance = std::min(distance, (x - relaxed.x).norm());
        const bool ok = distance <= *relaxed.eta_nu;
        relaxed.certificate_passed = relaxed.certificate_passed.value_or(true) && ok;
        if (!relaxed.certificate_note.empty()) relaxed.certificate_note += "; ";
        relaxed.certificate_note += ok ? "rate bound ok" : "rate bound violated";
      }
    } catch (const DomainError&) {
      relaxed.eta_nu.reset();
    } catch (const UnboundedError&) {
      relaxed.eta_nu.reset();
    }
  }
  relaxed.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return {std::move(naive), std::move(relaxed)};
}

std::uint64_t positive_integer(const json& value, const std::string& path) {
  const std::int64_t v = cfg::integer(value, path);
  if (v <= 0) throw ConfigError(path + ": must be positive");
  return static_cast<std::uint64_t>(v);
}

}  // namespace

ExperimentPlan parse_plan(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("/: expected a plan object");
  static const std::set<std::string> kKeys{"name",  "instance", "variant", "nus",  "theta",  "theta_floor", "phi",
                                           "lambda", "x_method", "zbar",   "oracle", "seed", "rate"};
  for (const auto& [key, value] : doc.items()) {
    if (!kKeys.count(key)) throw ConfigError("/" + key + ": unknown plan field");
  }
  ExperimentPlan plan;
  plan.echo = doc;

  const json& instance = cfg::require(doc, "instance", "");
  if (instance.is_string()) {
    const std::string ref = instance.get<std::string>();
    if (ref.rfind(kBuiltinPrefix, 0) == 0) {
      plan.builtin = ref.substr(kBuiltinPrefix.size());
      const auto names = builtin_example_names();
      if (std::find(names.begin(), names.end(), plan.builtin) == names.end())
        throw ConfigError("/instance: unknown built-in example \"" + plan.builtin + "\"");
    } else {
      const std::filesystem::path path = base_dir.empty() ? std::filesystem::path(ref) : base_dir / ref;
      plan.instance = build_from_config(cfg::load_json_file(path));
    }
  } else if (instance.is_object()) {
    plan.instance = build_from_config(instance);
  } else {
    throw ConfigError("/instance: expected \"builtin:NAME\", a path or an instance object");
  }
  const auto* name = cfg::optional(doc, "name", "");
  plan.name = name ? cfg::string(*name, "/name") : (plan.builtin.empty() ? plan.instance->name : plan.builtin);
  if (plan.name.empty() || plan.name.find_first_of("/\\") != std::string::npos)
    throw ConfigError("/name: must be a nonempty file-name-safe string");

  const json& nus = cfg::require(doc, "nus", "");
  if (!nus.is_array() || nus.empty()) throw ConfigError("/nus: expected a nonempty array of positive integers");
  for (std::size_t k = 0; k < nus.size(); ++k) {
    const std::uint64_t nu = positive_integer(nus[k], cfg::child("/nus", k));
    if (!plan.builtin.empty() && nu < 2) throw ConfigError(cfg::child("/nus", k) + ": built-in examples need nu >= 2");
    if (!plan.nus.empty() && nu <= plan.nus.back()) throw ConfigError(cfg::child("/nus", k) + ": nus must be strictly ascending");
    plan.nus.push_back(nu);
  }

  if (const auto* variant = cfg::optional(doc, "variant", "")) {
    try {
      plan.variant = variant_from_name(cfg::string(*variant, "/variant"));
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("/variant: ") + e.what());
    }
  }
  if (const auto* theta = cfg::optional(doc, "theta", "")) {
    if (theta->is_string()) {
      if (theta->get<std::string>() != "schedule") throw ConfigError("/theta: expected \"schedule\" or an array");
    } else {
      const Eigen::VectorXd values = cfg::vector(*theta, "/theta", static_cast<Eigen::Index>(plan.nus.size()));
      if ((values.array() < 0.0).any()) throw ConfigError("/theta: entries must be nonnegative");
      plan.fixed_theta.assign(values.data(), values.data() + values.size());
    }
  }
  if (const auto* floor = cfg::optional(doc, "theta_floor", "")) {
    plan.theta_floor = cfg::number(*floor, "/theta_floor");
    if (!(plan.theta_floor > 0.0)) throw ConfigError("/theta_floor: must be positive");
  }
  if (const auto* phi = cfg::optional(doc, "phi", "")) {
    plan.phi = cfg::string(*phi, "/phi");
    try {
      (void)phi_family_from_tag(plan.phi);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("/phi: ") + e.what());
    }
  }
  if (const auto* lambda = cfg::optional(doc, "lambda", "")) {
    if (!(lambda->is_string() && lambda->get<std::string>() == "schedule")) {
      plan.lambda = cfg::number(*lambda, "/lambda");
      if (!(*plan.lambda > 0.0)) throw ConfigError("/lambda: must be positive");
    }
  }
  if (const auto* zbar = cfg::optional(doc, "zbar", "")) {
    const std::string mode = cfg::string(*zbar, "/zbar");
    if (mode == "nominal") {
      plan.zbar = ZbarMode::kNominal;
    } else if (mode == "frozen") {
      plan.zbar = ZbarMode::kFrozen;
    } else {
      throw ConfigError("/zbar: expected \"nominal\" or \"frozen\"");
    }
  }
  if (const auto* oracle = cfg::optional(doc, "oracle", "")) plan.oracle = cfg::boolean(*oracle, "/oracle");
  if (const auto* seed = cfg::optional(doc, "seed", "")) {
    const std::int64_t v = cfg::integer(*seed, "/seed");
    if (v < 0) throw ConfigError("/seed: must be nonnegative");
    plan.seed = static_cast<std::uint64_t>(v);
  }
  if (const auto* rate = cfg::optional(doc, "rate", "")) {
    if (const auto* rho = cfg::optional(*rate, "rho", "/rate")) {
      plan.rate.rho = cfg::number(*rho, "/rate/rho");
      if (!(*plan.rate.rho > 0.0)) throw ConfigError("/rate/rho: must be positive");
    }
    if (const auto* eps = cfg::optional(*rate, "epsilon", "/rate")) {
      plan.rate.epsilon = cfg::number(*eps, "/rate/epsilon");
      if (!(*plan.rate.epsilon >= 0.0)) throw ConfigError("/rate/epsilon: must be nonnegative");
    }
    if (const auto* y = cfg::optional(*rate, "y_sup", "/rate")) {
      plan.rate.y_sup = cfg::number(*y, "/rate/y_sup");
      if (!(plan.rate.y_sup >= 0.0)) throw ConfigError("/rate/y_sup: must be nonnegative");
    }
  }

  // Resolve the instance once so that plan-level mistakes surface before any solve.
  const NuSetup probe = setup_for(plan, plan.nus.front(), derive_seed(plan.seed, 0));
  if (const auto* method = cfg::optional(doc, "x_method", "")) {
    plan.x_method = *method;
    const XMethod parsed = parse_x_method(*method, probe.box, "/x_method");
    if (plan.instance) check_x_method(*plan.instance, parsed);
    if (std::holds_alternative<ProjectedGradientMethod>(parsed) && !plan.builtin.empty() && plan.builtin != "ex21")
      throw ConfigError("/x_method: " + plan.builtin + " has scenarios without declared gradients; use \"grid\"");
  }
  const Variant variant = resolved_variant(plan, probe);
  if (variant == Variant::kSupportPerturbation && !probe.perturbed.support())
    throw ConfigError("/variant: support perturbation needs an instance with a support model");
  if (variant == Variant::kComposite && !probe.perturbed.composite())
    throw ConfigError("/variant: composite needs an instance with a composite block");
  return plan;
}

ExperimentPlan builtin_plan(std::string_view name) {
  json doc = {{"name", std::string(name)},
              {"instance", std::string(kBuiltinPrefix) + std::string(name)},
              {"nus", {10, 100, 1000}}};
  return parse_plan(doc);
}

ExperimentPlan load_plan(std::string_view reference) {
  if (reference.rfind(kBuiltinPrefix, 0) == 0) return builtin_plan(reference.substr(kBuiltinPrefix.size()));
  const std::filesystem::path path(reference);
  return parse_plan(cfg::load_json_file(path), path.parent_path());
}

bool ExperimentResult::certificates_passed() const {
  return std::all_of(rows.begin(), rows.end(), [](const ResultRow& r) { return r.certificate_passed.value_or(true); });
}

ExperimentResult run_experiment(const ExperimentPlan& plan) {
  if (plan.nus.empty()) throw ConfigError("/nus: empty");
  ExperimentResult result;
  result.plan = plan;
  const auto pairs = parallel_map<std::pair<ResultRow, ResultRow>>(plan.nus.size(), [&](std::size_t k) {
    return solve_at(plan, k);
  });
  for (const auto& [naive, relaxed] : pairs) {
    result.rows.push_back(naive);
    result.rows.push_back(relaxed);
  }
  return result;
}

std::vector<ReportFormat> parse_formats(std::string_view list) {
  std::vector<ReportFormat> formats;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t end = std::min(list.find(',', start), list.size());
    const std::string_view item = list.substr(start, end - start);
    ReportFormat f;
    if (item == "csv") {
      f = ReportFormat::kCsv;
    } else if (item == "json") {
      f = ReportFormat::kJson;
    } else if (item == "plotdata") {
      f = ReportFormat::kPlotdata;
    } else {
      throw ConfigError("--format: unknown format \"" + std::string(item) + "\" (expected csv, json, plotdata)");
    }
    if (std::find(formats.begin(), formats.end(), f) == formats.end()) formats.push_back(f);
    start = end + 1;
  }
  return formats;
}

int run_command(const RunOptions& options, std::ostream& log) {
  ExperimentPlan plan;
  try {
    plan = load_plan(options.plan);
    if (options.oracle) {
      plan.oracle = true;
      plan.echo["oracle"] = true;
    }
    if (options.seed) {
      plan.seed = *options.seed;
      plan.echo["seed"] = *options.seed;
    }
    if (options.formats.empty()) throw ConfigError("--format: no output format selected");
    std::filesystem::create_directories(options.out_dir);
  } catch (const std::exception& e) {
    log << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }

  ExperimentResult result;
  try {
    result = run_experiment(plan);
  } catch (const std::exception& e) {
    log << "run failed: " << e.what() << '\n';
    return kExitConfigError;
  }
  try {
    for (const auto& path : emit_report(result, options.out_dir, options.formats)) log << "wrote " << path.string() << '\n';
  } catch (const std::exception& e) {
    log << "cannot write report: " << e.what() << '\n';
    return kExitConfigError;
  }
  if (!result.certificates_passed()) {
    for (const auto& row : result.rows) {
      if (!row.certificate_passed.value_or(true))
        log << "certificate failed: nu=" << row.nu << ' ' << row.formulation << " (" << row.certificate_note << ")\n";
    }
    return kExitCertificateFailure;
  }
  return kExitOk;
}

}  // namespace rockrelax
