#include "rockrelax/instances.hpp"

#include <array>
#include <cmath>
#include <utility>

#include "rockrelax/analysis.hpp"
#include "rockrelax/config.hpp"
#include "rockrelax/errors.hpp"
#include "rockrelax/random.hpp"

namespace rockrelax {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBoundTol = 1e-12;

constexpr std::array<std::pair<CatalogTag, std::string_view>, 6> kTagNames{{{CatalogTag::kLinear, "linear"},
                                                                            {CatalogTag::kQuadratic, "quadratic"},
                                                                            {CatalogTag::kHinge, "hinge"},
                                                                            {CatalogTag::kHeaviside, "heaviside"},
                                                                            {CatalogTag::kIndicatorBox, "indicator-box"},
                                                                            {CatalogTag::kCrossEntropy, "cross-entropy"}}};

// log(1 + exp(-t)) without overflow.
double softplus_neg(double t) { return t >= 0.0 ? std::log1p(std::exp(-t)) : -t + std::log1p(std::exp(t)); }

std::optional<CompositeBlock> build_composite(const std::optional<CompositeDef>& def, const Eigen::VectorXd& weights,
                                              const Eigen::VectorXd& actual_p) {
  if (!def) return std::nullopt;
  CompositeBlock block;
  block.bound = def->bound;
  if (def->covariance) {
    const Eigen::VectorXd& w = def->zbar == ZbarMode::kNominal ? weights : actual_p;
    const double zbar = w.dot(def->z);
    for (std::size_t i = 0; i < def->features.size(); ++i) {
      const double scale = def->z(static_cast<Eigen::Index>(i)) - zbar;
      const Eigen::VectorXd feature = def->features[i];
      block.maps.emplace_back([scale, feature](const Point& x) {
        return Eigen::VectorXd::Constant(1, scale * feature.dot(x));
      });
    }
  } else {
    for (std::size_t i = 0; i < def->matrices.size(); ++i) {
      const Eigen::MatrixXd a = def->matrices[i];
      const Eigen::VectorXd c = def->offsets[i];
      block.maps.emplace_back([a, c](const Point& x) -> Eigen::VectorXd { return a * x + c; });
    }
  }
  return block;
}

CatalogTerm parse_term(const nlohmann::json& doc, Eigen::Index n, const std::string& path) {
  namespace cfg = config;
  CatalogTerm term;
  term.tag = catalog_tag_from_name(cfg::string(cfg::require(doc, "tag", path), cfg::child(path, "tag")));
  const std::string params_path = cfg::child(path, "params");
  const auto& params = cfg::require(doc, "params", path);
  auto vec = [&](std::string_view key) {
    return cfg::vector(cfg::require(params, key, params_path), cfg::child(params_path, key), n);
  };
  auto num = [&](std::string_view key, double fallback) {
    const auto* v = cfg::optional(params, key, params_path);
    return v ? cfg::number(*v, cfg::child(params_path, key)) : fallback;
  };
  auto label = [&] {
    const double y = cfg::number(cfg::require(params, "label", params_path), cfg::child(params_path, "label"));
    if (y != 1.0 && y != -1.0) throw ConfigError(cfg::child(params_path, "label") + ": label must be -1 or 1");
    return y;
  };
  switch (term.tag) {
    case CatalogTag::kLinear:
    case CatalogTag::kHeaviside:
      term.a = vec("a");
      term.b = num("b", 0.0);
      break;
    case CatalogTag::kQuadratic:
      term.a = vec("center");
      term.weight = num("weight", 1.0);
      term.b = num("offset", 0.0);
      if (!(term.weight >= 0.0)) throw ConfigError(cfg::child(params_path, "weight") + ": must be nonnegative");
      break;
    case CatalogTag::kHinge:
    case CatalogTag::kCrossEntropy:
      term.a = vec("features");
      term.b = label();
      break;
    case CatalogTag::kIndicatorBox:
      term.lo = vec("lo");
      term.hi = vec("hi");
      if ((term.lo.array() > term.hi.array()).any()) throw ConfigError(params_path + ": lo exceeds hi");
      break;
  }
  return term;
}

CompositeDef parse_composite(const nlohmann::json& doc, Eigen::Index n, Eigen::Index s, const std::string& path) {
  namespace cfg = config;
  CompositeDef def;
  const std::string kind = cfg::string(cfg::require(doc, "kind", path), cfg::child(path, "kind"));
  def.bound = cfg::vector(cfg::require(doc, "bound", path), cfg::child(path, "bound"));
  if (def.bound.size() == 0) throw ConfigError(cfg::child(path, "bound") + ": needs at least one entry");
  const Eigen::Index m = def.bound.size();
  if (kind == "covariance") {
    if (m != 1) throw ConfigError(cfg::child(path, "bound") + ": covariance constraints are scalar");
    def.covariance = true;
    def.z = cfg::vector(cfg::require(doc, "z", path), cfg::child(path, "z"), s);
    const auto& features = cfg::require(doc, "features", path);
    const std::string fpath = cfg::child(path, "features");
    if (!features.is_array() || static_cast<Eigen::Index>(features.size()) != s)
      throw ConfigError(fpath + ": expected one feature vector per scenario");
    for (std::size_t i = 0; i < features.size(); ++i) def.features.push_back(cfg::vector(features[i], cfg::child(fpath, i), n));
    if (const auto* mode = cfg::optional(doc, "zbar", path)) {
      const std::string value = cfg::string(*mode, cfg::child(path, "zbar"));
      if (value == "nominal") {
        def.zbar = ZbarMode::kNominal;
      } else if (value == "frozen") {
        def.zbar = ZbarMode::kFrozen;
      } else {
        throw ConfigError(cfg::child(path, "zbar") + ": expected \"nominal\" or \"frozen\"");
      }
    }
  } else if (kind == "affine") {
    const auto& maps = cfg::require(doc, "maps", path);
    const std::string mpath = cfg::child(path, "maps");
    if (!maps.is_array() || static_cast<Eigen::Index>(maps.size()) != s)
      throw ConfigError(mpath + ": expected one map per scenario");
    for (std::size_t i = 0; i < maps.size(); ++i) {
      const std::string ipath = cfg::child(mpath, i);
      const auto& rows = cfg::require(maps[i], "matrix", ipath);
      const std::string rpath = cfg::child(ipath, "matrix");
      if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != m)
        throw ConfigError(rpath + ": expected " + std::to_string(m) + " rows");
      Eigen::MatrixXd a(m, n);
      for (std::size_t r = 0; r < rows.size(); ++r) a.row(static_cast<Eigen::Index>(r)) = cfg::vector(rows[r], cfg::child(rpath, r), n);
      def.matrices.push_back(std::move(a));
      const auto* offset = cfg::optional(maps[i], "offset", ipath);
      def.offsets.push_back(offset ? cfg::vector(*offset, cfg::child(ipath, "offset"), m) : Eigen::VectorXd::Zero(m));
    }
  } else {
    throw ConfigError(cfg::child(path, "kind") + ": expected \"affine\" or \"covariance\"");
  }
  return def;
}

PerturbationDef parse_perturbation(const nlohmann::json& doc, const ProbVector& p, const std::string& path) {
  namespace cfg = config;
  PerturbationDef def;
  const std::string kind = cfg::string(cfg::require(doc, "kind", path), cfg::child(path, "kind"));
  auto direction = [&] {
    const std::string ppath = cfg::child(path, "params");
    const auto& params = cfg::require(doc, "params", path);
    return cfg::vector(cfg::require(params, "direction", ppath), cfg::child(ppath, "direction"), p.size());
  };
  if (kind == "none") {
    def.kind = PerturbationKind::kNone;
  } else if (kind == "empirical") {
    def.kind = PerturbationKind::kEmpirical;
  } else if (kind == "mix") {
    def.kind = PerturbationKind::kMix;
    def.direction = direction();
    if (!in_simplex(def.direction, 1e-9))
      throw ConfigError(cfg::child(path, "params/direction") + ": mix target must be a probability vector");
  } else if (kind == "shift") {
    def.kind = PerturbationKind::kShift;
    def.direction = direction();
  } else {
    throw ConfigError(cfg::child(path, "kind") + ": expected none, mix, shift or empirical");
  }
  return def;
}

}  // namespace

ScenarioFunction box_restricted(const Box& box, ScenarioFunction::Evaluator value, ScenarioFunction::Gradient gradient) {
  ScenarioFunction::Evaluator eval = [box, value](const Point& x) -> ExtReal {
    if (!box.contains(x)) return ExtReal::pos_inf();
    return value ? value(x) : ExtReal(0.0);
  };
  ScenarioFunction::Gradient grad = [gradient](const Point& x) -> Eigen::VectorXd {
    return gradient ? gradient(x) : Eigen::VectorXd::Zero(x.size());
  };
  ScenarioFunction f(eval, grad, [box](const Point& x) { return box.contains(x); });
  f.with_subgradient_distance([box, gradient](const Point& x, const Eigen::VectorXd& w) {
    if (!box.contains(x)) return kInf;
    // dist(w - grad, N_box(x)) coordinate by coordinate.
    const Eigen::VectorXd r = gradient ? Eigen::VectorXd(w - gradient(x)) : w;
    double d2 = 0.0;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      const bool at_lo = x(j) <= box.lo(j) + kBoundTol;
      const bool at_hi = x(j) >= box.hi(j) - kBoundTol;
      double gap = r(j);
      if (at_lo && at_hi) {
        gap = 0.0;
      } else if (at_lo) {
        gap = std::max(r(j), 0.0);
      } else if (at_hi) {
        gap = std::min(r(j), 0.0);
      }
      d2 += gap * gap;
    }
    return std::sqrt(d2);
  });
  return f;
}

std::string_view catalog_tag_name(CatalogTag tag) {
  for (const auto& [t, name] : kTagNames) {
    if (t == tag) return name;
  }
  return "unknown";
}

CatalogTag catalog_tag_from_name(std::string_view name) {
  for (const auto& [t, n] : kTagNames) {
    if (n == name) return t;
  }
  throw ConfigError("unknown formula tag \"" + std::string(name) + "\"");
}

bool catalog_has_gradient(CatalogTag tag) { return tag != CatalogTag::kHeaviside; }

ScenarioFunction make_catalog_function(const CatalogTerm& term) {
  const Eigen::VectorXd a = term.a;
  const double b = term.b;
  switch (term.tag) {
    case CatalogTag::kLinear:
      return ScenarioFunction([a, b](const Point& x) { return ExtReal(a.dot(x) + b); },
                              [a](const Point&) { return a; });
    case CatalogTag::kQuadratic: {
      const double w = term.weight;
      return ScenarioFunction([a, b, w](const Point& x) { return ExtReal(0.5 * w * (x - a).squaredNorm() + b); },
                              [a, w](const Point& x) -> Eigen::VectorXd { return w * (x - a); });
    }
    case CatalogTag::kHinge:
      return ScenarioFunction([a, b](const Point& x) { return ExtReal(std::max(0.0, 1.0 - b * a.dot(x))); },
                              [a, b](const Point& x) -> Eigen::VectorXd {
                                if (1.0 - b * a.dot(x) > 0.0) return -b * a;
                                return Eigen::VectorXd::Zero(a.size());
                              },
                              [a, b](const Point& x) { return 1.0 - b * a.dot(x) != 0.0; });
    case CatalogTag::kHeaviside:
      return ScenarioFunction([a, b](const Point& x) { return ExtReal(a.dot(x) + b > 0.0 ? 1.0 : 0.0); });
    case CatalogTag::kIndicatorBox: {
      const Box box(term.lo, term.hi);
      return ScenarioFunction(
          [box](const Point& x) { return box.contains(x) ? ExtReal(0.0) : ExtReal::pos_inf(); },
          [](const Point& x) -> Eigen::VectorXd { return Eigen::VectorXd::Zero(x.size()); },
          [box](const Point& x) {
            return ((x - box.lo).array() > 0.0).all() && ((box.hi - x).array() > 0.0).all();
          });
    }
    case CatalogTag::kCrossEntropy:
      return ScenarioFunction([a, b](const Point& x) { return ExtReal(softplus_neg(b * a.dot(x))); },
                              [a, b](const Point& x) -> Eigen::VectorXd {
                                const double t = b * a.dot(x);
                                const double sigma = t >= 0.0 ? std::exp(-t) / (1.0 + std::exp(-t)) : 1.0 / (1.0 + std::exp(t));
                                return -b * sigma * a;
                              });
  }
  throw DomainError("make_catalog_function: unknown tag");
}

bool InstanceDef::has_gradients() const {
  auto ok = [](const CatalogTerm& t) { return catalog_has_gradient(t.tag); };
  return std::all_of(f0_terms.begin(), f0_terms.end(), ok) && std::all_of(scenarios.begin(), scenarios.end(), ok);
}

ProbVector InstanceDef::weights_at(std::uint64_t nu, std::uint64_t seed) const {
  if (nu == 0) throw DomainError("weights_at: nu must be positive");
  const double inv = 1.0 / static_cast<double>(nu);
  switch (perturbation.kind) {
    case PerturbationKind::kNone:
      return p;
    case PerturbationKind::kMix:
      return ProbVector((1.0 - inv) * p.entries() + inv * perturbation.direction);
    case PerturbationKind::kShift:
      return project_to_simplex(p.entries() + inv * perturbation.direction);
    case PerturbationKind::kEmpirical:
      return sample_empirical(p, nu, seed);
  }
  return p;
}

StochasticProgram InstanceDef::program(const ProbVector& weights) const {
  std::vector<ScenarioFunction> f0_parts;
  for (const auto& term : f0_terms) f0_parts.push_back(make_catalog_function(term));
  const bool smooth = std::all_of(f0_terms.begin(), f0_terms.end(), [](const CatalogTerm& t) {
    return catalog_has_gradient(t.tag);
  });
  ScenarioFunction::Evaluator value;
  ScenarioFunction::Gradient gradient;
  if (!f0_parts.empty()) {
    value = [f0_parts](const Point& x) {
      ExtReal total = 0.0;
      for (const auto& f : f0_parts) total += f(x);
      return total;
    };
    if (smooth) {
      gradient = [f0_parts](const Point& x) {
        Eigen::VectorXd g = Eigen::VectorXd::Zero(x.size());
        for (const auto& f : f0_parts) g += f.gradient(x);
        return g;
      };
    }
  }
  ScenarioFunction f0 = smooth ? box_restricted(box, value, gradient)
                               : ScenarioFunction([b = box, value](const Point& x) {
                                   return b.contains(x) ? value(x) : ExtReal::pos_inf();
                                 });
  std::vector<ScenarioFunction> fs;
  for (const auto& term : scenarios) fs.push_back(make_catalog_function(term));
  return StochasticProgram(n, std::move(f0), std::move(fs), weights, build_composite(composite, weights, p));
}

XMethod parse_x_method(const nlohmann::json& doc, const Box& box, const std::string& path) {
  namespace cfg = config;
  const std::string kind = cfg::string(cfg::require(doc, "kind", path), cfg::child(path, "kind"));
  auto num = [&](std::string_view key, double fallback) {
    const auto* v = cfg::optional(doc, key, path);
    return v ? cfg::number(*v, cfg::child(path, key)) : fallback;
  };
  if (kind == "grid") {
    const double resolution = num("resolution", 1e-3);
    if (!(resolution > 0.0)) throw ConfigError(cfg::child(path, "resolution") + ": must be positive");
    return GridMethod{box, resolution};
  }
  if (kind == "gradient") {
    ProjectedGradientMethod method{box};
    method.initial_step = num("initial_step", method.initial_step);
    method.tolerance = num("tolerance", method.tolerance);
    if (const auto* v = cfg::optional(doc, "iterations", path))
      method.iterations = static_cast<int>(cfg::integer(*v, cfg::child(path, "iterations")));
    if (!(method.initial_step > 0.0) || method.iterations <= 0)
      throw ConfigError(path + ": step and iteration count must be positive");
    return method;
  }
  throw ConfigError(cfg::child(path, "kind") + ": expected \"grid\" or \"gradient\"");
}

void check_x_method(const InstanceDef& instance, const XMethod& method) {
  if (!std::holds_alternative<ProjectedGradientMethod>(method)) return;
  for (std::size_t i = 0; i < instance.scenarios.size(); ++i) {
    if (!catalog_has_gradient(instance.scenarios[i].tag))
      throw ConfigError("/scenarios/" + std::to_string(i) + "/tag: " +
                        std::string(catalog_tag_name(instance.scenarios[i].tag)) +
                        " has no declared gradient, so the gradient x-method cannot be used; choose \"grid\"");
  }
  for (std::size_t i = 0; i < instance.f0_terms.size(); ++i) {
    if (!catalog_has_gradient(instance.f0_terms[i].tag))
      throw ConfigError("/f0/" + std::to_string(i) + "/tag: no declared gradient for the gradient x-method");
  }
  if (instance.composite) throw ConfigError("/x_method: the gradient x-method does not handle composite constraints");
}

InstanceDef build_from_config(const nlohmann::json& doc) {
  namespace cfg = config;
  const std::string root;
  if (!doc.is_object()) throw ConfigError("/: expected an object");
  InstanceDef def;
  const auto* name = cfg::optional(doc, "name", root);
  def.name = name ? cfg::string(*name, "/name") : "instance";
  def.n = cfg::integer(cfg::require(doc, "n", root), "/n");
  def.s = cfg::integer(cfg::require(doc, "s", root), "/s");
  if (def.n < 1) throw ConfigError("/n: must be at least 1");
  if (def.s < 1) throw ConfigError("/s: must be at least 1");

  const auto& scenarios = cfg::require(doc, "scenarios", root);
  if (!scenarios.is_array() || static_cast<Eigen::Index>(scenarios.size()) != def.s)
    throw ConfigError("/scenarios: expected an array of s = " + std::to_string(def.s) + " entries");
  for (std::size_t i = 0; i < scenarios.size(); ++i)
    def.scenarios.push_back(parse_term(scenarios[i], def.n, cfg::child("/scenarios", i)));

  const Eigen::VectorXd p = cfg::vector(cfg::require(doc, "p", root), "/p", def.s);
  if (!in_simplex(p, 1e-9)) throw ConfigError("/p: not a probability vector (entries >= 0 summing to 1)");
  def.p = ProbVector(p / p.sum());

  const auto& box = cfg::require(doc, "box", root);
  const Eigen::VectorXd lo = cfg::vector(cfg::require(box, "lo", "/box"), "/box/lo", def.n);
  const Eigen::VectorXd hi = cfg::vector(cfg::require(box, "hi", "/box"), "/box/hi", def.n);
  if ((lo.array() > hi.array()).any()) throw ConfigError("/box: lo exceeds hi");
  def.box = Box(lo, hi);

  if (const auto* f0 = cfg::optional(doc, "f0", root)) {
    if (!f0->is_array()) throw ConfigError("/f0: expected an array of terms");
    for (std::size_t i = 0; i < f0->size(); ++i) def.f0_terms.push_back(parse_term((*f0)[i], def.n, cfg::child("/f0", i)));
  }
  if (const auto* composite = cfg::optional(doc, "composite", root))
    def.composite = parse_composite(*composite, def.n, def.s, "/composite");
  if (const auto* perturbation = cfg::optional(doc, "perturbation", root))
    def.perturbation = parse_perturbation(*perturbation, def.p, "/perturbation");
  if (const auto* method = cfg::optional(doc, "x_method", root))
    check_x_method(def, parse_x_method(*method, def.box, "/x_method"));
  return def;
}

std::vector<std::string> builtin_example_names() { return {"ex21", "ex22", "ex23"}; }

ExampleInstance build_example(std::string_view name, std::uint64_t nu, ZbarMode zbar) {
  if (name != "ex21" && name != "ex22" && name != "ex23")
    throw ConfigError("unknown built-in example \"" + std::string(name) + "\"");
  if (nu < 2) throw DomainError("build_example: nu must be at least 2");
  const double v = static_cast<double>(nu);

  if (name == "ex21") {
    const Box box = Box::cube(1, 0.0, 1.0);
    SupportModel support;
    support.m = 1;
    support.points = {Eigen::VectorXd::Constant(1, 0.0), Eigen::VectorXd::Constant(1, v)};
    support.generator = [](const Eigen::VectorXd& xi, const Point& x) { return ExtReal(xi(0) * x(0) + 0.5 * (1.0 - x(0))); };
    support.generator_gradient = [](const Eigen::VectorXd& xi, const Point&) {
      return Eigen::VectorXd::Constant(1, xi(0) - 0.5);
    };
    const ProbVector p(Eigen::Vector2d(1.0, 0.0));
    const ProbVector p_nu(Eigen::Vector2d(1.0 - 1.0 / v, 1.0 / v));
    auto actual = StochasticProgram::from_support(1, box_restricted(box), support, p);
    auto perturbed = StochasticProgram::from_support(1, box_restricted(box), support, p_nu);
    auto spec = RockafellianSpec::quadratic(p_nu, theta_schedule(p_nu, p));
    return {std::move(actual), std::move(perturbed), std::move(spec), box, 1e-3};
  }

  if (name == "ex22") {
    const Box box = Box::cube(2, -1.0, 1.0);
    const std::array<double, 3> feature{-1.0, 1.0, v};
    const std::array<double, 3> label{-1.0, 1.0, 1.0};
    CompositeDef composite;
    composite.bound = Eigen::VectorXd::Constant(1, 0.25);
    composite.covariance = true;
    composite.z = Eigen::Vector3d(0.0, 1.0, 1.0);
    composite.zbar = zbar;
    InstanceDef def;
    def.name = "ex22";
    def.n = 2;
    def.s = 3;
    def.box = box;
    for (std::size_t i = 0; i < 3; ++i) {
      const Eigen::Vector2d row(feature[i], 1.0);
      composite.features.push_back(row);
      def.scenarios.push_back({CatalogTag::kHinge, row, label[i], 1.0, {}, {}});
    }
    def.composite = composite;
    def.p = ProbVector(Eigen::Vector3d(0.5, 0.5, 0.0));
    const ProbVector p_nu(Eigen::Vector3d(0.5, 0.5 - 1.0 / v, 1.0 / v));
    auto with_f0 = [&](const ProbVector& w) {
      const StochasticProgram plain = def.program(w);
      std::vector<ScenarioFunction> fs;
      for (Eigen::Index i = 0; i < plain.s(); ++i) fs.push_back(plain.scenario(i));
      ScenarioFunction f0 = box_restricted(
          box, [](const Point& x) { return ExtReal(x(0) * x(0)); },
          [](const Point& x) { return Eigen::Vector2d(2.0 * x(0), 0.0).eval(); });
      return StochasticProgram(2, std::move(f0), std::move(fs), w, plain.composite());
    };
    auto spec = RockafellianSpec::composite(p_nu, theta_schedule(p_nu, def.p), true);
    return {with_f0(def.p), with_f0(p_nu), std::move(spec), box, 5e-3};
  }

  const Box box = Box::cube(1, 0.0, 1.0);
  auto make_support = [](double xi1) {
    SupportModel support;
    support.m = 1;
    support.points = {Eigen::VectorXd::Constant(1, xi1), Eigen::VectorXd::Constant(1, 1.0)};
    support.generator = [](const Eigen::VectorXd& xi, const Point& x) { return ExtReal(xi(0) + x(0) > 0.0 ? 1.0 : 0.0); };
    // Either keep the point or move it just far enough to switch H off.
    support.prox = [](const Eigen::VectorXd& xi, const Point& x, double weight, double lambda) -> Eigen::VectorXd {
      const double t = xi(0) + x(0);
      if (t > 0.0 && 0.5 * lambda * t * t < weight) return Eigen::VectorXd::Constant(1, -t);
      return Eigen::VectorXd::Zero(1);
    };
    return support;
  };
  auto f0 = [&] {
    return box_restricted(
        box, [](const Point& x) { return ExtReal(0.25 * (x(0) - 1.0) * (x(0) - 1.0)); },
        [](const Point& x) { return Eigen::VectorXd::Constant(1, 0.5 * (x(0) - 1.0)); });
  };
  const ProbVector p(Eigen::Vector2d(0.5, 0.5));
  auto actual = StochasticProgram::from_support(1, f0(), make_support(0.0), p);
  auto perturbed = StochasticProgram::from_support(1, f0(), make_support(1.0 / v), p);
  auto spec = RockafellianSpec::support(p, perturbed.support()->points, theta_schedule(p, p), std::pow(v, 4.0 / 3.0));
  return {std::move(actual), std::move(perturbed), std::move(spec), box, 1e-3};
}

StochasticProgram l1_calmness_instance() {
  const Box box = Box::cube(1, 0.0, 1.0);
  std::vector<ScenarioFunction> fs;
  fs.push_back(make_catalog_function({CatalogTag::kLinear, Eigen::VectorXd::Constant(1, 2.0), 0.0, 1.0, {}, {}}));
  fs.push_back(make_catalog_function({CatalogTag::kLinear, Eigen::VectorXd::Constant(1, -1.3), 1.3, 1.0, {}, {}}));
  return StochasticProgram(1, box_restricted(box), std::move(fs), ProbVector(Eigen::Vector2d(0.5, 0.5)));
}

InstanceDef random_convex_instance(std::uint64_t seed, Eigen::Index n, Eigen::Index s) {
  if (n < 1 || s < 2) throw DomainError("random_convex_instance: need n >= 1 and s >= 2");
  SplitMix64 rng(seed);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform01(); };
  InstanceDef def;
  def.name = "random-" + std::to_string(seed);
  def.n = n;
  def.s = s;
  def.box = Box::cube(n, -1.0, 1.0);
  for (Eigen::Index i = 0; i < s; ++i) {
    CatalogTerm term;
    term.tag = CatalogTag::kQuadratic;
    term.a = Eigen::VectorXd(n);
    for (Eigen::Index j = 0; j < n; ++j) term.a(j) = uniform(-0.8, 0.8);
    term.weight = uniform(0.5, 2.0);
    def.scenarios.push_back(std::move(term));
  }
  Eigen::VectorXd r(s);
  for (Eigen::Index i = 0; i < s; ++i) r(i) = -std::log(1.0 - rng.uniform01());
  def.p = ProbVector(0.5 * Eigen::VectorXd::Constant(s, 1.0 / static_cast<double>(s)) + 0.5 * r / r.sum());
  Eigen::VectorXd d(s);
  for (Eigen::Index i = 0; i < s; ++i) d(i) = uniform(-1.0, 1.0);
  d.array() -= d.mean();
  if (d.norm() == 0.0) d(0) = 1.0, d(1) = -1.0;
  def.perturbation = {PerturbationKind::kShift, 0.5 * d / d.norm()};
  return def;
}

InstanceDef smooth_convex_instance() {
  InstanceDef def;
  def.name = "smooth3";
  def.n = 1;
  def.s = 3;
  def.box = Box::cube(1, -10.0, 10.0);
  def.f0_terms.push_back({CatalogTag::kQuadratic, Eigen::VectorXd::Zero(1), 0.0, 2.0, {}, {}});
  def.scenarios.push_back({CatalogTag::kLinear, Eigen::VectorXd::Constant(1, 1.0), 0.0, 1.0, {}, {}});
  def.scenarios.push_back({CatalogTag::kLinear, Eigen::VectorXd::Constant(1, -2.0), 1.0, 1.0, {}, {}});
  def.scenarios.push_back({CatalogTag::kLinear, Eigen::VectorXd::Constant(1, 0.5), -0.5, 1.0, {}, {}});
  def.p = ProbVector(Eigen::Vector3d(0.3, 0.5, 0.2));
  def.perturbation = {PerturbationKind::kShift, Eigen::Vector3d(1.0, -0.5, -0.5)};
  return def;
}

}  // namespace rockrelax
