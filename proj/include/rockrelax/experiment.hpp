#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rockrelax/instances.hpp"
#include "rockrelax/rockafellian.hpp"
#include "rockrelax/solver.hpp"

namespace rockrelax {

struct RateSettings {
  /// Radius of the ball; defaults to the largest corner norm of the box.
  std::optional<double> rho;
  /// Optimality slack of the relaxed solutions; defaults to the grid spacing.
  std::optional<double> epsilon;
  double y_sup = 0.0;
};

/// One sweep over nu: an instance, the relaxation to compare with the naive
/// solve, and the theta sequence.
struct ExperimentPlan {
  std::string name;
  /// Built-in example name ("ex21", "ex22", "ex23"), empty for config instances.
  std::string builtin;
  std::optional<InstanceDef> instance;
  /// Defaults to the example's relaxation, or quadratic for config instances.
  std::optional<Variant> variant;
  std::vector<std::uint64_t> nus;
  /// One theta per nu; empty selects theta_schedule.
  std::vector<double> fixed_theta;
  double theta_floor = 1.0;
  std::string phi = "kl";
  /// Support shift penalty; nu^(4/3) when unset.
  std::optional<double> lambda;
  std::optional<nlohmann::json> x_method;
  ZbarMode zbar = ZbarMode::kNominal;
  bool oracle = false;
  std::uint64_t seed = 0;
  RateSettings rate;
  nlohmann::json echo;
};

/// Parses a plan document
///   {name?, instance: "builtin:NAME" | path | {instance}, variant?, nus,
///    theta?: "schedule" | [theta per nu], theta_floor?, phi?, lambda?,
///    x_method?, zbar?, oracle?, seed?, rate?: {rho?, epsilon?, y_sup?}}.
/// Relative instance paths resolve against base_dir. Throws ConfigError.
ExperimentPlan parse_plan(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});

/// Default sweep for a built-in example.
ExperimentPlan builtin_plan(std::string_view name);

/// "builtin:NAME" or the path of a plan file.
ExperimentPlan load_plan(std::string_view reference);

struct ResultRow {
  std::uint64_t nu = 0;
  /// "naive" (u frozen at 0) or "rockafellian".
  std::string formulation;
  Point x;
  double u_norm = 0.0;
  /// Actual objective at x.
  double objective = 0.0;
  /// Value of the solved formulation at its solution.
  double relaxed_value = 0.0;
  double theta = 0.0;
  std::optional<double> eta_nu;
  std::optional<double> residual;
  std::optional<double> oracle_gap;
  double wall_ms = 0.0;
  std::uint64_t seed = 0;
  /// Set when the row carries a certificate (oracle gap, rate inequality).
  std::optional<bool> certificate_passed;
  std::string certificate_note;
};

struct ExperimentResult {
  ExperimentPlan plan;
  std::vector<ResultRow> rows;
  bool certificates_passed() const;
};

/// Solves the naive and relaxed problems at every nu, in parallel over nu;
/// rows come back in plan order.
ExperimentResult run_experiment(const ExperimentPlan& plan);

enum class ReportFormat { kCsv, kJson, kPlotdata };

/// Comma-separated list of csv, json, plotdata. Throws ConfigError.
std::vector<ReportFormat> parse_formats(std::string_view list);

struct RunOptions {
  std::string plan;
  std::filesystem::path out_dir;
  bool oracle = false;
  std::optional<std::uint64_t> seed;
  std::vector<ReportFormat> formats{ReportFormat::kCsv, ReportFormat::kJson};
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitCertificateFailure = 2;

/// The `run` command. Configuration errors return 1 before any file is
/// written; reports are flushed before a certificate failure returns 2.
int run_command(const RunOptions& options, std::ostream& log);

}  // namespace rockrelax
