#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "rockrelax/experiment.hpp"

namespace rockrelax {

/// Shortest decimal that reads back to the same double; "inf", "-inf", "nan"
/// otherwise. Locale independent.
std::string format_double(double value);

inline constexpr const char* kCsvHeader = "nu,formulation,x,u_norm,objective,eta_nu,residual,oracle_gap,wall_ms,seed";

/// Header plus one LF-terminated line per row; missing values are empty.
std::string csv_report(const ExperimentResult& result);

/// Rows, the plan echo and the generator identification.
nlohmann::json json_report(const ExperimentResult& result);

/// Series name -> two-column "nu value" text, one series per formulation and
/// metric (x0, x1, ..., objective, u_norm, eta_nu, residual, oracle_gap).
std::map<std::string, std::string> plotdata_series(const ExperimentResult& result);

/// Writes <plan>.csv, <plan>.json and <plan>.<series>.dat into out_dir as
/// requested; returns the paths written. Throws std::runtime_error when a
/// file cannot be written.
std::vector<std::filesystem::path> emit_report(const ExperimentResult& result, const std::filesystem::path& out_dir,
                                               const std::vector<ReportFormat>& formats);

}  // namespace rockrelax
