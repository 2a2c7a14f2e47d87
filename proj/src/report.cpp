#include "rockrelax/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "rockrelax/random.hpp"

namespace rockrelax {
namespace {

using nlohmann::json;

std::string optional_cell(const std::optional<double>& value) { return value ? format_double(*value) : std::string(); }

json optional_json(const std::optional<double>& value) {
  if (!value || !std::isfinite(*value)) return nullptr;
  return *value;
}

json number_json(double value) {
  if (std::isfinite(value)) return value;
  return std::isnan(value) ? json("nan") : json(value > 0 ? "inf" : "-inf");
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buffer, end);
}

std::string csv_report(const ExperimentResult& result) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& row : result.rows) {
    std::string x;
    for (Eigen::Index j = 0; j < row.x.size(); ++j) {
      if (j > 0) x += ';';
      x += format_double(row.x(j));
    }
    out += std::to_string(row.nu) + ',' + row.formulation + ',' + x + ',' + format_double(row.u_norm) + ',' +
           format_double(row.objective) + ',' + optional_cell(row.eta_nu) + ',' + optional_cell(row.residual) + ',' +
           optional_cell(row.oracle_gap) + ',' + format_double(row.wall_ms) + ',' + std::to_string(row.seed) + '\n';
  }
  return out;
}

json json_report(const ExperimentResult& result) {
  json rows = json::array();
  for (const auto& row : result.rows) {
    json x = json::array();
    for (Eigen::Index j = 0; j < row.x.size(); ++j) x.push_back(row.x(j));
    json r = {{"nu", row.nu},
              {"formulation", row.formulation},
              {"x", x},
              {"u_norm", number_json(row.u_norm)},
              {"objective", number_json(row.objective)},
              {"relaxed_value", number_json(row.relaxed_value)},
              {"theta", number_json(row.theta)},
              {"eta_nu", optional_json(row.eta_nu)},
              {"residual", optional_json(row.residual)},
              {"oracle_gap", optional_json(row.oracle_gap)},
              {"wall_ms", row.wall_ms},
              {"seed", row.seed}};
    if (row.certificate_passed) {
      r["certificate"] = {{"passed", *row.certificate_passed}, {"note", row.certificate_note}};
    }
    rows.push_back(std::move(r));
  }
  return {{"plan", result.plan.echo},
          {"generator", {{"name", SplitMix64::kName}, {"seed", result.plan.seed}}},
          {"certificates_passed", result.certificates_passed()},
          {"rows", std::move(rows)}};
}

std::map<std::string, std::string> plotdata_series(const ExperimentResult& result) {
  std::map<std::string, std::string> series;
  auto add = [&](const ResultRow& row, const std::string& metric, std::optional<double> value) {
    if (!value || !std::isfinite(*value)) return;
    std::string& text = series[row.formulation + "_" + metric];
    if (text.empty()) text = "# nu " + metric + "\n";
    text += std::to_string(row.nu) + ' ' + format_double(*value) + '\n';
  };
  for (const auto& row : result.rows) {
    for (Eigen::Index j = 0; j < row.x.size(); ++j) add(row, "x" + std::to_string(j), row.x(j));
    add(row, "objective", row.objective);
    add(row, "u_norm", row.u_norm);
    add(row, "eta_nu", row.eta_nu);
    add(row, "residual", row.residual);
    add(row, "oracle_gap", row.oracle_gap);
  }
  return series;
}

std::vector<std::filesystem::path> emit_report(const ExperimentResult& result, const std::filesystem::path& out_dir,
                                               const std::vector<ReportFormat>& formats) {
  if (result.rows.empty()) throw std::runtime_error("emit_report: no rows");
  std::vector<std::filesystem::path> written;
  const std::string& name = result.plan.name;
  for (ReportFormat format : formats) {
    switch (format) {
      case ReportFormat::kCsv:
        written.push_back(out_dir / (name + ".csv"));
        write_file(written.back(), csv_report(result));
        break;
      case ReportFormat::kJson:
        written.push_back(out_dir / (name + ".json"));
        write_file(written.back(), json_report(result).dump(2) + '\n');
        break;
      case ReportFormat::kPlotdata:
        for (const auto& [series, text] : plotdata_series(result)) {
          written.push_back(out_dir / (name + "." + series + ".dat"));
          write_file(written.back(), text);
        }
        break;
    }
  }
  return written;
}

}  // namespace rockrelax
