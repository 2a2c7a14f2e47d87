#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

namespace rockrelax::config {

/// Parses JSON text. Syntax errors become ConfigError with line and column.
nlohmann::json parse_json(std::string_view text, const std::string& source = "<input>");
nlohmann::json load_json_file(const std::filesystem::path& path);

/// Field access with JSON-pointer diagnostics. `path` names obj itself.
const nlohmann::json& require(const nlohmann::json& obj, std::string_view key, const std::string& path);
const nlohmann::json* optional(const nlohmann::json& obj, std::string_view key, const std::string& path);
std::string child(const std::string& path, std::string_view key);
std::string child(const std::string& path, std::size_t index);

double number(const nlohmann::json& value, const std::string& path);
std::int64_t integer(const nlohmann::json& value, const std::string& path);
bool boolean(const nlohmann::json& value, const std::string& path);
std::string string(const nlohmann::json& value, const std::string& path);
/// Array of numbers; checks the length when `size` is given.
Eigen::VectorXd vector(const nlohmann::json& value, const std::string& path,
                       std::optional<Eigen::Index> size = std::nullopt);

}  // namespace rockrelax::config
