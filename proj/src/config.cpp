#include "rockrelax/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "rockrelax/errors.hpp"

namespace rockrelax::config {

using nlohmann::json;

json parse_json(std::string_view text, const std::string& source) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t k = 0; k < end; ++k) {
      if (text[k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": invalid JSON");
  }
}

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_json(buffer.str(), path.string());
}

std::string child(const std::string& path, std::string_view key) { return path + "/" + std::string(key); }

std::string child(const std::string& path, std::size_t index) { return path + "/" + std::to_string(index); }

const json& require(const json& obj, std::string_view key, const std::string& path) {
  if (!obj.is_object()) throw ConfigError(path + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(child(path, key) + ": missing field");
  return *it;
}

const json* optional(const json& obj, std::string_view key, const std::string& path) {
  if (!obj.is_object()) throw ConfigError(path + ": expected an object");
  const auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

double number(const json& value, const std::string& path) {
  if (!value.is_number()) throw ConfigError(path + ": expected a number");
  const double x = value.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path + ": expected a finite number");
  return x;
}

std::int64_t integer(const json& value, const std::string& path) {
  if (!value.is_number_integer()) throw ConfigError(path + ": expected an integer");
  return value.get<std::int64_t>();
}

bool boolean(const json& value, const std::string& path) {
  if (!value.is_boolean()) throw ConfigError(path + ": expected true or false");
  return value.get<bool>();
}

std::string string(const json& value, const std::string& path) {
  if (!value.is_string()) throw ConfigError(path + ": expected a string");
  return value.get<std::string>();
}

Eigen::VectorXd vector(const json& value, const std::string& path, std::optional<Eigen::Index> size) {
  if (!value.is_array()) throw ConfigError(path + ": expected an array of numbers");
  if (size && static_cast<Eigen::Index>(value.size()) != *size)
    throw ConfigError(path + ": expected " + std::to_string(*size) + " entries, got " + std::to_string(value.size()));
  Eigen::VectorXd out(static_cast<Eigen::Index>(value.size()));
  for (std::size_t k = 0; k < value.size(); ++k) out(static_cast<Eigen::Index>(k)) = number(value[k], child(path, k));
  return out;
}

}  // namespace rockrelax::config
