#include "cli/run_config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace collapse::cli {

namespace {

using nlohmann::json;

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw std::invalid_argument("config field '" + field + "': " + what);
}

const json& require(const json& doc, const std::string& field) {
  auto it = doc.find(field);
  if (it == doc.end()) field_error(field, "missing required field");
  return *it;
}

double number(const json& v, const std::string& field) {
  if (!v.is_number()) field_error(field, std::string("expected a number, got ") + v.type_name());
  const double d = v.get<double>();
  if (!std::isfinite(d)) field_error(field, "must be finite");
  return d;
}

std::int64_t integer(const json& v, const std::string& field) {
  if (!v.is_number_integer()) field_error(field, std::string("expected an integer, got ") + v.type_name());
  return v.get<std::int64_t>();
}

std::string text(const json& v, const std::string& field) {
  if (!v.is_string()) field_error(field, std::string("expected a string, got ") + v.type_name());
  return v.get<std::string>();
}

}  // namespace

RunConfig parse_run_config(std::string_view source) {
  json doc;
  try {
    doc = json::parse(source);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");

  static const std::set<std::string> known = {"theta_i", "phi_i",  "rho",    "tau",  "pfn", "memory_depth",
                                              "max_steps", "grid_n", "method", "seed", "out"};
  for (const auto& item : doc.items()) {
    if (!known.contains(item.key())) field_error(item.key(), "unknown field");
  }

  RunConfig cfg;
  cfg.theta_i = number(require(doc, "theta_i"), "theta_i");
  cfg.phi_i = number(require(doc, "phi_i"), "phi_i");
  cfg.rho = number(require(doc, "rho"), "rho");
  if (cfg.rho < 0.0 || cfg.rho > 1.0) field_error("rho", "must lie in [0, 1]");
  cfg.tau = number(require(doc, "tau"), "tau");
  cfg.pfn = text(require(doc, "pfn"), "pfn");
  cfg.out = text(require(doc, "out"), "out");
  if (cfg.out.empty()) field_error("out", "must not be empty");

  if (doc.contains("memory_depth")) {
    const auto n = integer(doc["memory_depth"], "memory_depth");
    if (n < 0 || n > 4) field_error("memory_depth", "must lie in [0, 4]");
    cfg.memory_depth = static_cast<int>(n);
  }
  if (doc.contains("max_steps")) {
    const auto n = integer(doc["max_steps"], "max_steps");
    if (n < 1 || n > 1000000) field_error("max_steps", "must lie in [1, 1000000]");
    cfg.max_steps = static_cast<int>(n);
  }
  if (doc.contains("grid_n")) {
    const auto n = integer(doc["grid_n"], "grid_n");
    if (n < 64 || n > 16384) field_error("grid_n", "must lie in [64, 16384]");
    cfg.grid_n = static_cast<int>(n);
  }
  if (doc.contains("method")) {
    try {
      cfg.method = parse_solver_method(text(doc["method"], "method"));
    } catch (const std::invalid_argument& e) {
      field_error("method", e.what());
    }
  }
  if (doc.contains("seed")) {
    const auto s = integer(doc["seed"], "seed");
    if (s < 0) field_error("seed", "must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

}  // namespace collapse::cli
