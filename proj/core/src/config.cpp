#include "trajscore/config.hpp"

#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

namespace trajscore {

Scenario scenario_from_string(const std::string& s) {
  if (s == "urban") return Scenario::urban;
  if (s == "highway") return Scenario::highway;
  throw ConfigError("unknown scenario '" + s + "'");
}

std::string to_string(Scenario s) {
  return s == Scenario::urban ? "urban" : "highway";
}

namespace {

std::map<std::string, double*> numeric_fields(AnalysisConfig& c) {
  return {
      {"kappa", &c.kappa},
      {"gamma_interaction", &c.gamma_interaction},
      {"gamma_anomaly", &c.gamma_anomaly},
      {"gamma_cap", &c.gamma_cap},
      {"prediction_horizon_s", &c.prediction_horizon_s},
      {"drac_min", &c.drac_min},
      {"gating_radius", &c.gating_radius},
      {"follow_lateral_tol", &c.follow_lateral_tol},
      {"follow_heading_tol_deg", &c.follow_heading_tol_deg},
      {"beta_min_urban_deg", &c.beta_min_urban_deg},
      {"beta_min_highway_deg", &c.beta_min_highway_deg},
      {"standing_speed", &c.standing_speed},
      {"moving_speed", &c.moving_speed},
      {"min_standing_duration_s", &c.min_standing_duration_s},
      {"resample_ds", &c.resample_ds},
      {"conflict_cell", &c.conflict_cell},
      {"behavior_eps", &c.behavior_eps},
      {"heatmap_resolution", &c.heatmap_resolution},
  };
}

}  // namespace

std::string AnalysisConfig::canonical_string() const {
  auto& self = const_cast<AnalysisConfig&>(*this);
  std::ostringstream out;
  out.precision(17);
  for (const auto& [name, ptr] : numeric_fields(self))
    out << name << '=' << *ptr << ';';
  out << "scenario=" << to_string(scenario) << ';';
  return out.str();
}

std::string AnalysisConfig::hash() const {
  // FNV-1a 64-bit.
  uint64_t h = 14695981039346656037ull;
  for (char ch : canonical_string()) {
    h ^= static_cast<uint8_t>(ch);
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

AnalysisConfig parse_config(const std::string& json_text, AnalysisConfig base) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid config JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  auto fields = numeric_fields(base);
  for (const auto& [key, value] : j.items()) {
    if (key == "scenario") {
      base.scenario = scenario_from_string(value.get<std::string>());
      continue;
    }
    auto it = fields.find(key);
    if (it == fields.end()) throw ConfigError("unknown config key '" + key + "'");
    if (!value.is_number())
      throw ConfigError("config key '" + key + "' must be numeric");
    *it->second = value.get<double>();
  }
  if (base.kappa < 1.0) throw ConfigError("kappa must be >= 1");
  return base;
}

AnalysisConfig load_config(const std::filesystem::path& path,
                           AnalysisConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_config(text, std::move(base));
}

}  // namespace trajscore
