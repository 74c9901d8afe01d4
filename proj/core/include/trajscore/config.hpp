#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

namespace trajscore {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Scenario { urban, highway };

Scenario scenario_from_string(const std::string& s);
std::string to_string(Scenario s);

/// All tunable constants of the analysis. Defaults follow the urban
/// calibration; any field can be overridden from a JSON config file.
struct AnalysisConfig {
  // Scoring weights.
  double kappa = 1.0;              // criticality factor, >= 1
  double gamma_interaction = 5.0;  // relevance weight on interaction
  double gamma_anomaly = 0.1;      // relevance weight on anomaly
  double gamma_cap = 10.0;         // cap on per-region rarity weights

  // Relation-indicator emission thresholds.
  double prediction_horizon_s = 5.0;  // THW/TTC/mTTCP cut
  double drac_min = 0.5;              // m/s^2
  double gating_radius = 75.0;        // m, candidate-pair gate
  double follow_lateral_tol = 1.0;    // m
  double follow_heading_tol_deg = 20.0;
  double beta_min_urban_deg = 20.0;   // dmttcp crossing-angle gate
  double beta_min_highway_deg = 2.0;
  Scenario scenario = Scenario::urban;

  // Kinematic conventions.
  double standing_speed = 0.5;        // m/s, below this a user stands
  double moving_speed = 1.0;          // m/s, intention-to-move-on / direction
  double min_standing_duration_s = 1.0;

  // Geometry discretization.
  double resample_ds = 0.5;           // m
  double conflict_cell = 0.5;         // m

  // Behavior clustering.
  double behavior_eps = 0.7;

  // Reporting.
  double heatmap_resolution = 2.0;    // m

  double beta_min_deg() const {
    return scenario == Scenario::urban ? beta_min_urban_deg
                                       : beta_min_highway_deg;
  }

  /// Canonical key=value serialization, used for the config hash.
  std::string canonical_string() const;
  /// FNV-1a hash of the canonical serialization, hex-encoded.
  std::string hash() const;
};

/// Reads overrides from a JSON object of config keys; unknown keys are a
/// ConfigError. Keys match the field names above.
AnalysisConfig load_config(const std::filesystem::path& path,
                           AnalysisConfig base = {});
AnalysisConfig parse_config(const std::string& json_text,
                            AnalysisConfig base = {});

}  // namespace trajscore
