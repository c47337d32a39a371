#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "collinear/dynamics.hpp"
#include "collinear/errors.hpp"
#include "collinear/model.hpp"
#include "collinear/verify.hpp"

namespace collinear::cli {

inline constexpr int kSchemaVersion = 1;

enum class ScenarioKind { relative_equilibrium, homographic, non_central_control, figure_eight, custom };
// automatic: quad for scenarios built on a central configuration, double otherwise.
enum class Precision { automatic, double_precision, quad_precision };
enum class CheckKind { automatic, collinear_homographic, saari, generic };

// An invalid configuration value; field() names it using the JSON key path.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct ScenarioConfig {
  int schema = kSchemaVersion;
  ScenarioKind kind = ScenarioKind::relative_equilibrium;
  std::vector<double> masses;
  std::vector<PotentialTerm> potential{{-1.0, 1.0}};
  std::vector<std::size_t> ordering;  // empty: identity
  // Angular rate: omega0 if set, otherwise omega_factor times the circular rate.
  std::optional<double> omega0;
  double omega_factor = 1.0;
  double dilation_rate = 0.0;
  std::vector<double> gaps;                       // non_central_control
  std::vector<std::array<double, 4>> state;       // custom: x y vx vy per body
  std::string fixture;                            // custom: fixture file instead of state
  std::optional<double> t_end;
  std::optional<double> periods;                  // multiples of the scenario's natural period
  Precision precision = Precision::automatic;
  IntegratorConfig integrator;
  Tolerances tolerances;
  CheckKind check = CheckKind::automatic;
  std::string trajectory_path;
  std::string diagnostics_path;
  std::string report_path;
};

// Reads the document into a config without checking cross-field consistency.
ScenarioConfig parse_config(const nlohmann::json& doc);
ScenarioConfig load_config(const std::string& path);
nlohmann::json to_json(const ScenarioConfig& config);

// Checks every field against the preconditions of the chosen scenario and
// throws ConfigError naming the first offending field.
void validate(const ScenarioConfig& config);

std::string to_string(ScenarioKind kind);
ScenarioKind parse_scenario(const std::string& name);
std::string to_string(CheckKind kind);
CheckKind parse_check(const std::string& name);

}  // namespace collinear::cli
