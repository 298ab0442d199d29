#ifndef RUINLAB_CONFIG_HPP
#define RUINLAB_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ruinlab/boundary.hpp"
#include "ruinlab/model.hpp"

namespace ruinlab {

inline constexpr int kSchemaVersion = 1;

enum class Mode { Simulate, Asymptotics, Compare, Table };
enum class Method { LadderMc, TiltedIs, QuadratureExact };
enum class TheoremChoice { Auto, Heavy, LightFixed, LightAtom, LightSharp };

const char* to_string(Mode mode);
const char* to_string(Method method);
Mode parse_mode(std::string_view name);

struct ExperimentConfig {
  Mode mode = Mode::Compare;
  RiskModel model;
  BoundaryFunction rule = BoundaryFunction::classical();
  std::optional<double> fixed_intensity{};
  Method method = Method::LadderMc;
  TheoremChoice theorem = TheoremChoice::Auto;
  std::vector<double> u_grid{};
  std::uint64_t n = 100000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::size_t strata_cells = 256;
  std::uint64_t n_per_stratum = 10000;
  double stratification_tolerance = 0.05;
  // Validated document with the execution-only keys removed; echoed into
  // the JSON sidecar.
  nlohmann::json echo{};
};

// Sets the value at a dotted path ("model.premium_rate=3"). The value is
// read as JSON when it parses, otherwise as a string. ConfigError on a
// malformed assignment.
void apply_override(nlohmann::json& document, std::string_view assignment);

// Validates the document against schema version 1 and builds the
// experiment. Every failure is reported as ConfigError.
ExperimentConfig parse_config(const nlohmann::json& document);

nlohmann::json load_json_file(const std::string& path);

}  // namespace ruinlab

#endif  // RUINLAB_CONFIG_HPP
