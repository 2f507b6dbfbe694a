#pragma once

#include "ncflow/containment.hpp"
#include "ncflow/flow.hpp"
#include "ncflow/geometry.hpp"
#include "ncflow/linearized.hpp"
#include "ncflow/noncollapse.hpp"
#include "ncflow/speed.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ncflow {

enum class Command
{
  RunFlow,
  AnalyzeNoncollapse,
  RunContainment,
  VerifyLinearized,
  CheckSpeeds,
};

std::string to_string(Command c);
Command parse_command(const std::string& text);

/// A built-in generator with its parameters, or a geometry CSV with sidecar.
struct GeometrySpec
{
  std::string generator; ///< empty when `file` is used
  nlohmann::json params = nlohmann::json::object();
  std::filesystem::path file;
  std::size_t n = 256;

  DiscreteHypersurface build() const;
  DiscreteHypersurface build(std::size_t resolution) const;
};

struct VerifierSettings
{
  std::vector<std::size_t> resolutions{64, 128, 256};
  std::vector<FieldLabel> labels{FieldLabel::speed(), FieldLabel::normal_component(0),
                                 FieldLabel::scaling_solution()};
};

/// Pass/fail thresholds for the theorem verdicts.
struct Tolerances
{
  double ratio_defect = 1e-3;    ///< relative to the initial ratio
  double distance_defect = 1e-3; ///< relative to d_min(0)
  double radius = 5e-3;          ///< relative, exact shrinking laws
  double min_order = 1.0;
  double certificate = 1e-10;
  double circum_slack = 2e-2;
};

struct ExperimentConfig
{
  Command command = Command::RunFlow;
  GeometrySpec geometry;
  std::optional<GeometrySpec> geometry_b;
  OrientationCase orientation = OrientationCase::Nested;
  SpeedFunction speed = SpeedFunction::sum();
  FlowConfig flow;
  AnalyzerOptions analyzer;
  VerifierSettings verifier;
  Tolerances tolerances;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 0;
  int samples = 1000;
  unsigned threads = 0; ///< 0: NONCOLLAPSE_THREADS or machine parallelism
};

/// Validates a JSON document and applies defaults. Throws ParseError for
/// malformed values and ValidationError for missing or out-of-range keys; both
/// name the offending key.
ExperimentConfig parse_config(const nlohmann::json& doc);

/// Reads a JSON config file (may be empty) and applies dotted-path overrides
/// such as {"flow.t_end", "0.2"}; override values are parsed as JSON when
/// possible and as strings otherwise.
nlohmann::json load_config_document(const std::filesystem::path& path,
                                    const std::vector<std::pair<std::string, std::string>>& overrides);

void apply_override(nlohmann::json& doc, const std::string& dotted_key, const std::string& value);

} // namespace ncflow
