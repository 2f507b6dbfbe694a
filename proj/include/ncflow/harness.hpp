#pragma once

#include "ncflow/config.hpp"
#include "ncflow/csv.hpp"

#include "json.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace ncflow {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int parse_error = 2;
inline constexpr int validation_error = 3;
inline constexpr int verdict_failed = 4;
inline constexpr int flow_failed = 5;
inline constexpr int io_error = 6;
} // namespace exit_code

/// Maps a library exception to the documented process exit status.
int exit_code_for(const std::exception& e);

csv::Table series_table(const SeriesRecord& record);
csv::Table field_table(const SphereCurvatureField& field, const std::vector<double>& speed,
                       Backend backend);
csv::Table distance_table(const DistanceSeries& series);
csv::Table report_table(const std::vector<ResidualReport>& reports);

void write_series(const SeriesRecord& record, const std::filesystem::path& path);
void write_series(const DistanceSeries& series, const std::filesystem::path& path);
void write_series(const std::vector<ResidualReport>& reports, const std::filesystem::path& path);

struct RunOutcome
{
  int exit_code = exit_code::ok;
  nlohmann::json summary;
};

/// Runs the configured pipeline, writes its CSVs and `summary.json` into the
/// output directory, and reports progress lines on `log`.
RunOutcome run_command(const ExperimentConfig& cfg, std::ostream& log);

} // namespace ncflow
