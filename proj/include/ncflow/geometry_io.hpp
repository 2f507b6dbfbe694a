#pragma once

#include "ncflow/csv.hpp"
#include "ncflow/geometry.hpp"

#include <filesystem>

namespace ncflow {

/// Node table with header `x,y` (curves) or `x,r` (profiles).
csv::Table geometry_table(const DiscreteHypersurface& h);

/// Writes the node CSV and, when `sidecar` is set, the JSON sidecar with the
/// backend and topology next to it (same stem, `.json`).
void write_geometry(const std::filesystem::path& csv_path, const DiscreteHypersurface& h,
                    bool sidecar = true);

/// Reads a geometry CSV and its JSON sidecar.
DiscreteHypersurface read_geometry(const std::filesystem::path& csv_path);

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

} // namespace ncflow
