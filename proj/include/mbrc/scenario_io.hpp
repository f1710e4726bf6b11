#pragma once

// Scenario package layout:
//   manifest.json        grid, aggregation_factor, z bounds, class catalog, file refs
//   rasters/*.asc        ESRI ASCII grids (class codes, elevation, cost layers)
//   species.csv          species_id,suitable_classes,elev_min,elev_max,range_file
//   ranges/*.csv         one cell_id per line (or an .asc mask, nonzero = in range)
//   technologies.csv     technology_id,from_classes,to_class,cost_layer
// Class lists inside CSV fields are '|'-separated.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mbrc/scenario.hpp"

namespace mbrc {

struct AsciiGrid {
  std::size_t ncols = 0;
  std::size_t nrows = 0;
  double xllcorner = 0.0;
  double yllcorner = 0.0;
  double cellsize = 1.0;
  std::optional<double> nodata;
  std::vector<double> values;  // row-major, top row first
};

/// `display_name` is the name used in error messages (package-relative path).
AsciiGrid read_ascii_grid(const std::filesystem::path& file, const std::string& display_name);
void write_ascii_grid(const std::filesystem::path& file, const AsciiGrid& grid);

/// Parses a package directory. Throws InputError naming the offending file
/// (and line where applicable) for parse, dimension and class errors.
Scenario load_scenario(const std::filesystem::path& dir);

/// Writes a package that load_scenario reads back to an equal Scenario.
void save_scenario(const Scenario& scenario, const std::filesystem::path& dir);

}  // namespace mbrc
