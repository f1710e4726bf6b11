#pragma once

// Hand-built scenarios for unit tests.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "mbrc/scenario.hpp"

namespace mbrc::testing {

inline constexpr ClassCode kForest = 1;
inline constexpr ClassCode kGrassland = 2;
inline constexpr ClassCode kArable = 10;
inline constexpr ClassCode kPasture = 11;
inline constexpr ClassCode kUrban = 12;

/// Grid with the standard class catalog, flat 100 m elevation, every cell
/// currently `current` with potential class `potential`.
inline Scenario blank_scenario(std::size_t rows, std::size_t cols, ClassCode current = kArable,
                               ClassCode potential = kForest) {
  Scenario s;
  s.grid = {rows, cols, 1.0, -9999.0};
  s.classes = {{kForest, "forest"}, {kGrassland, "grassland"}, {kArable, "arable"}, {kPasture, "pasture"}, {kUrban, "urban"}};
  s.current_classes = Raster<ClassCode>(rows, cols, current);
  s.potential_classes = Raster<ClassCode>(rows, cols, potential);
  s.elevation = Raster<double>(rows, cols, 100.0);
  return s;
}

inline std::vector<std::int64_t> all_cells(const Scenario& s) {
  std::vector<std::int64_t> out(s.grid.cell_count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<std::int64_t>(i);
  return out;
}

inline void add_species(Scenario& s, std::string id, std::vector<ClassCode> suitable, std::vector<std::int64_t> range,
                        double elev_min = 0.0, double elev_max = 5000.0) {
  std::sort(suitable.begin(), suitable.end());
  std::sort(range.begin(), range.end());
  s.species.push_back({std::move(id), std::move(suitable), elev_min, elev_max, std::move(range)});
}

inline void add_technology(Scenario& s, std::string id, std::vector<ClassCode> from, ClassCode to,
                           std::vector<double> costs) {
  std::sort(from.begin(), from.end());
  Raster<double> layer(s.grid.rows, s.grid.cols);
  layer.values = std::move(costs);
  s.cost_layers[id] = std::move(layer);
  s.technologies.push_back({id, std::move(from), to, "rasters/cost_" + id + ".asc"});
}

inline void add_technology(Scenario& s, std::string id, std::vector<ClassCode> from, ClassCode to, double uniform_cost) {
  add_technology(s, std::move(id), std::move(from), to, std::vector<double>(s.grid.cell_count(), uniform_cost));
}

/// Copy of `s` in which no species uses farmland, so no action removes habitat.
inline Scenario without_farmland(Scenario s) {
  for (auto& sp : s.species)
    std::erase_if(sp.suitable_classes, [](ClassCode c) { return c == kArable || c == kPasture; });
  return s;
}

}  // namespace mbrc::testing
