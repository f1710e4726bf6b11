#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mbrc/sar.hpp"

namespace mbrc {

using ClassCode = std::int32_t;

/// Fixed file names inside a scenario package directory.
namespace package_paths {
inline constexpr const char* kManifest = "manifest.json";
inline constexpr const char* kCurrentClasses = "rasters/current_classes.asc";
inline constexpr const char* kPotentialClasses = "rasters/potential_classes.asc";
inline constexpr const char* kElevation = "rasters/elevation.asc";
inline constexpr const char* kSpecies = "species.csv";
inline constexpr const char* kTechnologies = "technologies.csv";
}  // namespace package_paths

/// Row-major raster; cell id = row * cols + col, row 0 is the top row.
template <class T>
struct Raster {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<T> values;

  Raster() = default;
  Raster(std::size_t r, std::size_t c, T fill = T{}) : rows(r), cols(c), values(r * c, fill) {}

  std::size_t size() const noexcept { return values.size(); }
  T& operator[](std::size_t cell) { return values[cell]; }
  const T& operator[](std::size_t cell) const { return values[cell]; }
  T& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  const T& at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }

  friend bool operator==(const Raster&, const Raster&) = default;
};

struct GridSpec {
  std::size_t rows = 0;
  std::size_t cols = 0;
  double cell_area_km2 = 1.0;
  double nodata = -9999.0;

  std::size_t cell_count() const noexcept { return rows * cols; }
  ClassCode class_nodata() const noexcept { return static_cast<ClassCode>(nodata); }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct HabitatClass {
  ClassCode code = 0;
  std::string name;

  friend bool operator==(const HabitatClass&, const HabitatClass&) = default;
};

struct SpeciesSpec {
  std::string species_id;
  std::vector<ClassCode> suitable_classes;  // sorted, unique
  double elevation_min = 0.0;
  double elevation_max = 0.0;
  std::vector<std::int64_t> range_mask;  // sorted, unique cell ids

  bool suits(ClassCode c) const;

  friend bool operator==(const SpeciesSpec&, const SpeciesSpec&) = default;
};

struct TechnologySpec {
  std::string technology_id;
  std::vector<ClassCode> from_classes;  // sorted, unique
  ClassCode to_class = 0;
  std::string cost_layer_ref;  // package-relative raster path

  bool applies_to(ClassCode c) const;

  friend bool operator==(const TechnologySpec&, const TechnologySpec&) = default;
};

/// The complete input package. Costs are asset values in an opaque currency.
struct Scenario {
  GridSpec grid;
  std::vector<HabitatClass> classes;
  Raster<ClassCode> current_classes;
  Raster<ClassCode> potential_classes;
  Raster<double> elevation;
  std::map<std::string, Raster<double>> cost_layers;  // keyed by technology id
  std::vector<SpeciesSpec> species;
  std::vector<TechnologySpec> technologies;
  std::size_t aggregation_factor = 1;
  ZConfig z;

  bool is_known_class(ClassCode c) const;
  const Raster<double>& cost_layer(const TechnologySpec& tech) const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Square blocks of `factor` x `factor` cells used as decision units. Edge
/// blocks are truncated when the grid is not a multiple of the factor.
struct DecisionGrid {
  std::size_t factor = 1;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t block_rows = 0;
  std::size_t block_cols = 0;

  DecisionGrid(std::size_t grid_rows, std::size_t grid_cols, std::size_t aggregation_factor);
  explicit DecisionGrid(const Scenario& s) : DecisionGrid(s.grid.rows, s.grid.cols, s.aggregation_factor) {}

  std::size_t block_count() const noexcept { return block_rows * block_cols; }
  std::int64_t block_of(std::int64_t cell) const;
  std::vector<std::int64_t> members(std::int64_t block) const;
};

struct SpeciesExclusion {
  std::string species_id;
  std::string reason;
};

/// Per-species habitat accounting. A cell belongs to a species' habitat
/// domain when it lies in the range mask, inside the elevation band and its
/// potential class is suitable; OH counts the domain, H counts domain cells
/// whose current class is also suitable. Species with OH = 0 are excluded.
struct SpeciesDerivation {
  std::vector<SpeciesState> states;
  std::vector<std::size_t> catalog_index;           // into Scenario::species
  std::vector<std::vector<std::int64_t>> domains;   // sorted domain cells per included species
  std::vector<SpeciesExclusion> excluded;

  std::size_t size() const noexcept { return states.size(); }
  std::vector<std::int64_t> habitat() const;
  std::vector<std::int64_t> potential() const;
};

SpeciesDerivation derive_species_states(const Scenario& scenario);

/// Same accounting against an alternative current-class raster (e.g. after
/// restoration or a project footprint). Inclusion is decided by `reference`.
std::vector<SpeciesState> habitat_under(const Scenario& scenario, const SpeciesDerivation& reference,
                                        const Raster<ClassCode>& current);

/// Present value of a perpetual annual rent.
double rent_to_asset(double annual_rent, double discount_rate = 0.05);

/// Cells of `block` the technology converts given the current classes:
/// class in from_classes, class not NODATA, cost not NODATA.
std::vector<std::int64_t> convertible_cells(const Scenario& scenario, const DecisionGrid& grid,
                                            const Raster<ClassCode>& current, std::int64_t block,
                                            std::size_t technology);

/// Sets every convertible cell of `block` to the technology's target class.
void apply_technology(const Scenario& scenario, const DecisionGrid& grid, Raster<ClassCode>& classes,
                      std::int64_t block, std::size_t technology);

struct ValidationIssue {
  std::string file;
  std::string message;

  friend bool operator==(const ValidationIssue&, const ValidationIssue&) = default;
};

struct ValidationReport {
  std::vector<ValidationIssue> errors;    // blocking
  std::vector<ValidationIssue> warnings;

  bool ok() const noexcept { return errors.empty(); }
};

ValidationReport validate(const Scenario& scenario);

}  // namespace mbrc
