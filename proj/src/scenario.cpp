#include "mbrc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "mbrc/errors.hpp"
#include "mbrc/text.hpp"

namespace mbrc {

namespace paths = package_paths;

bool SpeciesSpec::suits(ClassCode c) const {
  return std::binary_search(suitable_classes.begin(), suitable_classes.end(), c);
}

bool TechnologySpec::applies_to(ClassCode c) const {
  return std::binary_search(from_classes.begin(), from_classes.end(), c);
}

bool Scenario::is_known_class(ClassCode c) const {
  return std::any_of(classes.begin(), classes.end(), [c](const HabitatClass& k) { return k.code == c; });
}

const Raster<double>& Scenario::cost_layer(const TechnologySpec& tech) const {
  auto it = cost_layers.find(tech.technology_id);
  if (it == cost_layers.end()) throw InputError(tech.cost_layer_ref, "missing cost layer for technology " + tech.technology_id);
  return it->second;
}

DecisionGrid::DecisionGrid(std::size_t grid_rows, std::size_t grid_cols, std::size_t aggregation_factor)
    : factor(aggregation_factor), rows(grid_rows), cols(grid_cols) {
  if (factor == 0) throw DomainError("aggregation factor must be positive");
  block_rows = (rows + factor - 1) / factor;
  block_cols = (cols + factor - 1) / factor;
}

std::int64_t DecisionGrid::block_of(std::int64_t cell) const {
  const auto r = static_cast<std::size_t>(cell) / cols;
  const auto c = static_cast<std::size_t>(cell) % cols;
  return static_cast<std::int64_t>((r / factor) * block_cols + c / factor);
}

std::vector<std::int64_t> DecisionGrid::members(std::int64_t block) const {
  const auto br = static_cast<std::size_t>(block) / block_cols;
  const auto bc = static_cast<std::size_t>(block) % block_cols;
  std::vector<std::int64_t> out;
  for (std::size_t r = br * factor; r < std::min(rows, (br + 1) * factor); ++r)
    for (std::size_t c = bc * factor; c < std::min(cols, (bc + 1) * factor); ++c)
      out.push_back(static_cast<std::int64_t>(r * cols + c));
  return out;
}

std::vector<std::int64_t> SpeciesDerivation::habitat() const {
  std::vector<std::int64_t> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(s.habitat);
  return out;
}

std::vector<std::int64_t> SpeciesDerivation::potential() const {
  std::vector<std::int64_t> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(s.potential);
  return out;
}

namespace {

bool in_band(const Scenario& s, const SpeciesSpec& sp, std::int64_t cell) {
  const double e = s.elevation[static_cast<std::size_t>(cell)];
  if (e == s.grid.nodata || std::isnan(e)) return false;
  return e >= sp.elevation_min && e <= sp.elevation_max;
}

bool usable_class(const Scenario& s, ClassCode c) { return c != s.grid.class_nodata(); }

std::vector<std::int64_t> habitat_domain(const Scenario& s, const SpeciesSpec& sp) {
  std::vector<std::int64_t> domain;
  const auto n = static_cast<std::int64_t>(s.grid.cell_count());
  for (auto cell : sp.range_mask) {
    if (cell < 0 || cell >= n) continue;
    const ClassCode pc = s.potential_classes[static_cast<std::size_t>(cell)];
    if (usable_class(s, pc) && sp.suits(pc) && in_band(s, sp, cell)) domain.push_back(cell);
  }
  return domain;
}

std::int64_t count_suitable(const Scenario& s, const SpeciesSpec& sp, const std::vector<std::int64_t>& domain,
                            const Raster<ClassCode>& current) {
  std::int64_t h = 0;
  for (auto cell : domain) {
    const ClassCode c = current[static_cast<std::size_t>(cell)];
    if (usable_class(s, c) && sp.suits(c)) ++h;
  }
  return h;
}

}  // namespace

SpeciesDerivation derive_species_states(const Scenario& scenario) {
  SpeciesDerivation out;
  for (std::size_t i = 0; i < scenario.species.size(); ++i) {
    const auto& sp = scenario.species[i];
    auto domain = habitat_domain(scenario, sp);
    if (domain.empty()) {
      std::string reason;
      if (sp.range_mask.empty())
        reason = "empty range mask";
      else
        reason = "no potential habitat inside range and elevation band";
      out.excluded.push_back({sp.species_id, std::move(reason)});
      continue;
    }
    const auto h = count_suitable(scenario, sp, domain, scenario.current_classes);
    out.states.push_back({sp.species_id, h, static_cast<std::int64_t>(domain.size())});
    out.catalog_index.push_back(i);
    out.domains.push_back(std::move(domain));
  }
  return out;
}

std::vector<SpeciesState> habitat_under(const Scenario& scenario, const SpeciesDerivation& reference,
                                        const Raster<ClassCode>& current) {
  if (current.rows != scenario.grid.rows || current.cols != scenario.grid.cols)
    throw DomainError("class raster does not match the scenario grid");
  std::vector<SpeciesState> out;
  out.reserve(reference.size());
  for (std::size_t k = 0; k < reference.size(); ++k) {
    const auto& sp = scenario.species[reference.catalog_index[k]];
    out.push_back({sp.species_id, count_suitable(scenario, sp, reference.domains[k], current),
                   reference.states[k].potential});
  }
  return out;
}

double rent_to_asset(double annual_rent, double discount_rate) {
  if (!(discount_rate > 0.0)) throw DomainError("discount rate must be positive");
  return annual_rent / discount_rate;
}

std::vector<std::int64_t> convertible_cells(const Scenario& scenario, const DecisionGrid& grid,
                                            const Raster<ClassCode>& current, std::int64_t block,
                                            std::size_t technology) {
  const auto& tech = scenario.technologies.at(technology);
  const auto& cost = scenario.cost_layer(tech);
  std::vector<std::int64_t> out;
  for (auto cell : grid.members(block)) {
    const auto idx = static_cast<std::size_t>(cell);
    const ClassCode c = current[idx];
    if (!usable_class(scenario, c) || !tech.applies_to(c)) continue;
    if (cost[idx] == scenario.grid.nodata || std::isnan(cost[idx])) continue;
    out.push_back(cell);
  }
  return out;
}

void apply_technology(const Scenario& scenario, const DecisionGrid& grid, Raster<ClassCode>& classes,
                      std::int64_t block, std::size_t technology) {
  const ClassCode to = scenario.technologies.at(technology).to_class;
  for (auto cell : convertible_cells(scenario, grid, classes, block, technology))
    classes[static_cast<std::size_t>(cell)] = to;
}

namespace {

template <class T>
bool same_shape(const Raster<T>& r, const GridSpec& g) {
  return r.rows == g.rows && r.cols == g.cols && r.values.size() == g.cell_count();
}

void check_class_raster(const Scenario& s, const Raster<ClassCode>& r, const char* file, ValidationReport& rep) {
  if (!same_shape(r, s.grid)) {
    rep.errors.push_back({file, "raster dimensions do not match the grid"});
    return;
  }
  std::set<ClassCode> unknown;
  for (auto c : r.values)
    if (c != s.grid.class_nodata() && !s.is_known_class(c)) unknown.insert(c);
  for (auto c : unknown) rep.errors.push_back({file, "unknown habitat class " + std::to_string(c)});
}

}  // namespace

ValidationReport validate(const Scenario& s) {
  ValidationReport rep;
  const std::string manifest = paths::kManifest;

  if (s.grid.rows < 1 || s.grid.cols < 1) rep.errors.push_back({manifest, "grid must have at least one row and column"});
  if (!(s.grid.cell_area_km2 > 0.0)) rep.errors.push_back({manifest, "cell_area_km2 must be positive"});
  if (std::trunc(s.grid.nodata) != s.grid.nodata)
    rep.errors.push_back({manifest, "nodata must be an integral value so class rasters can carry it"});
  if (s.aggregation_factor < 1) rep.errors.push_back({manifest, "aggregation_factor must be at least 1"});
  try {
    s.z.validate();
  } catch (const DomainError& e) {
    rep.errors.push_back({manifest, e.what()});
  }

  std::set<ClassCode> codes;
  for (const auto& c : s.classes)
    if (!codes.insert(c.code).second) rep.errors.push_back({manifest, "duplicate class code " + std::to_string(c.code)});
  if (codes.count(s.grid.class_nodata())) rep.errors.push_back({manifest, "a class code collides with nodata"});

  check_class_raster(s, s.current_classes, paths::kCurrentClasses, rep);
  check_class_raster(s, s.potential_classes, paths::kPotentialClasses, rep);
  if (!same_shape(s.elevation, s.grid)) rep.errors.push_back({paths::kElevation, "raster dimensions do not match the grid"});

  const auto n_cells = static_cast<std::int64_t>(s.grid.cell_count());
  std::set<std::string> species_ids;
  for (const auto& sp : s.species) {
    const std::string who = "species " + sp.species_id + ": ";
    if (sp.species_id.empty()) rep.errors.push_back({paths::kSpecies, "empty species_id"});
    if (!species_ids.insert(sp.species_id).second) rep.errors.push_back({paths::kSpecies, who + "duplicate species_id"});
    if (sp.suitable_classes.empty()) rep.errors.push_back({paths::kSpecies, who + "no suitable classes"});
    for (auto c : sp.suitable_classes)
      if (!s.is_known_class(c)) rep.errors.push_back({paths::kSpecies, who + "unknown habitat class " + std::to_string(c)});
    if (!(sp.elevation_min <= sp.elevation_max)) rep.errors.push_back({paths::kSpecies, who + "elev_min exceeds elev_max"});
    for (auto cell : sp.range_mask)
      if (cell < 0 || cell >= n_cells) {
        rep.errors.push_back({paths::kSpecies, who + "range cell " + std::to_string(cell) + " outside the grid"});
        break;
      }
  }
  if (s.species.empty()) rep.errors.push_back({paths::kSpecies, "species catalog is empty"});

  std::set<std::string> tech_ids;
  for (const auto& t : s.technologies) {
    const std::string who = "technology " + t.technology_id + ": ";
    if (t.technology_id.empty()) rep.errors.push_back({paths::kTechnologies, "empty technology_id"});
    if (!tech_ids.insert(t.technology_id).second) rep.errors.push_back({paths::kTechnologies, who + "duplicate technology_id"});
    if (t.from_classes.empty()) rep.errors.push_back({paths::kTechnologies, who + "no from_classes"});
    if (t.applies_to(t.to_class)) rep.errors.push_back({paths::kTechnologies, who + "to_class is also a from_class"});
    for (auto c : t.from_classes)
      if (!s.is_known_class(c)) rep.errors.push_back({paths::kTechnologies, who + "unknown habitat class " + std::to_string(c)});
    if (!s.is_known_class(t.to_class))
      rep.errors.push_back({paths::kTechnologies, who + "unknown habitat class " + std::to_string(t.to_class)});
    auto it = s.cost_layers.find(t.technology_id);
    const std::string file = t.cost_layer_ref.empty() ? paths::kTechnologies : t.cost_layer_ref;
    if (it == s.cost_layers.end()) {
      rep.errors.push_back({file, who + "cost layer missing"});
      continue;
    }
    const auto& cost = it->second;
    if (!same_shape(cost, s.grid)) {
      rep.errors.push_back({file, "raster dimensions do not match the grid"});
      continue;
    }
    std::size_t negative = 0, zero = 0, invalid = 0;
    for (double v : cost.values) {
      if (v == s.grid.nodata) continue;
      if (std::isnan(v) || std::isinf(v))
        ++invalid;
      else if (v < 0.0)
        ++negative;
      else if (v == 0.0)
        ++zero;
    }
    if (negative > 0) rep.errors.push_back({file, std::to_string(negative) + " negative cost value(s)"});
    if (invalid > 0) rep.errors.push_back({file, std::to_string(invalid) + " non-finite cost value(s)"});
    if (zero > 0) rep.warnings.push_back({file, std::to_string(zero) + " zero-cost cell(s)"});
    const bool useful = std::any_of(s.species.begin(), s.species.end(), [&](const SpeciesSpec& sp) { return sp.suits(t.to_class); });
    if (!useful) rep.warnings.push_back({paths::kTechnologies, who + "target class is suitable for no species"});
  }
  for (const auto& [id, layer] : s.cost_layers)
    if (!tech_ids.count(id)) rep.warnings.push_back({manifest, "cost layer for unknown technology " + id});

  if (!rep.ok()) return rep;

  const auto derivation = derive_species_states(s);
  for (const auto& ex : derivation.excluded)
    rep.warnings.push_back({paths::kSpecies, "species " + ex.species_id + " excluded: " + ex.reason});
  if (derivation.states.empty()) rep.errors.push_back({paths::kSpecies, "no species has potential habitat; index undefined"});
  return rep;
}

}  // namespace mbrc
