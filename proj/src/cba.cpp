#include "mbrc/cba.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "mbrc/errors.hpp"

namespace mbrc {

using nlohmann::json;

ProjectFootprint parse_footprint(const json& j, const std::string& file) {
  ProjectFootprint fp;
  try {
    if (!j.is_object()) throw InputError(file, "footprint must be a JSON object");
    fp.label = j.value("label", std::string());
    if (!j.contains("changes") || !j["changes"].is_array()) throw InputError(file, "missing array field changes");
    for (const auto& c : j["changes"]) fp.changes.push_back({c.at("cell_id").get<std::int64_t>(), c.at("forced_class").get<ClassCode>()});
    if (j.contains("z") && !j["z"].is_null()) fp.z = j["z"].get<double>();
    if (j.contains("target") && !j["target"].is_null()) fp.target = j["target"].get<double>();
  } catch (const json::exception& e) {
    throw InputError(file, std::string("malformed footprint: ") + e.what());
  }
  return fp;
}

ProjectFootprint load_footprint(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw InputError(file.string(), "cannot open file");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(file.string(), e.what());
  }
  return parse_footprint(j, file.string());
}

void check_footprint(const Scenario& scenario, const ProjectFootprint& footprint) {
  const auto n = static_cast<std::int64_t>(scenario.grid.cell_count());
  std::set<std::int64_t> seen;
  for (const auto& c : footprint.changes) {
    if (c.cell_id < 0 || c.cell_id >= n) throw InputError("footprint", "unknown cell " + std::to_string(c.cell_id));
    if (!scenario.is_known_class(c.forced_class))
      throw InputError("footprint", "unknown habitat class " + std::to_string(c.forced_class));
    if (!seen.insert(c.cell_id).second) throw InputError("footprint", "cell " + std::to_string(c.cell_id) + " listed twice");
  }
}

double project_delta_index(const Scenario& scenario, const SpeciesDerivation& species,
                           const ProjectFootprint& footprint, double z, const Raster<ClassCode>& state) {
  check_footprint(scenario, footprint);
  auto forced = state;
  for (const auto& c : footprint.changes) forced[static_cast<std::size_t>(c.cell_id)] = c.forced_class;
  const double before = biodiversity_index(habitat_under(scenario, species, state), z).value;
  const double after = biodiversity_index(habitat_under(scenario, species, forced), z).value;
  return (after - before) * 100.0;
}

double project_delta_index(const Scenario& scenario, const ProjectFootprint& footprint, double z, EvaluationState state,
                           std::span<const RestorationStep> sequence_to_target) {
  const auto species = derive_species_states(scenario);
  if (state == EvaluationState::kBaseline)
    return project_delta_index(scenario, species, footprint, z, scenario.current_classes);
  return project_delta_index(scenario, species, footprint, z, classes_after(scenario, sequence_to_target));
}

namespace {

bool same(double a, double b) { return std::abs(a - b) <= kIndexEpsilon; }

}  // namespace

ProjectAppraisal price_project(const ShadowPriceQuote& quote, const ProjectImpact& impact, std::string label) {
  if (!same(quote.z, impact.z))
    throw ConfigMismatch("shadow price was computed at z = " + std::to_string(quote.z) + " but the impact at z = " +
                         std::to_string(impact.z));
  if (!same(quote.target, impact.target))
    throw ConfigMismatch("shadow price was computed for target " + std::to_string(quote.target) +
                         " but the impact for target " + std::to_string(impact.target));
  ProjectAppraisal a;
  a.label = std::move(label);
  a.target = quote.target;
  a.z = quote.z;
  a.delta_pp = impact.delta_pp;
  a.price_per_pp = quote.price_per_pp;
  a.total_cost = -impact.delta_pp * quote.price_per_pp;
  if (a.total_cost == 0.0) a.total_cost = 0.0;  // no negative zero
  return a;
}

json to_json(const ProjectAppraisal& a) {
  return {{"label", a.label},   {"target", a.target},           {"z", a.z},
          {"delta_pp", a.delta_pp}, {"price_per_pp", a.price_per_pp}, {"total_cost", a.total_cost}};
}

}  // namespace mbrc
