#pragma once

// Project appraisal: the index impact of an exogenous footprint of forced
// land-class changes, priced at a target-compatible shadow price.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "mbrc/curve.hpp"
#include "mbrc/prioritizer.hpp"
#include "mbrc/scenario.hpp"

namespace mbrc {

struct FootprintChange {
  std::int64_t cell_id = 0;
  ClassCode forced_class = 0;
};

struct ProjectFootprint {
  std::string label;
  std::vector<FootprintChange> changes;
  // Optional tags naming the settings the footprint was prepared for.
  std::optional<double> z;
  std::optional<double> target;
};

/// `{label, changes:[{cell_id, forced_class}]}` with optional `z` / `target`.
ProjectFootprint parse_footprint(const nlohmann::json& j, const std::string& file = "footprint.json");
ProjectFootprint load_footprint(const std::filesystem::path& file);

/// Throws InputError on cells outside the grid, unknown classes or repeated cells.
void check_footprint(const Scenario& scenario, const ProjectFootprint& footprint);

enum class EvaluationState { kBaseline, kAtTarget };

/// Index change (after - before) x 100 caused by forcing the footprint onto
/// the given current-class state.
double project_delta_index(const Scenario& scenario, const SpeciesDerivation& species,
                           const ProjectFootprint& footprint, double z, const Raster<ClassCode>& state);

/// kBaseline evaluates on the scenario's current classes; kAtTarget on the
/// classes after executing `sequence_to_target`.
double project_delta_index(const Scenario& scenario, const ProjectFootprint& footprint, double z, EvaluationState state,
                           std::span<const RestorationStep> sequence_to_target = {});

struct ProjectImpact {
  double delta_pp = 0.0;
  double z = 0.0;
  double target = 0.0;
};

struct ProjectAppraisal {
  std::string label;
  double target = 0.0;
  double z = 0.0;
  double delta_pp = 0.0;
  double price_per_pp = 0.0;
  double total_cost = 0.0;  // positive for harms, negative (a credit) for gains
};

/// total_cost = -delta_pp x price_per_pp. ConfigMismatch when the quote and the
/// impact were computed under different z or target.
ProjectAppraisal price_project(const ShadowPriceQuote& quote, const ProjectImpact& impact, std::string label = {});

nlohmann::json to_json(const ProjectAppraisal& appraisal);

}  // namespace mbrc
