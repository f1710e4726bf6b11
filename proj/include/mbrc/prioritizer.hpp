#pragma once

// Greedy cost-effectiveness prioritization of restoration actions with
// re-evaluation of marginal benefits after every executed action.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mbrc/action.hpp"
#include "mbrc/scenario.hpp"
#include "mbrc/scoring.hpp"

namespace mbrc {

/// kExact rescans every remaining candidate each round. kLazy keeps a
/// max-heap of possibly stale keys and re-scores on pop; keys that may have
/// risen (species losing habitat under a candidate's gain, or gaining under
/// its loss) are refreshed eagerly, so both modes select identically.
enum class PrioritizerMode { kExact, kLazy };

std::string_view to_string(PrioritizerMode mode);
std::optional<PrioritizerMode> parse_mode(std::string_view text);

struct RestorationStep {
  CandidateAction action;
  double marginal_benefit = 0.0;
  double cost_effectiveness = 0.0;  // +inf for zero-cost actions
  double index_after = 0.0;

  friend bool operator==(const RestorationStep&, const RestorationStep&) = default;
};

/// Species accounting and candidate list of a scenario; independent of z.
struct PreparedScenario {
  const Scenario* scenario = nullptr;
  SpeciesDerivation species;
  std::vector<CandidateAction> candidates;
};

/// One candidate per (decision block, technology) with at least one
/// convertible cell. Per-species deltas count, over the converted cells of the
/// species' habitat domain, +1 where the target class is suitable and the
/// current class is not, -1 for the reverse.
std::vector<CandidateAction> enumerate_candidates(const Scenario& scenario, const SpeciesDerivation& species);
std::vector<CandidateAction> enumerate_candidates(const Scenario& scenario);

PreparedScenario prepare(const Scenario& scenario);

struct SequenceOptions {
  PrioritizerMode mode = PrioritizerMode::kLazy;
  std::optional<double> target;            // stop once the index reaches it; exhaust otherwise
  std::optional<std::string> technology;   // restrict candidates to one technology
  bool parallel = true;                    // use the OpenMP kernels
};

struct RestorationPlan {
  double z = 0.0;
  double baseline_index = 0.0;
  double final_index = 0.0;
  std::size_t n_species = 0;
  std::vector<RestorationStep> steps;
  std::vector<std::int64_t> final_habitat;  // per included species

  double total_cost() const;
};

/// Throws TargetUnreachable (with the greedy maximum) when the target lies
/// above the index reached once no positive-benefit candidate remains.
RestorationPlan build_sequence(const PreparedScenario& prepared, double z, const SequenceOptions& options = {});
RestorationPlan build_sequence(const Scenario& scenario, double z, const SequenceOptions& options = {});

/// H_i += delta_i for every species the action touches.
std::vector<SpeciesState> apply_action(std::vector<SpeciesState> states, const CandidateAction& action);
void apply_action_in_place(std::span<std::int64_t> habitat, std::span<const std::int64_t> potential,
                           const CandidateAction& action);

/// The same action with every species delta negated.
CandidateAction reversed(const CandidateAction& action);

/// Current classes after executing the steps in order.
Raster<ClassCode> classes_after(const Scenario& scenario, std::span<const RestorationStep> steps);

}  // namespace mbrc
