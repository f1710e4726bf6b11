#pragma once

// Marginal recovery cost curves: the executed restoration sequence read as a
// step function of cost per unit of index gain against cumulative index.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "mbrc/prioritizer.hpp"

namespace mbrc {

struct CurveStep {
  std::size_t step = 0;  // 1-based position in the sequence
  std::int64_t cell_id = 0;
  std::string technology_id;
  double cost = 0.0;
  double delta_index = 0.0;
  double cumulative_index = 0.0;
  double mbrc = 0.0;  // currency per unit index

  double mbrc_per_pp() const noexcept { return mbrc / 100.0; }

  friend bool operator==(const CurveStep&, const CurveStep&) = default;
};

struct MbrcCurve {
  std::vector<CurveStep> steps;
  double z_used = 0.0;
  double baseline_index = 0.0;
  bool smoothed = false;  // mbrc replaced by lower-convex-envelope slopes

  double final_index() const noexcept { return steps.empty() ? baseline_index : steps.back().cumulative_index; }
  double total_cost() const noexcept;

  friend bool operator==(const MbrcCurve&, const MbrcCurve&) = default;
};

struct ShadowPriceQuote {
  double target = 0.0;
  double z = 0.0;
  double price_per_unit_index = 0.0;
  double price_per_pp = 0.0;
  std::optional<std::size_t> marginal_step;  // empty when no action is needed
  double achieved_index = 0.0;

  friend bool operator==(const ShadowPriceQuote&, const ShadowPriceQuote&) = default;
};

/// mbrc_k = cost_k / delta_index_k (0 for free steps); cumulative index is the
/// running sum of deltas from `baseline`. DomainError on delta_index <= 0.
MbrcCurve build_curve(std::span<const RestorationStep> sequence, double baseline, double z);
MbrcCurve build_curve(const RestorationPlan& plan);

/// Right-continuous step lookup: the mbrc of the first step whose cumulative
/// index reaches the target. Targets at or below the baseline price at 0.
ShadowPriceQuote shadow_price(const MbrcCurve& curve, double target);

/// Total cost of the steps needed to reach the target (0 at or below baseline).
double cost_to_reach(const MbrcCurve& curve, double target);

/// Greatest convex minorant of cumulative cost vs cumulative index, with each
/// step's mbrc replaced by the slope of the envelope segment covering it.
MbrcCurve lower_convex_envelope(const MbrcCurve& curve);

/// Full-exhaustion curve using every technology.
MbrcCurve combined_curve(const PreparedScenario& prepared, double z, PrioritizerMode mode = PrioritizerMode::kLazy);

/// One full-exhaustion curve per technology, restricted to its candidates.
std::map<std::string, MbrcCurve> per_technology_curves(const PreparedScenario& prepared, double z,
                                                       PrioritizerMode mode = PrioritizerMode::kLazy);

struct SweepEntry {
  double z = 0.0;
  double baseline_index = 0.0;
  double max_achievable_index = 0.0;
  std::optional<ShadowPriceQuote> quote;  // empty when the target is unreachable at this z
};

/// Rebuilds the curve at z_low, z_central and z_high (in that order) and
/// quotes the shadow price at the target for each.
std::vector<SweepEntry> sweep_z(const PreparedScenario& prepared, const ZConfig& zconfig, double target,
                                PrioritizerMode mode = PrioritizerMode::kLazy);

void write_curve_csv(std::ostream& out, const MbrcCurve& curve);
nlohmann::json to_json(const ShadowPriceQuote& quote);

}  // namespace mbrc
