#pragma once

// Cost-effectiveness scoring of candidate actions and the selection order.
// The kernels come in a serial reference form and an OpenMP form; both must
// produce identical results for any thread count.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include "mbrc/action.hpp"

namespace mbrc {

/// mb / cost, with zero-cost actions carried as a separate tier: a free
/// action with positive benefit outranks every priced action, and free
/// actions order among themselves by benefit.
struct CostEffectiveness {
  double value = 0.0;  // mb / cost, or mb when cost == 0
  bool zero_cost = false;

  int tier() const noexcept { return zero_cost ? (value > 0.0 ? 1 : -1) : 0; }
  /// +inf / -inf for free actions, the ratio otherwise.
  double as_double() const noexcept;

  friend bool operator==(const CostEffectiveness&, const CostEffectiveness&) = default;
};

CostEffectiveness cost_effectiveness(double marginal_benefit, double cost);

/// Three-way comparison: negative when a < b.
int compare(const CostEffectiveness& a, const CostEffectiveness& b) noexcept;

struct CandidateScore {
  double marginal_benefit = 0.0;
  CostEffectiveness ce;
};

/// Only actions that raise the index by more than kIndexEpsilon may execute.
bool is_eligible(const CandidateScore& s) noexcept;

/// Strict total order used for selection: higher CE, then lower cost, then
/// lower cell id, then lexicographically smaller technology id.
bool ranks_before(const CandidateAction& a, const CandidateScore& sa, const CandidateAction& b,
                  const CandidateScore& sb) noexcept;

/// Read-only snapshot of the species habitat counts.
struct HabitatView {
  std::span<const std::int64_t> habitat;
  std::span<const std::int64_t> potential;
  double z = 0.25;
  std::size_t n_species = 0;
};

CandidateScore score_candidate(const CandidateAction& action, const HabitatView& state);

namespace kernels {

/// Scores every candidate with alive[i] != 0; dead entries are left untouched.
void score_all_serial(std::span<const CandidateAction> candidates, std::span<const std::uint8_t> alive,
                      const HabitatView& state, std::span<CandidateScore> out);
void score_all_parallel(std::span<const CandidateAction> candidates, std::span<const std::uint8_t> alive,
                        const HabitatView& state, std::span<CandidateScore> out);

/// Best eligible alive candidate under ranks_before, if any.
std::optional<std::size_t> select_best_serial(std::span<const CandidateAction> candidates,
                                              std::span<const std::uint8_t> alive,
                                              std::span<const CandidateScore> scores);
std::optional<std::size_t> select_best_parallel(std::span<const CandidateAction> candidates,
                                                std::span<const std::uint8_t> alive,
                                                std::span<const CandidateScore> scores);

}  // namespace kernels
}  // namespace mbrc
