#include "mbrc/scoring.hpp"

#include <limits>
#include <vector>

#include <omp.h>

#include "mbrc/sar.hpp"

namespace mbrc {

double CostEffectiveness::as_double() const noexcept {
  switch (tier()) {
    case 1:
      return std::numeric_limits<double>::infinity();
    case -1:
      return -std::numeric_limits<double>::infinity();
    default:
      return value;
  }
}

CostEffectiveness cost_effectiveness(double marginal_benefit, double cost) {
  if (cost == 0.0) return {marginal_benefit, true};
  return {marginal_benefit / cost, false};
}

int compare(const CostEffectiveness& a, const CostEffectiveness& b) noexcept {
  const int ta = a.tier(), tb = b.tier();
  if (ta != tb) return ta < tb ? -1 : 1;
  if (a.value < b.value) return -1;
  if (a.value > b.value) return 1;
  return 0;
}

bool is_eligible(const CandidateScore& s) noexcept { return s.marginal_benefit > kIndexEpsilon; }

bool ranks_before(const CandidateAction& a, const CandidateScore& sa, const CandidateAction& b,
                  const CandidateScore& sb) noexcept {
  if (const int c = compare(sa.ce, sb.ce); c != 0) return c > 0;
  if (a.cost != b.cost) return a.cost < b.cost;
  if (a.cell_id != b.cell_id) return a.cell_id < b.cell_id;
  return a.technology_id < b.technology_id;
}

CandidateScore score_candidate(const CandidateAction& action, const HabitatView& state) {
  const double mb = cell_marginal_benefit(action, state.habitat, state.potential, state.z, state.n_species);
  return {mb, cost_effectiveness(mb, action.cost)};
}

namespace kernels {

void score_all_serial(std::span<const CandidateAction> candidates, std::span<const std::uint8_t> alive,
                      const HabitatView& state, std::span<CandidateScore> out) {
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (alive[i]) out[i] = score_candidate(candidates[i], state);
}

void score_all_parallel(std::span<const CandidateAction> candidates, std::span<const std::uint8_t> alive,
                        const HabitatView& state, std::span<CandidateScore> out) {
  const auto n = static_cast<std::int64_t>(candidates.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i)
    if (alive[i]) out[i] = score_candidate(candidates[i], state);
}

namespace {

// Keeps the better of `best` and `i` in place.
inline void consider(std::span<const CandidateAction> c, std::span<const CandidateScore> s, std::int64_t& best,
                     std::int64_t i) {
  if (best < 0 || ranks_before(c[i], s[i], c[best], s[best])) best = i;
}

}  // namespace

std::optional<std::size_t> select_best_serial(std::span<const CandidateAction> candidates,
                                              std::span<const std::uint8_t> alive,
                                              std::span<const CandidateScore> scores) {
  std::int64_t best = -1;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (alive[i] && is_eligible(scores[i])) consider(candidates, scores, best, static_cast<std::int64_t>(i));
  if (best < 0) return std::nullopt;
  return static_cast<std::size_t>(best);
}

std::optional<std::size_t> select_best_parallel(std::span<const CandidateAction> candidates,
                                                std::span<const std::uint8_t> alive,
                                                std::span<const CandidateScore> scores) {
  const auto n = static_cast<std::int64_t>(candidates.size());
  std::vector<std::int64_t> local(static_cast<std::size_t>(omp_get_max_threads()), -1);
#pragma omp parallel
  {
    std::int64_t mine = -1;
#pragma omp for schedule(static) nowait
    for (std::int64_t i = 0; i < n; ++i)
      if (alive[i] && is_eligible(scores[i])) consider(candidates, scores, mine, i);
    local[static_cast<std::size_t>(omp_get_thread_num())] = mine;
  }
  // ranks_before is a strict total order, so the reduction order is irrelevant.
  std::int64_t best = -1;
  for (auto i : local)
    if (i >= 0) consider(candidates, scores, best, i);
  if (best < 0) return std::nullopt;
  return static_cast<std::size_t>(best);
}

}  // namespace kernels
}  // namespace mbrc
