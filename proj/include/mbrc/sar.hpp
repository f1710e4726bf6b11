#pragma once

// Species-area persistence model: p = (H / OH)^z per species, the mean of p
// across species as the biodiversity index, and the marginal quantities used
// to rank restoration actions.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mbrc/action.hpp"

namespace mbrc {

/// Absolute tolerance for comparisons on persistence-scale quantities.
inline constexpr double kIndexEpsilon = 1e-12;

struct ZConfig {
  double central = 0.25;
  double low = 0.15;
  double high = 0.35;

  /// Throws DomainError unless 0 < low <= central <= high < 1.
  void validate() const;

  friend bool operator==(const ZConfig&, const ZConfig&) = default;
};

/// Current (H) and potential (OH) suitable habitat of one species, in cells.
struct SpeciesState {
  std::string species_id;
  std::int64_t habitat = 0;
  std::int64_t potential = 0;

  friend bool operator==(const SpeciesState&, const SpeciesState&) = default;
};

struct PersistenceIndex {
  double value = 0.0;
  std::size_t n_species = 0;
};

double persistence(std::int64_t habitat, std::int64_t potential, double z);
double persistence(const SpeciesState& state, double z);

/// Mean persistence. Throws DomainError on an empty list.
PersistenceIndex biodiversity_index(std::span<const SpeciesState> states, double z);

/// Analytic dp/dH = (z / H) (H / OH)^z. Singular at H = 0 (DomainError).
double marginal_persistence_derivative(const SpeciesState& state, double z);

/// ((H + dH) / OH)^z - (H / OH)^z, exactly 0 for dH = 0.
double discrete_delta_persistence(std::int64_t habitat, std::int64_t potential, double z, std::int64_t dh);
double discrete_delta_persistence(const SpeciesState& state, double z, std::int64_t dh);

/// Mean over all `n_species` of the per-species persistence change caused by
/// the action's deltas, evaluated at the given habitat counts.
double cell_marginal_benefit(const CandidateAction& action, std::span<const std::int64_t> habitat,
                             std::span<const std::int64_t> potential, double z, std::size_t n_species);

}  // namespace mbrc
