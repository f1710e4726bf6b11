#include "mbrc/sar.hpp"

#include <cmath>

#include "mbrc/errors.hpp"

namespace mbrc {

namespace {

void check_z(double z) {
  if (!(z > 0.0 && z < 1.0)) throw DomainError("z must lie in (0, 1), got " + std::to_string(z));
}

void check_state(std::int64_t habitat, std::int64_t potential) {
  if (potential <= 0) throw DomainError("potential habitat must be positive");
  if (habitat < 0 || habitat > potential)
    throw DomainError("habitat " + std::to_string(habitat) + " outside [0, " + std::to_string(potential) + "]");
}

}  // namespace

void ZConfig::validate() const {
  if (!(low > 0.0 && low <= central && central <= high && high < 1.0))
    throw DomainError("z configuration must satisfy 0 < low <= central <= high < 1");
}

double persistence(std::int64_t habitat, std::int64_t potential, double z) {
  check_z(z);
  check_state(habitat, potential);
  if (habitat == potential) return 1.0;
  if (habitat == 0) return 0.0;
  return std::pow(static_cast<double>(habitat) / static_cast<double>(potential), z);
}

double persistence(const SpeciesState& state, double z) { return persistence(state.habitat, state.potential, z); }

PersistenceIndex biodiversity_index(std::span<const SpeciesState> states, double z) {
  if (states.empty()) throw DomainError("biodiversity index needs at least one species");
  double sum = 0.0;
  for (const auto& s : states) sum += persistence(s, z);
  return {sum / static_cast<double>(states.size()), states.size()};
}

double marginal_persistence_derivative(const SpeciesState& state, double z) {
  check_z(z);
  check_state(state.habitat, state.potential);
  if (state.habitat == 0) throw DomainError("persistence derivative is singular at zero habitat");
  return z / static_cast<double>(state.habitat) * persistence(state, z);
}

double discrete_delta_persistence(std::int64_t habitat, std::int64_t potential, double z, std::int64_t dh) {
  check_state(habitat, potential);
  if (habitat + dh < 0 || habitat + dh > potential)
    throw DomainError("habitat change moves H outside [0, OH]");
  if (dh == 0) return 0.0;
  return persistence(habitat + dh, potential, z) - persistence(habitat, potential, z);
}

double discrete_delta_persistence(const SpeciesState& state, double z, std::int64_t dh) {
  return discrete_delta_persistence(state.habitat, state.potential, z, dh);
}

double cell_marginal_benefit(const CandidateAction& action, std::span<const std::int64_t> habitat,
                             std::span<const std::int64_t> potential, double z, std::size_t n_species) {
  if (n_species == 0) throw DomainError("marginal benefit needs at least one species");
  double sum = 0.0;
  for (const auto& d : action.species_deltas) {
    if (d.species >= habitat.size()) throw DomainError("species delta refers to an unknown species");
    sum += discrete_delta_persistence(habitat[d.species], potential[d.species], z, d.delta);
  }
  return sum / static_cast<double>(n_species);
}

}  // namespace mbrc
