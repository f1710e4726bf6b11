#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mbrc {

/// Net change in one species' suitable-habitat cell count caused by an action.
/// `species` indexes the included-species list of the scenario derivation.
struct SpeciesDelta {
  std::uint32_t species = 0;
  std::int32_t delta = 0;

  friend bool operator==(const SpeciesDelta&, const SpeciesDelta&) = default;
};

/// One (decision unit, technology) restoration option. With an aggregation
/// factor of 1 the decision unit is a single grid cell and every delta is
/// +1 or -1; aggregated blocks carry block-summed deltas and costs.
struct CandidateAction {
  std::int64_t cell_id = 0;
  std::uint32_t technology = 0;  // index into Scenario::technologies
  std::string technology_id;
  double cost = 0.0;
  std::vector<SpeciesDelta> species_deltas;  // sorted by species, no zeros

  friend bool operator==(const CandidateAction&, const CandidateAction&) = default;
};

}  // namespace mbrc
