#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "mbrc/scenario.hpp"

namespace mbrc {

enum class CostDistribution { kLognormal, kUniform };

std::optional<CostDistribution> parse_cost_distribution(std::string_view text);

struct SyntheticParams {
  std::size_t rows = 20;
  std::size_t cols = 20;
  std::size_t n_species = 10;
  std::size_t n_technologies = 3;
  CostDistribution cost_distribution = CostDistribution::kLognormal;
  double range_density = 0.3;        // mean share of the grid covered by a range
  double suitability_density = 0.4;  // chance a natural class suits a species
  std::size_t aggregation_factor = 1;
};

/// Desk-scale landscape: patchy natural potential vegetation, a share of it
/// converted to farmland, disk-shaped species ranges with elevation bands,
/// and per-technology asset-value cost layers derived from annual rents.
/// Deterministic for a fixed seed; the result always validates and has at
/// least one species below its potential habitat.
Scenario gen_synthetic(std::uint64_t seed, const SyntheticParams& params);

}  // namespace mbrc
