#include "support/oracles.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>

#include "support/fixtures.hpp"

namespace mbrc::testing {

namespace {

bool suits(const SpeciesSpec& sp, ClassCode c) {
  for (auto k : sp.suitable_classes)
    if (k == c) return true;
  return false;
}

bool contains(const std::vector<ClassCode>& v, ClassCode c) {
  for (auto k : v)
    if (k == c) return true;
  return false;
}

}  // namespace

BruteHabitat brute_habitat(const Scenario& s, const Raster<ClassCode>& current) {
  BruteHabitat out;
  const ClassCode nodata = static_cast<ClassCode>(s.grid.nodata);
  for (const auto& sp : s.species) {
    std::int64_t h = 0, oh = 0;
    for (auto cell : sp.range_mask) {
      const auto i = static_cast<std::size_t>(cell);
      const double e = s.elevation[i];
      if (e == s.grid.nodata || e < sp.elevation_min || e > sp.elevation_max) continue;
      const ClassCode p = s.potential_classes[i];
      if (p == nodata || !suits(sp, p)) continue;
      ++oh;
      const ClassCode c = current[i];
      if (c != nodata && suits(sp, c)) ++h;
    }
    if (oh > 0) {
      out.habitat.push_back(h);
      out.potential.push_back(oh);
    }
  }
  return out;
}

double brute_index(const BruteHabitat& h, double z) {
  double sum = 0.0;
  for (std::size_t i = 0; i < h.habitat.size(); ++i)
    sum += std::pow(static_cast<double>(h.habitat[i]) / static_cast<double>(h.potential[i]), z);
  return sum / static_cast<double>(h.habitat.size());
}

namespace {

std::vector<std::int64_t> block_cells(const Scenario& s, std::int64_t block) {
  const std::size_t f = s.aggregation_factor;
  const std::size_t bcols = (s.grid.cols + f - 1) / f;
  const std::size_t br = static_cast<std::size_t>(block) / bcols, bc = static_cast<std::size_t>(block) % bcols;
  std::vector<std::int64_t> out;
  for (std::size_t r = br * f; r < br * f + f && r < s.grid.rows; ++r)
    for (std::size_t c = bc * f; c < bc * f + f && c < s.grid.cols; ++c) out.push_back(static_cast<std::int64_t>(r * s.grid.cols + c));
  return out;
}

std::vector<std::int64_t> converted(const Scenario& s, const Raster<ClassCode>& classes, std::int64_t block,
                                    std::size_t t) {
  const auto& tech = s.technologies[t];
  const auto& cost = s.cost_layers.at(tech.technology_id);
  std::vector<std::int64_t> out;
  for (auto cell : block_cells(s, block)) {
    const auto i = static_cast<std::size_t>(cell);
    if (classes[i] == static_cast<ClassCode>(s.grid.nodata) || !contains(tech.from_classes, classes[i])) continue;
    if (cost[i] == s.grid.nodata) continue;
    out.push_back(cell);
  }
  return out;
}

}  // namespace

std::vector<NaiveOption> naive_options(const Scenario& s) {
  const std::size_t f = s.aggregation_factor;
  const auto blocks = static_cast<std::int64_t>(((s.grid.rows + f - 1) / f) * ((s.grid.cols + f - 1) / f));
  std::vector<NaiveOption> out;
  for (std::int64_t b = 0; b < blocks; ++b)
    for (std::size_t t = 0; t < s.technologies.size(); ++t) {
      const auto cells = converted(s, s.current_classes, b, t);
      if (cells.empty()) continue;
      double cost = 0.0;
      for (auto c : cells) cost += s.cost_layers.at(s.technologies[t].technology_id)[static_cast<std::size_t>(c)];
      out.push_back({b, t, s.technologies[t].technology_id, cost});
    }
  return out;
}

Raster<ClassCode> naive_apply(const Scenario& s, const Raster<ClassCode>& classes, const NaiveOption& o) {
  auto out = classes;
  for (auto c : converted(s, classes, o.block, o.technology))
    out[static_cast<std::size_t>(c)] = s.technologies[o.technology].to_class;
  return out;
}

std::vector<OracleStep> naive_greedy(const Scenario& s, double z, std::optional<double> target) {
  const auto options = naive_options(s);
  std::vector<bool> used(options.size(), false);
  std::set<std::int64_t> taken;
  auto classes = s.current_classes;
  double index = brute_index(brute_habitat(s, classes), z);
  std::vector<OracleStep> steps;
  while (!(target && index >= *target - 1e-12)) {
    std::optional<std::size_t> best;
    double best_mb = 0.0;
    auto better = [&](std::size_t i, double mb) {
      if (!best) return true;
      const auto& a = options[i];
      const auto& b = options[*best];
      const int tier_a = a.cost == 0.0 ? 1 : 0, tier_b = b.cost == 0.0 ? 1 : 0;
      if (tier_a != tier_b) return tier_a > tier_b;
      const double ka = tier_a ? mb : mb / a.cost, kb = tier_b ? best_mb : best_mb / b.cost;
      if (ka != kb) return ka > kb;
      if (a.cost != b.cost) return a.cost < b.cost;
      if (a.block != b.block) return a.block < b.block;
      return a.technology_id < b.technology_id;
    };
    for (std::size_t i = 0; i < options.size(); ++i) {
      if (used[i] || taken.count(options[i].block)) continue;
      const double mb = brute_index(brute_habitat(s, naive_apply(s, classes, options[i])), z) - index;
      if (mb <= 1e-12) continue;
      if (better(i, mb)) {
        best = i;
        best_mb = mb;
      }
    }
    if (!best) break;
    const auto& o = options[*best];
    classes = naive_apply(s, classes, o);
    used[*best] = true;
    taken.insert(o.block);
    index = brute_index(brute_habitat(s, classes), z);
    steps.push_back({o.block, o.technology_id, best_mb, o.cost});
  }
  return steps;
}

std::optional<double> exhaustive_min_cost(const Scenario& s, double z, double target) {
  const auto options = naive_options(s);
  if (options.size() > 20) throw std::invalid_argument("too many options for exhaustive enumeration");
  std::optional<double> best;
  for (std::uint32_t mask = 0; mask < (1u << options.size()); ++mask) {
    std::set<std::int64_t> blocks;
    bool ok = true;
    auto classes = s.current_classes;
    double cost = 0.0;
    for (std::size_t i = 0; i < options.size() && ok; ++i) {
      if (!(mask & (1u << i))) continue;
      ok = blocks.insert(options[i].block).second;
      classes = naive_apply(s, classes, options[i]);
      cost += options[i].cost;
    }
    if (!ok) continue;
    if (brute_index(brute_habitat(s, classes), z) >= target - 1e-12 && (!best || cost < *best)) best = cost;
  }
  return best;
}

Scenario random_small_instance(std::uint64_t seed) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    std::mt19937_64 rng(seed * 1000003u + attempt);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::size_t techs = 1 + rng() % 2;
    const std::size_t rows = techs == 1 ? 3 : 2, cols = techs == 1 ? 4 : 3;
    Scenario s = blank_scenario(rows, cols);
    const ClassCode current_pool[] = {kForest, kGrassland, kArable, kPasture, kArable, kPasture};
    for (std::size_t i = 0; i < s.grid.cell_count(); ++i) {
      s.current_classes[i] = current_pool[rng() % 6];
      s.potential_classes[i] = rng() % 2 ? kForest : kGrassland;
    }
    auto costs = [&] {
      std::vector<double> c(s.grid.cell_count());
      for (auto& v : c) v = u(rng) < 0.05 ? 0.0 : 0.5 + 9.5 * u(rng);
      return c;
    };
    add_technology(s, "to_forest", {kArable, kPasture}, kForest, costs());
    if (techs == 2) {
      if (rng() % 2)
        add_technology(s, "to_grassland", {kArable}, kGrassland, costs());
      else
        add_technology(s, "to_grassland", {kArable, kPasture}, kGrassland, costs());
    }
    const std::size_t n_species = 1 + rng() % 5;
    for (std::size_t k = 0; k < n_species; ++k) {
      std::vector<ClassCode> suitable;
      for (auto c : {kForest, kGrassland, kArable, kPasture})
        if (u(rng) < 0.5) suitable.push_back(c);
      if (suitable.empty()) suitable.push_back(kForest);
      std::vector<std::int64_t> range;
      for (std::size_t i = 0; i < s.grid.cell_count(); ++i)
        if (u(rng) < 0.6) range.push_back(static_cast<std::int64_t>(i));
      add_species(s, "s" + std::to_string(k), suitable, range);
    }
    if (!brute_habitat(s, s.current_classes).habitat.empty()) return s;
  }
}

Scenario modular_instance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t k = 4 + rng() % 9;  // candidate cells, at most 12
  Scenario s = blank_scenario(2, k);
  std::vector<double> costs(2 * k, 1.0);
  for (std::size_t j = 0; j < k; ++j) {
    s.current_classes.at(0, j) = kArable;
    s.potential_classes.at(0, j) = rng() % 2 ? kForest : kGrassland;
    const ClassCode natural = rng() % 2 ? kForest : kGrassland;
    s.current_classes.at(1, j) = natural;
    s.potential_classes.at(1, j) = natural;
    costs[j] = static_cast<double>(1 + rng() % 100);
  }
  add_technology(s, "to_forest", {kArable}, kForest, costs);
  std::size_t n = 0;
  for (std::size_t j = 0; j < k; ++j) {
    const std::vector<std::int64_t> range = {static_cast<std::int64_t>(j), static_cast<std::int64_t>(k + j)};
    const std::size_t count = 1 + rng() % 2;
    for (std::size_t m = 0; m < count; ++m)
      add_species(s, "m" + std::to_string(n++), {kForest, kGrassland}, range);
    if (rng() % 4 == 0) add_species(s, "m" + std::to_string(n++), {kArable, kGrassland}, range);
  }
  return s;
}

}  // namespace mbrc::testing
