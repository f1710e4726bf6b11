#include "mbrc/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "mbrc/errors.hpp"

namespace mbrc {

std::optional<CostDistribution> parse_cost_distribution(std::string_view text) {
  if (text == "lognormal") return CostDistribution::kLognormal;
  if (text == "uniform") return CostDistribution::kUniform;
  return std::nullopt;
}

namespace {

constexpr ClassCode kForest = 1, kGrassland = 2, kWetland = 3, kHeathland = 4;
constexpr ClassCode kArable = 10, kPasture = 11, kUrban = 12;
constexpr ClassCode kNatural[] = {kForest, kGrassland, kWetland, kHeathland};
constexpr const char* kNaturalNames[] = {"forest", "grassland", "wetland", "heathland"};

// Distribution code kept local so generated packages do not depend on the
// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  bool chance(double p) { return uniform() < p; }
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

struct Seed {
  double r, c;
  double value;
};

// Nearest-seed (Voronoi) assignment.
std::vector<std::size_t> voronoi(std::size_t rows, std::size_t cols, const std::vector<Seed>& seeds) {
  std::vector<std::size_t> out(rows * cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      std::size_t best = 0;
      double best_d = 1e300;
      for (std::size_t k = 0; k < seeds.size(); ++k) {
        const double dr = seeds[k].r - static_cast<double>(r), dc = seeds[k].c - static_cast<double>(c);
        const double d = dr * dr + dc * dc;
        if (d < best_d) {
          best_d = d;
          best = k;
        }
      }
      out[r * cols + c] = best;
    }
  return out;
}

std::vector<Seed> random_seeds(Rng& rng, std::size_t n, std::size_t rows, std::size_t cols) {
  std::vector<Seed> seeds(n);
  for (auto& s : seeds) s = {rng.uniform(0.0, static_cast<double>(rows)), rng.uniform(0.0, static_cast<double>(cols)), rng.uniform()};
  return seeds;
}

}  // namespace

Scenario gen_synthetic(std::uint64_t seed, const SyntheticParams& p) {
  if (p.n_species == 0) throw DomainError("synthetic scenario needs at least one species");
  if (p.rows == 0 || p.cols == 0 || p.n_technologies == 0 || p.aggregation_factor == 0)
    throw DomainError("synthetic parameters must be positive");
  if (!(p.range_density > 0.0 && p.range_density <= 1.0) || !(p.suitability_density > 0.0 && p.suitability_density <= 1.0))
    throw DomainError("densities must lie in (0, 1]");

  Rng rng(seed);
  const std::size_t rows = p.rows, cols = p.cols, n = rows * cols;

  Scenario s;
  s.grid = {rows, cols, 1.0, -9999.0};
  s.aggregation_factor = p.aggregation_factor;
  for (std::size_t k = 0; k < 4; ++k) s.classes.push_back({kNatural[k], kNaturalNames[k]});
  s.classes.push_back({kArable, "arable"});
  s.classes.push_back({kPasture, "pasture"});
  s.classes.push_back({kUrban, "urban"});

  // Potential natural vegetation as Voronoi patches.
  const auto veg_seeds = random_seeds(rng, std::max<std::size_t>(4, n / 60), rows, cols);
  std::vector<ClassCode> veg_class(veg_seeds.size());
  for (auto& v : veg_class) v = kNatural[rng.index(4)];
  const auto veg = voronoi(rows, cols, veg_seeds);
  s.potential_classes = Raster<ClassCode>(rows, cols);
  for (std::size_t i = 0; i < n; ++i) s.potential_classes[i] = veg_class[veg[i]];

  // Elevation: a few Gaussian hills over a gentle slope.
  s.elevation = Raster<double>(rows, cols);
  struct Hill {
    double r, c, height, width;
  };
  std::vector<Hill> hills(3);
  for (auto& h : hills)
    h = {rng.uniform(0.0, static_cast<double>(rows)), rng.uniform(0.0, static_cast<double>(cols)), rng.uniform(300.0, 1500.0),
         rng.uniform(0.15, 0.4) * static_cast<double>(std::max(rows, cols))};
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      double e = 50.0 + 200.0 * static_cast<double>(r) / static_cast<double>(rows);
      for (const auto& h : hills) {
        const double dr = h.r - static_cast<double>(r), dc = h.c - static_cast<double>(c);
        e += h.height * std::exp(-(dr * dr + dc * dc) / (2.0 * h.width * h.width));
      }
      s.elevation.at(r, c) = std::round(e * 10.0) / 10.0;
    }

  // Farmland patches, more likely in the lowlands, and scattered urban cells.
  const auto farm_seeds = random_seeds(rng, std::max<std::size_t>(6, n / 30), rows, cols);
  std::vector<ClassCode> farm_use(farm_seeds.size());
  for (std::size_t k = 0; k < farm_seeds.size(); ++k) {
    const auto r = std::min(rows - 1, static_cast<std::size_t>(farm_seeds[k].r));
    const auto c = std::min(cols - 1, static_cast<std::size_t>(farm_seeds[k].c));
    const double lowland = 1.0 - std::min(1.0, s.elevation.at(r, c) / 1500.0);
    const bool farmed = rng.chance(0.3 + 0.5 * lowland);
    farm_use[k] = farmed ? (rng.chance(0.6) ? kArable : kPasture) : ClassCode{0};
  }
  const auto farm = voronoi(rows, cols, farm_seeds);
  s.current_classes = s.potential_classes;
  for (std::size_t i = 0; i < n; ++i) {
    if (farm_use[farm[i]] != 0) s.current_classes[i] = farm_use[farm[i]];
    if (rng.chance(0.02)) s.current_classes[i] = kUrban;
  }

  // Annual rents, spatially smooth with cell noise, converted to asset values.
  const auto rent_seeds = random_seeds(rng, std::max<std::size_t>(5, n / 80), rows, cols);
  const auto rent_zone = voronoi(rows, cols, rent_seeds);
  std::vector<double> rent(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double zone = rent_seeds[rent_zone[i]].value;
    if (p.cost_distribution == CostDistribution::kLognormal)
      rent[i] = std::exp(std::log(200.0) + 0.6 * (2.0 * zone - 1.0) + 0.25 * rng.normal());
    else
      rent[i] = 50.0 + 450.0 * (0.7 * zone + 0.3 * rng.uniform());
  }

  for (std::size_t t = 0; t < p.n_technologies; ++t) {
    TechnologySpec tech;
    const std::size_t kind = t % 4;
    tech.technology_id = std::string("restore_") + kNaturalNames[kind] + (t >= 4 ? "_" + std::to_string(t / 4 + 1) : "");
    tech.to_class = kNatural[kind];
    if (t < 4)
      tech.from_classes = {kArable, kPasture};
    else
      tech.from_classes = {(t % 2 == 0) ? kArable : kPasture};
    tech.cost_layer_ref = "rasters/cost_" + tech.technology_id + ".asc";
    const double multiplier = 1.0 + 0.15 * static_cast<double>(t);
    Raster<double> cost(rows, cols);
    for (std::size_t i = 0; i < n; ++i) {
      const double asset = rent_to_asset(rent[i], 0.05);
      cost[i] = std::round(asset * multiplier * rng.uniform(0.8, 1.25) * 100.0) / 100.0;
    }
    s.cost_layers.emplace(tech.technology_id, std::move(cost));
    s.technologies.push_back(std::move(tech));
  }

  // Species: disk ranges, elevation bands around the range centre.
  const double mean_area = p.range_density * static_cast<double>(n);
  for (std::size_t k = 0; k < p.n_species; ++k) {
    SpeciesSpec sp;
    sp.species_id = "sp" + std::to_string(k + 1);
    const std::size_t centre = rng.index(n);
    const double cr = static_cast<double>(centre / cols), cc = static_cast<double>(centre % cols);
    const double radius = std::sqrt(mean_area * rng.uniform(0.5, 1.5) / std::numbers::pi);
    for (std::size_t i = 0; i < n; ++i) {
      const double dr = static_cast<double>(i / cols) - cr, dc = static_cast<double>(i % cols) - cc;
      if (dr * dr + dc * dc <= radius * radius) sp.range_mask.push_back(static_cast<std::int64_t>(i));
    }
    const double e = s.elevation[centre];
    const double half_width = rng.uniform(300.0, 1200.0);
    sp.elevation_min = std::round(std::max(0.0, e - half_width));
    sp.elevation_max = std::round(e + half_width);
    for (auto c : kNatural)
      if (rng.chance(p.suitability_density)) sp.suitable_classes.push_back(c);
    sp.suitable_classes.push_back(s.potential_classes[centre]);
    // Some species also use farmland; the first never does so that it can
    // always be driven below its potential habitat.
    if (k > 0 && rng.chance(0.2)) {
      sp.suitable_classes.push_back(kPasture);
      if (rng.chance(0.5)) sp.suitable_classes.push_back(kArable);
    }
    std::sort(sp.suitable_classes.begin(), sp.suitable_classes.end());
    sp.suitable_classes.erase(std::unique(sp.suitable_classes.begin(), sp.suitable_classes.end()), sp.suitable_classes.end());
    if (k == 0) {
      // Guarantees H < OH somewhere and a restorable cell.
      s.current_classes[centre] = kArable;
    }
    s.species.push_back(std::move(sp));
  }
  return s;
}

}  // namespace mbrc
