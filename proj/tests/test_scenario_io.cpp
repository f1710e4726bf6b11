#include <string>

#include "doctest.h"
#include "mbrc/errors.hpp"
#include "mbrc/prioritizer.hpp"
#include "mbrc/scenario_io.hpp"
#include "mbrc/synthetic.hpp"
#include "support/corpus.hpp"
#include "support/fixtures.hpp"
#include "support/tempdir.hpp"

using namespace mbrc;
using namespace mbrc::testing;

namespace {

std::string load_error_file(const std::filesystem::path& dir) {
  try {
    load_scenario(dir);
  } catch (const InputError& e) {
    return e.file();
  }
  return "";
}

}  // namespace

TEST_CASE("minimal one-cell package loads") {
  TempDir tmp("io");
  spit(tmp / "manifest.json", R"({"grid": {"rows": 1, "cols": 1, "cell_area_km2": 1.0, "nodata": -9999},
    "classes": [{"code": 1, "name": "forest"}, {"code": 10, "name": "arable"}]})");
  const std::string header = "ncols 1\nnrows 1\nxllcorner 0\nyllcorner 0\ncellsize 1\nNODATA_value -9999\n";
  spit(tmp / "rasters/current_classes.asc", header + "10\n");
  spit(tmp / "rasters/potential_classes.asc", header + "1\n");
  spit(tmp / "rasters/elevation.asc", header + "250.5\n");
  spit(tmp / "rasters/cost.asc", header + "40\n");
  spit(tmp / "species.csv", "species_id,suitable_classes,elev_min,elev_max,range_file\nbeetle,1,0,1000,ranges/beetle.csv\n");
  spit(tmp / "ranges/beetle.csv", "0\n");
  spit(tmp / "technologies.csv", "technology_id,from_classes,to_class,cost_layer\nafforest,10,1,rasters/cost.asc\n");

  const Scenario s = load_scenario(tmp.path());
  CHECK(s.grid.rows == 1);
  CHECK(s.current_classes[0] == 10);
  CHECK(s.elevation[0] == 250.5);
  REQUIRE(s.species.size() == 1);
  CHECK(s.species[0].range_mask == std::vector<std::int64_t>{0});
  REQUIRE(s.technologies.size() == 1);
  CHECK(s.cost_layer(s.technologies[0])[0] == 40.0);
  CHECK(s.z == ZConfig{});
  CHECK(validate(s).ok());
}

TEST_CASE("range given as a raster mask") {
  TempDir tmp("io");
  Scenario s = small_valid_scenario();
  save_scenario(s, tmp.path());
  spit(tmp / "ranges/mask.asc", "ncols 4\nnrows 3\nxllcorner 0\nyllcorner 0\ncellsize 1\nNODATA_value -9999\n0 1 0 0\n0 0 0 0\n0 0 -9999 7\n");
  auto species = slurp(tmp / "species.csv");
  species = replace_first(species, "ranges/species_2.csv", "ranges/mask.asc");
  spit(tmp / "species.csv", species);
  const Scenario back = load_scenario(tmp.path());
  CHECK(back.species[1].range_mask == std::vector<std::int64_t>{1, 11});
}

TEST_CASE("wrong nrows names the raster") {
  TempDir tmp("io");
  save_scenario(small_valid_scenario(), tmp.path());
  auto text = slurp(tmp / "rasters/elevation.asc");
  spit(tmp / "rasters/elevation.asc", replace_first(text, "nrows 3", "nrows 2"));
  try {
    load_scenario(tmp.path());
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(e.file() == "rasters/elevation.asc");
    CHECK(std::string(e.what()).find("rasters/elevation.asc") != std::string::npos);
  }
}

TEST_CASE("parse errors carry line numbers") {
  TempDir tmp("io");
  save_scenario(small_valid_scenario(), tmp.path());
  spit(tmp / "technologies.csv", "technology_id,from_classes,to_class,cost_layer\nafforest,10|x,1,rasters/cost_afforest.asc\n");
  try {
    load_scenario(tmp.path());
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(e.file() == "technologies.csv");
    CHECK(e.line() == 2);
  }
}

TEST_CASE("save then load reproduces the scenario") {
  TempDir tmp("io");
  Scenario s = small_valid_scenario();
  s.z = {0.3, 0.2, 0.4};
  s.aggregation_factor = 2;
  s.elevation.at(1, 1) = 1234.5678901234567;
  s.cost_layers["afforest"].at(2, 2) = 1.0 / 3.0;
  s.species[0].species_id = "owl, tawny";
  save_scenario(s, tmp.path());
  CHECK(load_scenario(tmp.path()) == s);
}

TEST_CASE("synthetic scenarios round trip") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    TempDir tmp("io");
    SyntheticParams p;
    p.rows = 12;
    p.cols = 9;
    p.n_species = 6;
    p.aggregation_factor = 1 + seed % 2;
    const Scenario s = gen_synthetic(seed, p);
    save_scenario(s, tmp.path());
    CHECK(load_scenario(tmp.path()) == s);
  }
}

TEST_CASE("aggregation factor 5 on a 10x10 grid gives four decision blocks") {
  TempDir tmp("io");
  Scenario s = blank_scenario(10, 10);
  add_species(s, "owl", {kForest}, all_cells(s));
  add_technology(s, "afforest", {kArable}, kForest, 2.0);
  s.aggregation_factor = 5;
  save_scenario(s, tmp.path());
  const Scenario back = load_scenario(tmp.path());
  CHECK(DecisionGrid(back).block_count() == 4);
  const auto candidates = enumerate_candidates(back);
  REQUIRE(candidates.size() == 4);
  for (const auto& c : candidates) {
    CHECK(c.cost == 50.0);
    REQUIRE(c.species_deltas.size() == 1);
    CHECK(c.species_deltas[0].delta == 25);
  }
}

TEST_CASE("malformed packages name the offending file") {
  TempDir tmp("corpus");
  const auto corpus = write_broken_corpus(tmp.path());
  CHECK(corpus.size() == 10);
  for (const auto& b : corpus) {
    INFO(b.name);
    CHECK(load_error_file(b.dir) == b.offending_file);
  }
}

TEST_CASE("missing manifest") {
  TempDir tmp("io");
  CHECK(load_error_file(tmp.path()) == "manifest.json");
}

TEST_CASE("ascii grid reader") {
  TempDir tmp("io");
  spit(tmp / "g.asc", "NCOLS 2\r\nNROWS 2\r\nXLLCENTER 5\r\nYLLCENTER 6\r\nCELLSIZE 0.5\r\n1 2\r\n3 4e2\r\n");
  const auto g = read_ascii_grid(tmp / "g.asc", "g.asc");
  CHECK(g.ncols == 2);
  CHECK(g.xllcorner == 5.0);
  CHECK_FALSE(g.nodata.has_value());
  CHECK(g.values == std::vector<double>{1, 2, 3, 400});

  spit(tmp / "short.asc", "ncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 1\n1 2\n");
  CHECK_THROWS_AS(read_ascii_grid(tmp / "short.asc", "short.asc"), InputError);
  spit(tmp / "wide.asc", "ncols 2\nnrows 1\nxllcorner 0\nyllcorner 0\ncellsize 1\n1 2 3\n");
  CHECK_THROWS_AS(read_ascii_grid(tmp / "wide.asc", "wide.asc"), InputError);
  spit(tmp / "nosize.asc", "ncols 2\nnrows 1\n1 2\n");
  CHECK_THROWS_AS(read_ascii_grid(tmp / "nosize.asc", "nosize.asc"), InputError);
}
