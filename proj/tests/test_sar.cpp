#include <cmath>
#include <vector>

#include "doctest.h"
#include "mbrc/errors.hpp"
#include "mbrc/sar.hpp"
#include "support/oracles.hpp"

using namespace mbrc;

// Reference values evaluated at 30 significant digits with an independent
// arbitrary-precision calculator.
namespace ref {
constexpr double kHalfPow = 0.840896415253714543;         // 0.5^0.25
constexpr double kThreeSpecies = 0.849334398813420689;    // (0.25^.25 + 0.5^.25 + 1) / 3
constexpr double kDerivative = 0.00420448207626857272;    // (0.25/50) 0.5^0.25
constexpr double kTopCell = 0.00250943006631889526;       // 1 - 0.99^0.25
constexpr double kLastCell = -0.316227766016837933;       // -(0.01)^0.25
constexpr double kHalfTopCell = 0.00125471503315944763;
}  // namespace ref

TEST_CASE("persistence examples") {
  CHECK(persistence(100, 100, 0.25) == 1.0);
  CHECK(persistence(0, 100, 0.25) == 0.0);
  CHECK(persistence(50, 100, 0.25) == doctest::Approx(ref::kHalfPow).epsilon(1e-15));
  CHECK(persistence(SpeciesState{"a", 7, 7}, 0.35) == 1.0);
}

TEST_CASE("persistence rejects invalid states") {
  CHECK_THROWS_AS(persistence(-1, 100, 0.25), DomainError);
  CHECK_THROWS_AS(persistence(101, 100, 0.25), DomainError);
  CHECK_THROWS_AS(persistence(0, 0, 0.25), DomainError);
  CHECK_THROWS_AS(persistence(5, 10, 0.0), DomainError);
  CHECK_THROWS_AS(persistence(5, 10, 1.0), DomainError);
}

TEST_CASE("biodiversity index examples") {
  std::vector<SpeciesState> two = {{"a", 10, 10}, {"b", 0, 10}};
  for (double z : {0.15, 0.25, 0.35}) CHECK(biodiversity_index(two, z).value == 0.5);

  std::vector<SpeciesState> full = {{"a", 3, 3}, {"b", 8, 8}, {"c", 1, 1}};
  CHECK(biodiversity_index(full, 0.25).value == 1.0);
  CHECK(biodiversity_index(full, 0.25).n_species == 3);

  std::vector<SpeciesState> three = {{"a", 25, 100}, {"b", 50, 100}, {"c", 100, 100}};
  CHECK(biodiversity_index(three, 0.25).value == doctest::Approx(ref::kThreeSpecies).epsilon(1e-15));

  CHECK_THROWS_AS(biodiversity_index(std::vector<SpeciesState>{}, 0.25), DomainError);
}

TEST_CASE("index of concatenated lists is the count-weighted mean") {
  std::vector<SpeciesState> a = {{"a", 3, 9}, {"b", 1, 4}};
  std::vector<SpeciesState> b = {{"c", 5, 5}, {"d", 2, 11}, {"e", 0, 3}};
  auto ab = a;
  ab.insert(ab.end(), b.begin(), b.end());
  const double z = 0.25;
  const double weighted = (2 * biodiversity_index(a, z).value + 3 * biodiversity_index(b, z).value) / 5;
  CHECK(biodiversity_index(ab, z).value == doctest::Approx(weighted).epsilon(1e-15));
}

TEST_CASE("derivative examples") {
  for (double z : {0.15, 0.25, 0.35})
    CHECK(marginal_persistence_derivative({"a", 40, 40}, z) == doctest::Approx(z / 40).epsilon(1e-15));
  CHECK(marginal_persistence_derivative({"a", 50, 100}, 0.25) == doctest::Approx(ref::kDerivative).epsilon(1e-14));
  CHECK(marginal_persistence_derivative({"a", 25, 100}, 0.25) > marginal_persistence_derivative({"a", 75, 100}, 0.25));
  CHECK_THROWS_AS(marginal_persistence_derivative({"a", 0, 100}, 0.25), DomainError);
}

TEST_CASE("derivative matches central finite differences") {
  for (double z : {0.15, 0.25, 0.35})
    for (std::int64_t h : {1, 10, 50, 99}) {
      auto f = [&](double x) { return std::pow(x / 100.0, z); };
      const double fd = testing::central_difference(f, static_cast<double>(h), 1e-6 * static_cast<double>(h));
      const double d = marginal_persistence_derivative({"a", h, 100}, z);
      CHECK(std::abs(d - fd) / d <= 1e-5);
    }
}

TEST_CASE("discrete delta examples") {
  CHECK(discrete_delta_persistence(99, 100, 0.25, 1) == doctest::Approx(ref::kTopCell).epsilon(1e-13));
  CHECK(discrete_delta_persistence(50, 100, 0.15, 0) == 0.0);
  CHECK(discrete_delta_persistence(1, 100, 0.25, -1) == doctest::Approx(ref::kLastCell).epsilon(1e-15));
  CHECK_THROWS_AS(discrete_delta_persistence(100, 100, 0.25, 1), DomainError);
  CHECK_THROWS_AS(discrete_delta_persistence(0, 100, 0.25, -1), DomainError);
}

TEST_CASE("persistence is increasing in H and decreasing in z") {
  for (double z : {0.15, 0.25, 0.35})
    for (std::int64_t h = 0; h < 50; ++h) {
      CHECK(persistence(h + 1, 50, z) > persistence(h, 50, z));
      if (h > 0) CHECK(persistence(h, 50, z) > persistence(h, 50, z + 0.05));
    }
}

TEST_CASE("unit gains have diminishing returns") {
  for (double z : {0.15, 0.25, 0.35})
    for (std::int64_t h = 0; h + 2 <= 60; ++h)
      CHECK(discrete_delta_persistence(h + 1, 60, z, 1) <= discrete_delta_persistence(h, 60, z, 1));
}

TEST_CASE("delta sign follows dH") {
  for (std::int64_t h = 1; h < 20; ++h) {
    CHECK(discrete_delta_persistence(h, 20, 0.25, 1) > 0.0);
    CHECK(discrete_delta_persistence(h, 20, 0.25, -1) < 0.0);
  }
}

TEST_CASE("cell marginal benefit examples") {
  std::vector<std::int64_t> habitat = {99, 40};
  std::vector<std::int64_t> potential = {100, 100};
  CandidateAction none{0, 0, "t", 5.0, {}};
  CHECK(cell_marginal_benefit(none, habitat, potential, 0.25, 2) == 0.0);

  CandidateAction gain{0, 0, "t", 5.0, {{0, +1}}};
  CHECK(cell_marginal_benefit(gain, habitat, potential, 0.25, 2) == doctest::Approx(ref::kHalfTopCell).epsilon(1e-13));

  std::vector<std::int64_t> last = {1};
  std::vector<std::int64_t> last_pot = {100};
  CandidateAction loss{0, 0, "t", 5.0, {{0, -1}}};
  CHECK(cell_marginal_benefit(loss, last, last_pot, 0.25, 1) == doctest::Approx(ref::kLastCell).epsilon(1e-15));
}

TEST_CASE("cell marginal benefit is additive over disjoint species subsets") {
  std::vector<std::int64_t> habitat = {3, 7, 0, 12};
  std::vector<std::int64_t> potential = {10, 9, 4, 12};
  CandidateAction all{0, 0, "t", 1.0, {{0, +1}, {1, -1}, {2, +1}, {3, -1}}};
  CandidateAction left{0, 0, "t", 1.0, {{0, +1}, {1, -1}}};
  CandidateAction right{0, 0, "t", 1.0, {{2, +1}, {3, -1}}};
  for (double z : {0.15, 0.25, 0.35}) {
    const double sum = cell_marginal_benefit(left, habitat, potential, z, 4) +
                       cell_marginal_benefit(right, habitat, potential, z, 4);
    CHECK(cell_marginal_benefit(all, habitat, potential, z, 4) == doctest::Approx(sum).epsilon(1e-14));
  }
}

TEST_CASE("z configuration bounds") {
  CHECK_NOTHROW(ZConfig{}.validate());
  CHECK_NOTHROW((ZConfig{0.25, 0.25, 0.25}.validate()));
  CHECK_THROWS_AS((ZConfig{0.1, 0.15, 0.35}.validate()), DomainError);
  CHECK_THROWS_AS((ZConfig{0.25, 0.0, 0.35}.validate()), DomainError);
  CHECK_THROWS_AS((ZConfig{0.25, 0.15, 1.0}.validate()), DomainError);
}
