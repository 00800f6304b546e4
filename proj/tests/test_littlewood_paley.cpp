#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "sns/initial_data.hpp"
#include "sns/littlewood_paley.hpp"
#include "sns/mild_solver.hpp"
#include "support.hpp"

using namespace sns;
using sns::test::rel_l2;
using sns::test::set_mode;

namespace {

// chi(1) = e^-3 / (e^-3 + e^-4) = 1 / (1 + e^-1).
constexpr double kChiOne = 0.7310585786300049;
constexpr double kPhiOne = 0.2689414213699951;

}  // namespace

TEST_CASE("glue and bump values") {
  CHECK(DyadicPartition::chi(0.5) == 1.0);
  CHECK(DyadicPartition::chi(2.0) == 0.0);
  CHECK(DyadicPartition::chi(1.0) == doctest::Approx(kChiOne).epsilon(1e-15));
  CHECK(DyadicPartition::phi(1.0) == doctest::Approx(kPhiOne).epsilon(1e-14));
  CHECK(DyadicPartition::phi(0.5) == 0.0);
  CHECK(DyadicPartition::phi(3.0) == 0.0);
  CHECK(DyadicPartition::phi(0.75) == 0.0);
  CHECK(DyadicPartition::phi(8.0 / 3.0) == 0.0);
  double sum = 0.0;
  for (int j = -8; j <= 8; ++j) sum += DyadicPartition::phi(std::ldexp(1.0, -j));
  CHECK(std::abs(sum - 1.0) <= 1e-10);
}

TEST_CASE("bump stays in [0, 1]") {
  for (int i = 0; i <= 4000; ++i) {
    const double tau = 0.5 + 2.5 * i / 4000.0;
    const double p = DyadicPartition::phi(tau);
    REQUIRE(p >= 0.0);
    REQUIRE(p <= 1.0);
  }
}

TEST_CASE("band range covers the grid") {
  const auto g = Grid::create(32);
  const DyadicPartition part(*g);
  CHECK(part.block_symbol(part.j_min(), g->min_wavenumber()) == 0.0);
  double total = 0.0;
  for (int j = part.j_min(); j <= part.j_max(); ++j) total += part.block_symbol(j, g->max_wavenumber());
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("dyadic blocks") {
  const auto g = Grid::create(32);
  const DyadicPartition part(*g);
  const SpectralField f = random_solenoidal(g, 31, 1.0, 15.0);

  SUBCASE("distant blocks are orthogonal") {
    for (int j = part.j_min(); j <= part.j_max(); ++j) {
      for (int k = j + 2; k <= part.j_max(); ++k) {
        CHECK(max_abs_coefficient(dyadic_block(part, dyadic_block(part, f, j), k)) == 0.0);
      }
    }
  }
  SUBCASE("reconstruction") {
    SpectralField sum = SpectralField::zeros_like(f);
    for (int j = part.j_min(); j <= part.j_max(); ++j) sum += dyadic_block(part, f, j);
    CHECK(rel_l2(sum, f) <= 1e-10);
  }
  SUBCASE("single mode |k| = 1 in block 0") {
    SpectralField mode(g, 3);
    set_mode(mode, 1, 1, 0, 0, 1.0);
    const SpectralField b = dyadic_block(part, mode, 0);
    CHECK(b.at(1, 1, 0, 0).real() == doctest::Approx(kPhiOne).epsilon(1e-14));
    CHECK(b.at(1, 1, 0, 0).imag() == 0.0);
  }
}

TEST_CASE("sobolev norm") {
  const auto g = Grid::create(32);
  CHECK(sobolev_norm(SpectralField(g, 3), 1.0) == 0.0);

  // 6 cos(2x) in one component.
  SpectralField f(g, 3);
  set_mode(f, 2, 2, 0, 0, 3.0);
  const double l2 = spectral_l2_norm(f);
  CHECK(l2 == doctest::Approx(6.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(sobolev_norm(f, 1.0) == doctest::Approx(2.0 * l2).epsilon(1e-15));

  const SpectralField r = random_solenoidal(g, 32, 1.0, 15.0);
  CHECK(sobolev_norm(r, 0.0) == doctest::Approx(spectral_l2_norm(r)).epsilon(1e-14));

  SpectralField with_mean = r;
  with_mean.component(0)[0] = 0.1;
  CHECK_THROWS_AS(sobolev_norm(with_mean, 0.5), std::domain_error);
  CHECK(sobolev_norm(with_mean, 0.0, false) > sobolev_norm(r, 0.0, false));
}

TEST_CASE("besov norm") {
  const auto g = Grid::create(32);
  const DyadicPartition part(*g);
  CHECK(besov_norm(part, SpectralField(g, 3), 0.5, BesovIndex::two) == 0.0);
  CHECK_THROWS(besov_norm(part, SpectralField(g, 3), 0.5, 3));

  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const SpectralField f = random_solenoidal(g, 100 + seed, 1.0, 15.0);
    for (double s : {0.0, 0.5}) {
      const double ratio = besov_norm(part, f, s, BesovIndex::two) / sobolev_norm(f, s);
      CHECK(ratio >= 1.0 / std::sqrt(2.0) - 1e-6);
      CHECK(ratio <= 1.0 + 1e-6);
    }
    const double b1 = besov_norm(part, f, 0.5, 1);
    const double b2 = besov_norm(part, f, 0.5, 2);
    const double binf = besov_norm(part, f, 0.5, BesovIndex::infinity);
    CHECK(b1 >= b2);
    CHECK(b2 >= binf);
  }
}

TEST_CASE("product law ratio") {
  const auto g = Grid::create(32);
  const DyadicPartition part(*g);
  // u = A cos(x) e_2: u (x) u = A^2/2 (1 + cos 2x) in one entry, so with gamma = 1/2
  // the ratio is (phi(2) + sqrt(2) phi(1)) / sqrt(2), independent of A.
  const double expect = (kChiOne + std::sqrt(2.0) * kPhiOne) / std::sqrt(2.0);
  CHECK(expect == doctest::Approx(0.7858778997638703).epsilon(1e-15));
  CHECK(product_law_ratio(part, shear_wave(g, 0.7), 0.5) == doctest::Approx(expect).epsilon(1e-13));

  const double r = product_law_ratio(part, random_solenoidal(g, 3, 1.0, 8.0), 0.5);
  CHECK(r > 0.0);
  CHECK(std::isfinite(r));
  CHECK_THROWS(product_law_ratio(part, SpectralField(g, 3), 0.5));
  CHECK_THROWS(product_law_ratio(part, shear_wave(g, 1.0), 1.0));
}

TEST_CASE("z norm") {
  const auto g = Grid::create(16);
  const double gamma = 0.5;
  const auto times = uniform_times(0.4, 8);
  const SpectralField u0 = random_solenoidal(g, 41, 1.0, 5.0);

  SUBCASE("zero trajectory") {
    const Trajectory zero(times, std::vector<SpectralField>(times.size(), SpectralField(g, 3)), gamma);
    CHECK(z_norm(zero).total == 0.0);
  }
  SUBCASE("constant trajectory") {
    const Trajectory c(times, std::vector<SpectralField>(times.size(), u0), gamma);
    const double lo = sobolev_norm(u0, 0.5 + gamma);
    const double hi = sobolev_norm(u0, 1.5 + gamma);
    CHECK(z_norm(c).total == doctest::Approx(std::sqrt(lo * lo + 0.4 * hi * hi)).epsilon(1e-14));
  }
  SUBCASE("heat energy identity") {
    const double lo0 = sobolev_norm(u0, 0.5 + gamma);
    const double loT = sobolev_norm(heat_semigroup(u0, 0.4), 0.5 + gamma);
    const double exact = std::sqrt(lo0 * lo0 + 0.5 * (lo0 * lo0 - loT * loT));
    const ZNormRecord fine = heat_flow_z_norm(u0, gamma, 0.4, 1 << 14);
    CHECK(fine.total == doctest::Approx(exact).epsilon(1e-8));
    CHECK(fine.sup_part == doctest::Approx(lo0).epsilon(1e-15));
    // The sampled trajectory and the shell-energy evaluation agree on the same grid.
    CHECK(z_norm(heat_trajectory(u0, times, gamma)).total ==
          doctest::Approx(heat_flow_z_norm(u0, gamma, 0.4, 8).total).epsilon(1e-12));
  }
  SUBCASE("heat bound sqrt(3/2) and the constant-1 counterexample") {
    const double h = sobolev_norm(u0, 0.5 + gamma);
    for (double t : {0.1, 1.0}) {
      const double z = heat_flow_z_norm(u0, gamma, t, 1 << 15).total;
      CHECK(z <= std::sqrt(1.5) * h + 1e-6);
      CHECK(z > h);
    }
  }
  SUBCASE("inconsistent samples") {
    const std::vector<double> t{0.0, 1.0};
    const std::vector<double> one{1.0};
    CHECK_THROWS(z_norm_from_samples(t, one, one));
  }
}
