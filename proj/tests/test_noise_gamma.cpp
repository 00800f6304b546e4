#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "sns/brownian.hpp"
#include "sns/gamma.hpp"
#include "sns/initial_data.hpp"
#include "sns/littlewood_paley.hpp"
#include "sns/noise.hpp"
#include "support.hpp"

using namespace sns;
using sns::test::rel_l2;

namespace {

NoiseModel one_channel(double lambda, KernelSpec kernel) { return validate_noise({ChannelSpec{lambda, std::move(kernel)}}); }

BrownianPath path_from_csv(const std::string& text) {
  std::istringstream is(text);
  return BrownianPath::read_csv(is);
}

}  // namespace

TEST_CASE("admissibility and decay rate") {
  CHECK(admissibility_threshold(1.0) == doctest::Approx(6.464101615137754).epsilon(1e-15));

  const NoiseModel ok = one_channel(7.0, KernelSpec::gaussian(1.0, 1.0));
  REQUIRE(ok.size() == 1);
  CHECK(ok.channels[0].alpha == doctest::Approx(2.0).epsilon(1e-15));

  try {
    one_channel(6.4, KernelSpec::gaussian(1.0, 1.0));
    FAIL("lambda = 6.4 must be rejected");
  } catch (const AdmissibilityViolation& e) {
    CHECK(e.channel() == 0);
    CHECK(e.lambda() == 6.4);
    CHECK(e.threshold() == doctest::Approx(6.464101615137754).epsilon(1e-15));
    CHECK(std::string(e.what()).find("6.464") != std::string::npos);
  }
  CHECK_THROWS_AS(one_channel(-6.4, KernelSpec::gaussian(1.0, 1.0)), AdmissibilityViolation);
  CHECK(one_channel(-7.0, KernelSpec::gaussian(1.0, 1.0)).channels[0].alpha == doctest::Approx(2.0));

  const NoiseModel zero = one_channel(0.1, KernelSpec::zero());
  CHECK(zero.channels[0].alpha == doctest::Approx(0.005).epsilon(1e-15));

  CHECK_THROWS_AS(one_channel(0.0, KernelSpec::zero()), std::invalid_argument);
  CHECK(noise_violations({ChannelSpec{6.4, KernelSpec::gaussian(1.0, 1.0)}, ChannelSpec{0.0, KernelSpec::zero()}}).size() == 2);
}

TEST_CASE("gaussian kernel symbol") {
  const KernelSpec h = KernelSpec::gaussian(2.0, 0.5);
  CHECK(h.l1_norm == 2.0);
  CHECK(h(0.0, 0.0, 0.0) == Complex(2.0, 0.0));
  CHECK(h.radial_symbol(2.0).real() == doctest::Approx(2.0 * std::exp(-0.5)).epsilon(1e-15));
  const auto g = Grid::create(16);
  for (int i = 0; i < g->n(); ++i) {
    CHECK(std::abs(h(g->wavenumber(i), 0.0, 0.0)) <= h.l1_norm + 1e-12);
  }
  CHECK(std::abs(KernelSpec::zero()(1.0, 2.0, 3.0)) == 0.0);
}

TEST_CASE("brownian paths") {
  const BrownianPath p = BrownianPath::sample(2, 1.0, 64, 99);
  CHECK(p.value(0, 0) == 0.0);
  CHECK(p.value(1, 0) == 0.0);
  CHECK(p.value_at(1, p.time(17)) == p.value(1, 17));

  const BrownianPath q = BrownianPath::sample(2, 1.0, 64, 99);
  for (std::size_t c = 0; c < 2; ++c) {
    auto a = p.channel_values(c);
    auto b = q.channel_values(c);
    CHECK(std::equal(a.begin(), a.end(), b.begin()));
  }
  CHECK(p.value_at(0, 0.3001) == q.value_at(0, 0.3001));
  CHECK(BrownianPath::sample(2, 1.0, 64, 100).value(0, 64) != p.value(0, 64));
  CHECK_THROWS(p.value_at(0, 1.5));

  SUBCASE("variance of beta(1)") {
    double sum = 0.0;
    double sq = 0.0;
    constexpr int kPaths = 10000;
    for (int s = 0; s < kPaths; ++s) {
      const double b = BrownianPath::sample(1, 1.0, 16, static_cast<std::uint64_t>(s)).value(0, 16);
      sum += b;
      sq += b * b;
    }
    const double mean = sum / kPaths;
    const double var = (sq - kPaths * mean * mean) / (kPaths - 1);
    CHECK(std::abs(var - 1.0) <= 0.05);
  }
  SUBCASE("csv") {
    std::ostringstream os;
    p.write_csv(os);
    const BrownianPath r = path_from_csv(os.str());
    CHECK(r.seed() == 99);
    CHECK(r.steps() == 64);
    CHECK(r.value(1, 40) == p.value(1, 40));
    CHECK_THROWS(path_from_csv("t,beta_1\n0,0\n"));
  }
}

TEST_CASE("gamma symbol at a prescribed path value") {
  // beta(0.2) = 0.1, one gaussian channel with h(0) = 1 and lambda = 7:
  // b(0) = 8, exponent 0.1 * 8 - 0.1 * 64 = -5.6.
  const auto g = Grid::create(16);
  const BrownianPath path = path_from_csv("# seed=0 channels=1 t_max=0.2 steps=1\nt,beta_1\n0,0\n0.2,0.1\n");
  const GammaOperator op(g, one_channel(7.0, KernelSpec::gaussian(1.0, 1.0)), path);
  REQUIRE(op.size() == 2);
  CHECK(op.symbol(1, 0, 0, 0).real() == doctest::Approx(0.0036978637164829).epsilon(1e-13));
  CHECK(op.symbol(1, 0, 0, 0).imag() == 0.0);
  CHECK(op.symbol_at(1, 0.0, 0.0, 0.0).real() == doctest::Approx(std::exp(-5.6)).epsilon(1e-14));
  CHECK(op.beta(0, 1) == 0.1);
}

TEST_CASE("gamma operator") {
  const auto g = Grid::create(16);
  const NoiseModel model = one_channel(7.0, KernelSpec::gaussian(1.0, 1.0));
  const BrownianPath path = BrownianPath::sample(1, 1.0, 50, 5);
  const GammaOperator op(g, model, path);
  const SpectralField f = random_solenoidal(g, 12, 1.0, 7.0);

  SUBCASE("identity at t = 0") {
    for (int i = 0; i < g->n(); ++i) CHECK(op.symbol(0, i, 3, 2) == Complex(1.0, 0.0));
    CHECK(rel_l2(op.apply(f, 0), f) == 0.0);
    CHECK(op.eta(0) == 1.0);
  }
  SUBCASE("symbol times inverse symbol") {
    double worst = 0.0;
    for (std::size_t m : {std::size_t{1}, std::size_t{25}, std::size_t{50}}) {
      for (int i = 0; i < g->n(); ++i) {
        for (int l = 0; l < g->nz(); ++l) {
          worst = std::max(worst, std::abs(op.symbol(m, i, 1, l) * op.inverse_symbol(m, i, 1, l) - 1.0));
        }
      }
    }
    CHECK(worst <= 1e-12);
  }
  SUBCASE("apply then invert") { CHECK(rel_l2(op.apply_inverse(op.apply(f, 30), 30), f) <= 1e-11); }
  SUBCASE("commutes with blocks") {
    const DyadicPartition part(*g);
    const double scale = spectral_l2_norm(f);
    for (int j = part.j_min(); j <= part.j_max(); ++j) {
      const SpectralField a = op.apply(dyadic_block(part, f, j), 40);
      const SpectralField b = dyadic_block(part, op.apply(f, 40), j);
      CHECK(spectral_l2_norm(a - b) <= 1e-12 * scale);
    }
  }
  SUBCASE("eta identities and bound") {
    for (std::size_t m = 0; m < op.size(); ++m) {
      const double sup = op.sup_multiplier(m);
      CHECK(op.eta(m) >= sup * (1.0 - 1e-12));
      CHECK(op.eta(m) * op.inf_multiplier(m) / (sup * sup) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(op.eta(m) <= op.eta_bound(m) * (1.0 + 1e-12));
    }
  }
  SUBCASE("sup eta") {
    CHECK(op.sup_eta(0.0).value == 1.0);
    CHECK(op.sup_eta(0.3).value <= op.sup_eta(0.6).value);
    double bound = 0.0;
    for (std::size_t m = 0; m < op.size(); ++m) bound = std::max(bound, op.eta_bound(m));
    CHECK(op.sup_eta(1.0).value <= bound);
  }
  SUBCASE("time validation") {
    CHECK_THROWS(GammaOperator(g, model, path, {0.0, 2.0}));
    CHECK_THROWS(GammaOperator(g, model, path, {0.5, 0.2}));
  }
  SUBCASE("grid mismatch") { CHECK_THROWS_AS(op.apply(random_solenoidal(Grid::create(32), 1, 1, 4), 1), GridMismatch); }
}

TEST_CASE("zero kernel closed form") {
  const auto g = Grid::create(16);
  const BrownianPath path = BrownianPath::sample(1, 1.0, 100, 17);
  const GammaOperator op(g, one_channel(0.1, KernelSpec::zero()), path);
  double worst = 0.0;
  for (std::size_t m = 0; m < op.size(); ++m) {
    const double t = op.time(m);
    const double expect = std::exp(path.value(0, static_cast<int>(m)) * 0.1 - t * 0.01 / 2.0);
    worst = std::max(worst, std::abs(op.eta(m) - expect) / expect);
  }
  CHECK(worst <= 1e-12);
  // A constant multiplier: tail certification only depends on alpha.
  CHECK(op.sup_eta(1.0).value >= 1.0);
}

TEST_CASE("identity operator") {
  const auto g = Grid::create(16);
  const GammaOperator id = GammaOperator::identity(g, {0.0, 0.5, 1.0});
  CHECK(id.is_identity());
  CHECK(id.eta(2) == 1.0);
  CHECK(id.sup_eta(1.0).value == 1.0);
  CHECK(id.sup_eta(1.0).tail_certified);
  const SpectralField f = random_solenoidal(g, 2, 1.0, 5.0);
  CHECK(rel_l2(id.apply(f, 2), f) == 0.0);
}
