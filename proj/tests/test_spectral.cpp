#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "sns/initial_data.hpp"
#include "sns/spectral.hpp"
#include "support.hpp"

using namespace sns;
using sns::test::rel_l2;
using sns::test::sample;
using sns::test::set_mode;

namespace {

GridPtr grid32() { return Grid::create(32); }

SpectralField cos_x(const GridPtr& g) {
  SpectralField f(g, 1);
  set_mode(f, 0, 1, 0, 0, 0.5);
  return f;
}

}  // namespace

TEST_CASE("grid rejects odd or tiny sizes") {
  CHECK_THROWS_AS(Grid::create(7), std::invalid_argument);
  CHECK_THROWS_AS(Grid::create(6), std::invalid_argument);
  CHECK_THROWS_AS(Grid::create(33), std::invalid_argument);
  CHECK_THROWS_AS(Grid::create(16, -1.0), std::invalid_argument);
  const auto g = Grid::create(32);
  CHECK(g->dealias_cutoff() == 10);
  CHECK(g->nz() == 17);
}

TEST_CASE("grid mismatch is reported") {
  const auto a = Grid::create(16);
  const auto b = Grid::create(32);
  SpectralField x(a, 3);
  SpectralField y(b, 3);
  CHECK_THROWS_AS(q_bilinear(x, y), GridMismatch);
}

TEST_CASE("constant physical field maps to the zero mode") {
  const auto g = grid32();
  const PhysicalField one = sample(g, 1, [](double, double, double) { return std::array<double, 9>{1.0}; });
  const SpectralField f = to_spectral(one);
  CHECK(std::abs(f.at(0, 0, 0, 0) - Complex(1.0, 0.0)) < 1e-15);
  SpectralField expect = SpectralField::zeros_like(f);
  expect.component(0)[0] = 1.0;
  CHECK(max_abs_coefficient(f - expect) < 1e-15);
}

TEST_CASE("cos(x) has coefficient 1/2 at k = (+-1, 0, 0)") {
  const auto g = grid32();
  const PhysicalField c = sample(g, 1, [](double x, double, double) { return std::array<double, 9>{std::cos(x)}; });
  const SpectralField f = to_spectral(c);
  CHECK(std::abs(f.at(0, 1, 0, 0) - Complex(0.5, 0.0)) < 1e-14);
  CHECK(std::abs(f.at(0, 31, 0, 0) - Complex(0.5, 0.0)) < 1e-14);
  CHECK(rel_l2(f, cos_x(g)) < 1e-14);
}

TEST_CASE("physical round trip") {
  const auto g = grid32();
  const SpectralField f = random_solenoidal(g, 11, 1.0, 15.0);
  CHECK(rel_l2(to_spectral(to_physical(f)), f) <= 1e-12);
}

TEST_CASE("derivative") {
  const auto g = grid32();
  SUBCASE("constant field") {
    SpectralField f(g, 1);
    f.component(0)[0] = 3.0;
    CHECK(max_abs_coefficient(derivative(f, 0)) == 0.0);
  }
  SUBCASE("d/dx cos x = -sin x pointwise") {
    const PhysicalField d = to_physical(derivative(cos_x(g), 0));
    const PhysicalField expect =
        sample(g, 1, [](double x, double, double) { return std::array<double, 9>{-std::sin(x)}; });
    CHECK(sns::test::max_abs_diff(d, expect) <= 1e-12);
  }
  SUBCASE("sum of second derivatives is the Laplacian") {
    const SpectralField f = random_solenoidal(g, 5, 1.0, 10.0);
    SpectralField sum = SpectralField::zeros_like(f);
    for (int a = 0; a < 3; ++a) sum += derivative(derivative(f, a), a);
    CHECK(rel_l2(sum, laplacian(f)) <= 1e-15);
  }
  SUBCASE("bad axis") { CHECK_THROWS(derivative(cos_x(g), 3)); }
}

TEST_CASE("heat semigroup") {
  const auto g = grid32();
  const SpectralField f = random_solenoidal(g, 6, 1.0, 10.0);
  CHECK(rel_l2(heat_semigroup(f, 0.0), f) == 0.0);

  SpectralField mode(g, 1);
  set_mode(mode, 0, 2, 0, 0, 1.0);
  const SpectralField h = heat_semigroup(mode, 0.5);
  CHECK(h.at(0, 2, 0, 0).real() == doctest::Approx(0.1353352832366127).epsilon(1e-15));

  CHECK(rel_l2(heat_semigroup(heat_semigroup(f, 0.03), 0.07), heat_semigroup(f, 0.1)) <= 1e-13);
  CHECK_THROWS(heat_semigroup(f, -0.1));
}

TEST_CASE("leray projection") {
  const auto g = grid32();
  SUBCASE("annihilates gradients") {
    SpectralField phi(g, 1);
    set_mode(phi, 0, 1, 2, 3, Complex(0.3, -0.2));
    set_mode(phi, 0, 4, -1, 0, Complex(0.1, 0.5));
    const SpectralField grad = gradient(phi);
    CHECK(spectral_l2_norm(leray_project(grad)) <= 1e-12 * spectral_l2_norm(grad));
  }
  SUBCASE("leaves solenoidal fields unchanged") {
    const SpectralField f = random_solenoidal(g, 7, 1.0, 15.0);
    CHECK(rel_l2(leray_project(f), f) <= 1e-12);
  }
  SUBCASE("single mode k = (1, 0, 0)") {
    SpectralField along(g, 3);
    set_mode(along, 0, 1, 0, 0, 1.0);
    CHECK(max_abs_coefficient(leray_project(along)) == 0.0);
    SpectralField across(g, 3);
    set_mode(across, 1, 1, 0, 0, 1.0);
    CHECK(rel_l2(leray_project(across), across) == 0.0);
  }
}

TEST_CASE("tensor product") {
  const auto g = grid32();
  const SpectralField x = random_solenoidal(g, 8, 1.0, 4.0);
  const SpectralField y = random_solenoidal(g, 9, 1.0, 4.0);
  CHECK(max_abs_coefficient(tensor_product(SpectralField(g, 3), y)) == 0.0);

  const SpectralField xy = tensor_product(x, y);
  const SpectralField yx = tensor_product(y, x);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      auto p = xy.component(3 * a + b);
      auto q = yx.component(3 * b + a);
      CHECK(std::equal(p.begin(), p.end(), q.begin()));
    }
  }

  SUBCASE("cos(x) e1 squared") {
    SpectralField u(g, 3);
    set_mode(u, 0, 1, 0, 0, 0.5);
    const PhysicalField uu = to_physical(tensor_product(u, u));
    // cos^2 x = 1/2 + cos(2x)/2; the mean is kept by the product itself.
    const PhysicalField expect = sample(g, 9, [](double x, double, double) {
      return std::array<double, 9>{0.5 + 0.5 * std::cos(2.0 * x)};
    });
    CHECK(sns::test::max_abs_diff(uu, expect) <= 1e-14);
  }
}

TEST_CASE("q bilinear") {
  const auto g = grid32();
  const SpectralField x = random_solenoidal(g, 21, 1.0, 4.0);
  const SpectralField y = random_solenoidal(g, 22, 1.0, 4.0);

  CHECK(max_abs_coefficient(q_bilinear(SpectralField(g, 3), y)) == 0.0);
  CHECK(divergence_defect(q_bilinear(x, y)) <= 1e-10);

  SUBCASE("matches projected convection for solenoidal x") {
    // Inputs within |k| <= 4 keep every product below the dealiasing band.
    const PhysicalField px = to_physical(x);
    PhysicalField conv(g, 3);
    for (int b = 0; b < 3; ++b) {
      for (int a = 0; a < 3; ++a) {
        const PhysicalField d = to_physical(derivative(sns::test::component_field(y, b), a));
        auto out = conv.component(b);
        auto xa = px.component(a);
        auto dv = d.component(0);
        for (std::size_t m = 0; m < out.size(); ++m) out[m] += xa[m] * dv[m];
      }
    }
    CHECK(rel_l2(q_bilinear(x, y), leray_project(to_spectral(conv))) <= 1e-10);
  }
}

TEST_CASE("defect measures") {
  const auto g = grid32();
  SpectralField f(g, 3);
  set_mode(f, 0, 1, 0, 0, 1.0);
  CHECK(divergence_defect(f) > 0.5);
  CHECK(hermitian_defect(f) == 0.0);
  f.component(0)[g->index(31, 0, 0)] = Complex(0.0, 1.0);
  CHECK(hermitian_defect(f) > 0.5);
}
