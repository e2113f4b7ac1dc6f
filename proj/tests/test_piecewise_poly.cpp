#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "depkern/error.hpp"
#include "depkern/kernels.hpp"
#include "depkern/piecewise_poly.hpp"
#include "oracles.hpp"

using depkern::ErrorKind;
using depkern::integrate_product;
using depkern::Kernel;
using depkern::kernel_catalog;
using depkern::KernelId;
using depkern::PiecewisePoly;
using testutil::throws_kind;

TEST_CASE("construction validates its inputs") {
  CHECK(throws_kind([] { PiecewisePoly({0.0}, {}, 0.0, 0.0); }, ErrorKind::invalid_argument));
  CHECK(throws_kind([] { PiecewisePoly({0.0, 1.0, 0.5}, {{1.0}, {1.0}}, 0.0, 0.0); },
                    ErrorKind::invalid_argument));
  CHECK(throws_kind([] { PiecewisePoly({0.0, 0.0}, {{1.0}}, 0.0, 0.0); },
                    ErrorKind::invalid_argument));
  CHECK(throws_kind([] { PiecewisePoly({0.0, 1.0}, {{1.0}, {2.0}}, 0.0, 0.0); },
                    ErrorKind::invalid_argument));
  CHECK(throws_kind([] { PiecewisePoly({0.0, 1.0}, {{}}, 0.0, 0.0); },
                    ErrorKind::invalid_argument));
  const double nan = std::nan("");
  CHECK(throws_kind([nan] { PiecewisePoly({0.0, 1.0}, {{nan}}, 0.0, 0.0); },
                    ErrorKind::invalid_argument));
  CHECK(throws_kind([nan] { PiecewisePoly({0.0, 1.0}, {{1.0}}, nan, 0.0); },
                    ErrorKind::invalid_argument));
  CHECK(throws_kind(
      [] {
        PiecewisePoly::from_power_basis({0.0, 1.0, 2.0}, {{1.0}}, 0.0, 0.0);
      },
      ErrorKind::invalid_argument));
}

TEST_CASE("evaluation honours pieces, boundaries, and extensions") {
  // 3/4 (1 - u^2) on [-1, 1], zero outside
  auto p = PiecewisePoly::from_power_basis({-1.0, 1.0}, {{0.75, 0.0, -0.75}}, 0.0, 0.0);
  CHECK(p(0.0) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(p(0.5) == doctest::Approx(0.5625).epsilon(1e-15));
  CHECK(p(-1.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
  CHECK(p(1.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
  CHECK(p(-2.0) == 0.0);
  CHECK(p(7.0) == 0.0);
  CHECK(p.max_degree() == 2);
  CHECK(p.left_value() == 0.0);
  CHECK(p.right_value() == 0.0);

  // step-like extensions
  PiecewisePoly q({0.0, 1.0}, {{0.5}}, -3.0, 4.0);
  CHECK(q(-0.001) == -3.0);
  CHECK(q(1.001) == 4.0);
  CHECK(q(0.25) == 0.5);
}

TEST_CASE("from_power_basis reproduces the global polynomial") {
  // u^2 on [0.25, 0.75] split in two pieces
  auto p = PiecewisePoly::from_power_basis({0.25, 0.5, 0.75},
                                           {{0.0, 0.0, 1.0}, {0.0, 0.0, 1.0}}, 0.0, 0.0);
  std::mt19937_64 eng(11);
  std::uniform_real_distribution<double> unif(0.25, 0.75);
  for (int i = 0; i < 200; ++i) {
    const double u = unif(eng);
    CHECK(std::fabs(p(u) - u * u) < 1e-15);
  }
}

TEST_CASE("affine composition is exact") {
  const Kernel& epan = kernel_catalog(KernelId::epanechnikov);
  const Kernel& tri = kernel_catalog(KernelId::triangular);

  // q(u) = K((u - 1/2)/(1/10)) for the Epanechnikov density
  auto q = epan.density.affine_compose(0.5, 0.1);
  CHECK(q(0.5) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(q(0.45) == doctest::Approx(0.5625).epsilon(1e-15));
  CHECK(q(0.39) == 0.0);
  CHECK(q(0.61) == 0.0);
  CHECK(q.breakpoints().front() == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(q.breakpoints().back() == doctest::Approx(0.6).epsilon(1e-15));

  // cumulative triangular at its center
  auto f = tri.cdf.affine_compose(0.3, 0.2);
  CHECK(f(0.3) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(f(0.1 - 1e-9) == 0.0);
  CHECK(f(0.5 + 1e-9) == 1.0);

  // identity composition changes nothing
  auto id = epan.density.affine_compose(0.0, 1.0);
  for (double u = -1.2; u <= 1.2; u += 0.01) CHECK(id(u) == epan.density(u));

  // negative scale reflects; coefficients are only sign-flipped, so the
  // reflected evaluation matches bit for bit on symmetric grids
  auto r = tri.cdf.affine_compose(0.0, -1.0);
  for (double u = -1.5; u <= 1.5; u += 0.03) {
    CHECK(r(u) == doctest::Approx(1.0 - tri.cdf(u)).epsilon(1e-15));
  }
  CHECK(r.left_value() == 1.0);
  CHECK(r.right_value() == 0.0);

  CHECK(throws_kind([&] { epan.density.affine_compose(0.0, 0.0); },
                    ErrorKind::invalid_argument));
  CHECK(throws_kind([&] { epan.density.affine_compose(std::nan(""), 1.0); },
                    ErrorKind::invalid_argument));

  // tiny scales keep interior values exact: coefficients never change
  auto narrow = epan.density.affine_compose(0.5, 1e-6);
  CHECK(narrow(0.5) == 0.75);
}

TEST_CASE("antiderivative matches closed forms") {
  const Kernel& epan = kernel_catalog(KernelId::epanechnikov);
  auto F = epan.density.antiderivative();
  // F(x) = 1/2 + 3x/4 - x^3/4 on [-1, 1]
  CHECK(F(-1.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
  CHECK(F(0.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(F(0.5) == doctest::Approx(0.84375).epsilon(1e-14));
  CHECK(F(1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(F.right_value() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(F.left_value() == 0.0);
  CHECK(F(3.0) == F.right_value());

  // nonzero left extension has no bounded antiderivative
  PiecewisePoly c({0.0, 1.0}, {{1.0}}, 1.0, 0.0);
  CHECK(throws_kind([&] { c.antiderivative(); }, ErrorKind::invalid_argument));
}

TEST_CASE("integrate handles extensions and interior pieces") {
  const Kernel& epan = kernel_catalog(KernelId::epanechnikov);
  const Kernel& tri = kernel_catalog(KernelId::triangular);
  CHECK(epan.density.integrate(-1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(epan.density.integrate(-5.0, 5.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(epan.density.integrate(0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(tri.density.integrate(-2.0, 2.0) == doctest::Approx(1.0).epsilon(1e-15));

  // right extension of a cumulative contributes its constant
  const double v = epan.cdf.integrate(-2.0, 2.0);
  const double oracle = testutil::simpson([&](double u) { return epan.cdf(u); }, -2.0, 2.0, 40000);
  CHECK(v == doctest::Approx(oracle).epsilon(1e-10));
  CHECK(v == doctest::Approx(2.0).epsilon(1e-13));  // symmetry: int_{-1}^{1} cdf = 1

  CHECK(epan.density.integrate(0.3, 0.3) == 0.0);
  CHECK(throws_kind([&] { epan.density.integrate(1.0, 0.0); }, ErrorKind::invalid_argument));
  CHECK(throws_kind([&] { epan.density.integrate(0.0, std::nan("")); },
                    ErrorKind::invalid_argument));
}

TEST_CASE("integrate_product closed-form fixtures") {
  const Kernel& epan = kernel_catalog(KernelId::epanechnikov);
  const Kernel& tri = kernel_catalog(KernelId::triangular);
  CHECK(integrate_product(epan.density, epan.density, -1.0, 1.0) ==
        doctest::Approx(0.6).epsilon(1e-14));
  CHECK(integrate_product(tri.density, tri.density, -1.0, 1.0) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  // int_0^1 K(u) Kbar(u) du = 3/8 for symmetric kernels
  CHECK(integrate_product(epan.density, epan.cdf, 0.0, 1.0) ==
        doctest::Approx(0.375).epsilon(1e-14));
  CHECK(integrate_product(tri.density, tri.cdf, 0.0, 1.0) ==
        doctest::Approx(0.375).epsilon(1e-14));
  CHECK(integrate_product(epan.density, epan.density, 0.3, 0.3) == 0.0);
  CHECK(throws_kind([&] { integrate_product(epan.density, epan.density, 1.0, -1.0); },
                    ErrorKind::invalid_argument));
}

TEST_CASE("integrate_product enforces the degree cap") {
  auto deg5 = PiecewisePoly::from_power_basis(
      {0.0, 1.0}, {{0.0, 0.0, 0.0, 0.0, 0.0, 1.0}}, 0.0, 0.0);
  auto deg4 = PiecewisePoly::from_power_basis({0.0, 1.0}, {{0.0, 0.0, 0.0, 0.0, 1.0}}, 0.0, 0.0);
  auto deg3 = PiecewisePoly::from_power_basis({0.0, 1.0}, {{0.0, 0.0, 0.0, 1.0}}, 0.0, 0.0);
  // 5 + 3 = 8 is allowed, 5 + 4 = 9 is not
  CHECK(integrate_product(deg5, deg3, 0.0, 1.0) == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
  CHECK(throws_kind([&] { integrate_product(deg5, deg4, 0.0, 1.0); },
                    ErrorKind::invalid_argument));
}

TEST_CASE("integrate_product agrees with a dense Simpson oracle") {
  const Kernel& epan = kernel_catalog(KernelId::epanechnikov);
  const Kernel& tri = kernel_catalog(KernelId::triangular);
  const PiecewisePoly* bases[4] = {&epan.density, &epan.cdf, &tri.density, &tri.cdf};

  std::mt19937_64 eng(20240617);
  std::uniform_real_distribution<double> shift(-0.5, 1.5);
  std::uniform_real_distribution<double> mag(0.05, 1.2);
  std::uniform_real_distribution<double> range(-2.0, 2.5);
  std::uniform_int_distribution<int> pick(0, 3);
  std::uniform_int_distribution<int> coin(0, 1);

  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double s1 = coin(eng) ? mag(eng) : -mag(eng);
    const double s2 = coin(eng) ? mag(eng) : -mag(eng);
    PiecewisePoly p = bases[pick(eng)]->affine_compose(shift(eng), s1);
    PiecewisePoly q = bases[pick(eng)]->affine_compose(shift(eng), s2);
    double lo = range(eng), hi = range(eng);
    if (lo > hi) std::swap(lo, hi);
    const double exact = integrate_product(p, q, lo, hi);
    const double approx =
        testutil::simpson([&](double u) { return p(u) * q(u); }, lo, hi, 1000000);
    worst = std::max(worst, std::fabs(exact - approx));
  }
  CHECK(worst < 1e-10);
}
