#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "dprime/gridfn.hpp"

using namespace dprime;
using std::numbers::pi;

static double eta1(double x) { return std::sin(pi * (x + 1) / 2); }
static double eta2(double x) { return std::sin(pi * (x + 1)); }

TEST_CASE("grid construction") {
  const Grid g = Grid::make(-1, 1, 2001);
  CHECK(g.h() == doctest::Approx(1e-3));
  CHECK(g.x(2000) == doctest::Approx(1.0));
  CHECK_THROWS_AS(Grid::make(-1, 1, 2000), Error);
  CHECK_THROWS_AS(Grid::make(-1, 1, 1), Error);
  CHECK_THROWS_AS(Grid::make(1, -1, 11), Error);
  CHECK_THROWS_AS(Grid::make(-1, NAN, 11), Error);
}

TEST_CASE("make_grid_function") {
  const Grid g = Grid::make(-1, 1, 2001);
  const RealFn f = make_grid_function(eta1, g);
  CHECK(std::abs(f[0]) < 1e-15);
  CHECK(std::abs(f[2000]) < 1e-15);
  CHECK(f[1000] == doctest::Approx(1.0));
  CHECK_THROWS_AS(make_grid_function([](double x) { return 1 / x; }, Grid::make(-1, 1, 3)), Error);
  CHECK_THROWS_AS(make_grid_function([](double) { return NAN; }, g), Error);
}

TEST_CASE("support hint comes from exact zeros at the ends") {
  const Grid g = Grid::make(-2, 2, 41);
  const RealFn f = make_grid_function([](double x) { return std::abs(x) < 1 ? 1.0 - x * x : 0.0; }, g);
  REQUIRE(f.support);
  CHECK(g.x(f.support->first) > -1.0);
  CHECK(g.x(f.support->second) < 1.0);
  CHECK_FALSE(zeros(g).support);
}

TEST_CASE("Simpson inner product") {
  const Grid g = Grid::make(-1, 1, 2001);
  const RealFn a = make_grid_function(eta1, g), b = make_grid_function(eta2, g);
  CHECK(std::abs(inner_product(a, a) - 1.0) < 1e-10);
  CHECK(std::abs(inner_product(a, b)) < 1e-10);
  CHECK(norm(a) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_THROWS_AS(inner_product(a, make_grid_function(eta1, Grid::make(-1, 1, 11))), Error);

  const ComplexFn z = make_complex_grid_function([](double x) { return Complex(eta1(x), eta1(x)); }, g);
  const ComplexFn o = make_complex_grid_function([](double x) { return Complex(0, eta1(x)); }, g);
  // (z, o) = int (1+i) conj(i) eta^2 = 1 - i
  const Complex ip = inner_product(z, o);
  CHECK(std::abs(ip - Complex(1, -1)) < 1e-10);
}

TEST_CASE("antiderivative") {
  const Grid g = Grid::make(-1, 1, 2001);
  const RealFn phi1 = make_grid_function([](double x) { return pi / 2 * std::cos(pi * (x + 1) / 2); }, g);
  const RealFn F = antiderivative(phi1, 1);
  double err = 0;
  for (std::size_t i = 0; i < g.n; ++i) err = std::max(err, std::abs(F[i] - eta1(g.x(i))));
  CHECK(err < 2 * g.h() * g.h());
  CHECK(F[0] == 0.0);
  const RealFn G = antiderivative(phi1, 2);
  CHECK(std::abs(G[g.n - 1] - 4 / pi) < 1e-6);
  CHECK_THROWS_AS(antiderivative(phi1, 3), Error);
  CHECK_THROWS_AS(antiderivative(phi1, 0), Error);
}

TEST_CASE("rescale_to_fast") {
  const Grid line = Grid::make(-2, 2, 4001);
  const RealFn f = make_grid_function([](double x) { return x * x + x; }, line);
  const Grid fast = Grid::make(-1, 1, 129);
  const RealFn g = rescale_to_fast(f, 0.1, fast);
  double err = 0;
  for (std::size_t i = 0; i < fast.n; ++i) {
    const double t = fast.x(i);
    err = std::max(err, std::abs(g[i] - (0.01 * t * t + 0.1 * t)));
  }
  CHECK(err < line.h() * line.h());
  CHECK_THROWS_AS(rescale_to_fast(f, 3.0, fast), Error);
  CHECK_THROWS_AS(rescale_to_fast(f, 0.0, fast), Error);
  const ComplexFn z = make_complex_grid_function([](double x) { return Complex(x, -x); }, line);
  CHECK(std::abs(rescale_to_fast(z, 0.5, fast)[128] - Complex(0.5, -0.5)) < 1e-14);
}
