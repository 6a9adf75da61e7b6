#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <random>

#include "dprime/experiment.hpp"
#include "dprime/halfbound.hpp"
#include "dprime/io.hpp"

using namespace dprime;

namespace {
const PerturbationPair& sine() {
  static const PerturbationPair p = sine_pair(4001);
  return p;
}
RealFn constant(const Grid& g, double c) {
  return make_grid_function([c](double) { return c; }, g);
}
double max_abs(const RealFn& f) {
  double m = 0;
  for (double v : f.values) m = std::max(m, std::abs(v));
  return m;
}
}  // namespace

TEST_CASE("apply_B on the known half-bound states") {
  const auto& p = sine();
  CHECK(pair_norm(apply_B(p, constant(p.grid(), 1.0))) <= 1e-10 * pair_norm(p.phi1));
  CHECK(pair_norm(apply_B(p, p.omega)) <= 1e-6);

  const RealFn x = make_grid_function([](double t) { return t; }, p.grid());
  const RealFn bx = apply_B(p, x, 1.0, 1.0);
  double err = 0;
  for (std::size_t k = 0; k < x.size(); ++k) err = std::max(err, std::abs(bx[k] - (p.m2 * p.phi1[k] + p.m1 * p.phi2[k])));
  const double h = p.grid().h();
  CHECK(err <= 10 * h * h);
}

TEST_CASE("halfbound_residuals") {
  const auto r = halfbound_residuals(sine());
  CHECK(r.r_const < 1e-6);
  CHECK(r.r_omega < 1e-6);

  PerturbationPair bad = sine();
  for (auto& v : bad.phi2.values) v *= 2;
  CHECK(halfbound_residuals(bad).r_omega > 1e-2);

  const auto r2 = halfbound_residuals(sine_pair(8001));
  CHECK(r.r_omega / r2.r_omega >= 3.5);
}

TEST_CASE("kernel degeneracy det(n1^2, 1; 1, n2^2) = 0") {
  for (std::size_t n : {101ul, 4001ul}) {
    const auto p = sine_pair(n);
    CHECK(std::abs(p.n1 * p.n1 * p.n2 * p.n2 - 1.0) < 1e-12);
  }
}

TEST_CASE("solvability_data") {
  const auto& p = sine();
  const auto [a0, b0] = solvability_data(p, constant(p.grid(), 0.0));
  CHECK(a0 == 0.0);
  CHECK(b0 == 0.0);

  const auto [a, b] = solvability_data(p, p.omega);
  const double w2 = node_sum(p.omega, p.omega);
  CHECK(std::abs(a - (node_sum(p.omega) - w2 / p.kappa)) < 1e-12);
  CHECK(std::abs(b + w2 / p.kappa) < 1e-12);

  std::mt19937_64 rng(3);
  for (int i = 0; i < 10; ++i) {
    const RealFn h = random_smooth_rhs(p.grid(), rng);
    const auto [ai, bi] = solvability_data(p, h);
    CHECK(std::abs((ai - bi) - node_sum(h)) < 1e-10);
  }
}

TEST_CASE("solve_bvp examples") {
  const auto& p = sine();
  const BvpSolution z = solve_bvp(p, {constant(p.grid(), 0.0), 0, 0});
  CHECK(max_abs(z.v) == 0.0);

  const auto [a, b] = solvability_data(p, p.phi1);
  const BvpSolution s = solve_bvp(p, {p.phi1, a, b});
  CHECK(s.residual < 1e-6);
  CHECK(std::abs(s.v.values.front()) < 1e-8);
  CHECK(std::abs(s.v.values.back()) < 1e-8);

  const RealFn one = constant(p.grid(), 1.0);
  const auto [a1, b1] = solvability_data(p, one);
  const BvpSolution s1 = solve_bvp(p, {one, a1, b1});
  CHECK(std::abs(s1.g2 - s1.g1) < 1e-10);

  CHECK_THROWS_WITH_AS(solve_bvp(p, {one, a1 + 1e-3, b1}), doctest::Contains("solvability violated"), Error);
}

TEST_CASE("random right-hand sides") {
  const BvpSuiteResult r = bvp_suite(sine(), 100, 42);
  CHECK(r.max_boundary < 1e-8);
  CHECK(r.max_residual < 1e-6);
  CHECK(r.max_consistency < 1e-10);
  // the W2 bound does not drift under refinement
  const BvpSuiteResult r2 = bvp_suite(sine_pair(8001), 100, 42);
  CHECK(std::abs(r2.max_w2_ratio / r.max_w2_ratio - 1) < 0.05);
}

TEST_CASE("linearity") {
  const auto& p = sine();
  std::mt19937_64 rng(11);
  const RealFn h1 = random_smooth_rhs(p.grid(), rng), h2 = random_smooth_rhs(p.grid(), rng);
  RealFn hs = h1;
  for (std::size_t k = 0; k < hs.size(); ++k) hs.values[k] += h2.values[k];
  const auto d1 = solvability_data(p, h1), d2 = solvability_data(p, h2), ds = solvability_data(p, hs);
  const RealFn v1 = solve_bvp(p, {h1, d1.first, d1.second}).v;
  const RealFn v2 = solve_bvp(p, {h2, d2.first, d2.second}).v;
  const RealFn vs = solve_bvp(p, {hs, ds.first, ds.second}).v;
  double err = 0;
  for (std::size_t k = 0; k < vs.size(); ++k) err = std::max(err, std::abs(vs[k] - v1[k] - v2[k]));
  CHECK(err <= 1e-9 * max_abs(vs));
}

TEST_CASE("complex data splits into two real problems") {
  const auto& p = sine();
  ComplexFn h{p.grid(), CVec(p.grid().n), std::nullopt};
  for (std::size_t k = 0; k < h.size(); ++k) h.values[k] = Complex(p.phi1[k], -2 * p.phi2[k]);
  RealFn hr = p.phi1, hi = p.phi2;
  for (auto& v : hi.values) v *= -2;
  const auto dr = solvability_data(p, hr), di = solvability_data(p, hi);
  const auto s = solve_bvp(p, h, {dr.first, di.first}, {dr.second, di.second});
  const auto sr = solve_bvp(p, {hr, dr.first, dr.second});
  CHECK(std::abs(s.v[100].real() - sr.v[100]) < 1e-15);
  CHECK(s.residual < 1e-6);
}

TEST_CASE("BVP CSV export") {
  const auto& p = sine();
  io::write_bvp_csv("test_bvp.csv", p.omega);
  const io::Table t = io::read_csv("test_bvp.csv");
  CHECK(t.header == std::vector<std::string>{"t", "v"});
  CHECK(t.rows.size() == p.grid().n);
  std::remove("test_bvp.csv");
}
