#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "dprime/experiment.hpp"
#include "dprime/kernels.hpp"
#include "dprime/resolvent.hpp"

using namespace dprime;

namespace {

const PerturbationPair& sine() {
  static const PerturbationPair p = sine_pair(4001);
  return p;
}

FastCoupling coupling(double a, double b, int K = 64) {
  const auto& p = sine();
  const CouplingPotential q = synthesize_q(p, moments_for_target(a, b, p.kappa), quartic_window(p.grid()));
  return adapt_coupling(p, q, K);
}

LineProblem problem(double h, Complex zeta = {0, 1}, double L = 15) {
  LineProblem p;
  p.half_width = L;
  p.zeta = zeta;
  p.h = h;
  return p;
}

ComplexFn gaussian(const LineProblem& p) { return make_complex_grid_function(make_forcing("gaussian"), p.grid()); }

CVec random_vec(std::size_t n, std::mt19937_64& r) {
  std::normal_distribution<double> nd;
  CVec v(n);
  for (auto& z : v) z = {nd(r), nd(r)};
  return v;
}

Complex wdot(const std::vector<double>& w, const CVec& a, const CVec& b) {
  Complex s{};
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * a[i] * std::conj(b[i]);
  return s;
}

Complex free_kernel(double x, Complex zeta) {
  // int e^{-s|x-y|} / (2s) f(y) dy by composite Simpson on each side of the kink
  const Complex s = std::sqrt(-zeta);
  const auto f = make_forcing("gaussian");
  auto side = [&](double a, double b) {
    const int n = 4000;
    const double h = (b - a) / n;
    Complex acc{};
    for (int i = 0; i <= n; ++i) {
      const double y = a + i * h;
      const double wt = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
      acc += wt * std::exp(-s * std::abs(x - y)) / (2.0 * s) * f(y);
    }
    return acc * h / 3.0;
  };
  return side(-12, x) + side(x, 12);
}

}  // namespace

TEST_CASE("line problem checks") {
  CHECK_THROWS_AS(problem(0.01, {1, 0}).check(), ConfigError);
  CHECK_THROWS_AS(problem(0.01, {0, 1}, 5).check(), ConfigError);
  CHECK_NOTHROW(problem(0.01, {0, 1}).check());
  CHECK(problem(0.01, {0, 1}).decay().real() > 0);
  CHECK(problem(0.01, {0, -1}).decay().real() > 0);
}

TEST_CASE("limit with alpha = 1, beta = 0 is the free resolvent") {
  const LineProblem p = problem(0.005);
  const ResolventSolve r = limit_resolvent({1, 0}, p, gaussian(p));
  const std::size_t M = p.half_points();
  double err = 0;
  for (int k = -600; k <= 600; k += 50) {
    const double x = k * p.h;
    err = std::max(err, std::abs(r.u[M + k] - free_kernel(x, p.zeta)));
  }
  CHECK(err <= 1e-5);
  CHECK(r.residual <= 1e-8);
}

TEST_CASE("limit resolvent: zero data and interface conditions") {
  const LineProblem p = problem(0.01);
  ComplexFn zero = gaussian(p);
  for (auto& v : zero.values) v = 0;
  const ResolventSolve z = limit_resolvent({2, 1}, p, zero);
  for (const auto& v : z.u.values) CHECK(v == Complex{});

  const ResolventSolve r = limit_resolvent({2, 1}, p, gaussian(p));
  const double scale = std::abs(r.u_minus) + std::abs(r.u_plus);
  CHECK(std::abs(r.u_plus - (2.0 * r.u_minus + 1.0 * r.du_minus)) <= 1e-7 * scale);
  CHECK(std::abs(r.du_plus - r.du_minus / 2.0) <= 1e-7 * (std::abs(r.du_minus) + std::abs(r.du_plus)));
  CHECK(std::abs(r.u_plus - r.u_minus) > 0.1);  // the interaction does something
  CHECK(r.residual <= 1e-8);

  CHECK_THROWS_AS(limit_resolvent({0, 1}, p, gaussian(p)), ConfigError);
  CHECK_THROWS_AS(limit_resolvent({1, 1}, problem(0.01, {2, 0}), gaussian(p)), ConfigError);
}

TEST_CASE("unperturbed S_eps matches the (1, 0) limit") {
  const FastCoupling z = zero_coupling(32);
  const double eps = 0.32;
  const LineProblem p = problem(eps / 32);
  const ResolventSolve a = eps_resolvent(z, p, eps, gaussian(p));
  const ResolventSolve b = limit_resolvent({1, 0}, p, gaussian(p));
  double err = 0;
  for (std::size_t k = 0; k < a.u.size(); ++k) err = std::max(err, std::abs(a.u[k] - b.u[k]));
  CHECK(err <= 1e-8);
}

TEST_CASE("Woodbury solve residual") {
  const FastCoupling c = coupling(2, 1);
  const double eps = 0.1;
  const LineProblem p = problem(eps / c.K);
  const ComplexFn f = gaussian(p);
  const ResolventSolve r = eps_resolvent(c, p, eps, f);
  CHECK(r.residual <= 1e-8 * weighted_norm(p.weights(), f.values));
  CHECK(r.condition >= 1.0);
}

TEST_CASE("Woodbury solve equals a dense direct solve on a coarse grid") {
  const FastCoupling c = coupling(2, 1, 32);
  const double eps = 0.1;
  LineProblem p = problem(eps / 32, {0, 10}, 3.125);  // 2001 nodes
  REQUIRE(p.grid().n == 2001);
  const EpsSystem sys(c, p, eps, p.zeta);
  const auto rows = sys.dense();
  const std::size_t n = rows.size();
  Eigen::MatrixXcd A(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) A(i, j) = rows[i][j];
  const ComplexFn f = gaussian(p);
  const Eigen::VectorXcd x = A.partialPivLu().solve(Eigen::Map<const Eigen::VectorXcd>(f.values.data(), n));
  const CVec y = sys.solve(f.values);
  double err = 0, mx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    err = std::max(err, std::abs(x(i) - y[i]));
    mx = std::max(mx, std::abs(x(i)));
  }
  CHECK(err <= 1e-9 * std::max(1.0, mx));
}

TEST_CASE("eps_resolvent preconditions") {
  const FastCoupling c = coupling(2, 1, 64);
  const LineProblem p = problem(0.1 / 64);
  CHECK_THROWS_AS(eps_resolvent(c, p, 0.2, gaussian(p)), ConfigError);  // h != eps/K
  CHECK_THROWS_AS(adapt_coupling(sine(), c.q, 16), ConfigError);         // too few points in [-eps, eps]
  const LineProblem p2 = problem(2.0 / 64);
  CHECK_THROWS_AS(eps_resolvent(c, p2, 2.0, gaussian(p2)), ConfigError);
}

TEST_CASE("weighted symmetry and exact adjoints") {
  const FastCoupling c = coupling(2, 1);
  const double eps = 0.1;
  const LineProblem p = problem(eps / c.K);
  const EpsSystem S(c, p, eps, p.zeta), Sa(c, p, eps, std::conj(p.zeta));
  std::mt19937_64 rng(5);
  const CVec u = random_vec(S.size(), rng), v = random_vec(S.size(), rng);
  const auto& w = S.weights();
  // <(S - zeta) u, v> = <u, (S - conj zeta) v>
  const Complex l = wdot(w, S.apply(u), v), r = wdot(w, u, Sa.apply(v));
  CHECK(std::abs(l - r) <= 1e-10 * std::abs(l));
  const Complex l2 = wdot(w, S.solve(u), v), r2 = wdot(w, u, Sa.solve(v));
  CHECK(std::abs(l2 - r2) <= 1e-10 * std::abs(l2));

  const LimitSystem L({2, 1}, p);
  const CVec f = random_vec(L.size(), rng), g = random_vec(L.size(), rng);
  const Complex l3 = wdot(L.weights(), L.solve(f), g), r3 = wdot(L.weights(), f, L.solve_adjoint(g));
  CHECK(std::abs(l3 - r3) <= 1e-10 * std::abs(l3));

  // split maps are adjoint to each other
  const std::size_t M = p.half_points();
  const CVec x = random_vec(S.size(), rng);
  const Complex l4 = wdot(L.weights(), split_from_line(x, M), g), r4 = wdot(w, x, line_from_split(g, M));
  CHECK(std::abs(l4 - r4) <= 1e-12 * std::abs(l4));
}

TEST_CASE("resolvent bound 1/|Im zeta|") {
  const FastCoupling c = coupling(2, 1);
  const double eps = 0.05;
  const LineProblem p = problem(eps / c.K);
  const EpsSystem S(c, p, eps, p.zeta);
  std::mt19937_64 rng(9);
  for (int i = 0; i < 5; ++i) {
    const CVec f = random_vec(S.size(), rng);
    const double ratio = weighted_norm(S.weights(), S.solve(f)) / weighted_norm(S.weights(), f);
    CHECK(ratio <= 1.02 / std::abs(p.zeta.imag()));
  }
}

TEST_CASE("operator gap") {
  const FastCoupling c = coupling(2, 1);
  const LineProblem p = problem(0.1 / c.K);
  const LimitResolventOp A({2, 1}, p), B({2, 1}, p);
  CHECK(operator_gap(A, B, split_weights(p), {}).gap <= 1e-10);

  const GapEstimate g1 = resolvent_gap(c, {2, 1}, p, 0.1, {});
  const GapEstimate g2 = resolvent_gap(c, {2, 1}, p, 0.025, {});
  CHECK(g2.gap < g1.gap);
  CHECK_FALSE(g1.warn);

  // the power iteration beats random sampling
  const EpsResolventOp E(c, p, 0.1);
  const auto w = split_weights(p);
  std::mt19937_64 rng(1);
  double best = 0;
  for (int i = 0; i < 50; ++i) {
    CVec f = random_vec(w.size(), rng);
    const double nf = weighted_norm(w, f);
    for (auto& v : f) v /= nf;
    CVec d = E.apply(f);
    const CVec dl = A.apply(f);
    for (std::size_t k = 0; k < d.size(); ++k) d[k] -= dl[k];
    best = std::max(best, weighted_norm(w, d));
  }
  CHECK(g1.gap >= best);
}

TEST_CASE("fit_rate") {
  std::vector<std::pair<double, double>> e;
  for (double x : {0.2, 0.1, 0.05, 0.025, 0.0125}) e.emplace_back(x, 3 * std::sqrt(x));
  RateFit f = fit_rate(e);
  CHECK(std::abs(f.slope - 0.5) < 1e-12);
  CHECK(std::abs(f.r2 - 1) < 1e-12);
  CHECK(std::abs(f.intercept - std::log(3)) < 1e-12);
  for (auto& [x, g] : e) g = 2 * x;
  CHECK(std::abs(fit_rate(e).slope - 1.0) < 1e-12);
  e[2].second = 0;
  CHECK_THROWS_AS(fit_rate(e), Error);
  CHECK_THROWS_AS(fit_rate({{0.1, 1}, {0.05, 0.5}}), Error);
}

TEST_CASE("sweep: rate, determinism across threads, truncation and grid insensitivity") {
  const FastCoupling c = coupling(2, 1);
  const LineProblem p = problem(0.0);
  const std::vector<double> eps{0.2, 0.1, 0.05, 0.025, 0.0125};
  kernels::set_threads(1);
  const ConvergenceReport a = convergence_sweep(c, {2, 1}, p, eps, {});
  kernels::set_threads(4);
  const ConvergenceReport b = convergence_sweep(c, {2, 1}, p, eps, {});
  for (std::size_t i = 0; i < eps.size(); ++i) CHECK(a.entries[i].gap.gap == b.entries[i].gap.gap);
  CHECK(a.strictly_decreasing());
  CHECK(a.fit.slope >= 0.45);
  CHECK(a.fit.r2 >= 0.9);

  LineProblem wide = p;
  wide.half_width = 30;
  const GapEstimate gw = resolvent_gap(c, {2, 1}, wide, 0.1, {});
  CHECK(std::abs(gw.gap / a.entries[1].gap.gap - 1) < 0.01);

  const FastCoupling fine = coupling(2, 1, 128);
  const ConvergenceReport r = convergence_sweep(fine, {2, 1}, p, eps, {});
  for (std::size_t i = 0; i < eps.size(); ++i) CHECK(std::abs(r.entries[i].gap.gap / a.entries[i].gap.gap - 1) < 0.02);
}
