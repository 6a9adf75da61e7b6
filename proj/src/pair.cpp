#include "dprime/pair.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dprime {

namespace {

void require_same_grid(const RealFn& a, const RealFn& b, const char* what) {
  if (!(a.grid == b.grid)) throw Error(std::string(what) + ": profiles live on different grids");
}

void require_unit_interval(const Grid& g, const char* what) {
  if (std::abs(g.left + 1.0) > 1e-14 || std::abs(g.right - 1.0) > 1e-14)
    throw Error(std::string(what) + ": profiles must live on [-1, 1]");
}

RealFn scaled(RealFn f, double s) {
  for (auto& v : f.values) v *= s;
  return f;
}

RealFn lincomb(double a, const RealFn& f, double b, const RealFn& g) {
  RealFn r = f;
  for (std::size_t i = 0; i < r.size(); ++i) r.values[i] = a * f.values[i] + b * g.values[i];
  r.detect_support();
  return r;
}

}  // namespace

bool PairValidationReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const PairCheck& c) { return c.pass; });
}

const PairCheck& PairValidationReport::operator[](const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw Error("validation report: no check named " + name);
}

double node_sum(const RealFn& a, const RealFn& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a.values[i] * b.values[i];
  return a.grid.h() * s;
}

double node_sum(const RealFn& a) {
  double s = 0.0;
  for (double v : a.values) s += v;
  return a.grid.h() * s;
}

double pair_product(const RealFn& a, const RealFn& b, PairProduct product) {
  const std::size_t n = a.size();
  const double h = a.grid.h();
  double mid = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k)
    mid += 0.25 * (a.values[k] + a.values[k + 1]) * (b.values[k] + b.values[k + 1]);
  mid *= h;
  if (product == PairProduct::midpoint) return mid;
  double trap = 0.0;
  for (std::size_t k = 0; k < n; ++k) trap += a.values[k] * b.values[k];
  trap -= 0.5 * (a.values.front() * b.values.front() + a.values.back() * b.values.back());
  trap *= h;
  return (trap + 2.0 * mid) / 3.0;
}

RealFn central_derivative(const RealFn& eta) {
  RealFn phi = eta;
  const std::size_t n = eta.size();
  const double h = eta.grid.h();
  for (std::size_t k = 0; k < n; ++k) {
    const double up = k + 1 < n ? eta.values[k + 1] : 0.0;
    const double dn = k > 0 ? eta.values[k - 1] : 0.0;
    phi.values[k] = (up - dn) / (2.0 * h);
  }
  phi.detect_support();
  return phi;
}

RealFn inverse_derivative(const RealFn& phi) {
  // tau * sum_{i<=k} phi_i is the midpoint value (F_k + F_{k+1}) / 2
  RealFn F = phi;
  const double h = phi.grid.h();
  double run = 0.0, prev = 0.0;
  F.values[0] = 0.0;
  for (std::size_t k = 0; k + 1 < phi.size(); ++k) {
    run += phi.values[k];
    const double next = 2.0 * h * run - prev;
    F.values[k + 1] = next;
    prev = next;
  }
  F.detect_support();
  return F;
}

RealFn cumulative_trapezoid(const RealFn& f) { return antiderivative(f, 1); }

PerturbationPair pair_from_profiles(const RealFn& phi1, const RealFn& phi2, PairProduct product) {
  require_same_grid(phi1, phi2, "pair");
  require_unit_interval(phi1.grid, "pair");
  PerturbationPair p;
  p.product = product;
  p.phi1 = phi1;
  p.phi2 = phi2;
  p.F1 = inverse_derivative(phi1);
  p.F2 = inverse_derivative(phi2);
  p.G1 = cumulative_trapezoid(p.F1);
  p.G2 = cumulative_trapezoid(p.F2);
  p.n1 = std::sqrt(pair_product(p.F1, p.F1, product));
  p.n2 = std::sqrt(pair_product(p.F2, p.F2, product));
  const RealFn x = make_grid_function([](double t) { return t; }, phi1.grid);
  p.m1 = node_sum(x, phi1);
  p.m2 = node_sum(x, phi2);
  p.omega = lincomb(p.n2, p.G1, -p.n1, p.G2);
  p.kappa = p.omega.values.back();
  return p;
}

PerturbationPair build_pair(const RealFn& eta1, const RealFn& eta2, PairProduct product) {
  require_same_grid(eta1, eta2, "build_pair");
  require_unit_interval(eta1.grid, "build_pair");
  RealFn e1 = eta1, e2 = eta2;
  for (RealFn* e : {&e1, &e2}) {
    double mx = 0.0;
    for (double v : e->values) mx = std::max(mx, std::abs(v));
    const double tol = 1e-8 * std::max(1.0, mx);
    if (std::abs(e->values.front()) > tol || std::abs(e->values.back()) > tol)
      throw Error("build_pair: eta must vanish at both ends of [-1, 1]");
    e->values.front() = e->values.back() = 0.0;
  }

  const double l1 = std::sqrt(pair_product(e1, e1, product));
  if (!(l1 > 0)) throw Error("build_pair: eta1 is zero");
  e1 = scaled(e1, 1.0 / l1);
  const double l2 = std::sqrt(pair_product(e2, e2, product));
  RealFn r = e2;
  for (int pass = 0; pass < 2; ++pass) r = lincomb(1.0, r, -pair_product(e1, r, product), e1);
  const double rn = std::sqrt(pair_product(r, r, product));
  if (!(rn >= 1e-8 * std::max(l2, 1e-300)) || rn < 1e-300)
    throw Error("build_pair: eta1 and eta2 are linearly dependent (Gram-Schmidt remainder below 1e-8)");
  e2 = scaled(r, 1.0 / rn);

  PerturbationPair p = pair_from_profiles(central_derivative(e1), central_derivative(e2), product);
  const double s = 1.0 / (p.n1 * p.n2);
  p = pair_from_profiles(p.phi1, scaled(p.phi2, s), product);
  if (std::abs(p.kappa) <= 1e-10) throw Error("free-operator limit, kappa must be nonzero");
  return p;
}

PerturbationPair sine_pair(std::size_t n, PairProduct product) {
  using std::numbers::pi;
  const Grid g = Grid::make(-1.0, 1.0, n);
  const RealFn eta1 = make_grid_function([](double x) { return std::sin(pi * (x + 1) / 2); }, g);
  const RealFn eta2 = make_grid_function([](double x) { return std::sin(pi * (x + 1)); }, g);
  return build_pair(eta1, eta2, product);
}

KappaPair kappa_crosscheck(const PerturbationPair& pair) {
  return {pair.omega.values.back(), pair.n1 * pair.m2 - pair.n2 * pair.m1};
}

PairValidationReport validate_pair(const PerturbationPair& pair) {
  // everything is recomputed from phi1, phi2; stored derived fields are not trusted
  PairValidationReport rep;
  auto add = [&](std::string name, double measured, double tol) {
    const bool ok = std::isfinite(measured) && std::abs(measured) <= tol;
    rep.checks.push_back({std::move(name), measured, tol, ok});
  };
  const RealFn F1 = inverse_derivative(pair.phi1), F2 = inverse_derivative(pair.phi2);
  const RealFn G1 = cumulative_trapezoid(F1), G2 = cumulative_trapezoid(F2);
  const double n1 = std::sqrt(pair_product(F1, F1, pair.product));
  const double n2 = std::sqrt(pair_product(F2, F2, pair.product));
  const RealFn x = make_grid_function([](double t) { return t; }, pair.grid());
  const double m1 = node_sum(x, pair.phi1), m2 = node_sum(x, pair.phi2);
  const RealFn om = lincomb(n2, G1, -n1, G2);

  add("zero_mean_phi1", node_sum(pair.phi1), 1e-10);
  add("zero_mean_phi2", node_sum(pair.phi2), 1e-10);
  add("antiderivative_orthogonality", pair_product(F1, F2, pair.product), 1e-10);
  add("n1n2_equals_one", n1 * n2 - 1.0, 1e-12);
  add("antiderivatives_vanish_left",
      std::max({std::abs(F1.values.front()), std::abs(F2.values.front()), std::abs(G1.values.front()),
                std::abs(G2.values.front())}),
      1e-8);
  add("first_antiderivative_vanish_right", std::max(std::abs(F1.values.back()), std::abs(F2.values.back())), 1e-8);
  add("second_antiderivative_right_is_minus_m",
      std::max(std::abs(G1.values.back() + m1), std::abs(G2.values.back() + m2)), 1e-8);
  add("omega_left", om.values.front(), 1e-8);
  add("omega_right_is_kappa", om.values.back() - pair.kappa, 1e-8);
  add("omega_slope_ends",
      std::max(std::abs(n2 * F1.values.front() - n1 * F2.values.front()),
               std::abs(n2 * F1.values.back() - n1 * F2.values.back())),
      1e-6);
  // |1/kappa| <= 1e10  <=>  |kappa| >= 1e-10
  add("kappa_nonzero", std::abs(om.values.back()) > 0 ? 1.0 / std::abs(om.values.back()) : INFINITY, 1e10);
  return rep;
}

}  // namespace dprime
