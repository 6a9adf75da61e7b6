#include "dprime/halfbound.hpp"

#include <cmath>
#include <sstream>

namespace dprime {

double pair_norm(const RealFn& u) { return std::sqrt(node_sum(u, u)); }

RealFn apply_B(const PerturbationPair& pair, const RealFn& u, double slope_left, double slope_right) {
  if (!(u.grid == pair.grid())) throw Error("apply_B: u and pair on different grids");
  const std::size_t n = u.size();
  const double h = u.grid.h();
  const double p1 = node_sum(pair.phi1, u), p2 = node_sum(pair.phi2, u);
  RealFn r = u;
  for (std::size_t k = 0; k < n; ++k) {
    const double lo = k > 0 ? u.values[k - 1] : u.values[0] - h * slope_left;
    const double hi = k + 1 < n ? u.values[k + 1] : u.values[n - 1] + h * slope_right;
    r.values[k] = -(lo - 2 * u.values[k] + hi) / (h * h) + p2 * pair.phi1.values[k] + p1 * pair.phi2.values[k];
  }
  r.detect_support();
  return r;
}

HalfboundResiduals halfbound_residuals(const PerturbationPair& pair) {
  const RealFn one = make_grid_function([](double) { return 1.0; }, pair.grid());
  return {pair_norm(apply_B(pair, one)), pair_norm(apply_B(pair, pair.omega)) / pair_norm(pair.omega)};
}

std::pair<double, double> solvability_data(const PerturbationPair& pair, const RealFn& h) {
  const double ih = node_sum(h), oh = node_sum(pair.omega, h);
  return {ih - oh / pair.kappa, -oh / pair.kappa};
}

RealFn second_antiderivative(const RealFn& h) {
  RealFn H = h;
  const double dx = h.grid.h();
  double prev = 0.0, cur = 0.0;  // H_{-1} = H_0 = 0
  for (std::size_t k = 0; k < h.size(); ++k) {
    H.values[k] = cur;
    const double next = 2 * cur - prev + dx * dx * h.values[k];
    prev = cur;
    cur = next;
  }
  H.detect_support();
  return H;
}

BvpSolution solve_bvp(const PerturbationPair& pair, const BvpData& data) {
  const RealFn& h = data.h;
  if (!(h.grid == pair.grid())) throw Error("solve_bvp: h and pair on different grids");
  const double nh = pair_norm(h);
  const double tol = 1e-8 * (1 + nh);
  const auto [sa, sb] = solvability_data(pair, h);
  const double r1 = (data.a - data.b) - node_sum(h);
  const double r2 = data.a - sa;
  if (std::abs(r1) > tol || std::abs(r2) > tol) {
    std::ostringstream os;
    os << "solve_bvp: solvability violated, a-b-(1,h) = " << r1 << ", a-(1-omega/kappa,h) = " << r2;
    throw Error(os.str());
  }
  (void)sb;
  const double a = data.a;
  const RealFn H = second_antiderivative(h);
  BvpSolution sol;
  sol.g1 = pair.n2 * (a * pair.m1 - node_sum(pair.phi1, H));
  sol.g2 = pair.n1 * (a * pair.m2 - node_sum(pair.phi2, H));

  // v0 = n2 g1 G1 - H + a t, then v = v0 + a - (v0(1) + a) omega / kappa
  const std::size_t n = h.size();
  std::vector<double> v0(n);
  for (std::size_t k = 0; k < n; ++k)
    v0[k] = pair.n2 * sol.g1 * pair.G1.values[k] - H.values[k] + a * h.grid.x(k);
  const double c = (v0.back() + a) / pair.kappa;
  sol.v = h;
  for (std::size_t k = 0; k < n; ++k) sol.v.values[k] = v0[k] + a - c * pair.omega.values[k];
  sol.v.values.front() = 0.0;  // exact up to round-off already; G1, omega, H vanish there
  sol.v.detect_support();

  RealFn r = apply_B(pair, sol.v, data.a, data.b);
  for (std::size_t k = 0; k < n; ++k) r.values[k] -= h.values[k];
  sol.residual = pair_norm(r);
  return sol;
}

ComplexBvpSolution solve_bvp(const PerturbationPair& pair, const ComplexFn& h, Complex a, Complex b) {
  RealFn hr = zeros(h.grid), hi = zeros(h.grid);
  for (std::size_t k = 0; k < h.size(); ++k) {
    hr.values[k] = h.values[k].real();
    hi.values[k] = h.values[k].imag();
  }
  const BvpSolution sr = solve_bvp(pair, {hr, a.real(), b.real()});
  const BvpSolution si = solve_bvp(pair, {hi, a.imag(), b.imag()});
  ComplexBvpSolution out;
  out.v = ComplexFn{h.grid, std::vector<Complex>(h.size()), std::nullopt};
  for (std::size_t k = 0; k < h.size(); ++k) out.v.values[k] = {sr.v.values[k], si.v.values[k]};
  out.v.detect_support();
  out.g1 = {sr.g1, si.g1};
  out.g2 = {sr.g2, si.g2};
  out.residual = std::hypot(sr.residual, si.residual);
  return out;
}

double w2_norm(const RealFn& v) {
  const double h = v.grid.h();
  double s2 = 0.0;
  for (std::size_t k = 1; k + 1 < v.size(); ++k) {
    const double d2 = (v.values[k - 1] - 2 * v.values[k] + v.values[k + 1]) / (h * h);
    s2 += d2 * d2;
  }
  return pair_norm(v) + std::sqrt(h * s2);
}

}  // namespace dprime
