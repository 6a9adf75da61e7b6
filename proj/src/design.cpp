#include "dprime/design.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace dprime {

void PointInteraction::check() const {
  if (!std::isfinite(alpha) || !std::isfinite(beta)) throw ConfigError("interaction: alpha and beta must be finite");
  if (alpha == 0.0) throw ConfigError("interaction: alpha must be nonzero");
}

Moments moments_for_target(double alpha, double beta, double kappa) {
  if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(kappa))
    throw ConfigError("moments_for_target: non-finite input");
  if (alpha == 0.0) throw ConfigError("moments_for_target: alpha must be nonzero");
  if (kappa == 0.0) throw ConfigError("moments_for_target: kappa must be nonzero");
  if (beta == 0.0) {
    if (alpha == 1.0) throw ConfigError("moments_for_target: alpha = 1, beta = 0 is the free operator, a2 would be infinite");
    throw ConfigError(
        "unreachable regime: beta = 0 with alpha != 1 is excluded "
        "(diag(alpha, 1/alpha) needs a delta'-potential mechanism, out of scope)");
  }
  if (alpha == 1.0) return {0.0, 0.0, kappa * kappa / beta};
  const double ab = alpha * beta;
  return {(1 - alpha) * (1 - alpha) / ab, kappa * (1 - alpha) / ab, kappa * kappa / ab};
}

PointInteraction alphabeta_of(const Moments& a, double kappa) {
  const auto [a0, a1, a2] = a;
  if (a2 == 0.0) throw Error("alphabeta_of: a2 = 0");
  const double d = a2 - kappa * a1;
  if (std::abs(d) <= 1e-12 * std::max(std::abs(a2), std::abs(kappa * a1)))
    throw Error("alphabeta_of: degenerate, a2 = kappa*a1 so alpha is undefined");
  if (std::abs(a0 * a2 - a1 * a1) > 1e-10 * std::max(1.0, a1 * a1))
    throw Error("alphabeta_of: hypothesis (ii) violated, a0*a2 != a1^2");
  return {d / a2, kappa * kappa / d};
}

Moments moments_of(const PerturbationPair& pair, const RealFn& q) {
  if (!(q.grid == pair.grid())) throw Error("moments_of: q and pair on different grids");
  Moments a{};
  const double h = q.grid.h();
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double w = pair.omega.values[i];
    a[0] += q.values[i];
    a[1] += q.values[i] * w;
    a[2] += q.values[i] * w * w;
  }
  for (auto& v : a) v *= h;
  return a;
}

RealFn quartic_window(const Grid& grid) {
  return make_grid_function([](double x) { return (1 - x * x) * (1 - x * x); }, grid);
}

CouplingPotential synthesize_q(const PerturbationPair& pair, const Moments& target, const RealFn& window) {
  if (!(window.grid == pair.grid())) throw Error("synthesize_q: window and pair on different grids");
  const std::size_t n = window.size();
  if (std::abs(window.values.front()) > 1e-14 || std::abs(window.values.back()) > 1e-14)
    throw Error("synthesize_q: window must vanish at both ends");
  for (std::size_t i = 1; i + 1 < n; ++i)
    if (!(window.values[i] > 0)) throw Error("synthesize_q: window must be positive inside");

  const double h = window.grid.h();
  Eigen::Matrix3d G = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    const double w = window.values[i], om = pair.omega.values[i];
    const double p[5] = {1, om, om * om, om * om * om, om * om * om * om};
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) G(j, k) += h * w * p[j + k];
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(G, Eigen::EigenvaluesOnly);
  const double cond = es.eigenvalues()(2) / es.eigenvalues()(0);
  if (!(es.eigenvalues()(0) > 0) || !(cond <= 1e12)) throw Error("synthesize_q: omega too close to constant on supp w (Gram condition > 1e12)");

  const Eigen::Vector3d a(target[0], target[1], target[2]);
  const auto ldlt = G.ldlt();
  Eigen::Vector3d c = ldlt.solve(a);
  c += ldlt.solve(a - G * c);  // one refinement step

  CouplingPotential cp;
  cp.q = window;
  for (std::size_t i = 0; i < n; ++i) {
    const double om = pair.omega.values[i];
    cp.q.values[i] = (c(0) + c(1) * om + c(2) * om * om) * window.values[i];
  }
  cp.q.detect_support();
  cp.a = moments_of(pair, cp.q);
  cp.gram_residual = (G * c - a).norm();
  return cp;
}

}  // namespace dprime
