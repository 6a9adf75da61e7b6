#pragma once
// Moments of the coupling potential q and the interaction parameters (alpha, beta).

#include <array>

#include "dprime/pair.hpp"

namespace dprime {

using Moments = std::array<double, 3>;  // a0, a1, a2

struct CouplingPotential {
  RealFn q;
  Moments a{};
  double gram_residual = 0;  // ||G c - a|| from the synthesis, 0 for imported q
};

struct PointInteraction {
  double alpha = 1;
  double beta = 0;
  void check() const;  // throws ConfigError when alpha == 0 or non-finite
};

Moments moments_for_target(double alpha, double beta, double kappa);
PointInteraction alphabeta_of(const Moments& a, double kappa);

// a_k = (q, omega^k), node sums
Moments moments_of(const PerturbationPair& pair, const RealFn& q);

// q = (c0 + c1 omega + c2 omega^2) w with G c = a
CouplingPotential synthesize_q(const PerturbationPair& pair, const Moments& target, const RealFn& window);

// (1 - x^2)^2
RealFn quartic_window(const Grid& grid);

}  // namespace dprime
