#pragma once
// The perturbation pair (phi1, phi2), its antiderivatives, omega and kappa.
//
// Discrete calculus used throughout pair/halfbound/design:
//   phi    = central difference of the node values of phi^(-1), zero ghosts
//   phi^-1 = exact inverse of that difference (so phi^-1 at nodes = eta)
//   phi^-2 = cumulative trapezoid of phi^-1
//   pairings (a, b) = h * sum_k a_k b_k over all nodes
// With these the summation-by-parts identities hold to round-off.

#include <string>
#include <vector>

#include "dprime/gridfn.hpp"

namespace dprime {

// Product in which the antiderivatives are orthonormalized.
enum class PairProduct {
  cell_simpson,  // (trapezoid + 2*midpoint)/3 of the antiderivative, fine grids
  midpoint,      // midpoint values only; the discrete Gram matrix is then exactly degenerate
};

struct PerturbationPair {
  RealFn phi1, phi2;
  RealFn F1, F2;  // first antiderivatives phi_j^(-1)
  RealFn G1, G2;  // second antiderivatives phi_j^(-2)
  double n1 = 0, n2 = 0;
  double m1 = 0, m2 = 0;
  RealFn omega;
  double kappa = 0;
  PairProduct product = PairProduct::cell_simpson;

  const Grid& grid() const { return phi1.grid; }
};

struct PairCheck {
  std::string name;
  double measured;
  double tolerance;
  bool pass;
};

struct PairValidationReport {
  std::vector<PairCheck> checks;
  bool all_pass() const;
  const PairCheck& operator[](const std::string& name) const;
};

PerturbationPair build_pair(const RealFn& eta1, const RealFn& eta2,
                            PairProduct product = PairProduct::cell_simpson);

// Wraps given profiles without orthonormalizing; used for imported pairs.
PerturbationPair pair_from_profiles(const RealFn& phi1, const RealFn& phi2,
                                    PairProduct product = PairProduct::cell_simpson);

// eta1 = sin(pi(x+1)/2), eta2 = sin(pi(x+1)) on [-1, 1]
PerturbationPair sine_pair(std::size_t n = 4001, PairProduct product = PairProduct::cell_simpson);

struct KappaPair {
  double from_omega;
  double from_moments;
};
KappaPair kappa_crosscheck(const PerturbationPair& pair);

PairValidationReport validate_pair(const PerturbationPair& pair);

// helpers shared with the other modules
double pair_product(const RealFn& a, const RealFn& b, PairProduct product);
RealFn central_derivative(const RealFn& eta);   // zero ghosts
RealFn inverse_derivative(const RealFn& phi);   // exact inverse of central_derivative with F(-1) = 0
RealFn cumulative_trapezoid(const RealFn& f);   // F(-1) = 0
double node_sum(const RealFn& a, const RealFn& b);
double node_sum(const RealFn& a);

}  // namespace dprime
