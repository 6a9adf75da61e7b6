#pragma once
// The nonlocal operator B u = -u'' + (phi2, u) phi1 + (phi1, u) phi2 on [-1, 1],
// its half-bound states, and the explicit solver of the Neumann problem
//   B v = h,  v'(-1) = a,  v'(1) = b,  v(1) = 0.

#include <utility>

#include "dprime/pair.hpp"

namespace dprime {

struct BvpData {
  RealFn h;
  double a = 0;
  double b = 0;
};

struct BvpSolution {
  RealFn v;
  double g1 = 0;
  double g2 = 0;         // consistency partner of g1
  double residual = 0;   // ||B v - h|| with the Neumann data as ghost slopes
};

struct ComplexBvpSolution {
  ComplexFn v;
  Complex g1, g2;
  double residual = 0;
};

// u'' by central differences; ghost values come from the end slopes
// (u_{-1} = u_0 - h*slope_left, u_{N+1} = u_N + h*slope_right).
RealFn apply_B(const PerturbationPair& pair, const RealFn& u, double slope_left = 0, double slope_right = 0);

struct HalfboundResiduals {
  double r_const;
  double r_omega;
};
HalfboundResiduals halfbound_residuals(const PerturbationPair& pair);

// (1 - omega/kappa, h) and -(omega, h)/kappa
std::pair<double, double> solvability_data(const PerturbationPair& pair, const RealFn& h);

// discrete double integral of h from the left end, exact inverse of the central second difference
RealFn second_antiderivative(const RealFn& h);

BvpSolution solve_bvp(const PerturbationPair& pair, const BvpData& data);
ComplexBvpSolution solve_bvp(const PerturbationPair& pair, const ComplexFn& h, Complex a, Complex b);

// ||v|| + ||v''|| (interior central differences)
double w2_norm(const RealFn& v);
double pair_norm(const RealFn& u);

}  // namespace dprime
