#pragma once
// The truncated line [-L, L], the coupling resampled to the fast variable
// t = x/eps, and the discrete S_eps - zeta.

#include <functional>
#include <vector>

#include "dprime/design.hpp"

namespace dprime {

using CVec = std::vector<Complex>;

struct LineProblem {
  double half_width = 15.0;
  Complex zeta{0.0, 1.0};
  std::function<double(double)> V;  // empty means V = 0
  double v_radius = 0.0;            // supp V inside [-v_radius, v_radius]
  double h = 0.0;                   // line grid spacing, set per eps

  // sqrt(-zeta) with positive real part
  Complex decay() const;
  double potential(double x) const { return V ? V(x) : 0.0; }
  // Im zeta != 0, L >= 5 / Re sqrt(-zeta), supp V inside (-L, L), h > 0
  void check() const;
  std::size_t half_points() const;  // M, nodes x_k = k h, |k| <= M
  Grid grid() const;
  // trapezoid weights of the line grid
  std::vector<double> weights() const;
};

// The pair rebuilt on the t-grid of spacing h/eps (K points per unit of t),
// in the exactly degenerate mode, and q re-synthesized on that grid for the
// same (alpha, beta). Grids of different eps share it because h/eps = 1/K.
struct FastCoupling {
  PerturbationPair pair;
  CouplingPotential q;
  PointInteraction interaction;
  int K = 0;
};

FastCoupling adapt_coupling(const PerturbationPair& pair, const CouplingPotential& q, int K);
// unperturbed coupling (phi = 0, q = 0) on the fast grid; limit is alpha = 1, beta = 0
FastCoupling zero_coupling(int K);

// S_eps - zeta on the line grid: tridiagonal part T plus
// eps^-3 (u1 <u2, .>_W + u2 <u1, .>_W), solved by a rank-two update.
class EpsSystem {
 public:
  EpsSystem(const FastCoupling& c, const LineProblem& p, double eps, Complex zeta);

  std::size_t size() const { return diag_.size(); }
  std::size_t center() const { return M_; }
  const std::vector<double>& weights() const { return w_; }
  double eps() const { return eps_; }

  CVec apply(const CVec& x) const;   // (S_eps - zeta) x
  CVec solve(const CVec& f) const;   // (S_eps - zeta)^-1 f
  double capacitance_condition() const { return cap_cond_; }

  // rows as a dense matrix, for the coarse-grid oracle
  std::vector<CVec> dense() const;

 private:
  CVec tri_solve(const CVec& f) const;
  Complex pairing(const std::vector<double>& u, const CVec& x) const;

  double eps_, h_;
  std::size_t M_, K_;
  std::vector<double> w_;
  CVec lo_, diag_, up_;
  CVec cp_, den_;  // Thomas factorization
  std::vector<double> u1_, u2_;  // full-line samples of phi_j(x/eps)
  double scale_;                 // eps^-3
  CVec y1_, y2_;                 // T^-1 u_j
  Complex cap_[2][2];
  double cap_cond_ = 0;
};

}  // namespace dprime
