#pragma once
// The approximate solution y_eps of (S_eps - zeta) u = f built from the limit
// solution, its corrector rho_eps, the functionals xi_eps, eta_eps, and the
// closed-form scattering data of the limit interaction.

#include <functional>
#include <utility>
#include <vector>

#include "dprime/halfbound.hpp"
#include "dprime/resolvent.hpp"

namespace dprime {

// psi(t) = u(-0) + (u(+0) - u(-0)) omega(t) / kappa
ComplexFn build_psi(const PerturbationPair& pair, Complex u_minus, Complex u_plus);

struct XiEta {
  Complex xi, eta;
  Complex zero_terms[2];      // eps-independent parts, vanish for a consistent (q, alpha, beta)
  Complex xi_short, eta_short;  // eps (1 - omega/kappa, f(eps.)) and -eps (omega, f(eps.)) / kappa
};

// f_fast = f(eps t) on the pair grid
XiEta xi_eta(const PerturbationPair& pair, const RealFn& q, const ComplexFn& psi, const ComplexFn& f_fast, double eps,
             Complex du_minus, Complex du_plus);

struct Jumps {
  Complex y_left;    // [y]_{-eps}  = y(-eps+0) - y(-eps-0)
  Complex y_right;   // [y]_{eps}   = y(eps+0) - y(eps-0)
  Complex dy_left;   // [y']_{-eps}
  Complex dy_right;  // [y']_{eps}
  double sum() const { return std::abs(y_left) + std::abs(y_right) + std::abs(dy_left) + std::abs(dy_right); }
};

struct ApproximateSolution {
  double eps = 0;
  ResolventSolve u;            // limit solution on the line grid
  ComplexFn psi, v;            // on the pair grid
  XiEta functionals;
  Jumps jumps;                 // from the stored traces
  Jumps jumps_direct;          // from re-differencing the pieces of y_eps
  ComplexFn y;                 // line grid; inner value at x = +-eps
  ComplexFn rho;               // zero for |x| <= eps
  ComplexFn Y;                 // y + rho
  double trace_sum = 0;        // |u(+-eps) - u(+-0)| + |u'(+-eps) - u'(+-0)|
};

// p.h is replaced by eps / c.K. f is sampled on the line grid of that spacing.
ApproximateSolution build_y_eps(const FastCoupling& c, LineProblem p, const PointInteraction& in, double eps,
                                const std::function<Complex(double)>& f);

// rho(x) = [y]_{-e} w0(-x-e) - [y']_{-e} w1(-x-e) - [y]_e w0(x-e) - [y']_e w1(x-e)
ComplexFn corrector(const Jumps& j, double eps, const Grid& line);
// one-sided (rho, rho') from outside [-eps, eps]
std::pair<Complex, Complex> corrector_outside(const Jumps& j, double eps, double x);
double w0(double s);
double w1(double s);

// jump of Y and Y' at -eps and eps after gluing (max modulus)
double gluing_defect(const ApproximateSolution& s);

struct ResidualReport {
  double residual = 0;   // ||(S_eps - zeta) Y - f||
  double y_minus_u = 0;  // ||Y - u|| in the split space
};
ResidualReport residual_check(const FastCoupling& c, LineProblem p, double eps,
                              const std::function<Complex(double)>& f, const ApproximateSolution& s);

std::pair<Complex, Complex> scattering_coeffs(const PointInteraction& in, double k);

struct DiagnosticRow {
  double eps = 0;
  double jump_sum = 0;
  double xi = 0, eta = 0;  // moduli
  double residual = 0;
  double y_minus_u = 0;
  double zero_terms = 0;   // max modulus of the two eps-independent parts
  double trace_sum = 0;
  double gluing = 0;
  double jump_mismatch = 0;  // stored vs re-differenced jumps
};

std::vector<DiagnosticRow> diagnostic_sweep(const FastCoupling& c, const PointInteraction& in, const LineProblem& p,
                                            std::vector<double> eps_list, const std::function<Complex(double)>& f);

}  // namespace dprime
