#include "dprime/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

namespace dprime {

namespace {

// h * sum a_k b_k, no conjugation
Complex bil(const std::vector<double>& a, const ComplexFn& b, double h) {
  Complex s{};
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b.values[k];
  return h * s;
}

// one-sided slopes of the inner BVP solution at t = -1 and t = 1, ghosts
// recovered from the discrete equation at the end nodes
std::pair<Complex, Complex> bvp_end_slopes(const PerturbationPair& pair, const ComplexFn& v, const ComplexFn& h) {
  const double tau = v.grid.h();
  const std::size_t N = v.size() - 1;
  Complex p1{}, p2{};
  for (std::size_t k = 0; k <= N; ++k) {
    p1 += pair.phi1.values[k] * v.values[k];
    p2 += pair.phi2.values[k] * v.values[k];
  }
  p1 *= tau;
  p2 *= tau;
  auto pairing_at = [&](std::size_t k) { return p2 * pair.phi1.values[k] + p1 * pair.phi2.values[k]; };
  const Complex gl = 2.0 * v.values[0] - v.values[1] + tau * tau * (pairing_at(0) - h.values[0]);
  const Complex gr = 2.0 * v.values[N] - v.values[N - 1] + tau * tau * (pairing_at(N) - h.values[N]);
  return {(v.values[0] - gl) / tau, (gr - v.values[N]) / tau};
}

}  // namespace

double w0(double s) { return s < 0 || s > 1 ? 0.0 : (1 - s) * (1 - s) * (1 + 2 * s); }
double w1(double s) { return s < 0 || s > 1 ? 0.0 : s * (1 - s) * (1 - s); }

static double dw0(double s) { return s < 0 || s > 1 ? 0.0 : 6 * s * (s - 1); }
static double dw1(double s) { return s < 0 || s > 1 ? 0.0 : (1 - s) * (1 - 3 * s); }

ComplexFn build_psi(const PerturbationPair& pair, Complex u_minus, Complex u_plus) {
  ComplexFn psi{pair.grid(), CVec(pair.omega.size()), std::nullopt};
  const Complex c = pair.kappa != 0 ? (u_plus - u_minus) / pair.kappa : Complex{};
  for (std::size_t k = 0; k < psi.size(); ++k) psi.values[k] = u_minus + c * pair.omega.values[k];
  psi.detect_support();
  return psi;
}

XiEta xi_eta(const PerturbationPair& pair, const RealFn& q, const ComplexFn& psi, const ComplexFn& f_fast, double eps,
             Complex du_minus, Complex du_plus) {
  const std::size_t n = q.size();
  const double ik = pair.kappa != 0 ? 1.0 / pair.kappa : 0.0, h = q.grid.h();  // kappa = 0: no pair, psi constant
  std::vector<double> a(n), b(n), c(n), d(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double om = pair.omega.values[k];
    a[k] = (ik * om - 1.0) * q.values[k];  // (omega/kappa - 1) q
    b[k] = ik * q.values[k] * om;          // q omega / kappa
    c[k] = 1.0 - ik * om;
    d[k] = ik * om;
  }
  XiEta r;
  r.zero_terms[0] = bil(a, psi, h) - du_minus;
  r.zero_terms[1] = bil(b, psi, h) - du_plus;
  r.xi_short = eps * bil(c, f_fast, h);
  r.eta_short = -eps * bil(d, f_fast, h);
  r.xi = r.zero_terms[0] + r.xi_short;
  r.eta = r.zero_terms[1] + r.eta_short;
  return r;
}

ApproximateSolution build_y_eps(const FastCoupling& c, LineProblem p, const PointInteraction& in, double eps,
                                const std::function<Complex(double)>& f) {
  p.h = eps / c.K;
  const Grid line = p.grid();
  const ComplexFn fl = make_complex_grid_function(f, line);
  const std::size_t M = p.half_points(), K = static_cast<std::size_t>(c.K);
  if (M < K + 3) throw ConfigError("build_y_eps: line too short for eps");
  const double h = p.h;

  ApproximateSolution s;
  s.eps = eps;
  s.u = limit_resolvent(in, p, fl);
  const CVec& u = s.u.u.values;  // node M holds u(-0); never used below

  const PerturbationPair& pair = c.pair;
  s.psi = build_psi(pair, s.u.u_minus, s.u.u_plus);
  ComplexFn ff{pair.grid(), CVec(fl.values.begin() + (M - K), fl.values.begin() + (M + K + 1)), std::nullopt};
  s.functionals = xi_eta(pair, c.q.q, s.psi, ff, eps, s.u.du_minus, s.u.du_plus);

  ComplexFn rhs = ff;
  for (std::size_t k = 0; k < rhs.size(); ++k) rhs.values[k] = eps * ff.values[k] - c.q.q.values[k] * s.psi.values[k];
  const Complex a = s.u.du_minus + s.functionals.xi, b = s.u.du_plus + s.functionals.eta;
  const ComplexBvpSolution v = solve_bvp(pair, rhs, a, b);
  s.v = v.v;

  s.y = fl;
  s.y.values = u;
  for (std::size_t j = 0; j <= 2 * K; ++j) s.y.values[M - K + j] = s.psi.values[j] + eps * s.v.values[j];
  s.y.detect_support();

  const Complex um = u[M - K], up = u[M + K];
  const Complex dum = (u[M - K + 1] - u[M - K - 1]) / (2 * h);
  const Complex dup = (u[M + K + 1] - u[M + K - 1]) / (2 * h);
  s.jumps.y_left = s.u.u_minus - um;
  s.jumps.dy_left = s.u.du_minus - dum + s.functionals.xi;
  s.jumps.y_right = up - s.u.u_plus;
  s.jumps.dy_right = dup - s.u.du_plus - s.functionals.eta;

  // psi is constant plus a multiple of omega, whose discrete end slopes vanish
  const auto [vl, vr] = bvp_end_slopes(pair, s.v, rhs);
  const Complex yin_l = s.y.values[M - K], yin_r = s.y.values[M + K];
  s.jumps_direct.y_left = yin_l - um;
  s.jumps_direct.dy_left = vl - dum;
  s.jumps_direct.y_right = up - yin_r;
  s.jumps_direct.dy_right = dup - vr;

  s.trace_sum = std::abs(um - s.u.u_minus) + std::abs(up - s.u.u_plus) + std::abs(dum - s.u.du_minus) +
                std::abs(dup - s.u.du_plus);

  s.rho = corrector(s.jumps, eps, line);
  s.Y = s.y;
  for (std::size_t k = 0; k < s.Y.size(); ++k) s.Y.values[k] += s.rho.values[k];
  s.Y.detect_support();
  return s;
}

ComplexFn corrector(const Jumps& j, double eps, const Grid& line) {
  if (!(eps > 0)) throw Error("corrector: eps must be positive");
  ComplexFn r{line, CVec(line.n), std::nullopt};
  const double tol = 1e-9 * line.h();
  for (std::size_t k = 0; k < line.n; ++k) {
    const double x = line.x(k);
    if (x < -eps - tol) {
      const double s = -x - eps;
      r.values[k] = j.y_left * w0(s) - j.dy_left * w1(s);
    } else if (x > eps + tol) {
      const double s = x - eps;
      r.values[k] = -j.y_right * w0(s) - j.dy_right * w1(s);
    }
  }
  r.detect_support();
  return r;
}

std::pair<Complex, Complex> corrector_outside(const Jumps& j, double eps, double x) {
  if (x <= -eps) {
    const double s = -x - eps;
    return {j.y_left * w0(s) - j.dy_left * w1(s), -j.y_left * dw0(s) + j.dy_left * dw1(s)};
  }
  if (x >= eps) {
    const double s = x - eps;
    return {-j.y_right * w0(s) - j.dy_right * w1(s), -j.y_right * dw0(s) - j.dy_right * dw1(s)};
  }
  return {0.0, 0.0};
}

double gluing_defect(const ApproximateSolution& s) {
  // outer piece u plus rho, inner piece y, compared at -eps and eps
  const double e = s.eps;
  const auto [rl, drl] = corrector_outside(s.jumps, e, -e);
  const auto [rr, drr] = corrector_outside(s.jumps, e, e);
  const std::size_t M = (s.y.size() - 1) / 2;
  const std::size_t K = (s.psi.size() - 1) / 2;
  const double h = s.y.grid.h();
  const CVec& u = s.u.u.values;
  const Complex um = u[M - K], up = u[M + K];
  const Complex dum = (u[M - K + 1] - u[M - K - 1]) / (2 * h);
  const Complex dup = (u[M + K + 1] - u[M + K - 1]) / (2 * h);
  const Complex yl = s.y.values[M - K], yr = s.y.values[M + K];
  const Complex dyl = dum + s.jumps_direct.dy_left, dyr = dup - s.jumps_direct.dy_right;
  return std::max({std::abs(um + rl - yl), std::abs(dum + drl - dyl), std::abs(up + rr - yr), std::abs(dup + drr - dyr)});
}

ResidualReport residual_check(const FastCoupling& c, LineProblem p, double eps,
                              const std::function<Complex(double)>& f, const ApproximateSolution& s) {
  p.h = eps / c.K;
  const EpsSystem sys(c, p, eps, p.zeta);
  const ComplexFn fl = make_complex_grid_function(f, p.grid());
  if (s.Y.size() != sys.size()) throw Error("residual_check: Y is not on the line grid of this eps");
  CVec r = sys.apply(s.Y.values);
  for (std::size_t k = 0; k < r.size(); ++k) r[k] -= fl.values[k];
  ResidualReport rep;
  rep.residual = weighted_norm(sys.weights(), r);
  const std::size_t M = sys.center();
  CVec d = split_from_line(s.Y.values, M);
  for (std::size_t k = 0; k < d.size(); ++k) d[k] -= s.u.split[k];
  rep.y_minus_u = weighted_norm(split_weights(p), d);
  return rep;
}

std::pair<Complex, Complex> scattering_coeffs(const PointInteraction& in, double k) {
  if (in.alpha == 0.0) throw Error("scattering_coeffs: alpha must be nonzero");
  if (!(k > 0)) throw Error("scattering_coeffs: k must be positive");
  const double a = in.alpha, b = in.beta;
  const Complex ikab(0.0, k * a * b);
  const Complex den = 1.0 + a * a - ikab;
  return {(1.0 - a * a - ikab) / den, 2.0 * a / den};
}

std::vector<DiagnosticRow> diagnostic_sweep(const FastCoupling& c, const PointInteraction& in, const LineProblem& p,
                                            std::vector<double> eps_list, const std::function<Complex(double)>& f) {
  std::sort(eps_list.begin(), eps_list.end(), std::greater<>());
  std::vector<DiagnosticRow> rows(eps_list.size());
  std::vector<std::exception_ptr> errs(eps_list.size());
  const auto n = static_cast<std::ptrdiff_t>(eps_list.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      const double e = eps_list[i];
      const ApproximateSolution s = build_y_eps(c, p, in, e, f);
      const ResidualReport rr = residual_check(c, p, e, f, s);
      DiagnosticRow& r = rows[i];
      r.eps = e;
      r.jump_sum = s.jumps.sum();
      r.xi = std::abs(s.functionals.xi);
      r.eta = std::abs(s.functionals.eta);
      r.residual = rr.residual;
      r.y_minus_u = rr.y_minus_u;
      r.zero_terms = std::max(std::abs(s.functionals.zero_terms[0]), std::abs(s.functionals.zero_terms[1]));
      r.trace_sum = s.trace_sum;
      r.gluing = gluing_defect(s);
      r.jump_mismatch = std::max({std::abs(s.jumps.y_left - s.jumps_direct.y_left),
                                  std::abs(s.jumps.y_right - s.jumps_direct.y_right),
                                  std::abs(s.jumps.dy_left - s.jumps_direct.dy_left),
                                  std::abs(s.jumps.dy_right - s.jumps_direct.dy_right)});
    } catch (...) {
      errs[i] = std::current_exception();
    }
  }
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return rows;
}

}  // namespace dprime
