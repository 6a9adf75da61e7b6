#include "dprime/line.hpp"

#include <cmath>
#include <sstream>

#include "dprime/kernels.hpp"

namespace dprime {

Complex LineProblem::decay() const {
  Complex s = std::sqrt(-zeta);
  if (s.real() < 0) s = -s;
  return s;
}

void LineProblem::check() const {
  if (!std::isfinite(zeta.real()) || !std::isfinite(zeta.imag()) || zeta.imag() == 0.0)
    throw ConfigError("line problem: zeta must have nonzero imaginary part");
  if (!(half_width > 0)) throw ConfigError("line problem: half width must be positive");
  const double need = 5.0 / decay().real();
  if (half_width < need) {
    std::ostringstream os;
    os << "line problem: L = " << half_width << " is below the decay budget 5/Re sqrt(-zeta) = " << need;
    throw ConfigError(os.str());
  }
  if (V && !(v_radius < half_width)) throw ConfigError("line problem: support of V must lie inside (-L, L)");
  if (!(h > 0) || h > half_width) throw ConfigError("line problem: grid spacing must be in (0, L]");
}

std::size_t LineProblem::half_points() const {
  return static_cast<std::size_t>(std::ceil(half_width / h - 1e-9));
}

Grid LineProblem::grid() const {
  const std::size_t M = half_points();
  const double X = static_cast<double>(M) * h;
  return Grid{-X, X, 2 * M + 1};
}

std::vector<double> LineProblem::weights() const {
  std::vector<double> w(2 * half_points() + 1, h);
  w.front() = w.back() = 0.5 * h;
  return w;
}

FastCoupling adapt_coupling(const PerturbationPair& pair, const CouplingPotential& q, int K) {
  if (K < 32) throw ConfigError("fast grid: need at least 32 points per unit of x/eps (64 across [-eps, eps])");
  FastCoupling c;
  c.K = K;
  c.interaction = alphabeta_of(q.a, pair.kappa);
  const Grid fast = Grid::make(-1.0, 1.0, 2 * static_cast<std::size_t>(K) + 1);
  c.pair = build_pair(rescale_to_fast(pair.F1, 1.0, fast), rescale_to_fast(pair.F2, 1.0, fast), PairProduct::midpoint);
  const Moments target = moments_for_target(c.interaction.alpha, c.interaction.beta, c.pair.kappa);
  c.q = synthesize_q(c.pair, target, quartic_window(fast));
  return c;
}

FastCoupling zero_coupling(int K) {
  if (K < 32) throw ConfigError("fast grid: need at least 32 points per unit of x/eps");
  FastCoupling c;
  c.K = K;
  const Grid fast = Grid::make(-1.0, 1.0, 2 * static_cast<std::size_t>(K) + 1);
  const RealFn z = zeros(fast);
  c.pair.phi1 = c.pair.phi2 = c.pair.F1 = c.pair.F2 = c.pair.G1 = c.pair.G2 = c.pair.omega = z;
  c.pair.product = PairProduct::midpoint;
  c.q.q = z;
  c.interaction = {1.0, 0.0};
  return c;
}

EpsSystem::EpsSystem(const FastCoupling& c, const LineProblem& p, double eps, Complex zeta) : eps_(eps), h_(p.h) {
  p.check();
  if (!(eps > 0 && eps <= 1)) throw ConfigError("eps_resolvent: eps must lie in (0, 1]");
  K_ = static_cast<std::size_t>(c.K);
  if (c.K < 32) throw ConfigError("eps_resolvent: fewer than 64 grid points in [-eps, eps]");
  if (std::abs(h_ * c.K - eps) > 1e-12 * eps)
    throw ConfigError("eps_resolvent: line spacing must equal eps/K of the fast coupling");
  if (c.pair.phi1.size() != 2 * K_ + 1 || c.q.q.size() != 2 * K_ + 1)
    throw Error("eps_resolvent: coupling grid does not match K");
  M_ = p.half_points();
  if (M_ < K_ + 2) throw ConfigError("eps_resolvent: line too short for eps");
  const std::size_t n = 2 * M_ + 1;
  w_ = p.weights();
  const Complex s = LineProblem{p.half_width, zeta, p.V, p.v_radius, p.h}.decay();
  const double ih2 = 1.0 / (h_ * h_);
  lo_.assign(n, -ih2);
  up_.assign(n, -ih2);
  diag_.resize(n);
  u1_.assign(n, 0.0);
  u2_.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = (static_cast<double>(k) - static_cast<double>(M_)) * h_;
    Complex d = 2.0 * ih2 + p.potential(x) - zeta;
    if (k + K_ >= M_ && k <= M_ + K_) {
      const std::size_t j = k + K_ - M_;
      d += c.q.q.values[j] / eps;
      u1_[k] = c.pair.phi1.values[j];
      u2_[k] = c.pair.phi2.values[j];
    }
    diag_[k] = d;
  }
  diag_.front() += 2.0 * s / h_;
  diag_.back() += 2.0 * s / h_;
  up_.front() = -2.0 * ih2;
  lo_.back() = -2.0 * ih2;
  lo_.front() = up_.back() = 0.0;

  cp_.resize(n);
  den_.resize(n);
  den_[0] = diag_[0];
  cp_[0] = up_[0] / den_[0];
  for (std::size_t i = 1; i < n; ++i) {
    den_[i] = diag_[i] - lo_[i] * cp_[i - 1];
    if (std::abs(den_[i]) == 0.0) throw Error("eps_resolvent: zero pivot in the tridiagonal factorization");
    cp_[i] = up_[i] / den_[i];
  }

  scale_ = 1.0 / (eps * eps * eps);
  const CVec cu1(u1_.begin(), u1_.end()), cu2(u2_.begin(), u2_.end());
  y1_ = tri_solve(cu1);
  y2_ = tri_solve(cu2);
  const double e3 = eps * eps * eps;
  cap_[0][0] = e3 + pairing(u2_, y1_);
  cap_[0][1] = pairing(u2_, y2_);
  cap_[1][0] = pairing(u1_, y1_);
  cap_[1][1] = e3 + pairing(u1_, y2_);
  const double fro2 = std::norm(cap_[0][0]) + std::norm(cap_[0][1]) + std::norm(cap_[1][0]) + std::norm(cap_[1][1]);
  const double det = std::abs(cap_[0][0] * cap_[1][1] - cap_[0][1] * cap_[1][0]);
  if (det <= 1e-14 * fro2) throw Error("eps_resolvent: capacitance matrix singular (eps-resonance of the discretization)");
  // singular values of a 2x2 from its Frobenius norm and determinant
  const double disc = std::sqrt(std::max(0.0, fro2 * fro2 - 4 * det * det));
  const double s1 = std::sqrt(0.5 * (fro2 + disc)), s2 = det / s1;
  cap_cond_ = s1 / s2;
}

Complex EpsSystem::pairing(const std::vector<double>& u, const CVec& x) const {
  Complex s{};
  for (std::size_t k = M_ - K_; k <= M_ + K_; ++k) s += w_[k] * u[k] * x[k];
  return s;
}

CVec EpsSystem::tri_solve(const CVec& f) const {
  const std::size_t n = diag_.size();
  CVec x(n);
  x[0] = f[0] / den_[0];
  for (std::size_t i = 1; i < n; ++i) x[i] = (f[i] - lo_[i] * x[i - 1]) / den_[i];
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= cp_[i] * x[i + 1];
  return x;
}

CVec EpsSystem::apply(const CVec& x) const {
  CVec y(x.size());
  kernels::parallel::tridiag_apply<Complex, Complex>(lo_, diag_, up_, x, y);
  const Complex p1 = pairing(u1_, x), p2 = pairing(u2_, x);
  for (std::size_t k = M_ - K_; k <= M_ + K_; ++k) y[k] += scale_ * (u1_[k] * p2 + u2_[k] * p1);
  return y;
}

CVec EpsSystem::solve(const CVec& f) const {
  if (f.size() != size()) throw Error("eps_resolvent: right-hand side has the wrong length");
  CVec y = tri_solve(f);
  const Complex e3 = eps_ * eps_ * eps_;
  const Complex r0 = e3 * pairing(u2_, y), r1 = e3 * pairing(u1_, y);
  const Complex det = cap_[0][0] * cap_[1][1] - cap_[0][1] * cap_[1][0];
  const Complex al = (r0 * cap_[1][1] - cap_[0][1] * r1) / det;
  const Complex be = (cap_[0][0] * r1 - cap_[1][0] * r0) / det;
  for (std::size_t k = 0; k < y.size(); ++k) y[k] -= scale_ * (y1_[k] * al + y2_[k] * be);
  return y;
}

std::vector<CVec> EpsSystem::dense() const {
  const std::size_t n = size();
  std::vector<CVec> A(n, CVec(n));
  for (std::size_t i = 0; i < n; ++i) {
    A[i][i] = diag_[i];
    if (i > 0) A[i][i - 1] = lo_[i];
    if (i + 1 < n) A[i][i + 1] = up_[i];
  }
  for (std::size_t i = M_ - K_; i <= M_ + K_; ++i)
    for (std::size_t j = M_ - K_; j <= M_ + K_; ++j)
      A[i][j] += scale_ * (u1_[i] * w_[j] * u2_[j] + u2_[i] * w_[j] * u1_[j]);
  return A;
}

}  // namespace dprime
