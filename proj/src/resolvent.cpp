#include "dprime/resolvent.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <exception>
#include <random>

#include "dprime/kernels.hpp"

namespace dprime {

using SpMat = Eigen::SparseMatrix<Complex>;
using EVec = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

struct LimitSystem::Impl {
  SpMat A, AH;
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu, luh;
  std::size_t S = 0;  // split-space length; ghosts at S and S+1
  double h = 0;
};

LimitSystem::LimitSystem(const PointInteraction& in, const LineProblem& p) : impl_(std::make_unique<Impl>()) {
  p.check();
  in.check();
  M_ = p.half_points();
  if (M_ < 3) throw ConfigError("limit_resolvent: grid too coarse");
  const std::size_t S = 2 * M_ + 2;
  impl_->S = S;
  const double h = p.h, ih2 = 1.0 / (h * h);
  impl_->h = h;
  w_ = split_weights(p);
  const Complex s = p.decay();

  std::vector<Eigen::Triplet<Complex>> t;
  t.reserve(3 * S + 12);
  auto x_of = [&](std::size_t j) {
    const double k = j <= M_ ? double(j) - double(M_) : double(j) - double(M_) - 1.0;
    return k * h;
  };
  const auto gm = static_cast<int>(S), gp = static_cast<int>(S + 1);
  for (std::size_t j = 0; j < S; ++j) {
    const int r = static_cast<int>(j);
    Complex d = 2.0 * ih2 + p.potential(x_of(j)) - p.zeta;
    if (j == 0) {
      t.emplace_back(r, 1, -2.0 * ih2);
      d += 2.0 * s / h;
    } else if (j == S - 1) {
      t.emplace_back(r, r - 1, -2.0 * ih2);
      d += 2.0 * s / h;
    } else if (j == M_) {
      t.emplace_back(r, r - 1, -ih2);
      t.emplace_back(r, gm, -ih2);
    } else if (j == M_ + 1) {
      t.emplace_back(r, gp, -ih2);
      t.emplace_back(r, r + 1, -ih2);
    } else {
      t.emplace_back(r, r - 1, -ih2);
      t.emplace_back(r, r + 1, -ih2);
    }
    t.emplace_back(r, r, d);
  }
  // u(+0) = alpha u(-0) + beta u'(-0), with u'(-0) = (g- - u_{-1}) / 2h
  const int m = static_cast<int>(M_);
  const double a = in.alpha, b = in.beta;
  t.emplace_back(gm, m + 1, 1.0);
  t.emplace_back(gm, m, -a);
  t.emplace_back(gm, gm, -b / (2 * h));
  t.emplace_back(gm, m - 1, b / (2 * h));
  // u'(+0) = u'(-0) / alpha, times 2h
  t.emplace_back(gp, m + 2, 1.0);
  t.emplace_back(gp, gp, -1.0);
  t.emplace_back(gp, gm, -1.0 / a);
  t.emplace_back(gp, m - 1, 1.0 / a);

  impl_->A.resize(S + 2, S + 2);
  impl_->A.setFromTriplets(t.begin(), t.end());
  impl_->A.makeCompressed();
  impl_->AH = impl_->A.adjoint();
  impl_->AH.makeCompressed();
  impl_->lu.compute(impl_->A);
  if (impl_->lu.info() != Eigen::Success) throw Error("limit_resolvent: singular interface system");
  impl_->luh.compute(impl_->AH);
  if (impl_->luh.info() != Eigen::Success) throw Error("limit_resolvent: singular adjoint system");
}

LimitSystem::~LimitSystem() = default;
LimitSystem::LimitSystem(LimitSystem&&) noexcept = default;

std::size_t LimitSystem::size() const { return impl_->S; }

CVec LimitSystem::solve(const CVec& f, Complex* traces) const {
  const std::size_t S = impl_->S;
  if (f.size() != S) throw Error("limit_resolvent: right-hand side has the wrong length");
  EVec rhs = EVec::Zero(S + 2);
  for (std::size_t i = 0; i < S; ++i) rhs(i) = f[i];
  const EVec x = impl_->lu.solve(rhs);
  if (traces) {
    const double h = impl_->h;
    traces[0] = x(M_);
    traces[1] = x(M_ + 1);
    traces[2] = (x(S) - x(M_ - 1)) / (2 * h);
    traces[3] = (x(M_ + 2) - x(S + 1)) / (2 * h);
    traces[4] = x(S);
    traces[5] = x(S + 1);
  }
  return CVec(x.data(), x.data() + S);
}

CVec LimitSystem::solve_adjoint(const CVec& g) const {
  const std::size_t S = impl_->S;
  EVec rhs = EVec::Zero(S + 2);
  for (std::size_t i = 0; i < S; ++i) rhs(i) = w_[i] * g[i];
  const EVec y = impl_->luh.solve(rhs);
  CVec out(S);
  for (std::size_t i = 0; i < S; ++i) out[i] = y(i) / w_[i];
  return out;
}

CVec LimitSystem::apply(const CVec& u, const Complex ghosts[2]) const {
  const std::size_t S = impl_->S;
  EVec x(S + 2);
  for (std::size_t i = 0; i < S; ++i) x(i) = u[i];
  x(S) = ghosts[0];
  x(S + 1) = ghosts[1];
  const EVec y = impl_->A * x;
  return CVec(y.data(), y.data() + S + 2);
}

CVec split_from_line(const CVec& u, std::size_t M) {
  CVec s(u.size() + 1);
  std::copy(u.begin(), u.begin() + M + 1, s.begin());
  std::copy(u.begin() + M, u.end(), s.begin() + M + 1);
  return s;
}

CVec line_from_split(const CVec& s, std::size_t M) {
  CVec u(s.size() - 1);
  std::copy(s.begin(), s.begin() + M, u.begin());
  u[M] = 0.5 * (s[M] + s[M + 1]);
  std::copy(s.begin() + M + 2, s.end(), u.begin() + M + 1);
  return u;
}

std::vector<double> split_weights(const LineProblem& p) {
  const std::size_t M = p.half_points();
  std::vector<double> w(2 * M + 2, p.h);
  w.front() = w.back() = 0.5 * p.h;
  w[M] = w[M + 1] = 0.5 * p.h;
  return w;
}

double weighted_norm(const std::vector<double>& w, const CVec& v) {
  return std::sqrt(std::max(0.0, kernels::parallel::weighted_dot<Complex>(w, v, v).real()));
}

namespace {

void require_line_grid(const LineProblem& p, const ComplexFn& f) {
  const Grid g = p.grid();
  if (f.grid.n != g.n || std::abs(f.grid.left - g.left) > 1e-9 * p.h || std::abs(f.grid.right - g.right) > 1e-9 * p.h)
    throw Error("resolvent: right-hand side is not sampled on the line grid");
}

}  // namespace

ResolventSolve limit_resolvent(const PointInteraction& in, const LineProblem& p, const ComplexFn& f) {
  const LimitSystem sys(in, p);
  require_line_grid(p, f);
  const std::size_t M = sys.center();
  const CVec fs = split_from_line(f.values, M);
  Complex tr[6];
  const CVec x = sys.solve(fs, tr);

  ResolventSolve r;
  r.split = x;
  r.u = ComplexFn{f.grid, CVec(f.size()), std::nullopt};
  std::copy(x.begin(), x.begin() + M + 1, r.u.values.begin());
  std::copy(x.begin() + M + 2, x.end(), r.u.values.begin() + M + 1);
  r.u.detect_support();
  r.u_minus = tr[0];
  r.u_plus = tr[1];
  r.du_minus = tr[2];
  r.du_plus = tr[3];

  const Complex gh[2] = {tr[4], tr[5]};
  CVec res = sys.apply(x, gh);
  double node = 0, inf_a = 0, inf_f = 0, inf_x = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    node += sys.weights()[i] * std::norm(res[i] - fs[i]);
    inf_f = std::max(inf_f, std::abs(fs[i]));
    inf_x = std::max(inf_x, std::abs(x[i]));
  }
  const double iface = std::norm(res[x.size()]) + std::norm(res[x.size() + 1]);
  r.residual = std::sqrt(node + iface);
  // ||A||_inf >= 4/h^2 row sums; cond >= ||A|| ||x|| / ||f||
  inf_a = 4.0 / (p.h * p.h);
  r.condition = inf_f > 0 ? inf_a * inf_x / inf_f : 0.0;
  return r;
}

ResolventSolve eps_resolvent(const FastCoupling& c, const LineProblem& p, double eps, const ComplexFn& f) {
  const EpsSystem sys(c, p, eps, p.zeta);
  require_line_grid(p, f);
  ResolventSolve r;
  const CVec u = sys.solve(f.values);
  r.u = ComplexFn{f.grid, u, std::nullopt};
  r.u.detect_support();
  const std::size_t M = sys.center(), K = static_cast<std::size_t>(c.K);
  const double h = p.h;
  r.u_minus = u[M - K];
  r.u_plus = u[M + K];
  r.du_minus = (u[M - K + 1] - u[M - K - 1]) / (2 * h);
  r.du_plus = (u[M + K + 1] - u[M + K - 1]) / (2 * h);
  CVec res = sys.apply(u);
  for (std::size_t i = 0; i < res.size(); ++i) res[i] -= f.values[i];
  r.residual = weighted_norm(sys.weights(), res);
  r.condition = sys.capacitance_condition();
  return r;
}

EpsResolventOp::EpsResolventOp(const FastCoupling& c, const LineProblem& p, double eps)
    : fwd_(c, p, eps, p.zeta), adj_(c, p, eps, std::conj(p.zeta)) {}

CVec EpsResolventOp::apply(const CVec& f) const {
  const std::size_t M = fwd_.center();
  return split_from_line(fwd_.solve(line_from_split(f, M)), M);
}

CVec EpsResolventOp::apply_adjoint(const CVec& g) const {
  const std::size_t M = adj_.center();
  return split_from_line(adj_.solve(line_from_split(g, M)), M);
}

GapEstimate operator_gap(const SplitOperator& A, const SplitOperator& B, const std::vector<double>& w,
                         const SamplingSpec& s) {
  std::mt19937_64 rng(s.seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  CVec x(w.size());
  for (auto& v : x) {
    const double re = nd(rng);
    v = Complex(re, nd(rng));
  }
  double nx = weighted_norm(w, x);
  for (auto& v : x) v /= nx;

  GapEstimate g;
  double prev = -1;
  for (int it = 1; it <= s.max_iterations; ++it) {
    g.iterations = it;
    CVec y = A.apply(x);
    const CVec yb = B.apply(x);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] -= yb[i];
    const double est = weighted_norm(w, y);
    g.gap = std::max(g.gap, est);
    if (est == 0.0) return g;
    if (prev > 0 && std::abs(est - prev) <= s.rel_tol * est) return g;
    prev = est;
    if (it == s.max_iterations) break;
    CVec z = A.apply_adjoint(y);
    const CVec zb = B.apply_adjoint(y);
    for (std::size_t i = 0; i < z.size(); ++i) z[i] -= zb[i];
    const double nz = weighted_norm(w, z);
    if (nz == 0.0) return g;
    for (std::size_t i = 0; i < z.size(); ++i) x[i] = z[i] / nz;
  }
  g.warn = true;
  return g;
}

GapEstimate resolvent_gap(const FastCoupling& c, const PointInteraction& in, LineProblem p, double eps,
                          const SamplingSpec& s) {
  p.h = eps / c.K;
  const EpsResolventOp re(c, p, eps);
  const LimitResolventOp rl(in, p);
  return operator_gap(re, rl, split_weights(p), s);
}

RateFit fit_rate(const std::vector<std::pair<double, double>>& entries) {
  if (entries.size() < 3) throw Error("fit_rate: need at least 3 entries");
  const double n = static_cast<double>(entries.size());
  double sx = 0, sy = 0;
  for (const auto& [e, g] : entries) {
    if (!(e > 0)) throw Error("fit_rate: eps must be positive");
    if (!(g > 0)) throw Error("fit_rate: gap must be positive");
    sx += std::log(e);
    sy += std::log(g);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [e, g] : entries) {
    const double dx = std::log(e) - mx, dy = std::log(g) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0) throw Error("fit_rate: all eps equal");
  RateFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0;
  for (const auto& [e, g] : entries) {
    const double r = std::log(g) - (f.intercept + f.slope * std::log(e));
    ssr += r * r;
  }
  f.r2 = syy > 0 ? 1.0 - ssr / syy : 1.0;
  return f;
}

bool ConvergenceReport::strictly_decreasing() const {
  for (std::size_t i = 1; i < entries.size(); ++i)
    if (!(entries[i].gap.gap < entries[i - 1].gap.gap)) return false;
  return true;
}

ConvergenceReport convergence_sweep(const FastCoupling& c, const PointInteraction& in, const LineProblem& p,
                                    std::vector<double> eps_list, const SamplingSpec& s) {
  std::sort(eps_list.begin(), eps_list.end(), std::greater<>());
  ConvergenceReport rep;
  rep.zeta = p.zeta;
  rep.entries.resize(eps_list.size());
  std::vector<std::exception_ptr> errs(eps_list.size());
  const auto n = static_cast<std::ptrdiff_t>(eps_list.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      rep.entries[i] = {eps_list[i], resolvent_gap(c, in, p, eps_list[i], s)};
    } catch (...) {
      errs[i] = std::current_exception();
    }
  }
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  if (rep.entries.size() >= 3) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& e : rep.entries) pts.emplace_back(e.eps, e.gap.gap);
    rep.fit = fit_rate(pts);
  }
  return rep;
}

}  // namespace dprime
