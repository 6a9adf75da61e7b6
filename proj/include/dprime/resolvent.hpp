#pragma once
// Resolvents of S_eps and of the limit operator S_{alpha beta}, the operator-norm
// gap between them and the log-log rate fit.
//
// Vectors compared by the gap live in the split space: line nodes with x = 0
// stored twice, once per side (u(-0) then u(+0)), weights h/2 for each copy.

#include <cstdint>
#include <memory>
#include <vector>

#include "dprime/line.hpp"

namespace dprime {

struct ResolventSolve {
  ComplexFn u;  // line grid; for the limit node 0 holds u(-0)
  Complex u_minus, u_plus;    // u(-0), u(+0) or u(-eps), u(eps)
  Complex du_minus, du_plus;  // matching derivatives
  double residual = 0;        // ||A u - f||, discrete weighted norm
  double condition = 0;       // capacitance condition (eps) or a lower bound on cond(A) (limit)
  CVec split;                 // limit only: split-space solution
};

// Limit operator with two copies of x = 0 and ghost values on both sides of the
// interface; the interface conditions couple the ghosts.
class LimitSystem {
 public:
  LimitSystem(const PointInteraction& in, const LineProblem& p);
  ~LimitSystem();
  LimitSystem(LimitSystem&&) noexcept;

  std::size_t size() const;  // split-space length 2M + 2
  std::size_t center() const { return M_; }
  const std::vector<double>& weights() const { return w_; }

  // solution in the split space; traces optional
  CVec solve(const CVec& f_split, Complex* traces = nullptr) const;
  // exact adjoint with respect to the split-space weights
  CVec solve_adjoint(const CVec& g_split) const;
  CVec apply(const CVec& u_split, const Complex ghosts[2]) const;  // node rows only

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::size_t M_;
  std::vector<double> w_;
};

CVec split_from_line(const CVec& u, std::size_t M);   // duplicate node 0
CVec line_from_split(const CVec& u, std::size_t M);   // average the two copies (weighted adjoint)
std::vector<double> split_weights(const LineProblem& p);
double weighted_norm(const std::vector<double>& w, const CVec& v);

ResolventSolve limit_resolvent(const PointInteraction& in, const LineProblem& p, const ComplexFn& f);
ResolventSolve eps_resolvent(const FastCoupling& c, const LineProblem& p, double eps, const ComplexFn& f);

struct SamplingSpec {
  std::uint64_t seed = 42;
  int max_iterations = 30;
  double rel_tol = 1e-3;
};

struct GapEstimate {
  double gap = 0;
  int iterations = 0;
  bool warn = false;  // power iteration did not settle
};

// An operator on the split space together with its weighted adjoint.
class SplitOperator {
 public:
  virtual ~SplitOperator() = default;
  virtual CVec apply(const CVec& f) const = 0;
  virtual CVec apply_adjoint(const CVec& g) const = 0;
};

// ||A - B|| by power iteration on (A-B)*(A-B)
GapEstimate operator_gap(const SplitOperator& A, const SplitOperator& B, const std::vector<double>& w,
                         const SamplingSpec& s);

class EpsResolventOp : public SplitOperator {
 public:
  EpsResolventOp(const FastCoupling& c, const LineProblem& p, double eps);
  CVec apply(const CVec& f) const override;
  CVec apply_adjoint(const CVec& g) const override;

 private:
  EpsSystem fwd_, adj_;
};

class LimitResolventOp : public SplitOperator {
 public:
  LimitResolventOp(const PointInteraction& in, const LineProblem& p) : sys_(in, p) {}
  CVec apply(const CVec& f) const override { return sys_.solve(f); }
  CVec apply_adjoint(const CVec& g) const override { return sys_.solve_adjoint(g); }

 private:
  LimitSystem sys_;
};

// p.h is replaced by eps / c.K
GapEstimate resolvent_gap(const FastCoupling& c, const PointInteraction& in, LineProblem p, double eps,
                          const SamplingSpec& s);

struct RateFit {
  double slope = 0, intercept = 0, r2 = 0;
};
RateFit fit_rate(const std::vector<std::pair<double, double>>& entries);

struct ConvergenceEntry {
  double eps;
  GapEstimate gap;
};
struct ConvergenceReport {
  Complex zeta;
  std::vector<ConvergenceEntry> entries;  // decreasing eps
  RateFit fit;
  bool strictly_decreasing() const;
};

// one task per eps, run under OpenMP; results do not depend on the thread count
ConvergenceReport convergence_sweep(const FastCoupling& c, const PointInteraction& in, const LineProblem& p,
                                    std::vector<double> eps_list, const SamplingSpec& s);

}  // namespace dprime
