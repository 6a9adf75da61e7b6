// Serial reference vs OpenMP kernels at line-grid sizes (2M+1 for eps = 0.2 .. 0.0125, K = 64).

#include <benchmark/benchmark.h>

#include <complex>
#include <random>
#include <vector>

#include "dprime/kernels.hpp"
#include "dprime/resolvent.hpp"

namespace k = dprime::kernels;
using C = std::complex<double>;

namespace {

struct Data {
  std::vector<double> w;
  std::vector<C> a, b, lo, di, up, y;
  explicit Data(std::size_t n) : w(n), a(n), b(n), lo(n), di(n), up(n), y(n) {
    std::mt19937_64 r(1);
    std::normal_distribution<double> nd;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = 1.0 + 0.1 * nd(r);
      a[i] = {nd(r), nd(r)};
      b[i] = {nd(r), nd(r)};
      lo[i] = up[i] = -1.0;
      di[i] = {2.0, 0.1};
    }
  }
};

template <bool Par>
void BM_weighted_dot(benchmark::State& s) {
  Data d(s.range(0));
  for (auto _ : s) {
    C v = Par ? k::parallel::weighted_dot<C>(d.w, d.a, d.b) : k::serial::weighted_dot<C>(d.w, d.a, d.b);
    benchmark::DoNotOptimize(v);
  }
  s.SetItemsProcessed(s.iterations() * s.range(0));
}

template <bool Par>
void BM_axpy(benchmark::State& s) {
  Data d(s.range(0));
  for (auto _ : s) {
    if (Par)
      k::parallel::axpy<C>(C(1e-9, 0), d.a, d.y);
    else
      k::serial::axpy<C>(C(1e-9, 0), d.a, d.y);
    benchmark::ClobberMemory();
  }
  s.SetItemsProcessed(s.iterations() * s.range(0));
}

template <bool Par>
void BM_tridiag(benchmark::State& s) {
  Data d(s.range(0));
  for (auto _ : s) {
    if (Par)
      k::parallel::tridiag_apply<C, C>(d.lo, d.di, d.up, d.a, d.y);
    else
      k::serial::tridiag_apply<C, C>(d.lo, d.di, d.up, d.a, d.y);
    benchmark::ClobberMemory();
  }
  s.SetItemsProcessed(s.iterations() * s.range(0));
}

// one full eps system solve (Thomas + Woodbury), for scale
void BM_eps_solve(benchmark::State& s) {
  static const dprime::PerturbationPair p = dprime::sine_pair(4001);
  static const dprime::FastCoupling c = dprime::adapt_coupling(
      p, dprime::synthesize_q(p, dprime::moments_for_target(2, 1, p.kappa), dprime::quartic_window(p.grid())), 64);
  const double eps = 1.0 / static_cast<double>(s.range(0));
  dprime::LineProblem lp;
  lp.h = eps / 64;
  const dprime::EpsSystem sys(c, lp, eps, lp.zeta);
  const dprime::CVec f(sys.size(), 1.0);
  for (auto _ : s) benchmark::DoNotOptimize(sys.solve(f));
  s.SetItemsProcessed(s.iterations() * sys.size());
}

}  // namespace

#define SIZES RangeMultiplier(2)->Range(9601, 153601)
BENCHMARK(BM_weighted_dot<false>)->SIZES;
BENCHMARK(BM_weighted_dot<true>)->SIZES;
BENCHMARK(BM_axpy<false>)->SIZES;
BENCHMARK(BM_axpy<true>)->SIZES;
BENCHMARK(BM_tridiag<false>)->SIZES;
BENCHMARK(BM_tridiag<true>)->SIZES;
BENCHMARK(BM_eps_solve)->Arg(5)->Arg(20)->Arg(80);

BENCHMARK_MAIN();
