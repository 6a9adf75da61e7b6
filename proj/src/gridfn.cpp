#include "dprime/gridfn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dprime/kernels.hpp"

namespace dprime {

Grid Grid::make(double left, double right, std::size_t n) {
  if (!std::isfinite(left) || !std::isfinite(right) || !(right > left))
    throw Error("grid: need finite endpoints with left < right");
  if (n < 3 || n % 2 == 0) throw Error("grid: point count must be odd and >= 3, got " + std::to_string(n));
  return Grid{left, right, n};
}

template <class T>
void GridFunction<T>::detect_support() {
  std::size_t a = 0, b = values.size();
  while (a < b && values[a] == T{}) ++a;
  while (b > a && values[b - 1] == T{}) --b;
  if (a == b)
    support.reset();
  else
    support = std::make_pair(a, b - 1);
}

template struct GridFunction<double>;
template struct GridFunction<Complex>;

namespace {

template <class T, class Rule>
GridFunction<T> sample(const Rule& rule, const Grid& grid) {
  GridFunction<T> f{grid, std::vector<T>(grid.n), std::nullopt};
  for (std::size_t i = 0; i < grid.n; ++i) {
    const T v = rule(grid.x(i));
    if (!std::isfinite(std::abs(v))) throw Error("grid function: non-finite sample at x = " + std::to_string(grid.x(i)));
    f.values[i] = v;
  }
  f.detect_support();
  return f;
}

template <class T>
T inner(const GridFunction<T>& f, const GridFunction<T>& g, Quadrature q) {
  if (!(f.grid == g.grid)) throw Error("inner product: grids differ");
  const auto w = quadrature_weights(f.grid, q);
  return kernels::parallel::weighted_dot<T>(w, f.values, g.values);
}

template <class T>
GridFunction<T> rescale(const GridFunction<T>& f, double eps, const Grid& fast) {
  if (!(eps > 0)) throw Error("rescale_to_fast: eps must be positive");
  const double lo = eps * fast.left, hi = eps * fast.right;
  const double tol = 1e-12 * (f.grid.right - f.grid.left);
  if (lo < f.grid.left - tol || hi > f.grid.right + tol)
    throw Error("rescale_to_fast: source grid does not cover [eps*a, eps*b]");
  GridFunction<T> g{fast, std::vector<T>(fast.n), std::nullopt};
  const double h = f.grid.h();
  for (std::size_t i = 0; i < fast.n; ++i) {
    const double s = (eps * fast.x(i) - f.grid.left) / h;
    // snap to a node when we land on one up to rounding
    const double r = std::round(s);
    if (std::abs(s - r) < 1e-9) {
      const auto k = static_cast<std::size_t>(std::clamp(r, 0.0, double(f.grid.n - 1)));
      g.values[i] = f.values[k];
      continue;
    }
    auto k = static_cast<std::size_t>(std::floor(s));
    k = std::min(k, f.grid.n - 2);
    const double th = s - static_cast<double>(k);
    g.values[i] = (1 - th) * f.values[k] + th * f.values[k + 1];
  }
  g.detect_support();
  return g;
}

}  // namespace

std::vector<double> quadrature_weights(const Grid& grid, Quadrature q) {
  const double h = grid.h();
  std::vector<double> w(grid.n, h);
  if (q == Quadrature::simpson) {
    for (std::size_t i = 0; i < grid.n; ++i) w[i] = h / 3.0 * (i % 2 ? 4.0 : 2.0);
    w.front() = w.back() = h / 3.0;
  }
  return w;
}

RealFn make_grid_function(const std::function<double(double)>& rule, const Grid& grid) {
  return sample<double>(rule, grid);
}

ComplexFn make_complex_grid_function(const std::function<Complex(double)>& rule, const Grid& grid) {
  return sample<Complex>(rule, grid);
}

RealFn zeros(const Grid& grid) { return RealFn{grid, std::vector<double>(grid.n, 0.0), std::nullopt}; }

double inner_product(const RealFn& f, const RealFn& g, Quadrature q) { return inner(f, g, q); }
Complex inner_product(const ComplexFn& f, const ComplexFn& g, Quadrature q) { return inner(f, g, q); }
double norm(const RealFn& f, Quadrature q) { return std::sqrt(std::max(0.0, inner(f, f, q))); }
double norm(const ComplexFn& f, Quadrature q) { return std::sqrt(std::max(0.0, inner(f, f, q).real())); }

RealFn antiderivative(const RealFn& f, int order) {
  if (order != 1 && order != 2) throw Error("antiderivative: order must be 1 or 2");
  RealFn g = f;
  const double h = f.grid.h();
  for (int o = 0; o < order; ++o) {
    double acc = 0.0, prev = g.values[0];
    g.values[0] = 0.0;
    for (std::size_t i = 1; i < g.size(); ++i) {
      const double cur = g.values[i];
      acc += 0.5 * h * (prev + cur);
      prev = cur;
      g.values[i] = acc;
    }
  }
  g.detect_support();
  return g;
}

RealFn rescale_to_fast(const RealFn& f, double eps, const Grid& fast) { return rescale(f, eps, fast); }
ComplexFn rescale_to_fast(const ComplexFn& f, double eps, const Grid& fast) { return rescale(f, eps, fast); }

}  // namespace dprime
