#pragma once
// Uniform grids and sampled functions on them.

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "dprime/common.hpp"

namespace dprime {

struct Grid {
  double left = -1.0;
  double right = 1.0;
  std::size_t n = 0;  // odd, >= 3

  static Grid make(double left, double right, std::size_t n);
  double h() const { return (right - left) / static_cast<double>(n - 1); }
  double x(std::size_t i) const { return left + static_cast<double>(i) * h(); }
  bool operator==(const Grid& o) const { return left == o.left && right == o.right && n == o.n; }
};

template <class T>
struct GridFunction {
  Grid grid;
  std::vector<T> values;
  // index range [first, last] outside of which the samples are exactly zero
  std::optional<std::pair<std::size_t, std::size_t>> support;

  std::size_t size() const { return values.size(); }
  T& operator[](std::size_t i) { return values[i]; }
  const T& operator[](std::size_t i) const { return values[i]; }
  void detect_support();
};

using RealFn = GridFunction<double>;
using ComplexFn = GridFunction<Complex>;

enum class Quadrature { simpson, node_sum };

RealFn make_grid_function(const std::function<double(double)>& rule, const Grid& grid);
ComplexFn make_complex_grid_function(const std::function<Complex(double)>& rule, const Grid& grid);
RealFn zeros(const Grid& grid);

// (f, g) = int f conj(g). Simpson by default; node_sum is h * sum f_k g_k.
double inner_product(const RealFn& f, const RealFn& g, Quadrature q = Quadrature::simpson);
Complex inner_product(const ComplexFn& f, const ComplexFn& g, Quadrature q = Quadrature::simpson);
double norm(const RealFn& f, Quadrature q = Quadrature::simpson);
double norm(const ComplexFn& f, Quadrature q = Quadrature::simpson);

// Repeated cumulative trapezoid from the left end, order 1 or 2.
RealFn antiderivative(const RealFn& f, int order);

// g(t) = f(eps * t) on the fast grid, by linear interpolation.
RealFn rescale_to_fast(const RealFn& f, double eps, const Grid& fast);
ComplexFn rescale_to_fast(const ComplexFn& f, double eps, const Grid& fast);

std::vector<double> quadrature_weights(const Grid& grid, Quadrature q);

}  // namespace dprime
