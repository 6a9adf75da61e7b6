#pragma once
// Data-parallel kernels. Each has a plain serial version (the reference)
// and an OpenMP version. Reductions are chunked with a fixed chunk size, so
// the parallel result does not depend on the thread count.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace dprime::kernels {

inline constexpr std::size_t kChunk = 2048;

template <class T> inline T conj_if(const T& v) { return v; }
template <class T> inline std::complex<T> conj_if(const std::complex<T>& v) { return std::conj(v); }

namespace serial {

// sum_i w_i a_i b_i
template <class A, class B>
auto weighted_sum(std::span<const double> w, std::span<const A> a, std::span<const B> b) {
  decltype(A{} * B{}) s{};
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * a[i] * b[i];
  return s;
}

// sum_i w_i a_i conj(b_i)
template <class T>
T weighted_dot(std::span<const double> w, std::span<const T> a, std::span<const T> b) {
  T s{};
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * a[i] * conj_if(b[i]);
  return s;
}

template <class T>
void axpy(T alpha, std::span<const T> x, std::span<T> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

// y = tridiag(lo, di, up) x ; lo[0] and up[n-1] unused
template <class T, class M>
void tridiag_apply(std::span<const M> lo, std::span<const M> di, std::span<const M> up,
                   std::span<const T> x, std::span<T> y) {
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    T v = di[i] * x[i];
    if (i > 0) v += lo[i] * x[i - 1];
    if (i + 1 < n) v += up[i] * x[i + 1];
    y[i] = v;
  }
}

}  // namespace serial

namespace parallel {

template <class A, class B>
auto weighted_sum(std::span<const double> w, std::span<const A> a, std::span<const B> b) {
  using R = decltype(A{} * B{});
  const std::size_t n = w.size();
  const std::size_t nc = (n + kChunk - 1) / kChunk;
  std::vector<R> part(nc);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(nc); ++c) {
    const std::size_t lo = c * kChunk, hi = std::min(n, lo + kChunk);
    R s{};
    for (std::size_t i = lo; i < hi; ++i) s += w[i] * a[i] * b[i];
    part[c] = s;
  }
  R s{};
  for (const auto& p : part) s += p;
  return s;
}

template <class T>
T weighted_dot(std::span<const double> w, std::span<const T> a, std::span<const T> b) {
  const std::size_t n = w.size();
  const std::size_t nc = (n + kChunk - 1) / kChunk;
  std::vector<T> part(nc);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(nc); ++c) {
    const std::size_t lo = c * kChunk, hi = std::min(n, lo + kChunk);
    T s{};
    for (std::size_t i = lo; i < hi; ++i) s += w[i] * a[i] * conj_if(b[i]);
    part[c] = s;
  }
  T s{};
  for (const auto& p : part) s += p;
  return s;
}

template <class T>
void axpy(T alpha, std::span<const T> x, std::span<T> y) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static) if (n > 8192)
  for (std::ptrdiff_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

template <class T, class M>
void tridiag_apply(std::span<const M> lo, std::span<const M> di, std::span<const M> up,
                   std::span<const T> x, std::span<T> y) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static) if (n > 8192)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    T v = di[i] * x[i];
    if (i > 0) v += lo[i] * x[i - 1];
    if (i + 1 < n) v += up[i] * x[i + 1];
    y[i] = v;
  }
}

}  // namespace parallel

// set the OpenMP team size used by the parallel kernels and the sweeps (<=0 keeps the default)
void set_threads(int n);
int max_threads();

}  // namespace dprime::kernels
