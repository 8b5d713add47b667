#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace chernflow {

/// Uniform periodic grid on [0,1)^(2n) with N points per real axis and
/// coordinates z_j = x_{2j} + i x_{2j+1} (axis 0 varies fastest).
struct TorusGrid {
  int n = 0;        // complex dimension
  int N = 0;        // points per axis
  double h = 0.0;   // spacing 1/N
  std::int64_t points = 0;

  TorusGrid() = default;
  TorusGrid(int n_, int N_) : n(n_), N(N_), h(1.0 / N_) {
    if (n_ < 1 || n_ > 2) throw std::invalid_argument("TorusGrid: complex dimension must be 1 or 2");
    if (N_ < 8) throw std::invalid_argument("TorusGrid: need at least 8 points per axis");
    points = 1;
    for (int a = 0; a < 2 * n_; ++a) points *= N_;
  }

  int axes() const { return 2 * n; }

  std::int64_t stride(int axis) const {
    std::int64_t s = 1;
    for (int a = 0; a < axis; ++a) s *= N;
    return s;
  }

  int digit(std::int64_t p, int axis) const {
    return static_cast<int>((p / stride(axis)) % N);
  }

  /// Periodic neighbor one step along an axis (dir = +1 or -1).
  std::int64_t shift(std::int64_t p, int axis, int dir) const {
    const std::int64_t s = stride(axis);
    const int x = digit(p, axis);
    if (dir > 0) return x == N - 1 ? p - (static_cast<std::int64_t>(N) - 1) * s : p + s;
    return x == 0 ? p + (static_cast<std::int64_t>(N) - 1) * s : p - s;
  }

  double coord(std::int64_t p, int axis) const { return digit(p, axis) * h; }
};

// Pointwise second-order periodic stencils. T is double or std::complex<double>.

template <class T>
inline T d_point(const TorusGrid& g, const T* f, std::int64_t p, int axis) {
  return (f[g.shift(p, axis, +1)] - f[g.shift(p, axis, -1)]) / (2.0 * g.h);
}

template <class T>
inline T d2_point(const TorusGrid& g, const T* f, std::int64_t p, int axis) {
  return (f[g.shift(p, axis, +1)] - 2.0 * f[p] + f[g.shift(p, axis, -1)]) / (g.h * g.h);
}

template <class T>
inline T cross_point(const TorusGrid& g, const T* f, std::int64_t p, int a, int b) {
  const std::int64_t pp = g.shift(g.shift(p, a, +1), b, +1);
  const std::int64_t pm = g.shift(g.shift(p, a, +1), b, -1);
  const std::int64_t mp = g.shift(g.shift(p, a, -1), b, +1);
  const std::int64_t mm = g.shift(g.shift(p, a, -1), b, -1);
  return (f[pp] - f[pm] - f[mp] + f[mm]) / (4.0 * g.h * g.h);
}

}  // namespace chernflow
