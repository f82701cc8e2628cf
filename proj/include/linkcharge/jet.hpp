#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace linkcharge {

/// Second-order forward-mode number: value, gradient and Hessian with respect
/// to N independent variables. Only the operations the linkage charts need
/// are provided.
template <std::size_t N>
struct Jet {
  double v = 0.0;
  std::array<double, N> g{};
  std::array<std::array<double, N>, N> h{};

  Jet() = default;
  Jet(double value) : v(value) {}  // NOLINT: constants promote implicitly

  static Jet variable(double value, std::size_t index) {
    Jet j(value);
    j.g[index] = 1.0;
    return j;
  }

  friend Jet operator+(const Jet& a, const Jet& b) {
    Jet r;
    r.v = a.v + b.v;
    for (std::size_t i = 0; i < N; ++i) {
      r.g[i] = a.g[i] + b.g[i];
      for (std::size_t k = 0; k < N; ++k) r.h[i][k] = a.h[i][k] + b.h[i][k];
    }
    return r;
  }

  friend Jet operator-(const Jet& a) {
    Jet r;
    r.v = -a.v;
    for (std::size_t i = 0; i < N; ++i) {
      r.g[i] = -a.g[i];
      for (std::size_t k = 0; k < N; ++k) r.h[i][k] = -a.h[i][k];
    }
    return r;
  }

  friend Jet operator-(const Jet& a, const Jet& b) { return a + (-b); }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    r.v = a.v * b.v;
    for (std::size_t i = 0; i < N; ++i) {
      r.g[i] = a.g[i] * b.v + a.v * b.g[i];
      for (std::size_t k = 0; k < N; ++k)
        r.h[i][k] = a.h[i][k] * b.v + a.v * b.h[i][k] + a.g[i] * b.g[k] + a.g[k] * b.g[i];
    }
    return r;
  }

  /// Applies a scalar function with derivatives (f, f', f'') to this jet.
  Jet chain(double f0, double f1, double f2) const {
    Jet r;
    r.v = f0;
    for (std::size_t i = 0; i < N; ++i) {
      r.g[i] = f1 * g[i];
      for (std::size_t k = 0; k < N; ++k) r.h[i][k] = f1 * h[i][k] + f2 * g[i] * g[k];
    }
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) {
    const double inv = 1.0 / b.v;
    return a * b.chain(inv, -inv * inv, 2.0 * inv * inv * inv);
  }
};

template <std::size_t N>
Jet<N> sqrt(const Jet<N>& a) {
  const double s = std::sqrt(a.v);
  return a.chain(s, 0.5 / s, -0.25 / (s * a.v));
}

inline double value_of(double x) { return x; }
template <std::size_t N>
double value_of(const Jet<N>& x) {
  return x.v;
}

}  // namespace linkcharge
