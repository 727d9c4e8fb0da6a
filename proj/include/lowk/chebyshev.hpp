#pragma once

// Chebyshev-Lobatto panel primitives: nodes, spectral cumulative
// integration, Clenshaw-Curtis weights, coefficient transform and
// barycentric interpolation on [-1, 1].

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <span>

namespace lowk::cheb {

/// Polynomial degree per panel; each panel carries kDegree + 1 nodes.
inline constexpr int kDegree = 20;
inline constexpr int kNodes = kDegree + 1;

using NodeArray = std::array<double, kNodes>;
using Matrix = std::array<std::array<double, kNodes>, kNodes>;

class Basis {
 public:
  static const Basis& get() {
    static const Basis instance;
    return instance;
  }

  /// Nodes ascending from -1 to 1.
  const NodeArray& nodes() const { return nodes_; }
  /// Clenshaw-Curtis weights for the integral over [-1, 1].
  const NodeArray& weights() const { return weights_; }

  /// out[i] = integral of f from -1 to t_i.
  void integrate_left(std::span<const double> f, std::span<double> out) const {
    for (int i = 0; i < kNodes; ++i) {
      long double s = 0.0L;
      for (int j = 0; j < kNodes; ++j) s += static_cast<long double>(left_[i][j]) * f[j];
      out[i] = static_cast<double>(s);
    }
  }

  /// out[i] = integral of f from t_i to 1.
  void integrate_right(std::span<const double> f, std::span<double> out) const {
    // nodes are symmetric, so the right matrix is the left one conjugated by reversal
    for (int i = 0; i < kNodes; ++i) {
      long double s = 0.0L;
      for (int j = 0; j < kNodes; ++j) {
        s += static_cast<long double>(left_[kDegree - i][kDegree - j]) * f[j];
      }
      out[i] = static_cast<double>(s);
    }
  }

  double integrate(std::span<const double> f) const {
    long double s = 0.0L;
    for (int j = 0; j < kNodes; ++j) s += static_cast<long double>(weights_[j]) * f[j];
    return static_cast<double>(s);
  }

  /// Chebyshev coefficients of the interpolant through the node values.
  NodeArray coefficients(std::span<const double> f) const {
    NodeArray c{};
    for (int k = 0; k < kNodes; ++k) {
      long double s = 0.0L;
      for (int j = 0; j < kNodes; ++j) s += static_cast<long double>(transform_[k][j]) * f[j];
      c[k] = static_cast<double>(s);
    }
    return c;
  }

  /// Barycentric interpolation at t in [-1, 1].
  double interpolate(std::span<const double> f, double t) const {
    double num = 0.0, den = 0.0;
    for (int j = 0; j < kNodes; ++j) {
      const double d = t - nodes_[j];
      if (d == 0.0) return f[j];
      const double w = bary_[j] / d;
      num += w * f[j];
      den += w;
    }
    return num / den;
  }

 private:
  Basis() {
    using std::numbers::pi_v;
    const long double pi = pi_v<long double>;
    std::array<long double, kNodes> t{};
    for (int j = 0; j < kNodes; ++j) {
      t[j] = -std::cos(pi * j / kDegree);
      nodes_[j] = static_cast<double>(t[j]);
      bary_[j] = ((j % 2) ? -1.0 : 1.0) * ((j == 0 || j == kDegree) ? 0.5 : 1.0);
    }
    // forward transform: c_k = (2/P) sum'' f_j T_k(t_j), with c_0 and c_P halved
    for (int k = 0; k < kNodes; ++k) {
      for (int j = 0; j < kNodes; ++j) {
        long double v = std::cos(static_cast<long double>(k) * std::acos(t[j])) * 2.0L / kDegree;
        if (j == 0 || j == kDegree) v *= 0.5L;
        if (k == 0 || k == kDegree) v *= 0.5L;
        transform_[k][j] = static_cast<double>(v);
      }
    }
    // cumulative integration of each Lagrange basis function
    for (int j = 0; j < kNodes; ++j) {
      std::array<long double, kNodes> c{};
      for (int k = 0; k < kNodes; ++k) {
        long double v = std::cos(static_cast<long double>(k) * std::acos(t[j])) * 2.0L / kDegree;
        if (j == 0 || j == kDegree) v *= 0.5L;
        if (k == 0 || k == kDegree) v *= 0.5L;
        c[k] = v;
      }
      // antiderivative coefficients (degree P + 1)
      std::array<long double, kNodes + 1> a{};
      for (int k = 0; k < kNodes; ++k) {
        if (k == 0) {
          a[1] += c[0];
        } else if (k == 1) {
          a[2] += c[1] / 4.0L;
        } else {
          a[k + 1] += c[k] / (2.0L * (k + 1));
          a[k - 1] -= c[k] / (2.0L * (k - 1));
        }
      }
      auto eval = [&](long double x) {
        long double s = 0.0L;
        for (int k = 0; k <= kNodes; ++k) s += a[k] * std::cos(k * std::acos(std::clamp(x, -1.0L, 1.0L)));
        return s;
      };
      const long double base = eval(-1.0L);
      for (int i = 0; i < kNodes; ++i) left_[i][j] = static_cast<double>(eval(t[i]) - base);
      weights_[j] = left_[kDegree][j];
    }
  }

  NodeArray nodes_{};
  NodeArray weights_{};
  NodeArray bary_{};
  Matrix left_{};
  Matrix transform_{};
};

}  // namespace lowk::cheb
