#pragma once

// Truncated Laurent series in the formal variable (ik).
//
// A series either carries an explicit truncation order (everything above
// max_order() is unknown) or is exact, i.e. a finite Laurent polynomial whose
// unstored coefficients are genuinely zero. Arithmetic never reports
// coefficients beyond what its inputs determine.

#include <algorithm>
#include <complex>
#include <limits>
#include <optional>
#include <ostream>
#include <vector>

#include "lowk/errors.hpp"

namespace lowk {

using cplx = std::complex<double>;

/// Threshold below which a leading coefficient counts as zero.
inline constexpr double kLeadingTolerance = 1e-13;

/// Number of terms produced by transcendental operations on exact inputs when
/// the caller gives no explicit truncation order.
inline constexpr int kDefaultExactTerms = 12;

class LaurentSeries {
 public:
  /// The exact zero series.
  LaurentSeries() : LaurentSeries(0, {cplx{0.0, 0.0}}, true) {}

  /// Truncated series: coefficient j multiplies (ik)^(min_order + j) and
  /// nothing is known above min_order + coeffs.size() - 1.
  LaurentSeries(int min_order, std::vector<cplx> coeffs)
      : LaurentSeries(min_order, std::move(coeffs), false) {}

  /// Exact Laurent polynomial.
  static LaurentSeries exact(int min_order, std::vector<cplx> coeffs) {
    return LaurentSeries(min_order, std::move(coeffs), true);
  }
  static LaurentSeries monomial(cplx c, int order) { return exact(order, {c}); }
  static LaurentSeries constant(cplx c) { return exact(0, {c}); }

  int min_order() const { return min_order_; }
  /// Highest stored order.
  int max_order() const { return min_order_ + static_cast<int>(coeffs_.size()) - 1; }
  bool is_exact() const { return exact_; }
  /// Highest order that is determined; unbounded for exact series.
  int reliable_order() const {
    return exact_ ? std::numeric_limits<int>::max() : max_order();
  }

  const std::vector<cplx>& coeffs() const { return coeffs_; }

  /// Coefficient of (ik)^order; zero outside the stored window.
  cplx operator[](int order) const {
    if (order < min_order_ || order > max_order()) return {0.0, 0.0};
    return coeffs_[static_cast<std::size_t>(order - min_order_)];
  }
  cplx leading() const { return coeffs_.front(); }

  /// Partial sum at a given value of (ik).
  cplx evaluate(cplx ik) const {
    cplx sum{0.0, 0.0};
    for (int n = max_order(); n >= min_order_; --n) sum = sum * ik + (*this)[n];
    if (min_order_ != 0) sum *= std::pow(ik, min_order_);
    return sum;
  }

  /// Drop everything above `order` (the result is truncated, not exact).
  LaurentSeries truncated(int order) const {
    if (order < min_order_) {
      throw Error(ErrorKind::InvalidSpec, "truncation below the minimum order");
    }
    const int top = std::min(order, max_order());
    std::vector<cplx> c(coeffs_.begin(), coeffs_.begin() + (top - min_order_ + 1));
    // pad with zeros when an exact series is asked for more terms than stored
    if (exact_) c.resize(static_cast<std::size_t>(order - min_order_ + 1), cplx{});
    return LaurentSeries(min_order_, std::move(c), false);
  }

 private:
  LaurentSeries(int min_order, std::vector<cplx> coeffs, bool exact)
      : min_order_(min_order), coeffs_(std::move(coeffs)), exact_(exact) {
    if (coeffs_.empty()) throw Error(ErrorKind::InvalidSpec, "empty Laurent series");
  }

  int min_order_;
  std::vector<cplx> coeffs_;
  bool exact_;
};

namespace detail {

inline int saturating_add(int a, int b) {
  constexpr int big = std::numeric_limits<int>::max();
  if (a == big || b == big) return big;
  return a + b;
}

inline LaurentSeries build(int min_order, int top, bool exact,
                           const auto& coefficient_at) {
  std::vector<cplx> c;
  c.reserve(static_cast<std::size_t>(top - min_order + 1));
  for (int n = min_order; n <= top; ++n) c.push_back(coefficient_at(n));
  return exact ? LaurentSeries::exact(min_order, std::move(c))
               : LaurentSeries(min_order, std::move(c));
}

// Output order for a unary operation whose natural relative length is
// `natural_top - result_min`.
inline int unary_top(const LaurentSeries& a, int result_min, std::optional<int> max_order) {
  int top = a.is_exact() ? result_min + kDefaultExactTerms - 1
                         : result_min + (a.max_order() - a.min_order());
  if (max_order) {
    top = a.is_exact() ? *max_order : std::min(top, *max_order);
  }
  if (top < result_min) throw Error(ErrorKind::InvalidSpec, "requested order below the leading order");
  return top;
}

// a / (leading coefficient * (ik)^min_order): coefficients b_0 = 1, b_1, ... up to `len` terms.
inline std::vector<cplx> normalized_tail(const LaurentSeries& a, int len) {
  const cplx lead = a.leading();
  std::vector<cplx> b(static_cast<std::size_t>(len));
  for (int j = 0; j < len; ++j) b[static_cast<std::size_t>(j)] = a[a.min_order() + j] / lead;
  return b;
}

inline void require_leading(const LaurentSeries& a, const char* op) {
  if (std::abs(a.leading()) <= kLeadingTolerance) {
    throw Error(ErrorKind::ZeroLeadingCoefficient,
                std::string(op) + ": leading coefficient is zero within tolerance");
  }
}

}  // namespace detail

inline LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) {
  const int lo = std::min(a.min_order(), b.min_order());
  if (a.is_exact() && b.is_exact()) {
    const int hi = std::max(a.max_order(), b.max_order());
    return detail::build(lo, hi, true, [&](int n) { return a[n] + b[n]; });
  }
  const int hi = std::min(a.reliable_order(), b.reliable_order());
  if (hi < lo) throw Error(ErrorKind::InvalidSpec, "sum has no reliable terms");
  return detail::build(lo, hi, false, [&](int n) { return a[n] + b[n]; });
}

inline LaurentSeries operator*(cplx s, const LaurentSeries& a) {
  std::vector<cplx> c = a.coeffs();
  for (auto& v : c) v *= s;
  return a.is_exact() ? LaurentSeries::exact(a.min_order(), std::move(c))
                      : LaurentSeries(a.min_order(), std::move(c));
}

inline LaurentSeries operator-(const LaurentSeries& a) { return cplx{-1.0, 0.0} * a; }
inline LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) { return a + (-b); }

/// Cauchy product. The result is reliable through
/// min(rel(a) + min(b), rel(b) + min(a)).
inline LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
  const int lo = a.min_order() + b.min_order();
  const bool exact = a.is_exact() && b.is_exact();
  const int hi = exact ? a.max_order() + b.max_order()
                       : std::min(detail::saturating_add(a.reliable_order(), b.min_order()),
                                  detail::saturating_add(b.reliable_order(), a.min_order()));
  return detail::build(lo, hi, exact, [&](int n) {
    cplx sum{0.0, 0.0};
    for (int i = a.min_order(); i <= a.max_order(); ++i) {
      const int j = n - i;
      if (j < b.min_order()) break;
      if (j <= b.max_order()) sum += a[i] * b[j];
    }
    return sum;
  });
}

inline LaurentSeries ls_add(const LaurentSeries& a, const LaurentSeries& b) { return a + b; }
inline LaurentSeries ls_mul(const LaurentSeries& a, const LaurentSeries& b) { return a * b; }

/// Multiplicative inverse of a series with nonzero leading coefficient.
inline LaurentSeries ls_invert(const LaurentSeries& a, std::optional<int> max_order = std::nullopt) {
  detail::require_leading(a, "invert");
  const int lo = -a.min_order();
  const int top = detail::unary_top(a, lo, max_order);
  const int len = top - lo + 1;
  const auto b = detail::normalized_tail(a, len);
  std::vector<cplx> r(static_cast<std::size_t>(len));
  r[0] = 1.0;
  for (int n = 1; n < len; ++n) {
    cplx sum{0.0, 0.0};
    for (int j = 1; j <= n; ++j) sum += b[j] * r[n - j];
    r[n] = -sum;
  }
  const cplx scale = 1.0 / a.leading();
  for (auto& v : r) v *= scale;
  return LaurentSeries(lo, std::move(r));
}

enum class Branch { Plus, Minus };

/// Square root; `branch` multiplies the principal root of the leading
/// coefficient by +1 or -1.
inline LaurentSeries ls_sqrt(const LaurentSeries& a, Branch branch,
                             std::optional<int> max_order = std::nullopt) {
  if (a.min_order() % 2 != 0) {
    throw Error(ErrorKind::OddLeadingOrder, "sqrt of a series with odd leading order");
  }
  detail::require_leading(a, "sqrt");
  const int lo = a.min_order() / 2;
  const int top = detail::unary_top(a, lo, max_order);
  const int len = top - lo + 1;
  const auto b = detail::normalized_tail(a, len);
  std::vector<cplx> r(static_cast<std::size_t>(len));
  r[0] = 1.0;
  for (int n = 1; n < len; ++n) {
    cplx sum{0.0, 0.0};
    for (int j = 1; j < n; ++j) sum += r[j] * r[n - j];
    r[n] = (b[n] - sum) / 2.0;
  }
  cplx scale = std::sqrt(a.leading());
  if (branch == Branch::Minus) scale = -scale;
  for (auto& v : r) v *= scale;
  return LaurentSeries(lo, std::move(r));
}

/// Exponential of a series without negative powers.
inline LaurentSeries ls_exp(const LaurentSeries& a, std::optional<int> max_order = std::nullopt) {
  if (a.min_order() < 0) {
    throw Error(ErrorKind::NegativeOrderExponent, "exp of a series with negative powers");
  }
  int top = a.is_exact() ? kDefaultExactTerms - 1 : a.max_order();
  if (max_order) top = a.is_exact() ? *max_order : std::min(top, *max_order);
  if (top < 0) throw Error(ErrorKind::InvalidSpec, "exp needs a nonnegative truncation order");
  const int len = top + 1;
  std::vector<cplx> e(static_cast<std::size_t>(len));
  e[0] = 1.0;
  for (int n = 1; n < len; ++n) {
    cplx sum{0.0, 0.0};
    for (int j = 1; j <= n; ++j) sum += static_cast<double>(j) * a[j] * e[n - j];
    e[n] = sum / static_cast<double>(n);
  }
  const cplx scale = std::exp(a[0]);
  for (auto& v : e) v *= scale;
  return LaurentSeries(0, std::move(e));
}

/// Logarithm of a / (ik)^min_order(a). The constant term is the principal
/// log of the leading coefficient, so ls_exp(ls_log(a)) reproduces a when
/// a has no negative powers.
inline LaurentSeries ls_log(const LaurentSeries& a, std::optional<int> max_order = std::nullopt) {
  detail::require_leading(a, "log");
  const int top = detail::unary_top(a, 0, max_order);
  const int len = top + 1;
  const auto u = detail::normalized_tail(a, len);  // u_0 = 1
  std::vector<cplx> l(static_cast<std::size_t>(len));
  l[0] = std::log(a.leading());
  for (int n = 1; n < len; ++n) {
    cplx sum = static_cast<double>(n) * u[n];
    for (int j = 1; j < n; ++j) sum -= static_cast<double>(j) * l[j] * u[n - j];
    l[n] = sum / static_cast<double>(n);
  }
  return LaurentSeries(0, std::move(l));
}

inline std::ostream& operator<<(std::ostream& os, const LaurentSeries& a) {
  os << "{";
  for (int n = a.min_order(); n <= a.max_order(); ++n) {
    if (n != a.min_order()) os << ", ";
    os << "(ik)^" << n << ": " << a[n];
  }
  os << (a.is_exact() ? "}" : ", ...}");
  return os;
}

}  // namespace lowk
