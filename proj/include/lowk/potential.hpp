#pragma once

// Potentials with declared asymptotic metadata, case classification,
// validity orders and the built-in catalog.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lowk/errors.hpp"

namespace lowk {

enum class EndKind { FiniteLimit, PlusInfinity, MinusInfinity };

/// How V - limit (finite ends) or e^{-V} / e^{V} (infinite ends) decays.
struct Decay {
  enum class Type { ExponentialOrFaster, PowerLaw, LogGrowth };
  Type type = Type::ExponentialOrFaster;
  double alpha = 0.0;

  static Decay exponential() { return {Type::ExponentialOrFaster, 0.0}; }
  static Decay power_law(double a) { return {Type::PowerLaw, a}; }
  static Decay log_growth(double a) { return {Type::LogGrowth, a}; }

  bool algebraic() const { return type != Type::ExponentialOrFaster; }
};

struct EndpointClass {
  EndKind kind = EndKind::FiniteLimit;
  std::optional<double> limit_value;
  std::optional<Decay> decay;

  static EndpointClass finite(double v, Decay d) { return {EndKind::FiniteLimit, v, d}; }
  static EndpointClass plus_infinity(Decay d) { return {EndKind::PlusInfinity, std::nullopt, d}; }
  static EndpointClass minus_infinity(Decay d) { return {EndKind::MinusInfinity, std::nullopt, d}; }

  double limit() const {
    if (kind != EndKind::FiniteLimit || !limit_value) {
      throw Error(ErrorKind::InvalidSpec, "endpoint has no finite limit");
    }
    return *limit_value;
  }
};

/// A point where f jumps (V_S carries a delta of weight `jump`) or where
/// V_S alone is discontinuous (`jump` is zero).
struct Discontinuity {
  double x0 = 0.0;
  double jump = 0.0;
};

struct PotentialModel {
  std::string id;
  std::function<double(double)> V;
  std::function<double(double)> f;
  std::function<double(double)> VS;
  std::vector<Discontinuity> discontinuities;
  EndpointClass left;
  EndpointClass right;
  std::map<std::string, double> params;
  /// Limits of V_S at -inf / +inf (may be +inf); used by the oracle.
  double vs_left_limit = 0.0;
  double vs_right_limit = 0.0;
  /// Models defined only through V_S (no Fokker-Planck form); they enter the
  /// expansion through the zero-energy route.
  bool vs_only = false;
  /// Set on models produced by reflect().
  bool reflected = false;

  std::vector<double> breakpoints() const {
    std::vector<double> b;
    for (const auto& d : discontinuities) b.push_back(d.x0);
    std::sort(b.begin(), b.end());
    return b;
  }
};

enum class CaseTag { i, ii, iii, iv, v, vi };

inline const char* to_string(CaseTag c) {
  switch (c) {
    case CaseTag::i: return "i";
    case CaseTag::ii: return "ii";
    case CaseTag::iii: return "iii";
    case CaseTag::iv: return "iv";
    case CaseTag::v: return "v";
    case CaseTag::vi: return "vi";
  }
  return "?";
}

struct Classification {
  CaseTag tag;
  bool reflected;  // true when the model must be mirrored (x -> -x) first
};

inline Classification classify(EndKind left, EndKind right) {
  using K = EndKind;
  if (left == K::FiniteLimit && right == K::FiniteLimit) return {CaseTag::i, false};
  if (left == K::FiniteLimit && right == K::PlusInfinity) return {CaseTag::ii, false};
  if (left == K::FiniteLimit && right == K::MinusInfinity) return {CaseTag::iii, false};
  if (left == K::PlusInfinity && right == K::PlusInfinity) return {CaseTag::iv, false};
  if (left == K::PlusInfinity && right == K::MinusInfinity) return {CaseTag::v, false};
  if (left == K::MinusInfinity && right == K::MinusInfinity) return {CaseTag::vi, false};
  if (left == K::PlusInfinity && right == K::FiniteLimit) return {CaseTag::ii, true};
  if (left == K::MinusInfinity && right == K::FiniteLimit) return {CaseTag::iii, true};
  return {CaseTag::v, true};  // (-inf, +inf)
}

inline Classification classify(const PotentialModel& m) { return classify(m.left.kind, m.right.kind); }
inline CaseTag classify_case(const PotentialModel& m) { return classify(m).tag; }

/// Mirror image x -> -x: V(-x), f -> -f(-x), endpoints swapped.
inline PotentialModel reflect(const PotentialModel& m) {
  PotentialModel r = m;
  r.id = m.id + "~reflected";
  auto V = m.V;
  auto f = m.f;
  auto VS = m.VS;
  if (V) r.V = [V](double z) { return V(-z); };
  if (f) r.f = [f](double z) { return -f(-z); };
  if (VS) r.VS = [VS](double z) { return VS(-z); };
  r.discontinuities.clear();
  for (const auto& d : m.discontinuities) r.discontinuities.push_back({-d.x0, d.jump});
  std::sort(r.discontinuities.begin(), r.discontinuities.end(),
            [](const Discontinuity& a, const Discontinuity& b) { return a.x0 < b.x0; });
  r.left = m.right;
  r.right = m.left;
  r.vs_left_limit = m.vs_right_limit;
  r.vs_right_limit = m.vs_left_limit;
  r.reflected = !m.reflected;
  return r;
}

/// Sentinel for an unbounded validity order; callers cap it.
inline constexpr int kUnboundedOrder = std::numeric_limits<int>::max();

/// Largest n with the tail function in F_n for the given decay.
inline int membership_order(const EndpointClass& end) {
  if (!end.decay) throw Error(ErrorKind::MissingDecayMetadata, "endpoint decay not declared");
  const Decay& d = *end.decay;
  if (!d.algebraic()) return kUnboundedOrder;
  // integral of (1 + |x|^n) |x|^{-alpha} converges iff n < alpha - 1
  return static_cast<int>(std::ceil(d.alpha - 1.0)) - 1;
}

namespace detail {
inline int shifted(int n, int by) { return n == kUnboundedOrder ? n : n + by; }
}  // namespace detail

/// Largest truncation order N allowed by the membership conditions on the
/// declared tails. Returns kUnboundedOrder when no tail limits the order.
inline int max_valid_order(const PotentialModel& model) {
  const auto cls = classify(model);
  const PotentialModel& m = cls.reflected ? reflect(model) : model;
  int nl = membership_order(m.left);
  int nr = membership_order(m.right);
  int n = 0;
  switch (cls.tag) {
    case CaseTag::i:
    case CaseTag::ii: n = std::min(nl, nr); break;
    case CaseTag::iii:
    case CaseTag::v: n = std::min(detail::shifted(nl, 2), nr); break;
    case CaseTag::iv: n = detail::shifted(std::min(nl, nr), -2); break;
    case CaseTag::vi: n = std::min(nl, nr); break;
  }
  const bool even_only = cls.tag == CaseTag::iv || cls.tag == CaseTag::v || cls.tag == CaseTag::vi;
  if (even_only && n != kUnboundedOrder && n % 2 != 0) n -= 1;
  return n;
}

/// Validity order for the zero-energy route: V_- and V_+ in F_{N-2}.
inline int max_valid_order_generic(const PotentialModel& model) {
  const int n = std::min(membership_order(model.left), membership_order(model.right));
  return detail::shifted(n, 2);
}

inline int lowest_order(CaseTag c) {
  switch (c) {
    case CaseTag::i:
    case CaseTag::ii: return -1;
    case CaseTag::iv: return -2;
    default: return 0;
  }
}

// ---------------------------------------------------------------------------
// catalog

inline double param(const std::map<std::string, double>& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

inline PotentialModel catalog(const std::string& name, const std::map<std::string, double>& params = {}) {
  PotentialModel m;
  m.id = name;
  m.params = params;
  const double inf = std::numeric_limits<double>::infinity();

  if (name == "parabolic") {
    m.V = [](double z) { return z * z; };
    m.f = [](double z) { return -z; };
    m.VS = [](double z) { return z * z - 1.0; };
    m.left = EndpointClass::plus_infinity(Decay::exponential());
    m.right = EndpointClass::plus_infinity(Decay::exponential());
    m.vs_left_limit = m.vs_right_limit = inf;
  } else if (name == "logcosh") {
    m.V = [](double z) {
      const double a = std::abs(z);
      return 2.0 * (a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0));
    };
    m.f = [](double z) { return -std::tanh(z); };
    m.VS = [](double z) {
      const double s = 1.0 / std::cosh(z);
      return 1.0 - 2.0 * s * s;
    };
    m.left = EndpointClass::plus_infinity(Decay::exponential());
    m.right = EndpointClass::plus_infinity(Decay::exponential());
    m.vs_left_limit = m.vs_right_limit = 1.0;
  } else if (name == "exponential") {
    m.V = [](double z) { return std::exp(z); };
    m.f = [](double z) { return -0.5 * std::exp(z); };
    m.VS = [](double z) { return 0.25 * std::exp(2.0 * z) - 0.5 * std::exp(z); };
    m.left = EndpointClass::finite(0.0, Decay::exponential());
    m.right = EndpointClass::plus_infinity(Decay::exponential());
    m.vs_left_limit = 0.0;
    m.vs_right_limit = inf;
  } else if (name == "sqrtwell") {
    m.V = [](double z) { return z < 0.0 ? std::sqrt(1.0 - z) - 1.0 : 1.0 - std::sqrt(1.0 + z); };
    m.f = [](double z) {
      return z < 0.0 ? 0.25 / std::sqrt(1.0 - z) : 0.25 / std::sqrt(1.0 + z);
    };
    m.VS = [](double z) {
      if (z < 0.0) return 1.0 / (16.0 * (1.0 - z)) + 0.125 * std::pow(1.0 - z, -1.5);
      return 1.0 / (16.0 * (1.0 + z)) - 0.125 * std::pow(1.0 + z, -1.5);
    };
    // f is continuous at 0; only V_S jumps there
    m.discontinuities = {{0.0, 0.0}};
    m.left = EndpointClass::plus_infinity(Decay::exponential());
    m.right = EndpointClass::minus_infinity(Decay::exponential());
    m.vs_left_limit = m.vs_right_limit = 0.0;
  } else if (name == "logstep") {
    const double alpha = param(params, "alpha", 1.5);
    if (!(alpha > 0.0)) throw Error(ErrorKind::BadParameter, "logstep needs alpha > 0");
    m.params["alpha"] = alpha;
    m.V = [alpha](double z) { return z > 1.0 ? alpha * std::log(z) : 0.0; };
    m.f = [alpha](double z) { return z > 1.0 ? -0.5 * alpha / z : 0.0; };
    m.VS = [alpha](double z) { return z > 1.0 ? 0.25 * alpha * (alpha + 2.0) / (z * z) : 0.0; };
    m.discontinuities = {{1.0, -0.5 * alpha}};
    m.left = EndpointClass::finite(0.0, Decay::exponential());
    m.right = EndpointClass::plus_infinity(Decay::log_growth(alpha));
    m.vs_left_limit = m.vs_right_limit = 0.0;
  } else if (name == "barrier") {
    const double a = param(params, "a", 1.0);
    if (!(a > 0.0)) throw Error(ErrorKind::BadParameter, "barrier needs a > 0");
    m.params["a"] = a;
    m.VS = [a](double z) { return std::abs(z) < 1.0 ? a * a : 0.0; };
    m.discontinuities = {{-1.0, 0.0}, {1.0, 0.0}};
    // V_S vanishes identically outside [-1, 1]
    m.left = EndpointClass::finite(0.0, Decay::exponential());
    m.right = EndpointClass::finite(0.0, Decay::exponential());
    m.vs_only = true;
  } else if (name == "free") {
    m.V = [](double) { return 0.0; };
    m.f = [](double) { return 0.0; };
    m.VS = [](double) { return 0.0; };
    m.left = EndpointClass::finite(0.0, Decay::exponential());
    m.right = EndpointClass::finite(0.0, Decay::exponential());
  } else if (name == "tanhstep") {
    m.V = [](double z) { return std::tanh(z); };
    m.f = [](double z) {
      const double s = 1.0 / std::cosh(z);
      return -0.5 * s * s;
    };
    m.VS = [](double z) {
      const double s = 1.0 / std::cosh(z);
      const double s2 = s * s;
      return 0.25 * s2 * s2 + s2 * std::tanh(z);
    };
    m.left = EndpointClass::finite(-1.0, Decay::exponential());
    m.right = EndpointClass::finite(1.0, Decay::exponential());
  } else if (name == "negexponential") {
    m.V = [](double z) { return -std::exp(z); };
    m.f = [](double z) { return 0.5 * std::exp(z); };
    m.VS = [](double z) { return 0.25 * std::exp(2.0 * z) + 0.5 * std::exp(z); };
    m.left = EndpointClass::finite(0.0, Decay::exponential());
    m.right = EndpointClass::minus_infinity(Decay::exponential());
    m.vs_left_limit = 0.0;
    m.vs_right_limit = inf;
  } else if (name == "invparabolic") {
    m.V = [](double z) { return -z * z; };
    m.f = [](double z) { return z; };
    m.VS = [](double z) { return z * z + 1.0; };
    m.left = EndpointClass::minus_infinity(Decay::exponential());
    m.right = EndpointClass::minus_infinity(Decay::exponential());
    m.vs_left_limit = m.vs_right_limit = inf;
  } else {
    throw Error(ErrorKind::UnknownPotential, "no catalog entry named '" + name + "'");
  }
  return m;
}

inline std::vector<std::string> catalog_names() {
  return {"parabolic", "logcosh", "exponential", "sqrtwell", "logstep", "barrier",
          "free", "tanhstep", "negexponential", "invparabolic"};
}

}  // namespace lowk
