#pragma once

// Reference values: the exact Green function by direct integration of the
// Schroedinger equation, zero-energy modes, closed-form Green functions for
// the logstep and barrier models, Bessel series and the remainder-scaling fit.

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "lowk/errors.hpp"
#include "lowk/laurent.hpp"
#include "lowk/potential.hpp"

namespace lowk {

struct SolverConfig {
  std::optional<double> cutoff_left;   // positive distance: integration starts at -cutoff_left
  std::optional<double> cutoff_right;  // integration starts at +cutoff_right
  double ode_rel_tol = 1e-12;
  /// Added to real k. Zero applies the outgoing condition exactly.
  double epsilon_imag = 0.0;
  /// Target for the asymptotic boundary-condition error at the cutoffs.
  double bc_tol = 1e-11;
  double max_cutoff = 1e7;
  long max_steps = 50'000'000;
};

struct GreenSample {
  double x = 0.0;
  double y = 0.0;
  cplx k;
  cplx value;
  double cutoff_left = 0.0;
  double cutoff_right = 0.0;
  /// |G(eps) - G(eps/10)| when epsilon_imag > 0.
  std::optional<double> epsilon_delta;
};

namespace detail {

namespace odeint = boost::numeric::odeint;
using OdeState = std::array<cplx, 2>;

/// psi'' = (V_S - k^2) psi between discontinuities, psi' jumps by c psi
/// across a delta of weight c. States at a breakpoint are left limits.
class Schrodinger {
 public:
  Schrodinger(const PotentialModel& m, cplx k, const SolverConfig& cfg, bool renormalize = true)
      : model_(m), k2_(k * k), cfg_(cfg), renormalize_(renormalize) {
    if (!m.VS) throw Error(ErrorKind::InvalidSpec, "model '" + m.id + "' has no V_S(x)");
    for (const auto& d : m.discontinuities) jumps_.push_back(d);
    std::sort(jumps_.begin(), jumps_.end(), [](const auto& a, const auto& b) { return a.x0 < b.x0; });
  }

  /// Moves `s` from t0 to t1. `log_scale` accumulates the logarithm of the
  /// factors divided out by renormalization.
  void propagate(OdeState& s, double& log_scale, double t0, double t1) const {
    if (t0 == t1) return;
    const int dir = t1 > t0 ? 1 : -1;
    const double lo = std::min(t0, t1), hi = std::max(t0, t1);
    std::vector<Discontinuity> inside;
    for (const auto& d : jumps_) {
      if (d.x0 > lo && d.x0 < hi) inside.push_back(d);
    }
    if (dir < 0) std::reverse(inside.begin(), inside.end());
    if (dir > 0) apply_jump(s, t0, 1);
    double cur = t0;
    for (const auto& d : inside) {
      segment(s, log_scale, cur, d.x0);
      apply_jump(s, d.x0, dir);
      cur = d.x0;
    }
    segment(s, log_scale, cur, t1);
    if (dir < 0) apply_jump(s, t1, -1);
  }

  cplx k2() const { return k2_; }

 private:
  void apply_jump(OdeState& s, double at, int dir) const {
    for (const auto& d : jumps_) {
      if (d.x0 == at && d.jump != 0.0) s[1] += static_cast<double>(dir) * d.jump * s[0];
    }
  }

  void segment(OdeState& s, double& log_scale, double a, double b) const {
    if (a == b) return;
    const double lo_in = std::nextafter(std::min(a, b), kInfinity);
    const double hi_in = std::nextafter(std::max(a, b), -kInfinity);
    const auto& vs = model_.VS;
    const cplx k2 = k2_;
    auto rhs = [&](const OdeState& u, OdeState& du, double t) {
      const double v = vs(std::clamp(t, lo_in, hi_in));
      du[0] = u[1];
      du[1] = (v - k2) * u[0];
    };
    using Stepper = odeint::runge_kutta_fehlberg78<OdeState, double, OdeState, double>;
    auto stepper = odeint::make_controlled<Stepper>(cfg_.ode_rel_tol * 1e-3, cfg_.ode_rel_tol);
    const int dir = b > a ? 1 : -1;
    double t = a;
    double dt = dir * std::min(1e-2, std::abs(b - a));
    long steps = 0;
    while (dir * (b - t) > 0.0) {
      const bool last = dir * (t + dt - b) >= 0.0;
      if (last) dt = b - t;
      if (stepper.try_step(rhs, s, t, dt) == odeint::success) {
        if (last) t = b;
        if (renormalize_) renormalize(s, log_scale);
      }
      if (++steps > cfg_.max_steps) {
        throw Error(ErrorKind::NonconvergedODE, "step budget exhausted between " + std::to_string(a) + " and " +
                                                    std::to_string(b));
      }
      if (!(std::abs(dt) > 1e-14 * std::max(1.0, std::abs(t)))) {
        throw Error(ErrorKind::NonconvergedODE, "step size underflow near x = " + std::to_string(t));
      }
    }
  }

  static void renormalize(OdeState& s, double& log_scale) {
    const double n = std::abs(s[0]) + std::abs(s[1]);
    if (n > 1e8 || (n < 1e-8 && n > 0.0)) {
      s[0] /= n;
      s[1] /= n;
      log_scale += std::log(n);
    }
  }

  static constexpr double kInfinity = std::numeric_limits<double>::infinity();

  const PotentialModel& model_;
  std::vector<Discontinuity> jumps_;
  cplx k2_;
  SolverConfig cfg_;
  bool renormalize_;
};

/// Local wavenumber with Im >= 0; on the real axis the sign follows Re k.
inline cplx local_kappa(cplx k2, double vs, cplx k) {
  cplx kap = std::sqrt(k2 - vs);
  if (kap.imag() < 0.0) kap = -kap;
  if (std::abs(kap.imag()) <= 1e-300 && kap.real() * k.real() < 0.0) kap = -kap;
  return kap;
}

struct Derivs {
  double v, d1, d2;
};

inline Derivs vs_derivs(const PotentialModel& m, double z) {
  const double h = 1e-3 * std::max(1.0, std::abs(z));
  const double vp = m.VS(z + h), v0 = m.VS(z), vm = m.VS(z - h);
  return {v0, (vp - vm) / (2.0 * h), (vp - 2.0 * v0 + vm) / (h * h)};
}

/// Log-derivative of the solution decaying (or outgoing) toward `side`
/// (+1: +inf, -1: -inf), to first WKB order.
inline cplx boundary_log_derivative(const PotentialModel& m, double z, cplx k, int side) {
  const Derivs d = vs_derivs(m, z);
  const cplx kap = local_kappa(k * k, d.v, k);
  if (std::abs(kap) == 0.0) throw Error(ErrorKind::WronskianDegenerate, "zero local wavenumber at the cutoff");
  const cplx dkap = -d.d1 / (2.0 * kap);
  return static_cast<double>(side) * cplx{0.0, 1.0} * kap - dkap / (2.0 * kap);
}

/// Distance-doubling search for a cutoff where the boundary condition is
/// accurate to cfg.bc_tol.
inline double choose_cutoff(const PotentialModel& m, cplx k, double inner, int side, const SolverConfig& cfg) {
  double dist = 1.0;
  double evanescent = 0.0;  // integral of Im kappa over the stretch ending at X
  double covered = 0.0;
  for (;;) {
    const double X = inner + side * dist;
    const int n = 256;
    const double a = covered, b = dist, h = (b - a) / n;
    // only the evanescent stretch adjacent to the cutoff suppresses the error
    for (int i = 1; i <= n; ++i) {
      const cplx ka = local_kappa(k * k, m.VS(inner + side * (a + (i - 0.5) * h)), k);
      if (ka.imag() <= std::abs(ka.real())) evanescent = 0.0;
      else evanescent += ka.imag() * h;
    }
    covered = dist;
    const Derivs d = vs_derivs(m, X);
    const double kap = std::abs(local_kappa(k * k, d.v, k));
    double err = kap == 0.0 ? std::numeric_limits<double>::infinity()
                            : std::abs(d.d2) / std::pow(kap, 4) + std::pow(std::abs(d.d1) / std::pow(kap, 3), 2);
    err *= std::exp(-2.0 * evanescent);
    if (err < cfg.bc_tol) return X;
    if (dist * 2.0 > cfg.max_cutoff) {
      throw Error(ErrorKind::NonconvergedODE, "no cutoff within max_cutoff meets the boundary tolerance");
    }
    dist *= 2.0;
  }
}

inline void check_asymptotics(const PotentialModel& m) {
  if (m.vs_left_limit == -std::numeric_limits<double>::infinity() ||
      m.vs_right_limit == -std::numeric_limits<double>::infinity()) {
    throw Error(ErrorKind::UnsupportedAsymptotics, "V_S tends to -infinity");
  }
}

struct Solutions {
  // states and log scales of psi_left / psi_right at the requested points
  std::vector<OdeState> left, right;
  std::vector<double> left_log, right_log;
  double cutoff_left = 0.0, cutoff_right = 0.0;
};

/// Integrates psi_right down from its cutoff and psi_left up from its
/// cutoff, recording both at each of the ascending `points`.
inline Solutions solve_pair(const PotentialModel& m, cplx k, const std::vector<double>& points,
                            const SolverConfig& cfg) {
  check_asymptotics(m);
  double inner_hi = points.back(), inner_lo = points.front();
  for (const auto& d : m.discontinuities) {
    inner_hi = std::max(inner_hi, d.x0);
    inner_lo = std::min(inner_lo, d.x0);
  }
  Solutions out;
  out.cutoff_right = cfg.cutoff_right ? *cfg.cutoff_right : choose_cutoff(m, k, inner_hi, 1, cfg);
  out.cutoff_left = cfg.cutoff_left ? -*cfg.cutoff_left : choose_cutoff(m, k, inner_lo, -1, cfg);
  if (out.cutoff_right <= inner_hi || out.cutoff_left >= inner_lo) {
    throw Error(ErrorKind::InvalidSpec, "cutoffs must lie outside the points and breakpoints");
  }
  const Schrodinger ode(m, k, cfg);
  const std::size_t n = points.size();
  out.left.resize(n);
  out.right.resize(n);
  out.left_log.resize(n);
  out.right_log.resize(n);

  OdeState s{cplx{1.0, 0.0}, boundary_log_derivative(m, out.cutoff_right, k, 1)};
  double log_scale = 0.0, t = out.cutoff_right;
  for (std::size_t i = n; i-- > 0;) {
    ode.propagate(s, log_scale, t, points[i]);
    t = points[i];
    out.right[i] = s;
    out.right_log[i] = log_scale;
  }
  s = {cplx{1.0, 0.0}, boundary_log_derivative(m, out.cutoff_left, k, -1)};
  log_scale = 0.0;
  t = out.cutoff_left;
  for (std::size_t i = 0; i < n; ++i) {
    ode.propagate(s, log_scale, t, points[i]);
    t = points[i];
    out.left[i] = s;
    out.left_log[i] = log_scale;
  }
  return out;
}

inline cplx wronskian(const OdeState& l, const OdeState& r) { return l[0] * r[1] - l[1] * r[0]; }

inline cplx green_once(const PotentialModel& m, double x, double y, cplx k, const SolverConfig& cfg,
                       double* cut_l, double* cut_r) {
  const double lo = std::min(x, y), hi = std::max(x, y);
  std::vector<double> pts{lo};
  if (hi != lo) pts.push_back(hi);
  const Solutions sol = solve_pair(m, k, pts, cfg);
  if (cut_l) *cut_l = -sol.cutoff_left;
  if (cut_r) *cut_r = sol.cutoff_right;
  const std::size_t ilo = 0, ihi = pts.size() - 1;
  // Wronskian taken at y, the second argument
  const std::size_t im = y == lo ? ilo : ihi;
  const cplx W = wronskian(sol.left[im], sol.right[im]);
  const double wscale = std::abs(sol.left[im][0] * sol.right[im][1]) + std::abs(sol.left[im][1] * sol.right[im][0]);
  if (!(std::abs(W) > 1e-13 * wscale)) {
    throw Error(ErrorKind::WronskianDegenerate, "Wronskian vanishes: k is at or near a bound or half-bound state");
  }
  const double expo = sol.left_log[ilo] + sol.right_log[ihi] - sol.left_log[im] - sol.right_log[im];
  return sol.left[ilo][0] * sol.right[ihi][0] / W * std::exp(expo);
}

}  // namespace detail

/// Exact G_S(x, y; k) for Im k >= 0, k != 0. Either argument order is
/// accepted; the Wronskian is matched at y.
inline GreenSample green_exact(const PotentialModel& m, double x, double y, cplx k, const SolverConfig& cfg = {}) {
  if (k == cplx{0.0, 0.0}) throw Error(ErrorKind::InvalidSpec, "k must be nonzero");
  if (k.imag() < 0.0) throw Error(ErrorKind::InvalidSpec, "Im k must be non-negative");
  if (!std::isfinite(x) || !std::isfinite(y)) throw Error(ErrorKind::InvalidSpec, "x and y must be finite");
  GreenSample out;
  out.x = x;
  out.y = y;
  out.k = k;
  const bool promote = k.imag() == 0.0 && cfg.epsilon_imag > 0.0;
  const cplx keff = promote ? k + cplx{0.0, cfg.epsilon_imag} : k;
  out.value = detail::green_once(m, x, y, keff, cfg, &out.cutoff_left, &out.cutoff_right);
  if (promote) {
    const cplx k10 = k + cplx{0.0, cfg.epsilon_imag / 10.0};
    out.epsilon_delta = std::abs(detail::green_once(m, x, y, k10, cfg, nullptr, nullptr) - out.value);
  }
  return out;
}

/// W(z_i) / W(z_0) along ascending points, for constancy checks.
inline std::vector<cplx> wronskian_profile(const PotentialModel& m, cplx k, const std::vector<double>& points,
                                           const SolverConfig& cfg = {}) {
  if (points.empty() || !std::is_sorted(points.begin(), points.end())) {
    throw Error(ErrorKind::InvalidSpec, "points must be non-empty and ascending");
  }
  const auto sol = detail::solve_pair(m, k, points, cfg);
  std::vector<cplx> out;
  const cplx w0 = detail::wronskian(sol.left[0], sol.right[0]);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double expo = sol.left_log[i] + sol.right_log[i] - sol.left_log[0] - sol.right_log[0];
    out.push_back(detail::wronskian(sol.left[i], sol.right[i]) * std::exp(expo) / w0);
  }
  return out;
}

// ---------------------------------------------------------------------------
// zero-energy modes

/// psi_0^- -> 1 at -inf and psi_0^+ -> 1 at +inf, evaluated on demand from
/// checkpoints stored during one sweep; linear beyond the sweep range.
class ZeroEnergyModes {
 public:
  ZeroEnergyModes(const PotentialModel& m, const SolverConfig& cfg = {}) : model_(m), cfg_(cfg) {
    if (!m.VS) throw Error(ErrorKind::InvalidSpec, "model '" + m.id + "' has no V_S(x)");
    if (m.vs_left_limit != 0.0 || m.vs_right_limit != 0.0) {
      throw Error(ErrorKind::UnsupportedAsymptotics, "zero-energy modes need V_S -> 0 at both ends");
    }
    cfg_.ode_rel_tol = std::min(cfg_.ode_rel_tol, 1e-12);
    cutoff_ = find_cutoff();
    std::vector<double> marks;
    for (double z = -cutoff_; z < cutoff_; z += 0.25) marks.push_back(z);
    marks.push_back(cutoff_);
    for (const auto& d : m.discontinuities) marks.push_back(d.x0);
    std::sort(marks.begin(), marks.end());
    marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
    sweep(minus_, marks, true);
    sweep(plus_, marks, false);
    const double z0 = 0.0;
    const auto a = eval(minus_, z0), b = eval(plus_, z0);
    wronskian_ = a[0] * b[1] - a[1] * b[0];
    scale_ = std::abs(a[0] * b[1]) + std::abs(a[1] * b[0]) + std::abs(a[0] * b[0]);
  }

  double psi_minus(double z) const { return eval(minus_, z)[0]; }
  double dpsi_minus(double z) const { return eval(minus_, z)[1]; }
  double psi_plus(double z) const { return eval(plus_, z)[0]; }
  double dpsi_plus(double z) const { return eval(plus_, z)[1]; }
  double wronskian() const { return wronskian_; }
  double wronskian_scale() const { return scale_; }
  double cutoff() const { return cutoff_; }
  /// Smallest value of each mode over the sweep (-1 when the linear
  /// continuation turns negative), for positivity checks.
  double min_minus() const { return min_minus_; }
  double min_plus() const { return min_plus_; }

 private:
  struct Mode {
    std::vector<double> z;
    std::vector<std::array<double, 2>> s;
  };

  double find_cutoff() const {
    double inner = 1.0;
    for (const auto& d : model_.discontinuities) inner = std::max(inner, std::abs(d.x0) + 1.0);
    auto small = [&](double z) {
      return std::abs(model_.VS(z)) * (1.0 + z * z) < 1e-12 && std::abs(model_.VS(-z)) * (1.0 + z * z) < 1e-12;
    };
    for (double X = inner; X <= 1e4; X *= 2.0) {
      if (small(X) && small(1.5 * X) && small(2.0 * X)) return X;
    }
    throw Error(ErrorKind::NonconvergedODE, "V_S does not decay fast enough for a zero-energy cutoff");
  }

  void sweep(Mode& mode, const std::vector<double>& marks, bool from_left) {
    const detail::Schrodinger ode(model_, cplx{0.0, 0.0}, cfg_, false);
    mode.z = marks;
    mode.s.assign(marks.size(), {0.0, 0.0});
    detail::OdeState s{cplx{1.0, 0.0}, cplx{0.0, 0.0}};
    double ls = 0.0;
    double& low = from_left ? min_minus_ : min_plus_;
    low = 1.0;
    const std::size_t n = marks.size();
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t i = from_left ? j : n - 1 - j;
      const double from = j == 0 ? marks[i] : marks[from_left ? i - 1 : i + 1];
      ode.propagate(s, ls, from, marks[i]);
      mode.s[i] = {s[0].real(), s[1].real()};
      low = std::min(low, s[0].real());
    }
    // linear continuation past the sweep must stay positive
    const auto& end = from_left ? mode.s.back() : mode.s.front();
    if ((from_left && end[1] < 0.0) || (!from_left && end[1] > 0.0)) low = std::min(low, -1.0);
  }

  std::array<double, 2> eval(const Mode& mode, double z) const {
    if (z <= mode.z.front()) {
      const auto& s = mode.s.front();
      return {s[0] + s[1] * (z - mode.z.front()), s[1]};
    }
    if (z >= mode.z.back()) {
      const auto& s = mode.s.back();
      return {s[0] + s[1] * (z - mode.z.back()), s[1]};
    }
    const auto it = std::upper_bound(mode.z.begin(), mode.z.end(), z);
    std::size_t i = static_cast<std::size_t>(it - mode.z.begin()) - 1;
    if (i + 1 < mode.z.size() && mode.z[i + 1] - z < z - mode.z[i]) ++i;
    if (mode.z[i] == z) return mode.s[i];
    const detail::Schrodinger ode(model_, cplx{0.0, 0.0}, cfg_, false);
    detail::OdeState s{cplx{mode.s[i][0], 0.0}, cplx{mode.s[i][1], 0.0}};
    double ls = 0.0;
    ode.propagate(s, ls, mode.z[i], z);
    return {s[0].real(), s[1].real()};
  }

  const PotentialModel& model_;
  SolverConfig cfg_;
  double cutoff_ = 0.0;
  Mode minus_, plus_;
  double wronskian_ = 0.0, scale_ = 0.0;
  double min_minus_ = 1.0, min_plus_ = 1.0;
};

inline ZeroEnergyModes zero_energy_modes(const PotentialModel& m, const SolverConfig& cfg = {}) {
  return ZeroEnergyModes(m, cfg);
}

// ---------------------------------------------------------------------------
// Bessel functions and closed-form Green functions

/// J_nu(z) by the ascending series, for real nu and |z| <= 30.
inline cplx bessel_j(double nu, cplx z) {
  if (std::abs(z) > 30.0) throw Error(ErrorKind::BesselNonconvergence, "|z| above the series range");
  if (nu < 0.0 && nu == std::floor(nu)) {
    const double sign = static_cast<long long>(-nu) % 2 == 0 ? 1.0 : -1.0;
    return sign * bessel_j(-nu, z);
  }
  if (z == cplx{0.0, 0.0}) {
    if (nu == 0.0) return 1.0;
    if (nu > 0.0) return 0.0;
    throw Error(ErrorKind::BesselNonconvergence, "J_nu(0) is singular for negative non-integer nu");
  }
  const cplx half = z / 2.0;
  const cplx q = -half * half;
  cplx term = std::pow(half, nu) / std::tgamma(nu + 1.0);
  cplx sum = term;
  for (int m = 0; m < 500; ++m) {
    term *= q / (static_cast<double>(m + 1) * (nu + m + 1.0));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum) && m > std::abs(z)) return sum;
  }
  throw Error(ErrorKind::BesselNonconvergence, "series did not converge within 500 terms");
}

/// Closed-form G_S for the logstep model, y < 1 < x, k > 0.
inline cplx green_closed_ex5(double x, double y, double k, double alpha) {
  if (!(y < 1.0 && 1.0 < x)) throw Error(ErrorKind::InvalidSpec, "needs y < 1 < x");
  if (!(k > 0.0)) throw Error(ErrorKind::InvalidSpec, "needs k > 0");
  const double nu = (1.0 + alpha) / 2.0;
  const cplx i{0.0, 1.0};
  const cplx e = std::exp(i * (nu * std::numbers::pi));
  const cplx num = std::sqrt(x) * (bessel_j(nu, k * x) - e * bessel_j(-nu, k * x)) * std::exp(-i * k * (y - 1.0));
  const cplx den = k * (bessel_j(nu - 1.0, k) + i * bessel_j(nu, k) + e * (bessel_j(1.0 - nu, k) - i * bessel_j(-nu, k)));
  return num / den;
}

/// Closed-form G_S for the square barrier of height a^2 on (-1, 1).
inline cplx green_closed_ex6(double x, double y, cplx k, double a) {
  if (!(-1.0 < y && y <= x && x < 1.0)) throw Error(ErrorKind::InvalidSpec, "needs -1 < y <= x < 1");
  const cplx i{0.0, 1.0};
  const cplx p = std::sqrt(a * a - k * k);
  const cplx left = (p - i * k) * std::exp(p * (1.0 - x)) + (p + i * k) * std::exp(-p * (1.0 - x));
  const cplx right = (p + i * k) * std::exp(-p * (1.0 + y)) + (p - i * k) * std::exp(p * (1.0 + y));
  const cplx den = -4.0 * p * ((p * p - k * k) * std::sinh(2.0 * p) - 2.0 * i * p * k * std::cosh(2.0 * p));
  return left * right / den;
}

// ---------------------------------------------------------------------------
// remainder scaling

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<double> k;
  std::vector<double> remainder;  // |G_exact - truncated sum|
  std::vector<double> residual;   // log-space fit residuals
};

/// Least-squares slope of log|G_exact(k) - sum_{n<=N} (ik)^n g_n| against
/// log k for a precomputed g-series.
inline ScalingFit remainder_scaling_fit(const PotentialModel& m, double x, double y, const LaurentSeries& g, int N,
                                        const std::vector<double>& k_grid, const SolverConfig& cfg = {}) {
  if (k_grid.size() < 2) throw Error(ErrorKind::DegenerateFit, "need at least two k values");
  if (N > g.max_order()) throw Error(ErrorKind::OrderExceedsValidity, "series does not reach the requested order");
  ScalingFit fit;
  std::vector<double> lx, ly;
  for (double k : k_grid) {
    if (!(k > 0.0)) throw Error(ErrorKind::InvalidSpec, "k grid must be positive");
    const cplx exact = green_exact(m, x, y, cplx{k, 0.0}, cfg).value;
    cplx trunc{0.0, 0.0};
    const cplx ik{0.0, k};
    for (int n = g.min_order(); n <= N; ++n) trunc += g[n] * std::pow(ik, n);
    const double r = std::abs(exact - trunc);
    if (!(r > 1e-13 * std::abs(exact))) {
      throw Error(ErrorKind::DegenerateFit, "remainder below the noise floor at k = " + std::to_string(k));
    }
    fit.k.push_back(k);
    fit.remainder.push_back(r);
    lx.push_back(std::log(k));
    ly.push_back(std::log(r));
  }
  const double n = static_cast<double>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double den = n * sxx - sx * sx;
  if (!(std::abs(den) > 0.0)) throw Error(ErrorKind::DegenerateFit, "k grid has no spread");
  fit.slope = (n * sxy - sx * sy) / den;
  fit.intercept = (sy - fit.slope * sx) / n;
  for (std::size_t i = 0; i < lx.size(); ++i) fit.residual.push_back(ly[i] - fit.intercept - fit.slope * lx[i]);
  return fit;
}

}  // namespace lowk
