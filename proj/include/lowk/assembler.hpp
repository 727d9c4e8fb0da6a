#pragma once

// S - 1 series at x and y, the q_n integrals over [y, x] and the small-k
// expansion of the Green function, plus closed forms, the zero-energy route,
// the log form and the pole-resummed form.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "lowk/brackets.hpp"
#include "lowk/coeffgen.hpp"
#include "lowk/laurent.hpp"
#include "lowk/oracle.hpp"
#include "lowk/potential.hpp"

namespace lowk {

struct ExpansionConfig {
  QuadratureConfig quad;
  /// Used for the zero-energy modes of the generic route.
  SolverConfig solver;
  /// Mirror cases run on reflect(model) at (-y, -x); otherwise both ends
  /// are handled directly.
  bool use_reflection = true;
};

struct ExpansionResult {
  std::string model_id;
  CaseTag case_tag = CaseTag::i;
  bool reflected = false;
  bool generic = false;
  double x = 0.0;
  double y = 0.0;
  int N = 0;
  int validity = 0;
  Branch branch = Branch::Plus;
  LaurentSeries g;
  LaurentSeries s_x;
  LaurentSeries s_y;
  std::vector<double> q;  // q_0 ... q_{N - min_order(g)}
  std::vector<double> s_x_error;
  std::vector<double> s_y_error;
  std::vector<double> q_error;
  int refinements = 0;
  std::size_t panels = 0;

  double coeff(int n) const { return g[n].real(); }
};

namespace detail {

enum class SourceKind { A, B, Gamma };

/// One half of S - 1: the right-family tables (built from the left end) or
/// the left-family tables (built from the right end).
struct SeriesSource {
  SourceKind kind = SourceKind::A;
  Side side = Side::Right;
  const PotentialModel* model = nullptr;
};

inline int leading_order(SourceKind k) {
  switch (k) {
    case SourceKind::A: return 0;
    case SourceKind::B: return 1;
    case SourceKind::Gamma: return -1;
  }
  return 0;
}

inline SourceKind source_kind(EndKind e) {
  switch (e) {
    case EndKind::FiniteLimit: return SourceKind::A;
    case EndKind::PlusInfinity: return SourceKind::B;
    case EndKind::MinusInfinity: return SourceKind::Gamma;
  }
  return SourceKind::A;
}

inline int g_leading_order(int s_leading) {
  if (s_leading == 0) return -1;
  if (s_leading == 1) return -2;
  return 0;
}

inline std::vector<TermTable> source_tables(const SeriesSource& s, int K) {
  std::vector<TermTable> out;
  switch (s.kind) {
    case SourceKind::A:
      for (int n = 0; n <= K; ++n) out.push_back(a_terms(n, s.side));
      break;
    case SourceKind::B:
      for (int n = 1; n <= K; ++n) out.push_back(b_terms(n, s.side));
      break;
    case SourceKind::Gamma:
      for (int n = 1; n <= K + 2; ++n) out.push_back(btilde_terms(n, s.side));
      break;
  }
  return out;
}

/// Estimated absolute error of a table value at one node.
inline double table_error(const TermTable& t, BracketWorkspace& ws, std::size_t node) {
  double err = 0.0;
  for (const auto& term : t.terms) {
    if (term.signs.empty()) continue;
    double pref = std::abs(boost::rational_cast<double>(term.coeff));
    if (term.limit_exponent != 0) pref *= std::exp(-term.limit_exponent * limit_for(t, ws.model()));
    err += pref * ws.error(chain_for(term_spec(term, t.side, 0.0)));
  }
  return err * std::exp(t.point_sign * ws.grid().V()[node]);
}

struct SourceGrid {
  int lo = 0;
  std::vector<NodeVec> c;  // orders lo .. K
};

inline SourceGrid source_on_grid(const SeriesSource& s, const std::vector<TermTable>& tables, BracketWorkspace& ws,
                                 int K) {
  SourceGrid out;
  out.lo = leading_order(s.kind);
  const std::size_t nodes = ws.grid().nodes();
  if (s.kind != SourceKind::Gamma) {
    for (int n = out.lo; n <= K; ++n) out.c.push_back(table_on_grid(tables[static_cast<std::size_t>(n - out.lo)], ws));
    return out;
  }
  std::vector<NodeVec> bt;
  for (const auto& t : tables) bt.push_back(table_on_grid(t, ws));
  out.c.assign(static_cast<std::size_t>(K + 2), NodeVec(nodes, 0.0));
  std::vector<cplx> coeffs(bt.size());
  for (std::size_t i = 0; i < nodes; ++i) {
    // tail-end nodes where b~_1 vanishes never enter [y, x]
    if (!std::isfinite(bt[0][i]) || !(std::abs(bt[0][i]) >= kLeadingTolerance)) {
      for (auto& v : out.c) v[i] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    for (std::size_t n = 0; n < bt.size(); ++n) coeffs[n] = bt[n][i];
    const LaurentSeries gam = gamma_series(LaurentSeries(1, coeffs));
    for (int n = -1; n <= K; ++n) out.c[static_cast<std::size_t>(n + 1)][i] = gam[n].real();
  }
  return out;
}

/// Error estimates of a source's coefficients at one node.
inline std::vector<double> source_errors(const SeriesSource& s, const std::vector<TermTable>& tables,
                                         BracketWorkspace& ws, const SourceGrid& vals, std::size_t node, int K) {
  std::vector<double> err;
  if (s.kind != SourceKind::Gamma) {
    for (int n = vals.lo; n <= K; ++n) err.push_back(table_error(tables[static_cast<std::size_t>(n - vals.lo)], ws, node));
    return err;
  }
  double rel = 0.0;
  const NodeVec b1 = table_on_grid(tables[0], ws);
  for (const auto& t : tables) rel = std::max(rel, table_error(t, ws, node) / std::abs(b1[node]));
  for (int n = -1; n <= K; ++n) err.push_back(rel * std::abs(vals.c[static_cast<std::size_t>(n + 1)][node]) * (n + 2));
  return err;
}

struct AssembledSeries {
  int lo = 0;
  int top = 0;
  std::vector<double> sx, sy, sx_err, sy_err;
  std::vector<double> q, q_err;  // q_0 .. q_{top + 1}
  int rounds = 0;
  std::size_t panels = 0;
};

/// S - 1 = right source + left source (+ an optional (ik)^{-1} term) at x
/// and y through order K, with q_n = -int_y^x s_{n-1} when `want_q`.
inline AssembledSeries assemble_series(const SeriesSource& right, const SeriesSource& left,
                                       const std::function<double(double)>& extra_m1, double x, double y, int K,
                                       bool want_q, const QuadratureConfig& cfg) {
  const auto tab_r = source_tables(right, K);
  const auto tab_l = source_tables(left, K);
  const bool shared = right.model == left.model;

  GridRequest req_r, req_l;
  req_r.breakpoints = {y, x};
  req_l.breakpoints = {y, x};
  for (const auto& t : tab_r) add_to_request(req_r, t);
  for (const auto& t : tab_l) add_to_request(shared ? req_r : req_l, t);

  auto ws_r = std::make_unique<BracketWorkspace>(*right.model, req_r, cfg);
  std::unique_ptr<BracketWorkspace> ws_l_own;
  if (!shared) ws_l_own = std::make_unique<BracketWorkspace>(*left.model, req_l, cfg);
  BracketWorkspace& wr = *ws_r;
  BracketWorkspace& wl = shared ? *ws_r : *ws_l_own;

  int lo = std::min(leading_order(right.kind), leading_order(left.kind));
  if (extra_m1) lo = -1;
  if (K < lo) throw Error(ErrorKind::InvalidSpec, "requested order lies below the leading order of S - 1");
  const std::size_t count = static_cast<std::size_t>(K - lo + 1);

  AssembledSeries out;
  out.lo = lo;
  out.top = K;
  for (;;) {
    const SourceGrid R = source_on_grid(right, tab_r, wr, K);
    const SourceGrid L = source_on_grid(left, tab_l, wl, K);
    const Grid& G = wr.grid();
    const std::size_t nx_r = wr.node_at(x), ny_r = wr.node_at(y);
    const std::size_t nx_l = wl.node_at(x), ny_l = wl.node_at(y);

    out.sx.assign(count, 0.0);
    out.sy.assign(count, 0.0);
    out.sx_err.assign(count, 0.0);
    out.sy_err.assign(count, 0.0);
    auto add_point = [&](const SourceGrid& src, std::size_t nx, std::size_t ny) {
      for (std::size_t j = 0; j < src.c.size(); ++j) {
        const std::size_t slot = static_cast<std::size_t>(src.lo - lo) + j;
        out.sx[slot] += src.c[j][nx];
        out.sy[slot] += src.c[j][ny];
      }
    };
    add_point(R, nx_r, ny_r);
    add_point(L, nx_l, ny_l);
    if (extra_m1) {
      out.sx[0] += extra_m1(x);
      out.sy[0] += extra_m1(y);
    }

    if (want_q && x > y) {
      const std::size_t by = *G.boundary_of(y), bx = *G.boundary_of(x);
      std::vector<NodeVec> s(count, NodeVec(G.nodes(), 0.0));
      for (std::size_t p = by; p < bx; ++p) {
        for (int j = 0; j < cheb::kNodes; ++j) {
          const std::size_t i = Grid::index(p, j);
          const double z = G.z()[i];
          for (std::size_t k = 0; k < R.c.size(); ++k) s[static_cast<std::size_t>(R.lo - lo) + k][i] += R.c[k][i];
          for (std::size_t k = 0; k < L.c.size(); ++k) {
            s[static_cast<std::size_t>(L.lo - lo) + k][i] += shared ? L.c[k][i] : wl.grid().interpolate(L.c[k], z);
          }
          if (extra_m1) s[0][i] += extra_m1(z);
        }
      }
      if (!shared) {
        const std::size_t byl = *wl.grid().boundary_of(y), bxl = *wl.grid().boundary_of(x);
        for (const auto& v : L.c) wl.check_resolution(v, byl, bxl);
      }
      const auto& basis = cheb::Basis::get();
      out.q.assign(count + static_cast<std::size_t>(lo + 1), 0.0);
      out.q_err.assign(out.q.size(), 0.0);
      for (std::size_t k = 0; k < count; ++k) {
        wr.check_resolution(s[k], by, bx);
        double sum = 0.0, mass = 0.0;
        double g[cheb::kNodes], ag[cheb::kNodes];
        for (std::size_t p = by; p < bx; ++p) {
          for (int j = 0; j < cheb::kNodes; ++j) {
            const std::size_t i = Grid::index(p, j);
            g[j] = s[k][i] * G.jac()[i];
            ag[j] = std::abs(g[j]);
          }
          sum += basis.integrate(g);
          mass += basis.integrate(ag);
        }
        const std::size_t n = static_cast<std::size_t>(lo) + k + 1;  // q_n = -int s_{n-1}
        out.q[n] = -sum;
        out.q_err[n] = cfg.rel_tol * mass;
      }
    } else if (want_q) {
      out.q.assign(count + static_cast<std::size_t>(lo + 1), 0.0);
      out.q_err.assign(out.q.size(), 0.0);
    }

    const bool again = wr.needs_refinement() || (!shared && wl.needs_refinement());
    if (!again) {
      const auto er_x = source_errors(right, tab_r, wr, R, nx_r, K);
      const auto er_y = source_errors(right, tab_r, wr, R, ny_r, K);
      const auto el_x = source_errors(left, tab_l, wl, L, nx_l, K);
      const auto el_y = source_errors(left, tab_l, wl, L, ny_l, K);
      for (std::size_t j = 0; j < er_x.size(); ++j) {
        out.sx_err[static_cast<std::size_t>(R.lo - lo) + j] += er_x[j];
        out.sy_err[static_cast<std::size_t>(R.lo - lo) + j] += er_y[j];
      }
      for (std::size_t j = 0; j < el_x.size(); ++j) {
        out.sx_err[static_cast<std::size_t>(L.lo - lo) + j] += el_x[j];
        out.sy_err[static_cast<std::size_t>(L.lo - lo) + j] += el_y[j];
      }
      out.rounds = wr.rounds() + (shared ? 0 : wl.rounds());
      out.panels = G.panels();
      return out;
    }
    if (wr.needs_refinement()) wr.refine();
    if (!shared && wl.needs_refinement()) wl.refine();
  }
}

inline LaurentSeries to_series(int lo, const std::vector<double>& v, std::size_t len) {
  std::vector<cplx> c;
  for (std::size_t i = 0; i < len; ++i) c.emplace_back(v[i], 0.0);
  return LaurentSeries(lo, std::move(c));
}

/// g = exp(sum q_n (ik)^n) / (2ik sqrt((S_x - 1)(S_y - 1))) through order N.
inline void assemble_g(ExpansionResult& r, const AssembledSeries& a, int N) {
  const int m = g_leading_order(a.lo);
  const std::size_t len = static_cast<std::size_t>(a.top - a.lo + 1);
  r.s_x = to_series(a.lo, a.sx, len);
  r.s_y = to_series(a.lo, a.sy, len);
  r.s_x_error = a.sx_err;
  r.s_y_error = a.sy_err;
  r.branch = m == -1 ? Branch::Plus : Branch::Minus;
  const LaurentSeries prod = r.s_x * r.s_y;
  if (!(std::abs(prod.leading()) >= kLeadingTolerance)) {
    throw Error(ErrorKind::BranchAmbiguity, "leading coefficient of (1 - S(x))(1 - S(y)) is numerically zero");
  }
  const LaurentSeries root = ls_sqrt(prod, r.branch);
  const LaurentSeries den = cplx{2.0, 0.0} * (LaurentSeries::monomial(cplx{1.0, 0.0}, 1) * root);
  const LaurentSeries pre = ls_invert(den);
  const std::size_t nq = static_cast<std::size_t>(N - m + 1);
  r.q.assign(a.q.begin(), a.q.begin() + static_cast<std::ptrdiff_t>(nq));
  r.q_error.assign(a.q_err.begin(), a.q_err.begin() + static_cast<std::ptrdiff_t>(nq));
  const LaurentSeries Q = to_series(0, r.q, nq);
  r.g = (pre * ls_exp(Q)).truncated(N);
  if (!(std::abs(r.g.leading()) >= kLeadingTolerance)) {
    throw Error(ErrorKind::BranchAmbiguity, "leading Green-function coefficient is numerically zero");
  }
  r.N = N;
  r.refinements = a.rounds;
  r.panels = a.panels;
}

inline void check_points(double x, double y) {
  if (!std::isfinite(x) || !std::isfinite(y)) throw Error(ErrorKind::InvalidSpec, "x and y must be finite");
  if (x < y) throw Error(ErrorKind::InvalidSpec, "x must not be smaller than y");
}

inline void check_order(int N, int validity, int lowest) {
  if (N > validity) {
    throw Error(ErrorKind::OrderExceedsValidity,
                "order " + std::to_string(N) + " exceeds the validity order N=" + std::to_string(validity));
  }
  if (N < lowest) {
    throw Error(ErrorKind::InvalidSpec, "order " + std::to_string(N) + " lies below the leading order " +
                                            std::to_string(lowest));
  }
}

inline void check_fokker_planck(const PotentialModel& m) {
  if (m.vs_only || !m.V) {
    throw Error(ErrorKind::InvalidSpec, "model '" + m.id + "' has no V(x); use the zero-energy route");
  }
}

/// Both ends handled directly from the model's own endpoint classes.
inline ExpansionResult green_series_direct(const PotentialModel& m, double x, double y, int N,
                                           const ExpansionConfig& cfg) {
  const SeriesSource right{source_kind(m.left.kind), Side::Right, &m};
  const SeriesSource left{source_kind(m.right.kind), Side::Left, &m};
  const int lo = std::min(leading_order(right.kind), leading_order(left.kind));
  const int mg = g_leading_order(lo);
  const int K = lo + N - mg;
  const AssembledSeries a = assemble_series(right, left, {}, x, y, K, true, cfg.quad);
  ExpansionResult r;
  r.model_id = m.id;
  r.case_tag = classify(m).tag;
  r.x = x;
  r.y = y;
  assemble_g(r, a, N);
  return r;
}

}  // namespace detail

/// Coefficients s_n(x) of S(x, k) - 1 through order N.
inline LaurentSeries s_series(const PotentialModel& m, double x, int N, const ExpansionConfig& cfg = {}) {
  detail::check_fokker_planck(m);
  if (!std::isfinite(x)) throw Error(ErrorKind::InvalidSpec, "x must be finite");
  const int validity = max_valid_order(m);
  if (N > validity) {
    throw Error(ErrorKind::OrderExceedsValidity,
                "order " + std::to_string(N) + " exceeds the validity order N=" + std::to_string(validity));
  }
  const detail::SeriesSource right{detail::source_kind(m.left.kind), Side::Right, &m};
  const detail::SeriesSource left{detail::source_kind(m.right.kind), Side::Left, &m};
  const auto a = detail::assemble_series(right, left, {}, x, x, N, false, cfg.quad);
  return detail::to_series(a.lo, a.sx, static_cast<std::size_t>(a.top - a.lo + 1));
}

/// q_0 .. q_{N+1} with q_n = -int_y^x s_{n-1}(z) dz.
inline std::vector<double> q_values(const PotentialModel& m, double x, double y, int N, const ExpansionConfig& cfg = {}) {
  detail::check_fokker_planck(m);
  detail::check_points(x, y);
  const int validity = max_valid_order(m);
  if (N > validity) {
    throw Error(ErrorKind::OrderExceedsValidity,
                "order " + std::to_string(N) + " exceeds the validity order N=" + std::to_string(validity));
  }
  const detail::SeriesSource right{detail::source_kind(m.left.kind), Side::Right, &m};
  const detail::SeriesSource left{detail::source_kind(m.right.kind), Side::Left, &m};
  const auto a = detail::assemble_series(right, left, {}, x, y, N, true, cfg.quad);
  std::vector<double> q(a.q.begin(), a.q.end());
  q.resize(static_cast<std::size_t>(N + 2), 0.0);
  return q;
}

/// Small-k expansion sum_n (ik)^n g_n of G_S(x, y; k) through order N.
inline ExpansionResult green_series(const PotentialModel& m, double x, double y, int N, const ExpansionConfig& cfg = {}) {
  detail::check_fokker_planck(m);
  detail::check_points(x, y);
  const Classification cls = classify(m);
  const int validity = max_valid_order(m);
  detail::check_order(N, validity, lowest_order(cls.tag));
  ExpansionResult r;
  if (cls.reflected && cfg.use_reflection) {
    const PotentialModel mirror = reflect(m);
    r = detail::green_series_direct(mirror, -y, -x, N, cfg);
    // S(x) of the model is S(-x) of its mirror image
    std::swap(r.s_x, r.s_y);
    std::swap(r.s_x_error, r.s_y_error);
    r.reflected = true;
  } else {
    r = detail::green_series_direct(m, x, y, N, cfg);
  }
  r.model_id = m.id;
  r.case_tag = cls.tag;
  r.x = x;
  r.y = y;
  r.validity = validity;
  return r;
}

// ---------------------------------------------------------------------------
// zero-energy route

/// Expansion for V_S vanishing at both ends in the generic case, built from
/// V_(+/-) = -2 log psi_0^(+/-).
inline ExpansionResult generic_expansion(const PotentialModel& m, double x, double y, int N,
                                         const ExpansionConfig& cfg = {}) {
  detail::check_points(x, y);
  const int validity = max_valid_order_generic(m);
  detail::check_order(N, validity, 0);
  auto modes = std::make_shared<const ZeroEnergyModes>(m, cfg.solver);
  if (!(std::abs(modes->wronskian()) >= 1e-8 * modes->wronskian_scale())) {
    throw Error(ErrorKind::ExceptionalCase, "zero-energy solutions are dependent; the model belongs to case i");
  }
  if (!(modes->min_minus() > 0.0) || !(modes->min_plus() > 0.0)) {
    throw Error(ErrorKind::NegativeZeroMode, "a zero-energy solution is not positive on the real line");
  }

  PotentialModel vm;
  vm.id = m.id + "~V-";
  vm.V = [modes](double z) { return -2.0 * std::log(modes->psi_minus(z)); };
  vm.f = [modes](double z) { return modes->dpsi_minus(z) / modes->psi_minus(z); };
  vm.VS = m.VS;
  vm.discontinuities = m.discontinuities;
  vm.left = EndpointClass::finite(0.0, m.left.decay.value_or(Decay::exponential()));
  vm.right = EndpointClass::minus_infinity(Decay::log_growth(2.0));

  PotentialModel vp;
  vp.id = m.id + "~V+";
  vp.V = [modes](double z) { return -2.0 * std::log(modes->psi_plus(z)); };
  vp.f = [modes](double z) { return modes->dpsi_plus(z) / modes->psi_plus(z); };
  vp.VS = m.VS;
  vp.discontinuities = m.discontinuities;
  vp.left = EndpointClass::minus_infinity(Decay::log_growth(2.0));
  vp.right = EndpointClass::finite(0.0, m.right.decay.value_or(Decay::exponential()));

  const detail::SeriesSource right{detail::SourceKind::A, Side::Right, &vm};
  const detail::SeriesSource left{detail::SourceKind::A, Side::Left, &vp};
  const std::function<double(double)> sm1 = [modes](double z) {
    return 0.5 * (modes->dpsi_minus(z) / modes->psi_minus(z) - modes->dpsi_plus(z) / modes->psi_plus(z));
  };
  const auto a = detail::assemble_series(right, left, sm1, x, y, N - 1, true, cfg.quad);
  ExpansionResult r;
  r.model_id = m.id;
  r.case_tag = CaseTag::iii;
  r.generic = true;
  r.x = x;
  r.y = y;
  r.validity = validity;
  detail::assemble_g(r, a, N);
  return r;
}

// ---------------------------------------------------------------------------
// closed forms

/// Variants of the case-v g_2 formula: the bracket multiplying [-]^y is
/// [+]_y^x in the derivation and [+]_y^inf as printed.
enum class CaseVG2 { Derived, AsPrinted };

namespace detail {

inline BracketSpec plain(const char* s, double lo, double hi) { return {BracketKind::Plain, parse_signs(s), lo, hi}; }
inline BracketSpec angle_left(const char* s, double hi) { return {BracketKind::AngleLeft, parse_signs(s), -kInf, hi}; }
inline BracketSpec angle_right(const char* s, double lo) { return {BracketKind::AngleRight, parse_signs(s), lo, kInf}; }

}  // namespace detail

/// Several brackets on one shared workspace.
inline std::vector<double> eval_brackets(const std::vector<BracketSpec>& specs, const PotentialModel& m,
                                         const QuadratureConfig& cfg = {}) {
  GridRequest req;
  for (const auto& s : specs) {
    validate(s, m);
    add_to_request(req, s);
  }
  return with_refinement(m, req, cfg, [&](BracketWorkspace& ws) {
    std::vector<double> out;
    for (const auto& s : specs) {
      if (s.lower == s.upper) {
        out.push_back(0.0);
        continue;
      }
      const Chain c = chain_for(s);
      out.push_back(ws.at(c, c.anchor.dir == Direction::FromLeft ? s.upper : s.lower));
    }
    return out;
  });
}

/// Direct evaluation of the printed closed form for g_which in the model's
/// case.
inline double closed_form_g(const PotentialModel& model, double x, double y, CaseTag tag, int which,
                            const QuadratureConfig& cfg = {}, CaseVG2 variant = CaseVG2::Derived) {
  detail::check_fokker_planck(model);
  detail::check_points(x, y);
  const Classification cls = classify(model);
  if (cls.tag != tag) {
    throw Error(ErrorKind::InvalidSpec, std::string("model is in case ") + to_string(cls.tag) + ", not " + to_string(tag));
  }
  if (cls.reflected) {
    const PotentialModel mirror = reflect(model);
    return closed_form_g(mirror, -y, -x, tag, which, cfg, variant);
  }
  using detail::angle_left;
  using detail::angle_right;
  using detail::plain;
  const PotentialModel& m = model;
  const double eh = std::exp(-(m.V(x) + m.V(y)) / 2.0);
  auto none = [&]() -> double {
    throw Error(ErrorKind::NoClosedForm, std::string("no printed closed form for g_") + std::to_string(which) +
                                             " in case " + to_string(tag));
  };

  switch (tag) {
    case CaseTag::i: {
      const double E = std::exp(-m.left.limit()) + std::exp(-m.right.limit());
      if (which == -1) return eh / E;
      if (which != 0) return none();
      const auto b = eval_brackets({angle_left("-", x), angle_right("-", x), angle_left("-", y), angle_right("-", y),
                                    plain("+", y, x)},
                                   m, cfg);
      return eh / 2.0 * ((b[0] + b[1] + b[2] + b[3]) / (E * E) + b[4]);
    }
    case CaseTag::ii: {
      const double v1 = m.left.limit();
      if (which == -1) return eh * std::exp(v1);
      if (which != 0) return none();
      const auto b = eval_brackets({angle_left("-", x), plain("-", x, kInf), angle_left("-", y), plain("-", y, kInf),
                                    plain("+", y, x)},
                                   m, cfg);
      return eh / 2.0 * (std::exp(2.0 * v1) * (b[0] + b[1] + b[2] + b[3]) + b[4]);
    }
    case CaseTag::iii: {
      if (which == 0) return -eh * eval_brackets({plain("+", x, kInf)}, m, cfg)[0];
      if (which != 1) return none();
      const auto b = eval_brackets({plain("+", x, kInf), plain("+", y, kInf)}, m, cfg);
      return -eh * std::exp(-m.left.limit()) * b[0] * b[1];
    }
    case CaseTag::iv: {
      if (which == -2) return -eh / eval_brackets({plain("-", -kInf, kInf)}, m, cfg)[0];
      if (which != 0) return none();
      const auto b = eval_brackets({plain("-", -kInf, kInf), plain("--+", -kInf, x), plain("+--", x, kInf),
                                    plain("--+", -kInf, y), plain("+--", y, kInf), plain("+", y, x)},
                                   m, cfg);
      return eh * (-(b[1] + b[2] + b[3] + b[4]) / (b[0] * b[0]) + b[5] / 2.0);
    }
    case CaseTag::v: {
      if (which == 0) return -eh * eval_brackets({plain("+", x, kInf)}, m, cfg)[0];
      if (which != 2) return none();
      const auto b = eval_brackets({plain("-", -kInf, x), plain("+", x, kInf), plain("-", -kInf, y), plain("+", y, kInf),
                                    plain("+", y, x), plain("-+", y, x), plain("-++", x, kInf)},
                                   m, cfg);
      const double with_y = variant == CaseVG2::Derived ? b[4] : b[3];
      return eh * ((b[0] * b[1] + b[2] * with_y + b[5]) * b[1] + 2.0 * b[6]);
    }
    case CaseTag::vi: {
      if (which != 0) return none();
      const auto b = eval_brackets({plain("+", -kInf, y), plain("+", x, kInf), plain("+", -kInf, kInf)}, m, cfg);
      return -eh * b[0] * b[1] / b[2];
    }
  }
  return none();
}

/// (case, index) pairs with a printed closed form.
inline std::vector<std::pair<CaseTag, int>> closed_form_pairs() {
  return {{CaseTag::i, -1},  {CaseTag::i, 0},  {CaseTag::ii, -1}, {CaseTag::ii, 0}, {CaseTag::iii, 0},
          {CaseTag::iii, 1}, {CaseTag::iv, -2}, {CaseTag::iv, 0}, {CaseTag::v, 0},  {CaseTag::v, 2},
          {CaseTag::vi, 0}};
}

// ---------------------------------------------------------------------------
// derived forms

/// p_1 .. p_{N - m} with g = g_m (ik)^m exp(sum p_n (ik)^n).
inline std::vector<double> log_form(const ExpansionResult& r) {
  if (!(std::abs(r.g.leading()) >= kLeadingTolerance)) {
    throw Error(ErrorKind::ZeroLeadingCoefficient, "leading Green-function coefficient is zero");
  }
  const LaurentSeries l = ls_log(r.g);
  std::vector<double> p;
  for (int n = 1; n <= l.max_order(); ++n) p.push_back(l[n].real());
  return p;
}

/// Partial sum sum_{n <= N} (ik)^n g_n.
inline cplx truncated_sum(const LaurentSeries& g, int N, cplx k) {
  const cplx ik = cplx{0.0, 1.0} * k;
  cplx s{0.0, 0.0};
  for (int n = g.min_order(); n <= std::min(N, g.max_order()); ++n) s += g[n] * std::pow(ik, n);
  return s;
}

/// g_m (ik)^m exp(sum_{n=1}^{P} p_n (ik)^n).
inline cplx log_form_value(const ExpansionResult& r, int P, cplx k) {
  const auto p = log_form(r);
  const cplx ik = cplx{0.0, 1.0} * k;
  cplx e{0.0, 0.0};
  for (int n = 1; n <= std::min(P, static_cast<int>(p.size())); ++n) e += p[static_cast<std::size_t>(n - 1)] * std::pow(ik, n);
  return r.g.leading() * std::pow(ik, r.g.min_order()) * std::exp(e);
}

/// (ik)^{-2} g_{-2} + g_0 / (1 - (ik)^2 g_2 / g_0).
inline cplx pole_resummed(double g_m2, double g_0, double g_2, cplx k) {
  if (g_0 == 0.0) throw Error(ErrorKind::DivisionByZero, "g_0 vanishes");
  const cplx ik2 = -k * k;
  const cplx den = 1.0 - ik2 * g_2 / g_0;
  if (std::abs(den) == 0.0) throw Error(ErrorKind::DivisionByZero, "k sits on the resummed pole");
  return g_m2 / ik2 + g_0 / den;
}

/// Remainder scaling of the order-N truncation against the ODE oracle.
inline ScalingFit remainder_scaling_fit(const PotentialModel& m, double x, double y, int N,
                                        const std::vector<double>& k_grid, const ExpansionConfig& cfg = {}) {
  const ExpansionResult r = m.vs_only ? generic_expansion(m, x, y, N, cfg) : green_series(m, x, y, N, cfg);
  return remainder_scaling_fit(m, x, y, r.g, N, k_grid, cfg.solver);
}

// ---------------------------------------------------------------------------
// serialization

inline nlohmann::json series_json(const LaurentSeries& s) {
  nlohmann::json j;
  j["min_order"] = s.min_order();
  j["max_order"] = s.max_order();
  nlohmann::json c = nlohmann::json::array();
  for (int n = s.min_order(); n <= s.max_order(); ++n) c.push_back(s[n].real());
  j["coeffs"] = c;
  return j;
}

inline nlohmann::json to_json(const ExpansionResult& r) {
  nlohmann::json j;
  j["model"] = r.model_id;
  j["case"] = to_string(r.case_tag);
  j["reflected"] = r.reflected;
  j["generic"] = r.generic;
  j["x"] = r.x;
  j["y"] = r.y;
  j["N"] = r.N;
  if (r.validity == kUnboundedOrder) j["validity"] = "unbounded";
  else j["validity"] = r.validity;
  j["branch"] = r.branch == Branch::Plus ? "plus" : "minus";
  j["g"] = series_json(r.g);
  j["s_x"] = series_json(r.s_x);
  j["s_y"] = series_json(r.s_y);
  j["q"] = r.q;
  j["diagnostics"] = {{"s_x_error", r.s_x_error},
                      {"s_y_error", r.s_y_error},
                      {"q_error", r.q_error},
                      {"refinements", r.refinements},
                      {"panels", r.panels}};
  return j;
}

}  // namespace lowk
