#pragma once

// Ordered-simplex ("bracket") integrals
//
//   [s1 ... sn]_a^b = int_{a <= z1 <= ... <= zn <= b} prod_j exp(s_j V(z_j)),
//
// plus the angle variants in which the first (AngleLeft) or last
// (AngleRight) factor is replaced by 2 e^{-Vlim} sinh(Vlim - V(z)).
//
// Evaluation is innermost-first cumulative integration on a composite
// Chebyshev-Lobatto grid. Semi-infinite ranges are truncated according to
// the model's declared tail decay. One grid is shared by every bracket of a
// workspace and refined until all of them are resolved.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "lowk/chebyshev.hpp"
#include "lowk/errors.hpp"
#include "lowk/potential.hpp"

namespace lowk {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class BracketKind { Plain, AngleLeft, AngleRight };

struct BracketSpec {
  BracketKind kind = BracketKind::Plain;
  std::vector<int> signs;  // +1 / -1; the sinh slot of an angle bracket holds -1
  double lower = -kInf;
  double upper = kInf;

  /// Compact notation, e.g. "<-++]" or "[--+]".
  std::string notation() const {
    std::string s = kind == BracketKind::AngleLeft ? "<" : "[";
    for (int v : signs) s += v > 0 ? '+' : '-';
    s += kind == BracketKind::AngleRight ? ">" : "]";
    return s;
  }
};

/// Parses "-++" style sign strings.
inline std::vector<int> parse_signs(const std::string& text) {
  std::vector<int> out;
  for (char c : text) {
    if (c == '+') out.push_back(1);
    else if (c == '-') out.push_back(-1);
    else if (c != ' ' && c != ',') throw Error(ErrorKind::InvalidSpec, "bad sign character in '" + text + "'");
  }
  if (out.empty()) throw Error(ErrorKind::InvalidSpec, "empty sign string");
  return out;
}

struct QuadratureConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_depth = 40;
  double truncation_tail_tol = 1e-14;
};

struct BracketValue {
  double value = 0.0;
  double error = 0.0;
};

// ---------------------------------------------------------------------------
// grid

enum class MapKind { Linear, LogLeft, LogRight };

/// One Chebyshev panel. Linear panels span z in [a, b]. Log panels span a
/// parameter s in [a, b] with z = z0 + ell (e^s - 1) (LogRight) or
/// z = z0 - ell (e^s - 1) (LogLeft); nodes are always ascending in z.
struct Panel {
  MapKind map = MapKind::Linear;
  double a = 0.0;
  double b = 0.0;
  double z0 = 0.0;
  double ell = 1.0;

  double z_at(double t, double* jac = nullptr) const {
    const double half = 0.5 * (b - a);
    switch (map) {
      case MapKind::Linear:
        if (jac) *jac = half;
        return a + (t + 1.0) * half;
      case MapKind::LogRight: {
        const double s = a + (t + 1.0) * half;
        if (jac) *jac = ell * std::exp(s) * half;
        return z0 + ell * std::expm1(s);
      }
      case MapKind::LogLeft: {
        const double s = b - (t + 1.0) * half;
        if (jac) *jac = ell * std::exp(s) * half;
        return z0 - ell * std::expm1(s);
      }
    }
    return 0.0;
  }

  double t_of(double z) const {
    switch (map) {
      case MapKind::Linear: return 2.0 * (z - a) / (b - a) - 1.0;
      case MapKind::LogRight: return 2.0 * (std::log1p((z - z0) / ell) - a) / (b - a) - 1.0;
      case MapKind::LogLeft: return 2.0 * (b - std::log1p((z0 - z) / ell)) / (b - a) - 1.0;
    }
    return 0.0;
  }

  std::pair<Panel, Panel> halves() const {
    const double m = 0.5 * (a + b);
    Panel l = *this, r = *this;
    l.b = m;
    r.a = m;
    if (map == MapKind::LogLeft) std::swap(l, r);  // keep ascending z order
    return {l, r};
  }
};

using NodeVec = std::vector<double>;

class Grid {
 public:
  Grid() = default;
  Grid(const PotentialModel& model, std::vector<Panel> panels) : model_(&model), panels_(std::move(panels)) {
    rebuild();
  }

  std::size_t panels() const { return panels_.size(); }
  std::size_t nodes() const { return panels_.size() * cheb::kNodes; }
  const Panel& panel(std::size_t p) const { return panels_[p]; }
  static std::size_t index(std::size_t p, int j) { return p * cheb::kNodes + static_cast<std::size_t>(j); }

  const NodeVec& z() const { return z_; }
  const NodeVec& jac() const { return jac_; }
  const NodeVec& V() const { return V_; }

  double left_end() const { return z_.front(); }
  double right_end() const { return z_.back(); }
  double boundary(std::size_t b) const {
    return b == panels_.size() ? z_.back() : z_[index(b, 0)];
  }

  /// Boundary index whose position is exactly z, if any.
  std::optional<std::size_t> boundary_of(double z) const {
    for (std::size_t b = 0; b <= panels_.size(); ++b) {
      if (boundary(b) == z) return b;
    }
    return std::nullopt;
  }

  /// Panel containing z (ties go to the right-hand panel).
  std::size_t locate(double z) const {
    std::size_t lo = 0, hi = panels_.size();
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (boundary(mid) <= z) lo = mid;
      else hi = mid;
    }
    return lo;
  }

  double interpolate(const NodeVec& values, double zq) const {
    const std::size_t p = locate(zq);
    const double t = std::clamp(panels_[p].t_of(zq), -1.0, 1.0);
    return cheb::Basis::get().interpolate(std::span<const double>(values.data() + index(p, 0), cheb::kNodes), t);
  }

  /// Splits every flagged panel in two.
  void split(const std::vector<char>& flags) {
    std::vector<Panel> next;
    next.reserve(panels_.size() * 2);
    for (std::size_t p = 0; p < panels_.size(); ++p) {
      if (flags[p]) {
        auto [l, r] = panels_[p].halves();
        next.push_back(l);
        next.push_back(r);
      } else {
        next.push_back(panels_[p]);
      }
    }
    panels_ = std::move(next);
    rebuild();
  }

 private:
  void rebuild() {
    const auto& t = cheb::Basis::get().nodes();
    z_.assign(nodes(), 0.0);
    jac_.assign(nodes(), 0.0);
    V_.assign(nodes(), 0.0);
    for (std::size_t p = 0; p < panels_.size(); ++p) {
      for (int j = 0; j < cheb::kNodes; ++j) {
        double J = 0.0;
        const double zz = panels_[p].z_at(t[j], &J);
        z_[index(p, j)] = zz;
        jac_[index(p, j)] = J;
      }
      // pin panel ends to the exact boundary values so breakpoints compare equal
      if (panels_[p].map == MapKind::Linear) {
        z_[index(p, 0)] = panels_[p].a;
        z_[index(p, cheb::kDegree)] = panels_[p].b;
      }
    }
    for (std::size_t p = 1; p < panels_.size(); ++p) z_[index(p, 0)] = z_[index(p - 1, cheb::kDegree)];
    for (std::size_t i = 0; i < nodes(); ++i) V_[i] = model_->V(z_[i]);
  }

  const PotentialModel* model_ = nullptr;
  std::vector<Panel> panels_;
  NodeVec z_, jac_, V_;
};

// ---------------------------------------------------------------------------
// tails

namespace detail {

/// Weight whose tail controls truncation at one end.
inline double tail_weight(const EndpointClass& end, double V) {
  switch (end.kind) {
    case EndKind::FiniteLimit: return std::abs(V - end.limit());
    case EndKind::PlusInfinity: return std::exp(-V);
    case EndKind::MinusInfinity: return std::exp(V);
  }
  return 0.0;
}

struct TailPlan {
  std::vector<Panel> panels;  // ordered away from the finite region
  double truncation_error = 0.0;  // relative bound on the dropped tail
};

/// Panels covering one semi-infinite end. `outward` is +1 for the right end
/// and -1 for the left; `start` is the outermost finite breakpoint; `n` is
/// the largest nesting depth reaching this end.
inline TailPlan plan_tail(const PotentialModel& model, const EndpointClass& end, double start, int outward,
                          int n, double lo, double hi, const QuadratureConfig& cfg) {
  if (!end.decay) throw Error(ErrorKind::MissingDecayMetadata, "endpoint decay not declared");
  TailPlan plan;
  const Decay& d = *end.decay;
  const double tol = cfg.truncation_tail_tol;
  if (d.algebraic()) {
    if (d.alpha <= n) {
      std::ostringstream os;
      os << "tail decay exponent " << d.alpha << " does not support a " << n << "-fold integral";
      throw Error(ErrorKind::DivergentTail, os.str());
    }
    const double rate = d.alpha - n;
    double S = std::log(1.0 / tol) / rate + 4.0;
    S = std::min(S, 600.0);
    plan.truncation_error = std::exp(-rate * S) / rate;
    const double ell = std::max(1.0, std::abs(start));
    const MapKind map = outward > 0 ? MapKind::LogRight : MapKind::LogLeft;
    for (double s = 0.0; s < S; s += 1.0) {
      plan.panels.push_back({map, s, std::min(s + 1.0, S), start, ell});
    }
    return plan;
  }
  // exponential or faster: scan outward for the cutoff
  auto w = [&](double z) { return detail::tail_weight(end, model.V(z)); };
  double ref = 0.0;
  for (int i = 0; i <= 32; ++i) ref = std::max(ref, w(lo + (hi - lo) * i / 32.0));
  auto small = [&](double z) {
    const double v = w(z) * std::pow(1.0 + std::abs(z), n);
    return v <= tol * ref || v == 0.0;
  };
  double dist = 0.25;
  for (;;) {
    const double z1 = start + outward * dist;
    const double z2 = start + outward * 2.0 * dist;
    ref = std::max(ref, w(z1));
    if (small(z1) && small(z2)) break;
    dist *= 2.0;
    if (dist > 1e8) throw Error(ErrorKind::DivergentTail, "tail weight does not decay as declared");
  }
  const double cut = 1.2 * dist;
  double a = 0.0;
  for (double step = 0.25; a < cut; step *= 2.0) {
    const double b = std::min(cut, a + step);
    const double za = start + outward * a, zb = start + outward * b;
    plan.panels.push_back({MapKind::Linear, std::min(za, zb), std::max(za, zb), 0.0, 1.0});
    a = b;
  }
  plan.truncation_error = tol;
  return plan;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// workspace

enum class Weight : unsigned char { Plus, Minus, SinhLeft, SinhRight };
enum class Direction : unsigned char { FromLeft, FromRight };

/// Where a cumulative chain starts. `position` is a finite breakpoint or
/// -inf / +inf for the grid ends.
struct Anchor {
  Direction dir = Direction::FromLeft;
  double position = -kInf;

  bool operator<(const Anchor& o) const {
    return std::tie(dir, position) < std::tie(o.dir, o.position);
  }
};

/// Chain description in processing order (innermost integral first).
struct Chain {
  Anchor anchor;
  std::vector<Weight> weights;

  bool operator<(const Chain& o) const {
    return std::tie(anchor, weights) < std::tie(o.anchor, o.weights);
  }
};

/// What the grid has to cover.
struct GridRequest {
  std::vector<double> breakpoints;
  int left_depth = 0;   // 0: no chain reaches -inf
  int right_depth = 0;  // 0: no chain reaches +inf
};

class BracketWorkspace {
 public:
  BracketWorkspace(const PotentialModel& model, const GridRequest& request, const QuadratureConfig& cfg)
      : model_(model), cfg_(cfg), request_(request) {
    if (!model_.V) throw Error(ErrorKind::InvalidSpec, "model '" + model_.id + "' has no V(x)");
    build_grid();
  }

  const Grid& grid() const { return grid_; }
  const PotentialModel& model() const { return model_; }
  const QuadratureConfig& config() const { return cfg_; }
  double tail_error(Direction d) const { return d == Direction::FromLeft ? left_tail_error_ : right_tail_error_; }

  /// Node values of the cumulative integral described by `chain`. Values
  /// on the far side of the anchor are NaN.
  const NodeVec& values(const Chain& chain) {
    if (auto it = memo_.find(chain); it != memo_.end()) return it->second.values;
    if (chain.weights.empty()) throw Error(ErrorKind::InvalidSpec, "empty chain");
    Chain parent = chain;
    parent.weights.pop_back();
    const NodeVec* inner = parent.weights.empty() ? nullptr : &values(parent);
    const double inner_err = parent.weights.empty() ? 0.0 : memo_.at(parent).error;
    Entry e = integrate(chain.anchor, chain.weights.back(), inner);
    e.error += inner_err;
    return memo_.emplace(chain, std::move(e)).first->second.values;
  }

  double error(const Chain& chain) {
    values(chain);
    return memo_.at(chain).error;
  }

  /// Value of the chain at a breakpoint or grid end.
  double at(const Chain& chain, double z) {
    const NodeVec& v = values(chain);
    return v[node_at(z)];
  }

  /// Node index of a breakpoint / grid end.
  std::size_t node_at(double z) const {
    if (z == -kInf) return 0;
    if (z == kInf) return grid_.nodes() - 1;
    auto b = grid_.boundary_of(z);
    if (!b) throw Error(ErrorKind::InvalidSpec, "point is not a grid breakpoint");
    return *b == grid_.panels() ? grid_.nodes() - 1 : Grid::index(*b, 0);
  }

  /// Flags panels where `values` (already including any weight) is not
  /// resolved to the configured tolerance. `first`/`last` bound the panel range.
  void check_resolution(const NodeVec& values, std::size_t first, std::size_t last) {
    const auto& basis = cheb::Basis::get();
    double scale = 0.0;
    std::vector<double> local(last - first, 0.0);
    for (std::size_t p = first; p < last; ++p) {
      double absg[cheb::kNodes];
      for (int j = 0; j < cheb::kNodes; ++j) {
        absg[j] = std::abs(values[Grid::index(p, j)] * grid_.jac()[Grid::index(p, j)]);
      }
      local[p - first] = basis.integrate(absg);
      scale += local[p - first];
    }
    for (std::size_t p = first; p < last; ++p) {
      double g[cheb::kNodes];
      for (int j = 0; j < cheb::kNodes; ++j) g[j] = values[Grid::index(p, j)] * grid_.jac()[Grid::index(p, j)];
      const double e = tail_estimate(g);
      if (e > std::max(cfg_.rel_tol * local[p - first], cfg_.abs_tol * scale)) flags_[p] = 1;
    }
  }

  bool needs_refinement() const {
    return std::any_of(flags_.begin(), flags_.end(), [](char c) { return c != 0; });
  }

  /// Splits flagged panels and discards cached chains. Throws
  /// ToleranceNotMet once max_depth rounds have been spent.
  void refine() {
    if (++rounds_ > cfg_.max_depth) {
      throw Error(ErrorKind::ToleranceNotMet, "bracket quadrature did not converge within max_depth refinements");
    }
    grid_.split(flags_);
    reset();
  }

  int rounds() const { return rounds_; }

 private:
  struct Entry {
    NodeVec values;
    double error = 0.0;
  };

  static double tail_estimate(const double* g) {
    const auto c = cheb::Basis::get().coefficients(std::span<const double>(g, cheb::kNodes));
    return 2.0 * (std::abs(c[cheb::kDegree]) + std::abs(c[cheb::kDegree - 1]) + std::abs(c[cheb::kDegree - 2]));
  }

  double weight_at(Weight w, double V) const {
    switch (w) {
      case Weight::Plus: return std::exp(V);
      case Weight::Minus: return std::exp(-V);
      case Weight::SinhLeft: {
        const double v1 = model_.left.limit();
        return 2.0 * std::exp(-v1) * std::sinh(v1 - V);
      }
      case Weight::SinhRight: {
        const double v2 = model_.right.limit();
        return 2.0 * std::exp(-v2) * std::sinh(v2 - V);
      }
    }
    return 0.0;
  }

  std::size_t anchor_boundary(const Anchor& a) const {
    if (a.position == -kInf) return 0;
    if (a.position == kInf) return grid_.panels();
    auto b = grid_.boundary_of(a.position);
    if (!b) throw Error(ErrorKind::InvalidSpec, "anchor is not a grid breakpoint");
    return *b;
  }

  Entry integrate(const Anchor& anchor, Weight w, const NodeVec* inner) {
    const auto& basis = cheb::Basis::get();
    const std::size_t n = grid_.panels();
    const std::size_t b0 = anchor_boundary(anchor);
    Entry e;
    e.values.assign(grid_.nodes(), std::numeric_limits<double>::quiet_NaN());
    const bool left = anchor.dir == Direction::FromLeft;
    const std::size_t first = left ? b0 : 0;
    const std::size_t last = left ? n : b0;
    if (first >= last) {
      // empty range: the chain is zero at its own anchor
      if (left && b0 == n) e.values.back() = 0.0;
      if (!left && b0 == 0) e.values.front() = 0.0;
      return e;
    }

    std::vector<double> g(grid_.nodes(), 0.0);
    for (std::size_t p = first; p < last; ++p) {
      for (int j = 0; j < cheb::kNodes; ++j) {
        const std::size_t i = Grid::index(p, j);
        const double h = inner ? (*inner)[i] : 1.0;
        g[i] = h == 0.0 ? 0.0 : weight_at(w, grid_.V()[i]) * h * grid_.jac()[i];
      }
    }
    // resolution check relative to each panel's own mass
    double scale = 0.0;
    std::vector<double> local(last - first, 0.0);
    for (std::size_t p = first; p < last; ++p) {
      double absg[cheb::kNodes];
      for (int j = 0; j < cheb::kNodes; ++j) absg[j] = std::abs(g[Grid::index(p, j)]);
      local[p - first] = basis.integrate(absg);
      scale += local[p - first];
    }
    for (std::size_t p = first; p < last; ++p) {
      const double est = tail_estimate(g.data() + Grid::index(p, 0));
      if (est > std::max(cfg_.rel_tol * local[p - first], cfg_.abs_tol * scale)) flags_[p] = 1;
      e.error += est;
    }

    double carry = 0.0;
    double out[cheb::kNodes];
    if (left) {
      for (std::size_t p = first; p < last; ++p) {
        const std::size_t i0 = Grid::index(p, 0);
        basis.integrate_left(std::span<const double>(g.data() + i0, cheb::kNodes), out);
        for (int j = 0; j < cheb::kNodes; ++j) e.values[i0 + j] = carry + out[j];
        carry = e.values[i0 + cheb::kDegree];
      }
    } else {
      for (std::size_t p = last; p-- > first;) {
        const std::size_t i0 = Grid::index(p, 0);
        basis.integrate_right(std::span<const double>(g.data() + i0, cheb::kNodes), out);
        for (int j = 0; j < cheb::kNodes; ++j) e.values[i0 + j] = carry + out[j];
        carry = e.values[i0];
      }
    }
    return e;
  }

  void build_grid() {
    std::vector<double> bp = request_.breakpoints;
    for (double d : model_.breakpoints()) bp.push_back(d);
    bp.erase(std::remove_if(bp.begin(), bp.end(), [](double v) { return !std::isfinite(v); }), bp.end());
    if (bp.empty()) bp.push_back(0.0);
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    const double lo = bp.front(), hi = bp.back();

    std::vector<Panel> panels;
    if (request_.left_depth > 0) {
      auto plan = detail::plan_tail(model_, model_.left, lo, -1, request_.left_depth, lo, std::max(hi, lo + 1.0), cfg_);
      left_tail_error_ = plan.truncation_error;
      for (auto it = plan.panels.rbegin(); it != plan.panels.rend(); ++it) panels.push_back(*it);
    }
    for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
      const double a = bp[k], b = bp[k + 1];
      const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / 0.5)));
      for (int q = 0; q < pieces; ++q) {
        const double pa = q == 0 ? a : a + (b - a) * q / pieces;
        const double pb = q == pieces - 1 ? b : a + (b - a) * (q + 1) / pieces;
        panels.push_back({MapKind::Linear, pa, pb, 0.0, 1.0});
      }
    }
    if (request_.right_depth > 0) {
      auto plan = detail::plan_tail(model_, model_.right, hi, +1, request_.right_depth, std::min(lo, hi - 1.0), hi, cfg_);
      right_tail_error_ = plan.truncation_error;
      for (const auto& p : plan.panels) panels.push_back(p);
    }
    if (panels.empty()) {
      // a single point: keep a degenerate-free panel so node lookups work
      panels.push_back({MapKind::Linear, lo, lo + 1.0, 0.0, 1.0});
    }
    grid_ = Grid(model_, std::move(panels));
    // split panels over which V varies too much for relative accuracy
    for (int pass = 0; pass < 60; ++pass) {
      std::vector<char> wide(grid_.panels(), 0);
      bool any = false;
      for (std::size_t p = 0; p < grid_.panels(); ++p) {
        double vmin = kInf, vmax = -kInf;
        for (int j = 0; j < cheb::kNodes; ++j) {
          const double v = grid_.V()[Grid::index(p, j)];
          vmin = std::min(vmin, v);
          vmax = std::max(vmax, v);
        }
        if (vmax - vmin > 8.0) wide[p] = any = 1;
      }
      if (!any) break;
      grid_.split(wide);
    }
    reset();
  }

  void reset() {
    memo_.clear();
    flags_.assign(grid_.panels(), 0);
  }

  const PotentialModel& model_;
  QuadratureConfig cfg_;
  GridRequest request_;
  Grid grid_;
  std::map<Chain, Entry> memo_;
  std::vector<char> flags_;
  double left_tail_error_ = 0.0;
  double right_tail_error_ = 0.0;
  int rounds_ = 0;
};

// ---------------------------------------------------------------------------
// spec validation and translation

namespace detail {

inline void check_partial_sums(const std::vector<int>& seq, EndKind kind, const char* where) {
  int sum = 0;
  for (int s : seq) {
    sum += s;
    const bool ok = kind == EndKind::PlusInfinity ? sum <= -1 : sum >= 1;
    if (!ok) {
      throw Error(ErrorKind::DivergentTail, std::string("bracket diverges toward ") + where +
                                                ": running sign sum leaves the convergent range");
    }
  }
}

}  // namespace detail

/// Checks a spec against the model's endpoint classes.
inline void validate(const BracketSpec& spec, const PotentialModel& model) {
  if (spec.signs.empty()) throw Error(ErrorKind::InvalidSpec, "bracket needs at least one sign");
  for (int s : spec.signs) {
    if (s != 1 && s != -1) throw Error(ErrorKind::InvalidSpec, "signs must be +1 or -1");
  }
  if (!(spec.lower <= spec.upper)) throw Error(ErrorKind::InvalidSpec, "lower limit exceeds upper limit");
  if (spec.lower == kInf || spec.upper == -kInf) throw Error(ErrorKind::InvalidSpec, "empty infinite range");
  if (spec.kind == BracketKind::AngleLeft) {
    if (spec.lower != -kInf || model.left.kind != EndKind::FiniteLimit) {
      throw Error(ErrorKind::InvalidSpec, "left angle bracket needs lower = -inf and a finite V(-inf)");
    }
  }
  if (spec.kind == BracketKind::AngleRight) {
    if (spec.upper != kInf || model.right.kind != EndKind::FiniteLimit) {
      throw Error(ErrorKind::InvalidSpec, "right angle bracket needs upper = +inf and a finite V(+inf)");
    }
  }
  const int n = static_cast<int>(spec.signs.size());
  if (spec.lower == -kInf) {
    if (model.left.kind == EndKind::FiniteLimit) {
      if (spec.kind != BracketKind::AngleLeft) {
        throw Error(ErrorKind::DivergentTail, "plain bracket toward a finite-limit -inf end diverges");
      }
    } else {
      detail::check_partial_sums(spec.signs, model.left.kind, "-inf");
    }
  }
  if (spec.upper == kInf) {
    if (model.right.kind == EndKind::FiniteLimit) {
      if (spec.kind != BracketKind::AngleRight) {
        throw Error(ErrorKind::DivergentTail, "plain bracket toward a finite-limit +inf end diverges");
      }
    } else {
      std::vector<int> rev(spec.signs.rbegin(), spec.signs.rend());
      detail::check_partial_sums(rev, model.right.kind, "+inf");
    }
  }
  (void)n;
}

/// Chain realizing a spec; the cumulative variable is the limit opposite
/// the anchor.
inline Chain chain_for(const BracketSpec& spec) {
  Chain c;
  const bool from_left = spec.lower == -kInf || spec.upper != kInf;
  c.anchor = from_left ? Anchor{Direction::FromLeft, spec.lower} : Anchor{Direction::FromRight, spec.upper};
  const std::size_t n = spec.signs.size();
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t slot = from_left ? k : n - 1 - k;
    Weight w = spec.signs[slot] > 0 ? Weight::Plus : Weight::Minus;
    if (spec.kind == BracketKind::AngleLeft && slot == 0) w = Weight::SinhLeft;
    if (spec.kind == BracketKind::AngleRight && slot == n - 1) w = Weight::SinhRight;
    c.weights.push_back(w);
  }
  return c;
}

/// Deepest nesting reaching each infinite end, for grid construction.
inline void add_to_request(GridRequest& req, const BracketSpec& spec) {
  const int n = static_cast<int>(spec.signs.size());
  if (spec.lower == -kInf) req.left_depth = std::max(req.left_depth, n);
  else req.breakpoints.push_back(spec.lower);
  if (spec.upper == kInf) req.right_depth = std::max(req.right_depth, n);
  else req.breakpoints.push_back(spec.upper);
}

/// Runs `body(ws)` on a shared workspace, refining until every chain and
/// every resolution check it performs passes.
template <typename Body>
auto with_refinement(const PotentialModel& model, const GridRequest& req, const QuadratureConfig& cfg, Body&& body) {
  BracketWorkspace ws(model, req, cfg);
  for (;;) {
    auto result = body(ws);
    if (!ws.needs_refinement()) return result;
    ws.refine();
  }
}

inline BracketValue eval_bracket_with_error(const BracketSpec& spec, const PotentialModel& model,
                                            const QuadratureConfig& cfg = {}) {
  validate(spec, model);
  GridRequest req;
  add_to_request(req, spec);
  const Chain chain = chain_for(spec);
  const double target = chain.anchor.dir == Direction::FromLeft ? spec.upper : spec.lower;
  return with_refinement(model, req, cfg, [&](BracketWorkspace& ws) {
    BracketValue v;
    v.value = ws.at(chain, target);
    double tail = 0.0;
    if (spec.lower == -kInf) tail += ws.tail_error(Direction::FromLeft);
    if (spec.upper == kInf) tail += ws.tail_error(Direction::FromRight);
    v.error = ws.error(chain) + tail * std::abs(v.value);
    return v;
  });
}

inline double eval_bracket(const BracketSpec& spec, const PotentialModel& model, const QuadratureConfig& cfg = {}) {
  return eval_bracket_with_error(spec, model, cfg).value;
}

/// Values of the bracket with its non-anchored limit replaced by each grid
/// point: [..]_lower^z when built from the left (lower = -inf, or both
/// limits finite), [..]_z^upper when built from +inf.
inline std::vector<double> cumulative_bracket(const BracketSpec& spec, const PotentialModel& model,
                                              const std::vector<double>& points, const QuadratureConfig& cfg = {}) {
  validate(spec, model);
  const Chain chain = chain_for(spec);
  const bool left = chain.anchor.dir == Direction::FromLeft;
  for (double z : points) {
    if (z < spec.lower || z > spec.upper) throw Error(ErrorKind::InvalidSpec, "grid point outside the bracket range");
  }
  GridRequest req;
  add_to_request(req, spec);
  if (!points.empty()) {
    req.breakpoints.push_back(*std::min_element(points.begin(), points.end()));
    req.breakpoints.push_back(*std::max_element(points.begin(), points.end()));
  }
  return with_refinement(model, req, cfg, [&](BracketWorkspace& ws) {
    const NodeVec& v = ws.values(chain);
    std::vector<double> out;
    out.reserve(points.size());
    for (double z : points) {
      if (left && z == chain.anchor.position) out.push_back(0.0);
      else if (!left && z == chain.anchor.position) out.push_back(0.0);
      else out.push_back(ws.grid().interpolate(v, z));
    }
    return out;
  });
}

}  // namespace lowk
