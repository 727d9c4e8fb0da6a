#pragma once

// Exact term tables for the coefficients a_n, b_n and b~_n of S_r - 1/2 and
// S_l - 1/2, their numerical evaluation, and the gamma inversion.

#include <boost/rational.hpp>

#include <cmath>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "lowk/brackets.hpp"
#include "lowk/laurent.hpp"
#include "lowk/potential.hpp"

namespace lowk {

using Rational = boost::rational<long long>;

enum class Side { Right, Left };
enum class Family { A, B, Btilde };

inline const char* to_string(Side s) { return s == Side::Right ? "R" : "L"; }
inline const char* to_string(Family f) {
  switch (f) {
    case Family::A: return "a";
    case Family::B: return "b";
    case Family::Btilde: return "btilde";
  }
  return "?";
}

/// Default cap on generated orders.
inline constexpr int kMaxTableOrder = 11;

/// One weighted bracket. An empty sign list stands for the constant 1. The
/// variable limit of the bracket is x: the upper limit for Right tables and
/// the lower limit for Left tables.
struct Term {
  Rational coeff;
  int limit_exponent = 0;  // prefactor exp(-limit_exponent * V1) (Right) or V2 (Left)
  BracketKind kind = BracketKind::Plain;
  std::vector<int> signs;

  std::string notation() const {
    if (signs.empty()) return "1";
    BracketSpec s{kind, signs, 0.0, 0.0};
    return s.notation();
  }
};

struct TermTable {
  int n = 0;
  Side side = Side::Right;
  Family family = Family::A;
  std::vector<Term> terms;
  int point_sign = 1;  // point factor exp(point_sign * V(x))
};

/// prod_j (m - S_j)(-s_j) with S_j the running sums of `signs`.
inline long long p_coeff(const std::vector<int>& signs, int m) {
  long long prod = 1;
  int sum = 0;
  for (int s : signs) {
    sum += s;
    prod *= static_cast<long long>(m - sum) * (-s);
  }
  return prod;
}

namespace detail {

inline void check_order(int n, int lowest) {
  if (n < lowest) throw Error(ErrorKind::InvalidSpec, "coefficient order out of range");
  if (n > kMaxTableOrder) {
    throw Error(ErrorKind::InvalidSpec, "coefficient order above the configured cap of " + std::to_string(kMaxTableOrder));
  }
}

/// All +-1 sequences of the given length, in lexicographic order with - before +.
inline std::vector<std::vector<int>> all_sequences(int len) {
  std::vector<std::vector<int>> out;
  const long long count = 1LL << len;
  for (long long mask = 0; mask < count; ++mask) {
    std::vector<int> seq(static_cast<std::size_t>(len));
    for (int i = 0; i < len; ++i) seq[static_cast<std::size_t>(i)] = (mask >> (len - 1 - i)) & 1 ? 1 : -1;
    out.push_back(std::move(seq));
  }
  return out;
}

inline int lambda(const std::vector<int>& seq) {
  int s = 0;
  for (int v : seq) s += v;
  return s;
}

}  // namespace detail

/// a_n^R / a_n^L. Set `prune` to false to keep zero-coefficient sequences.
inline TermTable a_terms(int n, Side side, bool prune = true) {
  detail::check_order(n, 0);
  TermTable t{n, side, Family::A, {}, 1};
  if (n == 0) {
    t.terms.push_back({Rational(-1, 2), 1, BracketKind::Plain, {}});
    return t;
  }
  for (const auto& seq : detail::all_sequences(n - 1)) {
    const int lam = detail::lambda(seq);
    const long long p = p_coeff(seq, lam + 1);
    const long long sign = (lam % 2 == 0) ? 1 : -1;
    Rational c = Rational(sign * (lam + 1) * p, 2);
    if (prune && c.numerator() == 0) continue;
    Term term;
    term.coeff = c;
    term.limit_exponent = lam;
    if (side == Side::Right) {
      term.kind = BracketKind::AngleLeft;
      term.signs.push_back(-1);
      term.signs.insert(term.signs.end(), seq.begin(), seq.end());
    } else {
      term.kind = BracketKind::AngleRight;
      term.signs.assign(seq.rbegin(), seq.rend());
      term.signs.push_back(-1);
    }
    t.terms.push_back(std::move(term));
  }
  return t;
}

namespace detail {

inline TermTable balanced_table(int n, Side side, Family family, bool prune, bool require_nonzero) {
  check_order(n, 1);
  TermTable t{n, side, family, {}, family == Family::Btilde ? -1 : 1};
  if (n % 2 == 0) {
    if (require_nonzero) throw Error(ErrorKind::EvenOrder, "b coefficients vanish identically for even n");
    return t;
  }
  for (const auto& seq : all_sequences(n - 1)) {
    if (lambda(seq) != 0) continue;
    Rational c = Rational(p_coeff(seq, 1), 2);
    if (prune && c.numerator() == 0) continue;
    Term term;
    term.coeff = c;
    term.kind = BracketKind::Plain;
    const int flip = family == Family::Btilde ? -1 : 1;
    std::vector<int> inner;
    for (int s : seq) inner.push_back(flip * s);
    if (side == Side::Right) {
      term.signs.push_back(-flip);
      term.signs.insert(term.signs.end(), inner.begin(), inner.end());
    } else {
      term.signs.assign(inner.rbegin(), inner.rend());
      term.signs.push_back(-flip);
    }
    t.terms.push_back(std::move(term));
  }
  return t;
}

}  // namespace detail

/// b_n^R / b_n^L; even n gives an empty table (EvenOrder only when
/// `require_nonzero` is set).
inline TermTable b_terms(int n, Side side, bool prune = true, bool require_nonzero = false) {
  return detail::balanced_table(n, side, Family::B, prune, require_nonzero);
}

/// b~_n^R / b~_n^L: b_n with every sign flipped and point factor e^{-V(x)}.
inline TermTable btilde_terms(int n, Side side, bool prune = true, bool require_nonzero = false) {
  return detail::balanced_table(n, side, Family::Btilde, prune, require_nonzero);
}

// ---------------------------------------------------------------------------
// evaluation

/// Spec of a term at the point x.
inline BracketSpec term_spec(const Term& term, Side side, double x) {
  BracketSpec s;
  s.kind = term.kind;
  s.signs = term.signs;
  if (side == Side::Right) {
    s.lower = -kInf;
    s.upper = x;
  } else {
    s.lower = x;
    s.upper = kInf;
  }
  return s;
}

inline double limit_for(const TermTable& t, const PotentialModel& model) {
  const EndpointClass& end = t.side == Side::Right ? model.left : model.right;
  return end.limit();
}

/// Adds the chains of a table to a grid request.
inline void add_to_request(GridRequest& req, const TermTable& t) {
  for (const auto& term : t.terms) {
    if (term.signs.empty()) continue;
    const int n = static_cast<int>(term.signs.size());
    if (t.side == Side::Right) req.left_depth = std::max(req.left_depth, n);
    else req.right_depth = std::max(req.right_depth, n);
  }
}

/// Table value at every node of the workspace grid (NaN where undefined).
inline NodeVec table_on_grid(const TermTable& t, BracketWorkspace& ws) {
  const PotentialModel& model = ws.model();
  const Grid& g = ws.grid();
  NodeVec out(g.nodes(), 0.0);
  for (const auto& term : t.terms) {
    double pref = boost::rational_cast<double>(term.coeff);
    if (term.limit_exponent != 0) pref *= std::exp(-term.limit_exponent * limit_for(t, model));
    if (term.signs.empty()) {
      for (auto& v : out) v += pref;
      continue;
    }
    // the variable limit is irrelevant for validation and chain layout
    const BracketSpec probe = term_spec(term, t.side, 0.0);
    validate(probe, model);
    const Chain c = chain_for(probe);
    const NodeVec& v = ws.values(c);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += pref * v[i];
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= std::exp(t.point_sign * g.V()[i]);
  return out;
}

/// Numerical value of a table at x.
inline double eval_coeff(const TermTable& t, const PotentialModel& model, double x, const QuadratureConfig& cfg = {}) {
  GridRequest req;
  req.breakpoints.push_back(x);
  add_to_request(req, t);
  return with_refinement(model, req, cfg, [&](BracketWorkspace& ws) {
    const NodeVec v = table_on_grid(t, ws);
    return v[ws.node_at(x)];
  });
}

/// gamma series from the odd series sum_n b~_n (ik)^n (min order 1):
/// (S - 1/2) = [4 * btilde]^{-1}.
inline LaurentSeries gamma_series(const LaurentSeries& btilde, Side = Side::Right) {
  return ls_invert(cplx{4.0, 0.0} * btilde);
}

// ---------------------------------------------------------------------------
// serialization

inline nlohmann::json to_json(const TermTable& t) {
  nlohmann::json j;
  j["n"] = t.n;
  j["side"] = to_string(t.side);
  j["family"] = to_string(t.family);
  j["point_factor"] = t.point_sign > 0 ? "exp(+V(x))" : "exp(-V(x))";
  j["terms"] = nlohmann::json::array();
  for (const auto& term : t.terms) {
    nlohmann::json e;
    e["coeff"] = std::to_string(term.coeff.numerator()) +
                 (term.coeff.denominator() == 1 ? "" : "/" + std::to_string(term.coeff.denominator()));
    e["limit_exponent"] = term.limit_exponent;
    e["bracket"] = term.notation();
    j["terms"].push_back(e);
  }
  return j;
}

}  // namespace lowk
