#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <tuple>

#include "lowk/coeffgen.hpp"

using namespace lowk;

namespace {

using Row = std::tuple<long long, long long, int, std::string>;  // num, den, limit exponent, notation

std::vector<Row> rows(const TermTable& t) {
  std::vector<Row> out;
  for (const auto& term : t.terms) {
    out.emplace_back(term.coeff.numerator(), term.coeff.denominator(), term.limit_exponent, term.notation());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Row> sorted(std::vector<Row> v) {
  std::sort(v.begin(), v.end());
  return v;
}

long long binom(int n, int k) {
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

LaurentSeries odd_series(double b1, double b3, double b5) {
  return LaurentSeries(1, {b1, 0.0, b3, 0.0, b5});
}

}  // namespace

TEST(PCoeff, Examples) {
  EXPECT_EQ(p_coeff({}, 1), 1);
  EXPECT_EQ(p_coeff({-1}, 1), 2);
  EXPECT_EQ(p_coeff({1}, 1), 0);
  // (2 - 1)(-1) * (2 - 0)(+1) = -2
  EXPECT_EQ(p_coeff({1, -1}, 2), -2);
}

TEST(PCoeff, VanishesWhenMNotAboveLambda) {
  for (int len = 1; len <= 6; ++len) {
    for (long long mask = 0; mask < (1LL << len); ++mask) {
      std::vector<int> seq;
      int lam = 0;
      for (int i = 0; i < len; ++i) {
        seq.push_back((mask >> i) & 1 ? 1 : -1);
        lam += seq.back();
      }
      for (int m = 1; m <= lam; ++m) EXPECT_EQ(p_coeff(seq, m), 0);
    }
  }
}

// Golden right-side a-table through n = 5 (coefficients and V1 exponents as
// printed; see the notes file for the repaired sign strings).
TEST(ATermsGolden, RightSideThroughFive) {
  EXPECT_EQ(rows(a_terms(0, Side::Right)), sorted({{-1, 2, 1, "1"}}));
  EXPECT_EQ(rows(a_terms(1, Side::Right)), sorted({{1, 2, 0, "<-]"}}));
  EXPECT_EQ(rows(a_terms(2, Side::Right)), sorted({{1, 1, 1, "<-+]"}}));
  EXPECT_EQ(rows(a_terms(3, Side::Right)), sorted({{3, 1, 2, "<-++]"}, {-1, 1, 0, "<--+]"}}));
  EXPECT_EQ(rows(a_terms(4, Side::Right)),
            sorted({{12, 1, 3, "<-+++]"}, {-2, 1, 1, "<-+-+]"}, {-6, 1, 1, "<--++]"}}));
  EXPECT_EQ(rows(a_terms(5, Side::Right)), sorted({{60, 1, 4, "<-++++]"},
                                                   {-6, 1, 2, "<-++-+]"},
                                                   {-18, 1, 2, "<-+-++]"},
                                                   {-36, 1, 2, "<--+++]"},
                                                   {2, 1, 0, "<--+-+]"},
                                                   {6, 1, 0, "<---++]"}}));
}

TEST(ATermsGolden, FiveCoefficientMultiset) {
  std::vector<long long> c;
  for (const auto& t : a_terms(5, Side::Right).terms) c.push_back(t.coeff.numerator());
  std::sort(c.begin(), c.end());
  EXPECT_EQ(c, (std::vector<long long>{-36, -18, -6, 2, 6, 60}));
}

TEST(BTermsGolden, OddOrdersThroughSeven) {
  EXPECT_EQ(rows(b_terms(1, Side::Right)), sorted({{1, 2, 0, "[-]"}}));
  EXPECT_EQ(rows(b_terms(3, Side::Right)), sorted({{-1, 1, 0, "[--+]"}}));
  EXPECT_EQ(rows(b_terms(5, Side::Right)), sorted({{6, 1, 0, "[---++]"}, {2, 1, 0, "[--+-+]"}}));
  EXPECT_EQ(rows(b_terms(7, Side::Right)), sorted({{-72, 1, 0, "[----+++]"},
                                                   {-36, 1, 0, "[---+-++]"},
                                                   {-12, 1, 0, "[---++-+]"},
                                                   {-12, 1, 0, "[--+--++]"},
                                                   {-4, 1, 0, "[--+-+-+]"}}));
}

TEST(BTermsGolden, EvenOrders) {
  EXPECT_TRUE(b_terms(4, Side::Right).terms.empty());
  try {
    b_terms(4, Side::Right, true, true);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EvenOrder);
  }
}

TEST(BtildeTerms, SignFlipped) {
  EXPECT_EQ(rows(btilde_terms(1, Side::Right)), sorted({{1, 2, 0, "[+]"}}));
  EXPECT_EQ(rows(btilde_terms(3, Side::Right)), sorted({{-1, 1, 0, "[++-]"}}));
  EXPECT_EQ(rows(btilde_terms(5, Side::Right)), sorted({{6, 1, 0, "[+++--]"}, {2, 1, 0, "[++-+-]"}}));
  EXPECT_EQ(btilde_terms(3, Side::Right).point_sign, -1);
  EXPECT_EQ(b_terms(3, Side::Right).point_sign, 1);
  EXPECT_EQ(a_terms(3, Side::Right).point_sign, 1);
}

TEST(CoeffgenLimits, OrderCap) {
  EXPECT_NO_THROW(a_terms(kMaxTableOrder, Side::Right));
  try {
    a_terms(kMaxTableOrder + 1, Side::Right);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidSpec);
  }
}

TEST(CoeffgenProperty, RawTermCounts) {
  for (int n = 1; n <= 9; ++n) {
    EXPECT_EQ(a_terms(n, Side::Right, false).terms.size(), static_cast<std::size_t>(1LL << (n - 1))) << n;
  }
  for (int n = 1; n <= 11; n += 2) {
    EXPECT_EQ(static_cast<long long>(b_terms(n, Side::Right, false).terms.size()), binom(n - 1, (n - 1) / 2)) << n;
  }
  const std::size_t pruned[] = {1, 1, 1, 2, 3, 6};
  for (int n = 0; n <= 5; ++n) EXPECT_EQ(a_terms(n, Side::Right).terms.size(), pruned[n]) << n;
}

// (4.12) is the V1 -> +inf limit of (4.7): terms with a positive V1 exponent
// drop and the remainder, read as plain brackets, is the b-table.
TEST(CoeffgenProperty, BTableIsLimitOfATable) {
  for (int n = 1; n <= 9; ++n) {
    std::vector<Row> limit;
    for (const auto& t : a_terms(n, Side::Right).terms) {
      ASSERT_GE(t.limit_exponent, 0);
      if (t.limit_exponent > 0) continue;
      Term plain = t;
      plain.kind = BracketKind::Plain;
      limit.emplace_back(t.coeff.numerator(), t.coeff.denominator(), 0, plain.notation());
    }
    std::sort(limit.begin(), limit.end());
    EXPECT_EQ(limit, rows(b_terms(n, Side::Right))) << n;
  }
}

TEST(CoeffgenProperty, LeftTablesMirrorRight) {
  for (int n = 1; n <= 7; ++n) {
    for (auto [right, left] : {std::pair{a_terms(n, Side::Right), a_terms(n, Side::Left)},
                               std::pair{b_terms(n, Side::Right), b_terms(n, Side::Left)},
                               std::pair{btilde_terms(n, Side::Right), btilde_terms(n, Side::Left)}}) {
      ASSERT_EQ(right.terms.size(), left.terms.size());
      EXPECT_EQ(right.point_sign, left.point_sign);
      for (std::size_t i = 0; i < right.terms.size(); ++i) {
        const auto& r = right.terms[i];
        const auto& l = left.terms[i];
        EXPECT_EQ(r.coeff, l.coeff);
        EXPECT_EQ(r.limit_exponent, l.limit_exponent);
        EXPECT_EQ(std::vector<int>(r.signs.rbegin(), r.signs.rend()), l.signs);
        const BracketKind want = r.kind == BracketKind::AngleLeft ? BracketKind::AngleRight : r.kind;
        EXPECT_EQ(l.kind, want);
      }
    }
  }
}

TEST(GammaSeries, Examples) {
  const auto g1 = gamma_series(odd_series(0.25, 0.0, 0.0));
  EXPECT_EQ(g1.min_order(), -1);
  EXPECT_NEAR(std::abs(g1[-1] - 1.0), 0.0, 1e-15);
  for (int n = 0; n <= g1.max_order(); ++n) EXPECT_NEAR(std::abs(g1[n]), 0.0, 1e-15);
  const auto g2 = gamma_series(odd_series(0.5, -1.0, 0.0));
  EXPECT_NEAR(std::abs(g2[-1] - 0.5), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(g2[1] - 1.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(g2[3] - 2.0), 0.0, 1e-14);
  for (int n = 0; n <= 3; n += 2) EXPECT_NEAR(std::abs(g2[n]), 0.0, 1e-15);
  try {
    gamma_series(odd_series(0.0, 1.0, 0.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroLeadingCoefficient);
  }
}

TEST(GammaSeries, MatchesClosedFormsOnRandomTriples) {
  std::mt19937_64 rng(20261016);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    double b1 = u(rng);
    if (std::abs(b1) < 0.1) b1 += b1 < 0 ? -0.1 : 0.1;
    const double b3 = u(rng);
    const double b5 = u(rng);
    const auto g = gamma_series(odd_series(b1, b3, b5));
    const double want[] = {1.0 / (4 * b1), -b3 / (4 * b1 * b1), (b3 * b3 - b5 * b1) / (4 * b1 * b1 * b1)};
    for (int j = 0; j < 3; ++j) {
      const int order = 2 * j - 1;
      EXPECT_LE(std::abs(g[order] - want[j]), 1e-12 * std::abs(want[j])) << trial << " order " << order;
    }
  }
}

TEST(GammaSeries, RoundTrip) {
  const auto b = odd_series(0.7, -0.3, 1.1);
  const auto back = ls_invert(gamma_series(b));
  for (int n = 1; n <= 5; ++n) EXPECT_NEAR(std::abs(back[n] - 4.0 * b[n]), 0.0, 1e-12);
}

TEST(EvalCoeff, ExponentialA0) {
  const auto m = catalog("exponential");
  for (double x : {-1.0, 0.0, 0.5}) {
    const double got = eval_coeff(a_terms(0, Side::Right), m, x);
    EXPECT_NEAR(got, -0.5 * std::exp(std::exp(x)), 1e-14 * std::exp(std::exp(x)));
  }
}

TEST(EvalCoeff, ParabolicB1) {
  const auto m = catalog("parabolic");
  for (double x : {0.0, 0.7, 1.2}) {
    const double got = eval_coeff(b_terms(1, Side::Right), m, x) + eval_coeff(b_terms(1, Side::Left), m, x);
    const double want = std::sqrt(std::numbers::pi) / 2.0 * std::exp(x * x);
    EXPECT_NEAR(got, want, 1e-10 * want);
  }
}

TEST(EvalCoeff, LogcoshB1) {
  const auto m = catalog("logcosh");
  for (double x : {0.0, 1.0, 2.0}) {
    const double got = eval_coeff(b_terms(1, Side::Right), m, x) + eval_coeff(b_terms(1, Side::Left), m, x);
    const double want = std::cosh(x) * std::cosh(x);
    EXPECT_NEAR(got, want, 1e-10 * want);
  }
}

TEST(TermTableJson, Serializes) {
  const auto j = to_json(a_terms(3, Side::Right));
  EXPECT_EQ(j["n"], 3);
  EXPECT_EQ(j["side"], "R");
  EXPECT_EQ(j["family"], "a");
  EXPECT_EQ(j["point_factor"], "exp(+V(x))");
  ASSERT_EQ(j["terms"].size(), 2u);
  bool found = false;
  for (const auto& t : j["terms"]) {
    if (t["bracket"] == "<-++]") {
      EXPECT_EQ(t["coeff"], "3");
      EXPECT_EQ(t["limit_exponent"], 2);
      found = true;
    }
  }
  EXPECT_TRUE(found);
  EXPECT_EQ(to_json(a_terms(0, Side::Right))["terms"][0]["coeff"], "-1/2");
}
