#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lowk/laurent.hpp"

using lowk::Branch;
using lowk::cplx;
using lowk::LaurentSeries;

namespace {

LaurentSeries ex(int lo, std::vector<cplx> c) { return LaurentSeries::exact(lo, std::move(c)); }

void expect_coeffs(const LaurentSeries& s, int lo, const std::vector<cplx>& want, double tol = 1e-14) {
  ASSERT_EQ(s.min_order(), lo);
  ASSERT_GE(s.max_order(), lo + static_cast<int>(want.size()) - 1);
  for (std::size_t j = 0; j < want.size(); ++j) {
    EXPECT_NEAR(std::abs(s[lo + static_cast<int>(j)] - want[j]), 0.0, tol) << "order " << lo + static_cast<int>(j);
  }
}

double max_abs(const LaurentSeries& s) {
  double m = 0.0;
  for (const auto& c : s.coeffs()) m = std::max(m, std::abs(c));
  return m;
}

LaurentSeries random_series(std::mt19937_64& rng, int lo, int len, bool complex_coeffs) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_real_distribution<double> lead_mag(1.0, 2.0);
  std::vector<cplx> c(static_cast<std::size_t>(len));
  for (auto& v : c) v = {u(rng), complex_coeffs ? u(rng) : 0.0};
  // keep the leading term away from zero so inversion stays well conditioned
  const double sign = u(rng) < 0 ? -1.0 : 1.0;
  c[0] = {sign * lead_mag(rng), complex_coeffs ? 0.5 * u(rng) : 0.0};
  return LaurentSeries(lo, std::move(c));
}

}  // namespace

TEST(LaurentAdd, SpecExamples) {
  expect_coeffs(ex(0, {1.0}) + ex(0, {0.0}), 0, {1.0});
  auto s = ex(0, {1.0, 1.0}) + ex(0, {1.0, -1.0});
  expect_coeffs(s, 0, {2.0, 0.0});
  auto d = ex(-1, {1.0}) + ex(0, {1.0});
  expect_coeffs(d, -1, {1.0, 1.0});
  EXPECT_EQ(d.max_order(), 0);
}

TEST(LaurentAdd, ReliableOrderIsMinimumOfInputs) {
  LaurentSeries a(0, {1.0, 2.0, 3.0, 4.0});
  LaurentSeries b(-1, {1.0, 1.0});
  const auto s = a + b;
  EXPECT_EQ(s.min_order(), -1);
  EXPECT_EQ(s.max_order(), 0);
  EXPECT_FALSE(s.is_exact());
  const auto t = a + ex(-2, {1.0});
  EXPECT_EQ(t.max_order(), 3);
}

TEST(LaurentMul, SpecExamples) {
  expect_coeffs(ex(0, {1.0, 1.0}) * ex(0, {1.0, -1.0}), 0, {1.0, 0.0, -1.0});
  expect_coeffs(ex(-1, {1.0}) * ex(1, {1.0}), 0, {1.0});
  expect_coeffs(ex(0, {1.0, 2.0}) * ex(0, {3.0}), 0, {3.0, 6.0});
}

TEST(LaurentMul, TruncationOrder) {
  LaurentSeries a(0, {1.0, 1.0, 1.0});  // reliable through 2
  LaurentSeries b(0, {2.0, 0.0, 0.0, 5.0});  // reliable through 3
  EXPECT_EQ((a * b).max_order(), 2);
  // a negative leading order in one factor lowers what the other can determine
  LaurentSeries c(-1, {1.0, 0.0, 0.0, 0.0, 0.0});  // reliable through 3
  EXPECT_EQ((a * c).max_order(), 1);
  EXPECT_EQ((a * ex(1, {1.0})).max_order(), 3);
}

TEST(LaurentInvert, GeometricSeries) {
  auto r = lowk::ls_invert(ex(0, {1.0, 1.0}), 6);
  expect_coeffs(r, 0, {1.0, -1.0, 1.0, -1.0, 1.0, -1.0, 1.0});
}

TEST(LaurentInvert, Monomial) {
  auto r = lowk::ls_invert(ex(1, {2.0}), -1);
  expect_coeffs(r, -1, {0.5});
}

TEST(LaurentInvert, OddSeriesFromGammaExample) {
  // 4 * (1/2 (ik) - (ik)^3) inverted
  LaurentSeries a(1, {2.0, 0.0, -4.0, 0.0, 0.0, 0.0, 0.0});
  auto r = lowk::ls_invert(a);
  expect_coeffs(r, -1, {0.5, 0.0, 1.0, 0.0, 2.0});
  EXPECT_EQ(r.max_order(), 5);
}

TEST(LaurentInvert, ZeroLeadingThrows) {
  try {
    lowk::ls_invert(LaurentSeries(0, {1e-15, 1.0}));
    FAIL();
  } catch (const lowk::Error& e) {
    EXPECT_EQ(e.kind(), lowk::ErrorKind::ZeroLeadingCoefficient);
  }
}

TEST(LaurentSqrt, Binomial) {
  auto r = lowk::ls_sqrt(ex(0, {1.0, 2.0}), Branch::Plus, 3);
  // sqrt(1 + 2t) = 1 + t - t^2/2 + t^3/2 - ...
  expect_coeffs(r, 0, {1.0, 1.0, -0.5, 0.5});
}

TEST(LaurentSqrt, BranchMinusOnSquare) {
  auto r = lowk::ls_sqrt(ex(2, {1.0}), Branch::Minus, 1);
  expect_coeffs(r, 1, {-1.0});
  expect_coeffs(lowk::ls_sqrt(ex(0, {4.0}), Branch::Plus, 0), 0, {2.0});
}

TEST(LaurentSqrt, OddOrderThrows) {
  try {
    lowk::ls_sqrt(ex(1, {1.0}), Branch::Plus);
    FAIL();
  } catch (const lowk::Error& e) {
    EXPECT_EQ(e.kind(), lowk::ErrorKind::OddLeadingOrder);
  }
}

TEST(LaurentExp, Examples) {
  expect_coeffs(lowk::ls_exp(ex(0, {0.0}), 3), 0, {1.0, 0.0, 0.0, 0.0});
  const cplx c{0.3, -1.1};
  auto e = lowk::ls_exp(ex(1, {c}), 4);
  expect_coeffs(e, 0, {1.0, c, c * c / 2.0, c * c * c / 6.0, c * c * c * c / 24.0});
  auto s = lowk::ls_exp(ex(0, {0.7}), 2);
  expect_coeffs(s, 0, {std::exp(0.7), 0.0, 0.0});
}

TEST(LaurentExp, NegativeOrderThrows) {
  try {
    lowk::ls_exp(ex(-1, {1.0}));
    FAIL();
  } catch (const lowk::Error& e) {
    EXPECT_EQ(e.kind(), lowk::ErrorKind::NegativeOrderExponent);
  }
}

TEST(LaurentLog, Examples) {
  expect_coeffs(lowk::ls_log(ex(0, {1.0}), 3), 0, {0.0, 0.0, 0.0, 0.0});
  auto l = lowk::ls_log(lowk::ls_exp(ex(1, {3.0}), 8));
  expect_coeffs(l, 0, {0.0, 3.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0}, 1e-12);
  // g_{-1} = 1, g_0 = 2: p_1 = 2
  auto p = lowk::ls_log(LaurentSeries(-1, {1.0, 2.0}));
  EXPECT_NEAR(std::abs(p[1] - 2.0), 0.0, 1e-15);
}

TEST(LaurentEvaluate, PartialSum) {
  LaurentSeries a(-1, {2.0, 1.0, 3.0});
  const cplx ik{0.0, 0.2};
  EXPECT_NEAR(std::abs(a.evaluate(ik) - (2.0 / ik + 1.0 + 3.0 * ik)), 0.0, 1e-14);
}

TEST(LaurentProperty, RandomRoundTrips) {
  std::mt19937_64 rng(20261016);
  std::uniform_int_distribution<int> len_dist(1, 9);  // orders up to 8 above the leading one
  std::uniform_int_distribution<int> lo_dist(-3, 3);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const bool cx = trial % 2 == 1;
    const int len = len_dist(rng);

    // invert . self
    const auto a = random_series(rng, lo_dist(rng), len, cx);
    const auto inv = lowk::ls_invert(a);
    const auto one = a * inv;
    ASSERT_EQ(one.min_order(), 0);
    ASSERT_EQ(one.max_order(), len - 1);
    const double scale_inv = std::max(1.0, max_abs(a) * max_abs(inv));
    for (int n = 0; n <= one.max_order(); ++n) {
      EXPECT_LE(std::abs(one[n] - (n == 0 ? 1.0 : 0.0)), 1e-12 * scale_inv);
    }

    // sqrt squared
    const auto b = random_series(rng, 2 * lo_dist(rng), len, cx);
    const auto r = lowk::ls_sqrt(b, trial % 3 == 0 ? Branch::Minus : Branch::Plus);
    const auto sq = r * r;
    ASSERT_EQ(sq.max_order(), b.max_order());
    const double scale_sq = std::max(1.0, max_abs(r) * max_abs(r));
    for (int n = b.min_order(); n <= b.max_order(); ++n) {
      EXPECT_LE(std::abs(sq[n] - b[n]), 1e-12 * scale_sq);
    }

    // exp . log on a series normalized to start at order 0
    const auto c = random_series(rng, 0, len, cx);
    const auto back = lowk::ls_exp(lowk::ls_log(c));
    ASSERT_EQ(back.max_order(), c.max_order());
    const double scale_log = std::max(1.0, max_abs(back));
    for (int n = 0; n <= c.max_order(); ++n) {
      EXPECT_LE(std::abs(back[n] - c[n]), 1e-12 * scale_log);
    }
    ++checked;
  }
  EXPECT_EQ(checked, 1000);
}

TEST(LaurentProperty, BinaryOpOrderBookkeeping) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> len_dist(1, 9);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_series(rng, 0, len_dist(rng), false);
    const auto b = random_series(rng, 0, len_dist(rng), false);
    const int expect = std::min(a.max_order(), b.max_order());
    EXPECT_EQ((a + b).max_order(), expect);
    EXPECT_EQ((a * b).max_order(), expect);
    // shifted leading orders move the product window with them
    const auto c = random_series(rng, -1, len_dist(rng), false);
    EXPECT_EQ((a * c).max_order(),
              std::min(a.max_order() + c.min_order(), c.max_order() + a.min_order()));
  }
}
