#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "discforge/fourier_circle.hpp"

using namespace discforge;

namespace {

const Complex I(0.0, 1.0);

TrigSeries one_minus_zeta() { return TrigSeries(1, {0.0, 1.0, -1.0}); }

TrigSeries random_series(std::mt19937_64& rng, int order) {
  std::normal_distribution<double> g;
  std::vector<Complex> c(2 * static_cast<std::size_t>(order) + 1);
  for (auto& x : c) x = Complex(g(rng), g(rng));
  return TrigSeries(order, c);
}

double max_diff(const TrigSeries& a, const TrigSeries& b) {
  const int n = std::max(a.order(), b.order());
  double m = 0.0;
  for (int k = -n; k <= n; ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

}  // namespace

TEST(FourierCircle, EvaluatePointValues) {
  const std::vector<Complex> one{1.0};
  EXPECT_NEAR(std::abs(evaluate(TrigSeries::monomial(1), one)[0] - 1.0), 0.0, 1e-15);
  const std::vector<Complex> m1{-1.0};
  EXPECT_NEAR(std::abs(evaluate(one_minus_zeta(), m1)[0] - 2.0), 0.0, 1e-15);
  const std::vector<Complex> pi{I};
  EXPECT_NEAR(std::abs(evaluate(TrigSeries(1, {1.0, 2.0, 1.0}), pi)[0] - 2.0), 0.0, 1e-15);
}

TEST(FourierCircle, EvaluateRejectsOffCircle) {
  const std::vector<Complex> p{1.5};
  EXPECT_THROW(evaluate(one_minus_zeta(), p), Error);
}

TEST(FourierCircle, FromSamplesRecoversMonomial) {
  const auto s = TrigSeries::monomial(2).samples(8);
  const auto r = from_samples(s, 3);
  EXPECT_NEAR(std::abs(r.series[2] - 1.0), 0.0, 1e-14);
  for (int k = -3; k <= 3; ++k)
    if (k != 2) EXPECT_LT(std::abs(r.series[k]), 1e-14);
  EXPECT_LT(r.aliased_tail, 1e-14);
}

TEST(FourierCircle, FromSamplesAbsSquare) {
  std::vector<Complex> v;
  for (const auto& z : roots_of_unity(16)) v.push_back(std::norm(1.0 - z));
  const auto r = from_samples(v, 4).series;
  EXPECT_NEAR(std::abs(r[0] - 2.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(r[1] + 1.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(r[-1] + 1.0), 0.0, 1e-14);
}

TEST(FourierCircle, FromSamplesConstant) {
  std::vector<Complex> v(8, 5.0);
  EXPECT_NEAR(std::abs(from_samples(v, 2).series[0] - 5.0), 0.0, 1e-14);
}

TEST(FourierCircle, FromSamplesRejectsBadCounts) {
  std::vector<Complex> v(6, 1.0);
  EXPECT_THROW(from_samples(v, 1), Error);
  std::vector<Complex> w(8, 1.0);
  EXPECT_THROW(from_samples(w, 4), Error);
}

TEST(FourierCircle, MultiplyExamples) {
  const TrigSeries one_plus(1, {0.0, 1.0, 1.0});
  const auto p = multiply(one_minus_zeta(), one_plus);
  EXPECT_NEAR(std::abs(p[0] - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(p[2] + 1.0), 0.0, 1e-15);
  EXPECT_LT(std::abs(p[1]), 1e-15);

  const auto q = multiply(TrigSeries::monomial(1), TrigSeries::monomial(-1));
  EXPECT_NEAR(std::abs(q[0] - 1.0), 0.0, 1e-15);

  const TrigSeries zb_plus(1, {1.0, 1.0, 0.0});
  const auto r = multiply(zb_plus, one_plus);
  EXPECT_LT(max_diff(r, TrigSeries(1, {1.0, 2.0, 1.0})), 1e-15);
}

TEST(FourierCircle, ConjugateExamples) {
  EXPECT_LT(max_diff(conjugate(TrigSeries::monomial(1)), TrigSeries::monomial(-1)), 1e-15);
  const auto a = multiply(TrigSeries::monomial(-1, -1.0), one_minus_zeta());
  EXPECT_LT(max_diff(a, conjugate(one_minus_zeta())), 1e-15);
}

TEST(FourierCircle, Projections) {
  const TrigSeries a(1, {1.0, 2.0, 3.0});
  EXPECT_LT(max_diff(szego_project(a), TrigSeries(1, {0.0, 2.0, 3.0})), 1e-15);
  EXPECT_LT(max_diff(negative_project(a), TrigSeries::monomial(-1)), 1e-15);
  const int k0 = 3;
  const auto b = multiply(TrigSeries::monomial(k0), TrigSeries::monomial(-(k0 + 1)));
  EXPECT_LT(max_diff(negative_project(b), TrigSeries::monomial(-1)), 1e-15);
}

TEST(FourierCircle, HilbertExamples) {
  const TrigSeries cosine(1, {0.5, 0.0, 0.5});
  const TrigSeries sine(1, {-0.5 / I, 0.0, 0.5 / I});
  EXPECT_LT(max_diff(hilbert_transform(cosine), sine), 1e-15);
  EXPECT_LT(hilbert_transform(TrigSeries::constant(1.0)).max_abs_coeff(), 1e-15);
  EXPECT_LT(max_diff(hilbert_transform(sine), -1.0 * cosine), 1e-15);
}

TEST(FourierCircle, HilbertRejectsComplexInput) {
  EXPECT_THROW(hilbert_transform(TrigSeries::monomial(1)), Error);
}

TEST(FourierCircle, DerivativeAt) {
  const auto sq = multiply(one_minus_zeta(), one_minus_zeta());
  EXPECT_LT(std::abs(derivative_at(sq, 1.0, 1)), 1e-15);
  EXPECT_NEAR(std::abs(derivative_at(sq, 1.0, 2) - 2.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(derivative_at(one_minus_zeta(), 1.0, 1) + 1.0), 0.0, 1e-15);
  EXPECT_THROW(derivative_at(TrigSeries::monomial(-1), 1.0, 1), Error);
}

TEST(FourierCircle, NormsAndDecay) {
  EXPECT_NEAR(sup_norm(one_minus_zeta()), 2.0, 1e-12);
  EXPECT_DOUBLE_EQ(coeff_decay(TrigSeries::monomial(8)), 1.0);
  EXPECT_DOUBLE_EQ(coeff_decay(TrigSeries(8)), 0.0);
  EXPECT_TRUE(is_resolved(shift(one_minus_zeta(), -1).truncated(32)));
  EXPECT_FALSE(is_resolved(TrigSeries::monomial(8)));
}

TEST(FourierCircle, TruncationReportsTail) {
  double tail = -1.0;
  const auto t = TrigSeries(2, {3.0, 0.0, 1.0, 0.0, 4.0}).truncated(1, &tail);
  EXPECT_EQ(t.order(), 1);
  EXPECT_NEAR(tail, 5.0, 1e-14);
}

TEST(FourierCircleProperty, ProjectionAlgebra) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_series(rng, 1 + trial % 9);
    const auto p = szego_project(a);
    EXPECT_EQ(max_diff(szego_project(p), p), 0.0);
    EXPECT_EQ(negative_project(p).max_abs_coeff(), 0.0);
    EXPECT_EQ(max_diff(p + negative_project(a), a), 0.0);
    EXPECT_EQ(max_diff(conjugate(conjugate(a)), a), 0.0);
  }
}

TEST(FourierCircleProperty, MultiplyCommutativeAssociative) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_series(rng, 1 + trial % 4);
    const auto b = random_series(rng, 1 + trial % 5);
    const auto c = random_series(rng, 1 + trial % 3);
    EXPECT_LT(max_diff(multiply(a, b), multiply(b, a)), 1e-12);
    EXPECT_LT(max_diff(multiply(multiply(a, b), c), multiply(a, multiply(b, c))), 1e-11);
  }
}

TEST(FourierCircleProperty, HilbertRealAndConjugation) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const auto u = random_series(rng, 1 + trial % 7).real_part();
    const auto tu = hilbert_transform(u);
    EXPECT_TRUE(tu.is_real_valued(1e-13));
    // u + i T(u) extends holomorphically
    const auto f = u + I * tu;
    EXPECT_LT(negative_project(f).max_abs_coeff(), 1e-13);
    EXPECT_LT(std::abs(tu[0]), 1e-13);
  }
}

TEST(FourierCircleProperty, SampleRoundTrip) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 200; ++trial) {
    const int order = 1 + trial % 12;
    const auto a = random_series(rng, order);
    const int count = next_pow2(2 * order + 2);
    const auto r = from_samples(a.samples(count), order);
    EXPECT_LT(max_diff(r.series, a), 1e-12);
    EXPECT_LT(r.aliased_tail, 1e-12);
  }
}

TEST(FourierCircleProperty, DerivativeMatchesSampledRefinement) {
  std::mt19937_64 rng(15);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Complex> c(6);
    for (auto& x : c) x = Complex(g(rng), g(rng));
    const auto a = TrigSeries::analytic(c);
    Complex exact = 0.0;
    for (int k = 1; k < 6; ++k) exact += static_cast<double>(k) * c[static_cast<std::size_t>(k)];
    EXPECT_LT(std::abs(derivative_at(a, 1.0, 1) - exact), 1e-12);
    for (const int n : {16, 64}) {
      const auto b = from_samples(a.samples(n), n / 2 - 1).series;
      EXPECT_LT(std::abs(derivative_at(b, 1.0, 1) - exact), 1e-11);
    }
  }
}
