#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "discforge/determination.hpp"
#include "discforge/jets.hpp"

using namespace discforge;

namespace {

ModelPolynomial example_d4k3() { return ModelPolynomial(4, 3, {{3, 0.25}, {2, 1.0}}); }

const TrigSeries kOneMinusZeta(1, {0.0, 1.0, -1.0});

struct Shape {
  int d, k0;
};

const std::vector<Shape> kShapes{{2, 1}, {4, 2}, {4, 3}, {6, 3}, {6, 4}, {6, 5}};

double series_diff(const TrigSeries& a, const TrigSeries& b) {
  const int n = std::max(a.order(), b.order());
  double m = 0.0;
  for (int k = -n; k <= n; ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

BiholoMap tangent_map(double eps) {
  BiholoMap H;
  H.h1[{5, 0}] = eps;
  H.h2[{0, 2}] = eps;
  return H;
}

}  // namespace

TEST(Jets, JetMapExamples) {
  const auto a = jet_map(kOneMinusZeta, 2);
  EXPECT_NEAR(std::abs(a[0] + 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(a[1]), 0.0, 1e-15);
  const auto b = jet_map(multiply(kOneMinusZeta, TrigSeries::monomial(1)), 2);
  EXPECT_NEAR(std::abs(b[0] + 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(b[1] + 2.0), 0.0, 1e-15);
  EXPECT_THROW(jet_map(kOneMinusZeta, 0), Error);
}

TEST(Jets, LeibnizAtOne) {
  std::mt19937_64 rng(51);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Complex> c(7);
    for (auto& x : c) x = Complex(g(rng), g(rng));
    const auto u = TrigSeries::analytic(c);
    const auto v = multiply(kOneMinusZeta, u);
    for (int n = 1; n <= 6; ++n)
      EXPECT_LT(std::abs(derivative_at(v, 1.0, n) + static_cast<double>(n) * derivative_at(u, 1.0, n - 1)),
                1e-9);
  }
}

TEST(Jets, MatrixForCircularQuartic) {
  const auto m = ModelPolynomial::circular(4);
  const auto jm = jet_matrix(m, factor_Q(m));
  ASSERT_EQ(jm.n, 2);
  EXPECT_EQ(jm.entries(0, 0), Complex(-1.0));
  EXPECT_EQ(jm.entries(0, 1), Complex(-1.0));
  EXPECT_EQ(jm.entries(1, 0), Complex(0.0));
  EXPECT_EQ(jm.entries(1, 1), Complex(-2.0));
  EXPECT_NEAR(std::abs(jm.determinant - 2.0), 0.0, 1e-15);
}

TEST(Jets, MatrixForExample) {
  const auto m = example_d4k3();
  const auto q = factor_Q(m);
  const auto jm = jet_matrix(m, q);
  ASSERT_EQ(jm.n, 3);
  const double r = (16.0 - std::sqrt(220.0)) / 6.0;
  ASSERT_EQ(jm.chi.size(), 1u);
  EXPECT_NEAR(std::abs(jm.chi[0] - r / (1.0 - r)), 0.0, 1e-12);
  EXPECT_NEAR(jm.chi[0].real(), 0.241536, 1e-3);
  EXPECT_GT(std::abs(jm.determinant), 0.1);
  EXPECT_LT(std::abs(jm.determinant - jm.scaling * jm.reduced_determinant), 1e-10 * std::abs(jm.determinant));
  // columns are jets of the basis elements
  const Complex rho = std::conj(q.roots_inside[0].root);
  std::vector<Complex> geo(200);
  for (std::size_t n = 0; n < geo.size(); ++n) geo[n] = std::pow(rho, static_cast<int>(n));
  const auto col = jet_map(multiply(kOneMinusZeta, TrigSeries::analytic(geo)), 3);
  for (int k = 1; k <= 3; ++k) {
    Complex exact = -static_cast<double>(k) * detail::factorial(k - 1) * std::pow(rho, k - 1) /
                    std::pow(1.0 - rho, k);
    EXPECT_LT(std::abs(jm.entries(k - 1, 2) - exact), 1e-12);
    EXPECT_LT(std::abs(col[static_cast<std::size_t>(k - 1)] - exact), 1e-12);
  }
}

TEST(Jets, ReconstructRoundTrips) {
  for (const auto& m : {ModelPolynomial::circular(4), example_d4k3()}) {
    const auto q = factor_Q(m);
    const auto back = jet_reconstruct(m, q, jet_map(kOneMinusZeta, jet_matrix(m, q).n));
    EXPECT_LT(series_diff(back, kOneMinusZeta), 1e-12);
    const auto zero = jet_reconstruct(m, q, std::vector<Complex>(static_cast<std::size_t>(jet_matrix(m, q).n), 0.0));
    EXPECT_EQ(zero.max_abs_coeff(), 0.0);
  }
  EXPECT_THROW(jet_reconstruct(example_d4k3(), factor_Q(example_d4k3()), {1.0, 2.0}), Error);
}

TEST(JetsProperty, NonsingularAcrossRandomModels) {
  std::mt19937_64 rng(52);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 200; ++trial) {
    const auto [d, k0] = kShapes[static_cast<std::size_t>(trial) % kShapes.size()];
    const auto m = random_model(d, k0, rng);
    const auto q = factor_Q(m);
    const auto jm = jet_matrix(m, q);
    double rows = 1.0;
    for (int k = 0; k < jm.n; ++k) rows *= jm.entries.row(k).norm();
    EXPECT_GT(std::abs(jm.determinant), 1e-12 * rows);
    EXPECT_LT(std::abs(jm.determinant - jm.scaling * jm.reduced_determinant),
              1e-10 * std::abs(jm.determinant));
    bool simple = true;
    for (const auto& r : q.roots_inside) simple = simple && r.multiplicity == 1;
    if (simple) {
      Complex oracle = 1.0;
      for (std::size_t a = 0; a < jm.chi.size(); ++a) {
        oracle *= jm.chi[a] * jm.chi[a];
        for (std::size_t b = a + 1; b < jm.chi.size(); ++b) oracle *= jm.chi[b] - jm.chi[a];
      }
      EXPECT_LT(std::abs(jm.reduced_determinant - oracle), 1e-8 * std::max(1.0, std::abs(oracle)));
    }
    std::vector<Complex> jets(static_cast<std::size_t>(jm.n));
    for (auto& x : jets) x = Complex(g(rng), g(rng));
    const auto back = jet_map(jet_reconstruct(m, q, jets), jm.n);
    for (int k = 0; k < jm.n; ++k)
      EXPECT_LT(std::abs(back[static_cast<std::size_t>(k)] - jets[static_cast<std::size_t>(k)]),
                1e-9 * std::max(1.0, std::abs(jets[static_cast<std::size_t>(k)])));
  }
}

TEST(Jets, PrintedClosedFormsForCircularQuartic) {
  const auto m = ModelPolynomial::circular(4);
  for (int k = 0; k < 8; ++k) {
    const double theta = 0.4 * k;
    const auto rep = surjectivity_report(m, theta);
    EXPECT_LT(std::abs(rep.i1_printed + 6.0 * std::polar(1.0, -theta)), 1e-13);
    EXPECT_EQ(rep.i2_printed, Complex(0.0));
    EXPECT_NEAR(rep.gap_printed, 36.0, 1e-12);
  }
}

TEST(Jets, PrintedClosedFormsForExample) {
  const auto rep = surjectivity_report(example_d4k3(), 0.0);
  EXPECT_NEAR(std::norm(rep.i1_printed), 56.25, 1e-12);
  EXPECT_NEAR(std::norm(rep.i2_printed), 0.5625, 1e-12);
  EXPECT_NEAR(rep.gap_printed, 55.6875, 1e-12);
}

TEST(Jets, IntegralsForCircularQuartic) {
  // direct expansion: I1 = -6 e^{-i theta}, I2 = -2 e^{i theta}
  const auto m = ModelPolynomial::circular(4);
  for (int k = 0; k < 8; ++k) {
    const double theta = 0.4 * k;
    const auto rep = surjectivity_report(m, theta);
    EXPECT_LT(std::abs(rep.i1_quadrature + 6.0 * std::polar(1.0, -theta)), 1e-12);
    EXPECT_LT(std::abs(rep.i2_quadrature + 2.0 * std::polar(1.0, theta)), 1e-12);
    EXPECT_NEAR(surjectivity_gap(m, theta), 32.0, 1e-11);
  }
}

TEST(JetsProperty, ClosedFormMatchesQuadrature) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    const auto [d, k0] = kShapes[static_cast<std::size_t>(trial) % kShapes.size()];
    const auto m = random_model(d, k0, rng);
    for (int k = 0; k < 16; ++k) {
      const auto rep = surjectivity_report(m, 2.0 * std::numbers::pi * k / 16.0);
      const double scale = std::max(1.0, std::abs(rep.i1_quadrature) + std::abs(rep.i2_quadrature));
      EXPECT_LT(std::abs(rep.i1_corrected - rep.i1_quadrature), 1e-10 * scale);
      EXPECT_LT(std::abs(rep.i2_corrected - rep.i2_quadrature), 1e-10 * scale);
      EXPECT_LT(std::abs(rep.i1_printed - rep.i1_quadrature), 1e-10 * scale);
    }
  }
}

TEST(JetsProperty, GapIsTrigPolynomialInTheta) {
  const auto m = example_d4k3();
  const int count = 64;
  std::vector<Complex> samples;
  for (int k = 0; k < count; ++k) samples.push_back(surjectivity_gap(m, 2.0 * std::numbers::pi * k / count));
  const auto freq = from_samples(samples, 2 * m.d() + 2);
  EXPECT_LT(freq.aliased_tail, 1e-10);
  const double theta = 0.123;
  const Complex direct = freq.series(std::polar(1.0, theta));
  EXPECT_NEAR(direct.real(), surjectivity_gap(m, theta), 1e-10);
}

TEST(Determination, IdentityGivesExactZeros) {
  const auto m = ModelPolynomial::circular(4);
  const auto rep = determination_experiment(DefiningFunction(m), BiholoMap::identity(), factor_Q(m));
  EXPECT_EQ(rep.composition_defect, 0.0);
  EXPECT_EQ(rep.map_distance, 0.0);
  ASSERT_EQ(rep.samples.size(), 1u);
  const auto& s = rep.samples[0];
  EXPECT_EQ(s.disc_distance, 0.0);
  EXPECT_EQ(s.jet_distance, 0.0);
  EXPECT_EQ(s.aligned_distance, 0.0);
  EXPECT_EQ(s.center_distance, 0.0);
  EXPECT_EQ(s.residual_change, 0.0);
}

TEST(Determination, TangentMapIsRigid) {
  const auto m = ModelPolynomial::circular(4);
  const auto rep = determination_experiment(DefiningFunction(m), tangent_map(1e-4), factor_Q(m));
  EXPECT_EQ(rep.tangency_order, 4);
  EXPECT_EQ(rep.required_order, 2);
  EXPECT_LT(rep.max_residual(), 1e-7);
  EXPECT_LT(rep.max_disc_distance(), 1e-6);
  EXPECT_LT(rep.samples[0].center_distance, 1e-6);
}

TEST(Determination, HypothesisViolationIsAnError) {
  const auto m = ModelPolynomial::circular(4);
  BiholoMap H;
  H.h1[{2, 0}] = 1e-4;
  try {
    determination_experiment(DefiningFunction(m), H, factor_Q(m));
    FAIL() << "expected a hypothesis error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("hypothesis"), std::string::npos);
  }
}
