#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "discforge/model.hpp"

using namespace discforge;

namespace {

ModelPolynomial example_d4k3() { return ModelPolynomial(4, 3, {{3, 0.25}, {2, 1.0}}); }

struct Shape {
  int d, k0;
};

const std::vector<Shape> kShapes{{2, 1}, {4, 2}, {4, 3}, {6, 3}, {6, 4}, {6, 5}, {8, 6}};

}  // namespace

TEST(Model, EvaluatesCircularModel) {
  const auto m = ModelPolynomial::circular(4);
  EXPECT_NEAR(std::abs(m.eval_P(2.0) - 16.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(m.eval_Pzzbar(1.0) - 4.0), 0.0, 1e-12);
  const Complex z(0.3, -0.7);
  EXPECT_NEAR(std::abs(m.eval_Pzzbar(z) - 4.0 * std::norm(z)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(m.eval_Pz(z) - 2.0 * z * std::conj(z) * std::conj(z)), 0.0, 1e-12);
}

TEST(Model, ExampleLaplacianAtOne) {
  const auto m = example_d4k3();
  EXPECT_NEAR(std::abs(m.gamma(1) - 0.75), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(m.gamma(2) - 4.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(m.eval_Pzzbar(1.0) - 5.5), 0.0, 1e-12);
}

TEST(Model, DerivativesMatchFiniteDifferences) {
  const auto m = example_d4k3();
  const Complex z(0.4, 0.3);
  const double h = 1e-6;
  const Complex dx = (m.eval_P(z + h) - m.eval_P(z - h)) / (2 * h);
  const Complex dy = (m.eval_P(z + Complex(0, h)) - m.eval_P(z - Complex(0, h))) / (2 * h);
  const Complex pz = 0.5 * (dx - Complex(0, 1) * dy);
  const Complex pzb = 0.5 * (dx + Complex(0, 1) * dy);
  EXPECT_LT(std::abs(pz - m.eval_Pz(z)), 1e-8);
  EXPECT_LT(std::abs(pzb - m.eval_Pzbar(z)), 1e-8);
  EXPECT_LT(std::abs(m.eval_P(z).imag()), 1e-15);
}

TEST(Model, RejectsInvalidParameters) {
  EXPECT_THROW(ModelPolynomial(3, 2, {{2, 1.0}}), Error);
  EXPECT_THROW(ModelPolynomial(4, 1, {{2, 1.0}}), Error);
  EXPECT_THROW(ModelPolynomial(4, 4, {{2, 1.0}}), Error);
  EXPECT_THROW(ModelPolynomial(4, 3, {{2, 1.0}}), Error);
  EXPECT_THROW(ModelPolynomial(4, 2, {{2, Complex(1.0, 0.5)}}), Error);
  EXPECT_THROW(ModelPolynomial(4, 3, {{3, Complex(1.0, 1.0)}, {1, Complex(1.0, 1.0)}}), Error);
  try {
    ModelPolynomial(4, 3, {{3, Complex(1.0, 1.0)}, {1, Complex(1.0, 1.0)}});
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::config);
  }
}

TEST(Model, HermitianMirrorIsDerived) {
  const ModelPolynomial m(4, 3, {{3, Complex(0.2, 0.1)}, {2, 1.0}});
  EXPECT_EQ(m.alpha(1), Complex(0.2, -0.1));
}

TEST(Model, SubharmonicReports) {
  EXPECT_NEAR(check_subharmonic(ModelPolynomial::circular(4)).min_ratio, 4.0, 1e-12);
  const auto ex = check_subharmonic(example_d4k3());
  EXPECT_NEAR(ex.min_ratio, 2.5, 1e-12);
  EXPECT_TRUE(ex.passed);
  EXPECT_FALSE(check_subharmonic(ModelPolynomial(4, 3, {{3, 1.0}})).passed);
  EXPECT_THROW(check_subharmonic(example_d4k3(), 32, 256), Error);
}

TEST(Model, QForCircularModels) {
  for (const int d : {2, 4, 6, 8}) {
    const auto q = compute_Q(ModelPolynomial::circular(d));
    ASSERT_EQ(q.size(), 2u);
    const double sign = ((d / 2 - 1) % 2 == 0) ? 1.0 : -1.0;
    EXPECT_EQ(q[0], 0.0);
    EXPECT_EQ(q[1], Complex(sign * d * d / 4.0));
  }
}

TEST(Model, QForExample) {
  const auto q = compute_Q(example_d4k3());
  ASSERT_EQ(q.size(), 4u);
  EXPECT_NEAR(std::abs(q[1] - 0.75), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(q[2] + 4.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(q[3] - 0.75), 0.0, 1e-15);
}

TEST(Model, FactorCircular) {
  const auto f = factor_Q(ModelPolynomial::circular(4));
  EXPECT_TRUE(f.roots_inside.empty());
  EXPECT_TRUE(f.roots_outside.empty());
  EXPECT_EQ(f.ell0, 0);
  EXPECT_EQ(f.i0, 0);
  EXPECT_NEAR(std::abs(f.C + 4.0), 0.0, 1e-14);
  const auto sphere = factor_Q(ModelPolynomial::circular(2));
  EXPECT_EQ(sphere.ell0, 0);
  EXPECT_NEAR(std::abs(sphere.C - 1.0), 0.0, 1e-14);
}

TEST(Model, FactorExampleAgainstQuadraticFormula) {
  const auto f = factor_Q(example_d4k3());
  // nonzero roots of 3 z^2 - 16 z + 3
  const double disc = std::sqrt(256.0 - 36.0);
  const double r_in = (16.0 - disc) / 6.0;
  const double r_out = (16.0 + disc) / 6.0;
  ASSERT_EQ(f.roots_inside.size(), 1u);
  ASSERT_EQ(f.roots_outside.size(), 1u);
  EXPECT_NEAR(std::abs(f.roots_inside[0].root - r_in), 0.0, 1e-12);
  EXPECT_EQ(f.roots_inside[0].multiplicity, 1);
  EXPECT_NEAR(std::abs(f.roots_outside[0] - r_out), 0.0, 1e-12);
  EXPECT_NEAR(r_in, 0.194549, 1e-4);
  EXPECT_EQ(f.ell0, 1);
  EXPECT_EQ(f.i0, 1);
  EXPECT_EQ(f.ell1, 1);
  const auto rec = f.reconstruct_Q();
  const auto q = compute_Q(example_d4k3());
  for (std::size_t k = 0; k < q.size(); ++k) EXPECT_LT(std::abs(rec[k] - q[k]), 1e-12);
}

TEST(Model, WindingNumbers) {
  const auto f = factor_Q(example_d4k3());
  EXPECT_EQ(winding_number(f.s_series()), 0);
  EXPECT_EQ(winding_number(f.t_series()), 1);
  EXPECT_EQ(winding_number(TrigSeries::monomial(3)), 3);
  EXPECT_EQ(winding_number(TrigSeries::monomial(-2)), -2);
  EXPECT_THROW(winding_number(TrigSeries(1, {0.0, 1.0, -1.0})), Error);
}

TEST(ModelProperty, RootCountLawOnRandomModels) {
  std::mt19937_64 rng(2024);
  int checked = 0;
  for (int trial = 0; trial < 210; ++trial) {
    const auto [d, k0] = kShapes[static_cast<std::size_t>(trial) % kShapes.size()];
    const auto m = random_model(d, k0, rng);
    EXPECT_TRUE(check_subharmonic(m).passed);
    const auto f = factor_Q(m);
    EXPECT_EQ(f.ell0, k0 - d / 2);
    EXPECT_EQ(f.i0, k0 - d / 2);
    int total = 1 + static_cast<int>(f.roots_outside.size());
    for (const auto& r : f.roots_inside) {
      total += r.multiplicity;
      EXPECT_GT(std::abs(std::abs(r.root) - 1.0), 1e-8);
    }
    for (const auto& r : f.roots_outside) EXPECT_GT(std::abs(std::abs(r) - 1.0), 1e-8);
    EXPECT_EQ(total, 2 * k0 + 1 - d);
    const auto rec = f.reconstruct_Q();
    const auto q = compute_Q(m);
    double scale = 0.0;
    for (const auto& c : q) scale = std::max(scale, std::abs(c));
    for (std::size_t k = 0; k < q.size(); ++k) EXPECT_LT(std::abs(rec[k] - q[k]), 1e-9 * scale);
    EXPECT_EQ(winding_number(f.t_series()), f.ell0);
    EXPECT_EQ(winding_number(f.s_series()), 0);
    ++checked;
  }
  EXPECT_EQ(checked, 210);
}
