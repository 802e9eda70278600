#pragma once

// Jets at zeta = 1, the confluent Vandermonde certificate, the I1/I2
// surjectivity criterion and the jet-determination experiment.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "discforge/discs.hpp"
#include "discforge/error.hpp"
#include "discforge/fourier_circle.hpp"
#include "discforge/model.hpp"
#include "discforge/perturbation.hpp"
#include "discforge/rh_solver.hpp"

namespace discforge {

/// (h'(1), ..., h^{(n)}(1)).
inline std::vector<Complex> jet_map(const TrigSeries& h, int n) {
  if (n < 1) throw domain_error("jet_map: order must be >= 1");
  std::vector<Complex> j(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) j[static_cast<std::size_t>(k - 1)] = derivative_at(h, 1.0, k);
  return j;
}

namespace detail {

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

inline double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

/// Nodes rho = conj(r_j) with multiplicity index i, one per basis column
/// beyond (1 - zeta) and (1 - zeta) zeta.
struct JetNode {
  Complex rho;
  int i = 0;
};

inline std::vector<JetNode> jet_nodes(const QFactorization& q) {
  std::vector<JetNode> nodes;
  for (const auto& r : q.roots_inside) {
    const Complex rho = std::conj(r.root);
    if (std::abs(1.0 - rho) < 1e-6)
      throw numerical_error("jet_matrix: inside root within 1e-6 of 1, ill-conditioned");
    for (int i = 0; i < r.multiplicity; ++i) nodes.push_back({rho, i});
  }
  return nodes;
}

}  // namespace detail

struct JetMatrix {
  int n = 0;
  Eigen::MatrixXcd entries;
  Complex determinant;
  double condition_number = 0.0;
  Eigen::MatrixXcd reduced;  ///< R_{k,(j,i)} = C(i+k-1, k-1) chi_j^{k-1}
  Complex reduced_determinant;
  Complex scaling;  ///< det(entries) = scaling * det(reduced)
  std::vector<Complex> chi;
};

/// n-jet at 1 of the basis (1 - zeta), (1 - zeta) zeta,
/// (1 - zeta) / (1 - conj(r_j) zeta)^{i+1}, n = ell0 + 2.
inline JetMatrix jet_matrix(const ModelPolynomial& model, const QFactorization& q) {
  (void)model;
  const auto nodes = detail::jet_nodes(q);
  JetMatrix jm;
  jm.n = static_cast<int>(nodes.size()) + 2;
  const int n = jm.n;
  jm.entries = Eigen::MatrixXcd::Zero(n, n);
  jm.reduced = Eigen::MatrixXcd::Zero(n, n);
  // v = (1 - zeta) u  =>  v^{(k)}(1) = -k u^{(k-1)}(1).
  jm.entries(0, 0) = -1.0;
  jm.entries(0, 1) = -1.0;
  if (n > 1) jm.entries(1, 1) = -2.0;
  jm.reduced(0, 0) = 1.0;
  jm.reduced(0, 1) = 1.0;
  if (n > 1) jm.reduced(1, 1) = 1.0;
  jm.scaling = 1.0;
  for (int k = 1; k <= n; ++k) jm.scaling *= -detail::factorial(k);
  for (std::size_t c = 0; c < nodes.size(); ++c) {
    const auto [rho, i] = nodes[c];
    const Complex chi = rho / (1.0 - rho);
    jm.chi.push_back(chi);
    const int col = static_cast<int>(c) + 2;
    for (int k = 1; k <= n; ++k) {
      // u^{(m)}(1) = (i+m)!/i! rho^m / (1 - rho)^{i+m+1}
      const int m = k - 1;
      const double ratio = detail::factorial(i + m) / detail::factorial(i);
      jm.entries(k - 1, col) = -static_cast<double>(k) * ratio * ipow(rho, m) /
                               ipow(1.0 - rho, i + m + 1);
      jm.reduced(k - 1, col) = detail::binomial(i + k - 1, k - 1) * ipow(chi, k - 1);
    }
    jm.scaling /= ipow(1.0 - rho, i + 1);
  }
  jm.determinant = jm.entries.determinant();
  jm.reduced_determinant = jm.reduced.determinant();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(jm.entries);
  const auto& s = svd.singularValues();
  jm.condition_number = s[0] / s[s.size() - 1];
  double row_norms = 1.0;
  for (int k = 0; k < n; ++k) row_norms *= jm.entries.row(k).norm();
  if (std::abs(jm.determinant) <= 1e-12 * row_norms)
    throw numerical_error("jet_matrix: determinant below threshold (model anomaly)");
  return jm;
}

/// Truncation order at which the root columns are resolved to ~1e-15.
inline int jet_series_order(const QFactorization& q, int n) {
  double rmax = 0.0;
  for (const auto& r : q.roots_inside) rmax = std::max(rmax, std::abs(r.root));
  if (rmax == 0.0) return 8;
  int N = 8;
  while (N < 8192 && std::pow(rmax, N) * std::pow(N, n + 1) > 1e-16) N *= 2;
  return N;
}

/// Element of the basis span whose (ell0 + 2)-jet at 1 equals `jets`.
inline TrigSeries jet_reconstruct(const ModelPolynomial& model, const QFactorization& q,
                                  const std::vector<Complex>& jets) {
  const JetMatrix jm = jet_matrix(model, q);
  if (static_cast<int>(jets.size()) != jm.n)
    throw domain_error("jet_reconstruct: expected " + std::to_string(jm.n) + " jets");
  Eigen::VectorXcd rhs(jm.n);
  for (int k = 0; k < jm.n; ++k) rhs[k] = jets[static_cast<std::size_t>(k)];
  const Eigen::VectorXcd coef = jm.entries.fullPivLu().solve(rhs);
  const int N = jet_series_order(q, jm.n);
  std::vector<Complex> u(static_cast<std::size_t>(N) + 1, 0.0);
  u[0] += coef[0];
  u[1] += coef[1];
  const auto nodes = detail::jet_nodes(q);
  for (std::size_t c = 0; c < nodes.size(); ++c) {
    const auto [rho, i] = nodes[c];
    for (int k = 0; k <= N; ++k)
      u[static_cast<std::size_t>(k)] +=
          coef[static_cast<Eigen::Index>(c) + 2] * detail::binomial(k + i, i) * ipow(rho, k);
  }
  return multiply(TrigSeries(1, {0.0, 1.0, -1.0}), TrigSeries::analytic(u));
}

struct SurjectivityReport {
  Complex i1_printed, i2_printed;
  Complex i1_corrected, i2_corrected;
  Complex i1_quadrature, i2_quadrature;
  double gap_printed = 0.0;
  double gap = 0.0;  ///< from the integrals
};

/// I1, I2 at h_theta = (1 - zeta) e^{i theta}: printed closed forms, the
/// closed forms obtained by expanding the integrals, and trapezoidal
/// quadrature normalized by 1 / (2 pi i).
inline SurjectivityReport surjectivity_report(const ModelPolynomial& model, double theta,
                                              int samples = 64) {
  const int d = model.d();
  const int k0 = model.k0();
  SurjectivityReport rep;
  for (int j = d - k0; j <= k0; ++j) {
    const Complex a = model.alpha(j);
    rep.i1_printed -= detail::binomial(d - 1, d - 1 - j) * j * a *
                      std::polar(1.0, (2 * j - d - 1) * theta);
    rep.i1_corrected = rep.i1_printed;
    rep.i2_corrected -= detail::binomial(d - 1, j - 2) * (d - j) * a *
                        std::polar(1.0, (2 * j - d + 1) * theta);
  }
  const int j_hi = (d - 3 < k0) ? k0 - 2 : k0;
  for (int j = d - k0; j <= j_hi; ++j)
    rep.i2_printed += detail::binomial(d - 1, d - 3 - j) * (d - j) * model.alpha(j) *
                      std::polar(1.0, (2 * j - d + 1) * theta);

  const int count = next_pow2(std::max(samples, 4 * d + 8));
  const auto zs = roots_of_unity(count);
  const Complex e = std::polar(1.0, theta);
  for (const auto& z : zs) {
    const Complex h = (1.0 - z) * e;
    // (1/2 pi i) int F dzeta = mean(F zeta)
    rep.i1_quadrature += model.eval_Pz(h) * z;
    rep.i2_quadrature -= model.eval_Pzbar(h) / (z * z);
  }
  rep.i1_quadrature /= static_cast<double>(count);
  rep.i2_quadrature /= static_cast<double>(count);
  rep.gap_printed = std::norm(rep.i1_printed) - std::norm(rep.i2_printed);
  rep.gap = std::norm(rep.i1_quadrature) - std::norm(rep.i2_quadrature);
  const double scale = std::max(1.0, std::abs(rep.i1_corrected) + std::abs(rep.i2_corrected));
  if (std::abs(rep.i1_corrected - rep.i1_quadrature) > 1e-10 * scale ||
      std::abs(rep.i2_corrected - rep.i2_quadrature) > 1e-10 * scale)
    throw internal_error("surjectivity_report: closed form and quadrature disagree");
  return rep;
}

/// |I1|^2 - |I2|^2 from the defining integrals.
inline double surjectivity_gap(const ModelPolynomial& model, double theta) {
  return surjectivity_report(model, theta).gap;
}

}  // namespace discforge
