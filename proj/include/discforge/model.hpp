#pragma once

// Model hypersurface S = {-Re w + P(z, zbar) = 0} with
// P = sum_{j=d-k0}^{k0} alpha_j z^j zbar^{d-j}, and the Q-polynomial
// zeta^{k0} P_{z zbar}(1-zeta, 1-zbar zeta) = (zeta-1)^{d-2} Q(zeta).

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "discforge/error.hpp"
#include "discforge/fourier_circle.hpp"

namespace discforge {

inline constexpr double kRootCircleMargin = 1e-8;

class ModelPolynomial {
 public:
  /// `alpha` maps j in [d-k0, k0] to alpha_j. Only j >= d/2 is read; the
  /// mirror coefficients alpha_{d-j} = conj(alpha_j) are derived.
  ModelPolynomial(int d, int k0, const std::map<int, Complex>& alpha)
      : d_(d), k0_(k0), alpha_(static_cast<std::size_t>(d) + 1, 0.0) {
    if (d < 2 || d % 2 != 0) throw config_error("model: d must be an even integer >= 2");
    if (k0 < d / 2 || k0 > d - 1)
      throw config_error("model: k0 must satisfy d/2 <= k0 <= d-1");
    for (const auto& [j, a] : alpha) {
      if (j < d - k0 || j > k0)
        throw config_error("model: alpha index " + std::to_string(j) +
                           " outside [d-k0, k0]");
      if (j < d / 2) {
        auto it = alpha.find(d - j);
        if (it != alpha.end() && std::abs(it->second - std::conj(a)) > 1e-12)
          throw config_error("model: alpha violates Hermitian symmetry at j=" +
                             std::to_string(j));
        continue;
      }
      if (j == d / 2 && std::abs(a.imag()) > 1e-12)
        throw config_error("model: middle coefficient alpha_{d/2} must be real");
      alpha_[j] = (j == d / 2) ? Complex(a.real(), 0.0) : a;
      alpha_[d - j] = std::conj(alpha_[j]);
    }
    if (alpha_[k0] == 0.0) throw config_error("model: alpha_{k0} must be nonzero");
  }

  /// P = |z|^d.
  static ModelPolynomial circular(int d) { return {d, d / 2, {{d / 2, 1.0}}}; }

  int d() const { return d_; }
  int k0() const { return k0_; }
  int essential_type() const { return d_ - k0_; }
  Complex alpha(int j) const {
    return (j < 0 || j > d_) ? Complex(0.0) : alpha_[static_cast<std::size_t>(j)];
  }
  /// gamma_j = j (d-j) alpha_j.
  Complex gamma(int j) const { return static_cast<double>(j * (d_ - j)) * alpha(j); }

  /// Derivative d^{nz}/dz^{nz} d^{nzb}/dzbar^{nzb} of P at z.
  Complex derivative(Complex z, int nz, int nzb) const {
    Complex sum = 0.0;
    const Complex zb = std::conj(z);
    for (int j = d_ - k0_; j <= k0_; ++j) {
      const int b = d_ - j;
      if (nz > j || nzb > b) continue;
      double f = 1.0;
      for (int m = 0; m < nz; ++m) f *= j - m;
      for (int m = 0; m < nzb; ++m) f *= b - m;
      sum += f * alpha(j) * ipow(z, j - nz) * ipow(zb, b - nzb);
    }
    return sum;
  }

  Complex eval_P(Complex z) const { return derivative(z, 0, 0); }
  Complex eval_Pz(Complex z) const { return derivative(z, 1, 0); }
  Complex eval_Pzbar(Complex z) const { return derivative(z, 0, 1); }
  Complex eval_Pzz(Complex z) const { return derivative(z, 2, 0); }
  Complex eval_Pzzbar(Complex z) const { return derivative(z, 1, 1); }

  friend bool operator==(const ModelPolynomial&, const ModelPolynomial&) = default;

 private:
  int d_;
  int k0_;
  std::vector<Complex> alpha_;
};

struct SubharmonicReport {
  double min_ratio = 0.0;  ///< min of P_{z zbar} / |z|^{d-2} over the grid
  bool passed = false;
};

/// Positivity of P_{z zbar} away from 0 on a radial-angular grid.
inline SubharmonicReport check_subharmonic(const ModelPolynomial& model,
                                           int grid_radii = 64,
                                           int grid_angles = 256,
                                           double margin = 1e-10) {
  if (grid_radii < 64 || grid_angles < 64)
    throw domain_error("check_subharmonic: grid sizes must be >= 64");
  double min_ratio = INFINITY;
  for (int ir = 1; ir <= grid_radii; ++ir) {
    const double rad = static_cast<double>(ir) / grid_radii;
    const double scale = std::pow(rad, model.d() - 2);
    for (int ia = 0; ia < grid_angles; ++ia) {
      const Complex z = std::polar(rad, 2.0 * std::numbers::pi * ia / grid_angles);
      min_ratio = std::min(min_ratio, model.eval_Pzzbar(z).real() / scale);
    }
  }
  return {min_ratio, min_ratio > margin};
}

/// Coefficients Q_0..Q_{2k0+1-d} of
/// Q(zeta) = sum_j (-1)^{j-1} gamma_j zeta^{k0+j+1-d}; Q_0 = 0 always.
inline std::vector<Complex> compute_Q(const ModelPolynomial& model) {
  const int d = model.d();
  const int k0 = model.k0();
  std::vector<Complex> q(static_cast<std::size_t>(2 * k0 + 2 - d), 0.0);
  for (int j = d - k0; j <= k0; ++j) {
    const double sign = ((j - 1) % 2 == 0) ? 1.0 : -1.0;
    q[static_cast<std::size_t>(k0 + j + 1 - d)] += sign * model.gamma(j);
  }
  return q;
}

struct RootMultiplicity {
  Complex root;
  int multiplicity = 1;
};

/// Q(zeta) = C zeta s(zeta) t(zeta); s collects roots outside the disc, t the
/// nonzero roots inside.
struct QFactorization {
  Complex C;
  std::vector<RootMultiplicity> roots_inside;  ///< distinct, zero excluded
  std::vector<Complex> roots_outside;
  int ell0 = 0;
  int i0 = 0;
  int ell1 = 0;  ///< distinct inside roots

  std::vector<Complex> inside_roots_flat() const {
    std::vector<Complex> out;
    for (const auto& r : roots_inside)
      for (int m = 0; m < r.multiplicity; ++m) out.push_back(r.root);
    return out;
  }

  /// prod (q - zeta) over the given roots as polynomial coefficients.
  static std::vector<Complex> product_poly(const std::vector<Complex>& roots) {
    std::vector<Complex> p{1.0};
    for (const auto& q : roots) {
      std::vector<Complex> next(p.size() + 1, 0.0);
      for (std::size_t k = 0; k < p.size(); ++k) {
        next[k] += q * p[k];
        next[k + 1] -= p[k];
      }
      p = std::move(next);
    }
    return p;
  }

  std::vector<Complex> s_coeffs() const { return product_poly(roots_outside); }
  std::vector<Complex> t_coeffs() const { return product_poly(inside_roots_flat()); }

  TrigSeries s_series() const { return TrigSeries::analytic(s_coeffs()); }
  TrigSeries t_series() const { return TrigSeries::analytic(t_coeffs()); }

  Complex eval_s(Complex z) const {
    Complex v = 1.0;
    for (const auto& q : roots_outside) v *= q - z;
    return v;
  }

  /// Coefficients of C zeta s t, for reconstruction checks.
  std::vector<Complex> reconstruct_Q() const {
    std::vector<Complex> roots = roots_outside;
    for (const auto& r : inside_roots_flat()) roots.push_back(r);
    std::vector<Complex> p = product_poly(roots);
    std::vector<Complex> q(p.size() + 1, 0.0);
    for (std::size_t k = 0; k < p.size(); ++k) q[k + 1] = C * p[k];
    return q;
  }
};

namespace detail {

inline Complex poly_eval(const std::vector<Complex>& c, Complex z) {
  Complex v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * z + *it;
  return v;
}

inline std::vector<Complex> poly_derivative(const std::vector<Complex>& c) {
  std::vector<Complex> d;
  for (std::size_t k = 1; k < c.size(); ++k) d.push_back(static_cast<double>(k) * c[k]);
  return d;
}

/// Roots of sum c_k z^k via companion-matrix eigenvalues, Newton-polished.
inline std::vector<Complex> polynomial_roots(const std::vector<Complex>& c) {
  const int deg = static_cast<int>(c.size()) - 1;
  if (deg <= 0) return {};
  const Complex lead = c.back();
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -c[static_cast<std::size_t>(i)] / lead;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  std::vector<Complex> roots(es.eigenvalues().data(), es.eigenvalues().data() + deg);
  const auto dc = poly_derivative(c);
  for (auto& z : roots) {
    for (int it = 0; it < 20; ++it) {
      const Complex f = poly_eval(c, z);
      const Complex fp = poly_eval(dc, z);
      if (std::abs(fp) == 0.0) break;
      const Complex step = f / fp;
      z -= step;
      if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(z))) break;
    }
  }
  return roots;
}

}  // namespace detail

/// Roots of Q grouped and classified with respect to the unit circle.
inline QFactorization factor_Q(const ModelPolynomial& model) {
  const auto q = compute_Q(model);
  // Q = zeta * R(zeta); R(0) = (-1)^{d-k0-1} gamma_{d-k0} != 0.
  std::vector<Complex> r(q.begin() + 1, q.end());
  QFactorization f;
  // prod (q_j - zeta) has leading coefficient (-1)^deg.
  const int deg = static_cast<int>(r.size()) - 1;
  f.C = (deg % 2 == 0) ? r.back() : -r.back();
  std::vector<Complex> inside;
  for (const auto& z : detail::polynomial_roots(r)) {
    const double m = std::abs(z);
    if (std::abs(m - 1.0) <= kRootCircleMargin)
      throw numerical_error("factor_Q: root within 1e-8 of the unit circle (degenerate model)");
    if (m < 1.0)
      inside.push_back(z);
    else
      f.roots_outside.push_back(z);
  }
  // Group numerically repeated inside roots.
  std::vector<bool> used(inside.size(), false);
  for (std::size_t a = 0; a < inside.size(); ++a) {
    if (used[a]) continue;
    Complex sum = inside[a];
    int mult = 1;
    used[a] = true;
    for (std::size_t b = a + 1; b < inside.size(); ++b) {
      if (!used[b] && std::abs(inside[b] - inside[a]) < 1e-5 * std::max(1.0, std::abs(inside[a]))) {
        used[b] = true;
        sum += inside[b];
        ++mult;
      }
    }
    f.roots_inside.push_back({sum / static_cast<double>(mult), mult});
  }
  std::sort(f.roots_inside.begin(), f.roots_inside.end(),
            [](const auto& x, const auto& y) { return std::abs(x.root) < std::abs(y.root); });
  f.ell1 = static_cast<int>(f.roots_inside.size());
  f.ell0 = static_cast<int>(inside.size());
  f.i0 = static_cast<int>(f.roots_outside.size());
  const int expected = model.k0() - model.d() / 2;
  if (f.ell0 != expected || f.i0 != expected)
    throw internal_error("factor_Q: root count mismatch (ell0=" + std::to_string(f.ell0) +
                         ", i0=" + std::to_string(f.i0) + ", expected " +
                         std::to_string(expected) + ")");
  return f;
}

/// Winding number of a nowhere-vanishing series around 0.
inline int winding_number(const TrigSeries& s) {
  const int count = next_pow2(std::max(4 * s.order(), 64));
  const auto v = s.samples(count);
  double total = 0.0;
  double min_abs = INFINITY;
  for (int k = 0; k < count; ++k) {
    min_abs = std::min(min_abs, std::abs(v[k]));
    total += std::arg(v[(k + 1) % count] / v[k]);
  }
  if (min_abs <= 1e-8) throw numerical_error("winding_number: symbol nearly vanishes on the circle");
  return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

/// Random admissible model: Gaussian alpha_j, then lambda |z|^d added until
/// P_{z zbar} > 0 away from 0 and Q has no roots near the circle.
template <class Rng>
ModelPolynomial random_model(int d, int k0, Rng& rng) {
  std::normal_distribution<double> gauss;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::map<int, Complex> alpha;
    for (int j = d / 2 + 1; j <= k0; ++j) alpha[j] = Complex(gauss(rng), gauss(rng));
    double lambda = (k0 == d / 2) ? 0.5 + std::abs(gauss(rng)) : gauss(rng);
    for (int grow = 0; grow < 200; ++grow) {
      alpha[d / 2] = lambda;
      if (lambda != 0.0 || k0 > d / 2) {
        ModelPolynomial m(d, k0, alpha);
        if (check_subharmonic(m).passed) {
          try {
            factor_Q(m);
            return m;
          } catch (const Error&) {
            break;
          }
        }
      }
      lambda = lambda <= 0.0 ? 0.25 : lambda * 1.5;
    }
  }
  throw internal_error("random_model: no admissible model found");
}

}  // namespace discforge
