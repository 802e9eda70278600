#pragma once

// Defining functions r(z, w) = -Re w + P(z, zbar) + theta(z, Im w) where theta
// is a polynomial perturbation, plus near-identity polynomial maps (z, w) -> H.

#include <algorithm>
#include <climits>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "discforge/error.hpp"
#include "discforge/fourier_circle.hpp"
#include "discforge/model.hpp"

namespace discforge {

inline constexpr int kMaxPerturbationDegree = 8;

/// kappa z^a zbar^b u^c with u = Im w.
struct Monomial {
  int a = 0;
  int b = 0;
  int c = 0;
  Complex kappa = 0.0;
};

/// z^i zbar^j u^l * r_{ijl}(z, u) with r_{ijl} = sum kappa_{pq} z^p u^q.
/// Each stored term enters r together with its complex conjugate.
struct PerturbationTerm {
  int i = 0;
  int j = 0;
  int l = 0;
  std::map<std::pair<int, int>, Complex> coeffs;  ///< (p, q) -> kappa
};

class DefiningFunction {
 public:
  explicit DefiningFunction(ModelPolynomial model,
                            std::vector<PerturbationTerm> terms = {},
                            std::vector<double> theta1 = {})
      : model_(std::move(model)), terms_(std::move(terms)), theta1_(std::move(theta1)) {
    const int d = model_.d();
    for (const auto& t : terms_) {
      if (t.i < 0 || t.j < 0 || t.l < 0 || t.l > d - 1)
        throw config_error("perturbation: indices (i, j, l) out of range");
      const int want = (t.l == 0) ? d + 1 : d - t.l;
      if (t.i + t.j != want)
        throw config_error("perturbation: term (" + std::to_string(t.i) + "," +
                           std::to_string(t.j) + "," + std::to_string(t.l) +
                           ") needs i+j = " + std::to_string(want));
      for (const auto& [pq, k] : t.coeffs) {
        if (pq.first < 0 || pq.second < 0 || pq.first > kMaxPerturbationDegree ||
            pq.second > kMaxPerturbationDegree)
          throw config_error("perturbation: coefficient degree outside [0, 8]");
        if (t.l == 0 && pq.second != 0)
          throw config_error("perturbation: l = 0 terms cannot depend on Im w");
      }
    }
    while (!theta1_.empty() && theta1_.back() == 0.0) theta1_.pop_back();
    if (theta1_.size() > static_cast<std::size_t>(kMaxPerturbationDegree) + 1)
      throw config_error("perturbation: theta1 degree above 8");
    for (std::size_t c = 0; c < std::min<std::size_t>(2, theta1_.size()); ++c)
      if (theta1_[c] != 0.0)
        throw config_error("perturbation: theta1 must vanish to second order");
    build_monomials();
  }

  const ModelPolynomial& model() const { return model_; }
  const std::vector<PerturbationTerm>& terms() const { return terms_; }
  const std::vector<double>& theta1() const { return theta1_; }
  const std::vector<Monomial>& monomials() const { return monomials_; }
  bool is_model() const { return perturbation_empty_; }

  /// d^{nz}/dz d^{nzb}/dzbar d^{nu}/du of the polynomial part (everything
  /// except -Re w).
  Complex poly_derivative(Complex z, double u, int nz, int nzb, int nu) const {
    Complex sum = 0.0;
    const Complex zb = std::conj(z);
    for (const auto& m : monomials_) {
      if (nz > m.a || nzb > m.b || nu > m.c) continue;
      double f = 1.0;
      for (int k = 0; k < nz; ++k) f *= m.a - k;
      for (int k = 0; k < nzb; ++k) f *= m.b - k;
      for (int k = 0; k < nu; ++k) f *= m.c - k;
      sum += f * m.kappa * ipow(z, m.a - nz) * ipow(zb, m.b - nzb) *
             std::pow(u, m.c - nu);
    }
    return sum;
  }

  double eval_r(Complex z, Complex w) const {
    return -w.real() + poly_derivative(z, w.imag(), 0, 0, 0).real();
  }
  Complex eval_r_z(Complex z, Complex w) const { return poly_derivative(z, w.imag(), 1, 0, 0); }
  Complex eval_r_zbar(Complex z, Complex w) const { return poly_derivative(z, w.imag(), 0, 1, 0); }
  Complex eval_r_w(Complex z, Complex w) const {
    return -0.5 + poly_derivative(z, w.imag(), 0, 0, 1) / Complex(0.0, 2.0);
  }
  Complex eval_r_wbar(Complex z, Complex w) const {
    return -0.5 - poly_derivative(z, w.imag(), 0, 0, 1) / Complex(0.0, 2.0);
  }
  Complex eval_r_zz(Complex z, Complex w) const { return poly_derivative(z, w.imag(), 2, 0, 0); }
  Complex eval_r_zzbar(Complex z, Complex w) const { return poly_derivative(z, w.imag(), 1, 1, 0); }
  Complex eval_r_zw(Complex z, Complex w) const {
    return poly_derivative(z, w.imag(), 1, 0, 1) / Complex(0.0, 2.0);
  }
  Complex eval_r_zwbar(Complex z, Complex w) const {
    return -poly_derivative(z, w.imag(), 1, 0, 1) / Complex(0.0, 2.0);
  }
  Complex eval_r_ww(Complex z, Complex w) const {
    return -0.25 * poly_derivative(z, w.imag(), 0, 0, 2);
  }
  Complex eval_r_wwbar(Complex z, Complex w) const {
    return 0.25 * poly_derivative(z, w.imag(), 0, 0, 2);
  }

 private:
  void build_monomials() {
    const int d = model_.d();
    for (int j = d - model_.k0(); j <= model_.k0(); ++j)
      if (model_.alpha(j) != 0.0) monomials_.push_back({j, d - j, 0, model_.alpha(j)});
    perturbation_empty_ = true;
    for (const auto& t : terms_) {
      for (const auto& [pq, k] : t.coeffs) {
        if (k == 0.0) continue;
        perturbation_empty_ = false;
        monomials_.push_back({t.i + pq.first, t.j, t.l + pq.second, k});
        monomials_.push_back({t.j, t.i + pq.first, t.l + pq.second, std::conj(k)});
      }
    }
    for (std::size_t c = 2; c < theta1_.size(); ++c) {
      if (theta1_[c] == 0.0) continue;
      perturbation_empty_ = false;
      monomials_.push_back({0, 0, static_cast<int>(c), theta1_[c]});
    }
  }

  ModelPolynomial model_;
  std::vector<PerturbationTerm> terms_;
  std::vector<double> theta1_;
  std::vector<Monomial> monomials_;
  bool perturbation_empty_ = true;
};

namespace detail {

inline double derivative_weight(int n, int order, double delta) {
  double w = 0.0;
  for (int m = 0; m <= std::min(n, order); ++m) {
    double f = 1.0;
    for (int k = 0; k < m; ++k) f *= n - k;
    w += f * std::pow(delta, n - m);
  }
  return w;
}

}  // namespace detail

/// Weighted coefficient proxy for the C^{k+3} norm of the perturbation.
inline double x_norm_distance(const DefiningFunction& r, int k = 2, double delta = 1.0) {
  const int order = k + 3;
  double sup = 0.0;
  for (const auto& t : r.terms()) {
    double s = 0.0;
    for (const auto& [pq, kappa] : t.coeffs)
      s += std::abs(kappa) * detail::derivative_weight(pq.first + pq.second, order, delta);
    sup = std::max(sup, s);
  }
  double th = 0.0;
  for (std::size_t c = 0; c < r.theta1().size(); ++c)
    th += std::abs(r.theta1()[c]) * detail::derivative_weight(static_cast<int>(c), order, delta);
  return sup + th;
}

/// s^{-d} r(s z, s^d w) for any s > 0; the model part is invariant.
inline DefiningFunction scale_defining(const DefiningFunction& r, double s) {
  if (!(s > 0.0)) throw domain_error("scale_defining: scale must be positive");
  const int d = r.model().d();
  auto terms = r.terms();
  for (auto& t : terms)
    for (auto& [pq, kappa] : t.coeffs)
      kappa *= std::pow(s, t.i + pq.first + t.j + d * (t.l + pq.second) - d);
  auto theta = r.theta1();
  for (std::size_t c = 0; c < theta.size(); ++c)
    theta[c] *= std::pow(s, d * (static_cast<int>(c) - 1));
  return DefiningFunction(r.model(), std::move(terms), std::move(theta));
}

/// r_t = t^{-d} r o phi_t with phi_t(z, w) = (t z, t^d w), t in (0, 1].
inline DefiningFunction dilate(const DefiningFunction& r, double t) {
  if (!(t > 0.0 && t <= 1.0)) throw domain_error("dilate: t must lie in (0, 1]");
  return scale_defining(r, t);
}

/// r o R^{-1} for the rotation R(z, w) = (e^{i phi} z, w).
inline DefiningFunction rotate_defining(const DefiningFunction& r, double phi) {
  const ModelPolynomial& m = r.model();
  std::map<int, Complex> alpha;
  for (int j = m.d() - m.k0(); j <= m.k0(); ++j)
    alpha[j] = m.alpha(j) * std::polar(1.0, -phi * (2 * j - m.d()));
  ModelPolynomial rotated(m.d(), m.k0(), alpha);
  auto terms = r.terms();
  for (auto& t : terms)
    for (auto& [pq, kappa] : t.coeffs)
      kappa *= std::polar(1.0, -phi * (t.i + pq.first - t.j));
  return DefiningFunction(std::move(rotated), std::move(terms), r.theta1());
}

/// Polynomial map H = (H1, H2); each component maps (j, l) -> coefficient of
/// z^j w^l.
struct BiholoMap {
  std::map<std::pair<int, int>, Complex> h1{{{1, 0}, 1.0}};
  std::map<std::pair<int, int>, Complex> h2{{{0, 1}, 1.0}};
  double domain_radius = std::numeric_limits<double>::infinity();

  static BiholoMap identity() { return {}; }

  std::pair<Complex, Complex> operator()(Complex z, Complex w) const {
    auto ev = [&](const auto& comp) {
      Complex s = 0.0;
      for (const auto& [jl, c] : comp) s += c * ipow(z, jl.first) * ipow(w, jl.second);
      return s;
    };
    return {ev(h1), ev(h2)};
  }

  /// Coefficients of H - Id.
  BiholoMap minus_identity() const {
    BiholoMap out{h1, h2, domain_radius};
    out.h1[{1, 0}] -= 1.0;
    out.h2[{0, 1}] -= 1.0;
    return out;
  }

  bool fixes_origin() const {
    auto it1 = h1.find({0, 0});
    auto it2 = h2.find({0, 0});
    return (it1 == h1.end() || it1->second == 0.0) && (it2 == h2.end() || it2->second == 0.0);
  }

  /// Smallest dilation exponent over the monomials of H - Id (weight d on w);
  /// INT_MAX for the identity.
  int tangency_order(int d) const {
    const BiholoMap diff = minus_identity();
    int order = INT_MAX;
    for (const auto& [jl, c] : diff.h1)
      if (c != 0.0) order = std::min(order, jl.first + d * jl.second - 1);
    for (const auto& [jl, c] : diff.h2)
      if (c != 0.0) order = std::min(order, jl.first + d * jl.second - d);
    return order;
  }

  /// Max coefficient modulus of H - Id.
  double distance_to_identity() const {
    const BiholoMap diff = minus_identity();
    double m = 0.0;
    for (const auto& [jl, c] : diff.h1) m = std::max(m, std::abs(c));
    for (const auto& [jl, c] : diff.h2) m = std::max(m, std::abs(c));
    return m;
  }
};

/// H_t = phi_t^{-1} o H o phi_t.
inline BiholoMap dilate_map(const BiholoMap& H, double t, int d) {
  if (!(t > 0.0 && t <= 1.0)) throw domain_error("dilate_map: t must lie in (0, 1]");
  BiholoMap out;
  out.h1.clear();
  out.h2.clear();
  out.domain_radius = H.domain_radius / t;
  auto scale = [&](const auto& src, auto& dst, int shift) {
    for (const auto& [jl, c] : src) {
      const int e = jl.first + d * jl.second - shift;
      if (c == 0.0) continue;
      if (e < 0)
        throw domain_error("dilate_map: negative scaling exponent for z^" +
                           std::to_string(jl.first) + " w^" + std::to_string(jl.second));
      dst[jl] = c * std::pow(t, e);
    }
  };
  scale(H.h1, out.h1, 1);
  scale(H.h2, out.h2, d);
  return out;
}

/// (H1(h, g), H2(h, g)) computed by exact series products.
inline std::pair<TrigSeries, TrigSeries> compose_disc(const BiholoMap& H, const TrigSeries& h,
                                                      const TrigSeries& g) {
  if (std::isfinite(H.domain_radius) &&
      (sup_norm(h) >= H.domain_radius || sup_norm(g) >= H.domain_radius))
    throw domain_error("compose_disc: disc leaves the domain of H");
  int max_j = 0;
  int max_l = 0;
  for (const auto* comp : {&H.h1, &H.h2})
    for (const auto& [jl, c] : *comp) {
      max_j = std::max(max_j, jl.first);
      max_l = std::max(max_l, jl.second);
    }
  std::vector<TrigSeries> hp{TrigSeries::constant(1.0)};
  std::vector<TrigSeries> gp{TrigSeries::constant(1.0)};
  for (int k = 1; k <= max_j; ++k) hp.push_back(multiply(hp.back(), h));
  for (int k = 1; k <= max_l; ++k) gp.push_back(multiply(gp.back(), g));
  auto apply = [&](const auto& comp) {
    TrigSeries out(0);
    for (const auto& [jl, c] : comp) {
      if (c == 0.0) continue;
      out = out + c * multiply(hp[static_cast<std::size_t>(jl.first)],
                               gp[static_cast<std::size_t>(jl.second)]);
    }
    return out;
  };
  return {apply(H.h1), apply(H.h2)};
}

}  // namespace discforge
