#pragma once

// Lifted discs (c, h, g) attached to {r = 0}, the explicit stationary family
// of the model and the associated residuals.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "discforge/error.hpp"
#include "discforge/fourier_circle.hpp"
#include "discforge/model.hpp"
#include "discforge/perturbation.hpp"

namespace discforge {

inline constexpr double kDiscTailTol = 1e-12;

struct LiftedDisc {
  TrigSeries c{0};
  TrigSeries h{0};
  TrigSeries g{0};
  int k0 = 1;

  /// Throws domain_error when the lift invariants fail.
  void validate(double tol = 1e-12) const {
    if (!c.is_real_valued(tol)) throw domain_error("disc: c is not real-valued");
    if (!h.is_analytic(tol) || !g.is_analytic(tol))
      throw domain_error("disc: h and g must be analytic");
    const double scale = std::max(1.0, std::max(h.l1_norm(), g.l1_norm()));
    if (std::abs(h(1.0)) > tol * scale || std::abs(g(1.0)) > tol * scale)
      throw domain_error("disc: h(1) and g(1) must vanish");
    const int count = next_pow2(std::max(4 * c.order(), 64));
    for (const auto& v : c.samples(count))
      if (std::abs(v) <= tol) throw domain_error("disc: c vanishes on the circle");
  }
};

struct ModelDiscParams {
  Complex b = 0.0;
  Complex v = 1.0;
  double theta = 0.0;
};

/// a(b) = (-1 + sqrt(1 - 4|b|^2)) / (2b), |a| < 1.
inline Complex mobius_a(Complex b) {
  const double m = std::abs(b);
  if (!(m < 0.5)) throw domain_error("mobius_a: |b| must be < 1/2");
  if (m == 0.0) return 0.0;
  if (m < 1e-8) return -std::conj(b) * (1.0 + m * m);
  // -2 conj(b) / (1 + sqrt(1 - 4|b|^2)) is the same number without cancellation.
  return -2.0 * std::conj(b) / (1.0 + std::sqrt(1.0 - 4.0 * m * m));
}

/// (conj(b) conj(zeta) + 1 + b zeta)^{k0}.
inline TrigSeries gamma_coefficient(Complex b, int k0) {
  TrigSeries base(1, {std::conj(b), 1.0, b});
  return power(base, k0);
}

/// h = (1 - zeta) htilde, return htilde. Requires h analytic with h(1) = 0.
inline TrigSeries divide_one_minus_zeta(const TrigSeries& h, double tol = 1e-10) {
  if (!h.is_analytic(tol)) throw domain_error("divide_one_minus_zeta: series is not analytic");
  const int n = h.order();
  const double scale = std::max(1.0, h.l1_norm());
  if (std::abs(h(1.0)) > tol * scale)
    throw domain_error("divide_one_minus_zeta: series does not vanish at 1");
  std::vector<Complex> q(static_cast<std::size_t>(std::max(n, 1)), 0.0);
  Complex acc = 0.0;
  for (int k = 0; k < n; ++k) {
    acc += h[k];
    q[static_cast<std::size_t>(k)] = acc;
  }
  return TrigSeries::analytic(q);
}

/// P(h, conj h) as an exact series product.
inline TrigSeries model_on_disc(const ModelPolynomial& model, const TrigSeries& h) {
  const int d = model.d();
  const TrigSeries hb = conjugate(h);
  std::vector<TrigSeries> hp{TrigSeries::constant(1.0)};
  std::vector<TrigSeries> hbp{TrigSeries::constant(1.0)};
  for (int k = 1; k <= d; ++k) {
    hp.push_back(multiply(hp.back(), h));
    hbp.push_back(multiply(hbp.back(), hb));
  }
  TrigSeries p(0);
  for (int j = d - model.k0(); j <= model.k0(); ++j)
    p = p + model.alpha(j) * multiply(hp[static_cast<std::size_t>(j)],
                                      hbp[static_cast<std::size_t>(d - j)]);
  return p;
}

/// The analytic g with Re g = p on the circle and g(1) = 0, for real p.
inline TrigSeries analytic_completion(const TrigSeries& p) {
  const int n = p.order();
  std::vector<Complex> g(static_cast<std::size_t>(n) + 1, 0.0);
  double mu = 0.0;
  for (int k = 1; k <= n; ++k) {
    g[static_cast<std::size_t>(k)] = 2.0 * p[k];
    mu -= g[static_cast<std::size_t>(k)].imag();
  }
  g[0] = Complex(p[0].real(), mu);
  return TrigSeries::analytic(g);
}

/// Stationary disc of the model through (b, v):
/// h = (1 - zeta) v / (1 - conj(a) zeta), so that zeta c' conj(h) is analytic
/// (the root of b zeta^2 + zeta + conj(b) is a, the pole of conj(h) must sit
/// there). The geometric series is cut at N with tail |a|^{N+1} / (1 - |a|).
inline LiftedDisc model_disc(const ModelPolynomial& model, const ModelDiscParams& params,
                             int N = kDefaultOrder, double* tail = nullptr) {
  if (params.v == 0.0) throw domain_error("model_disc: v must be nonzero");
  if (N < 1) throw domain_error("model_disc: N must be >= 1");
  const Complex a = mobius_a(params.b);
  const double am = std::abs(a);
  const double bound = std::pow(am, N + 1) / (1.0 - am);
  if (tail) *tail = bound;
  if (bound > kDiscTailTol)
    throw numerical_error("model_disc: N too small for the geometric tail (bound " +
                          std::to_string(bound) + ")");
  const Complex v = params.v * std::polar(1.0, params.theta);
  std::vector<Complex> ht(static_cast<std::size_t>(N) + 1);
  Complex an = v;
  for (auto& x : ht) {
    x = an;
    an *= std::conj(a);
  }
  const TrigSeries h = multiply(TrigSeries(1, {0.0, 1.0, -1.0}), TrigSeries::analytic(ht));
  LiftedDisc disc;
  disc.k0 = model.k0();
  disc.c = gamma_coefficient(params.b, model.k0());
  disc.h = h;
  disc.g = analytic_completion(model_on_disc(model, h));
  return disc;
}

/// Sample count that resolves every product formed from r on the disc.
inline int alias_free_count(const DefiningFunction& r, const LiftedDisc& disc) {
  long bound = 0;
  for (const auto& m : r.monomials())
    bound = std::max<long>(bound, static_cast<long>(m.a + m.b) * disc.h.order() +
                                      static_cast<long>(m.c) * disc.g.order());
  bound = std::max<long>(bound, disc.g.order());
  bound += disc.c.order() + disc.k0 + 2;
  return next_pow2(static_cast<int>(std::max<long>(2 * bound + 2, 64)));
}

struct StationarityResidual {
  double res1 = 0.0;
  double res2 = 0.0;
  double res3 = 0.0;

  double max() const { return std::max({res1, res2, res3}); }
};

/// Failure of zeta^{k0} c r_z(f), zeta^{k0} c r_w(f) to extend holomorphically,
/// and of f to lie on {r = 0}.
inline StationarityResidual stationarity_residual(const LiftedDisc& disc,
                                                  const DefiningFunction& r) {
  const int count = alias_free_count(r, disc);
  const auto zs = roots_of_unity(count);
  const auto hv = disc.h.samples(count);
  const auto gv = disc.g.samples(count);
  const auto cv = disc.c.samples(count);
  std::vector<Complex> f1(static_cast<std::size_t>(count));
  std::vector<Complex> f2(f1.size());
  StationarityResidual out;
  for (int k = 0; k < count; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const Complex pre = ipow(zs[i], disc.k0) * cv[i];
    f1[i] = pre * r.eval_r_z(hv[i], gv[i]);
    f2[i] = pre * r.eval_r_w(hv[i], gv[i]);
    out.res3 = std::max(out.res3, std::abs(r.eval_r(hv[i], gv[i])));
  }
  out.res1 = sup_norm(negative_project(spectrum(f1)));
  out.res2 = sup_norm(negative_project(spectrum(f2)));
  return out;
}

/// g(0) from h alone: (1 / i pi) of the contour integral of
/// P(h, conj h) / (1 - zeta) dzeta / zeta, with (1 - zeta)^{d-1} cancelled.
inline Complex cauchy_center(const TrigSeries& h, const ModelPolynomial& model) {
  const TrigSeries ht = divide_one_minus_zeta(h);
  const int d = model.d();
  const int count = next_pow2(std::max(4 * h.order(), 2 * d * (h.order() + 2) + 2));
  const auto zs = roots_of_unity(count);
  const auto hv = ht.samples(count);
  Complex sum = 0.0;
  for (int k = 0; k < count; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const Complex zb = std::conj(zs[i]);
    const Complex z = hv[i];
    const Complex zbar_sub = -zb * std::conj(hv[i]);
    Complex p = 0.0;
    for (int j = d - model.k0(); j <= model.k0(); ++j)
      p += model.alpha(j) * ipow(z, j) * ipow(zbar_sub, d - j);
    sum += ipow(1.0 - zs[i], d - 1) * p;
  }
  return 2.0 * sum / static_cast<double>(count);
}

inline std::array<Complex, 2> disc_center(const LiftedDisc& disc) {
  return {disc.h[0], disc.g[0]};
}

/// Image of the disc under R(z, w) = (e^{i phi} z, w); the lift is unchanged.
inline LiftedDisc rotate_disc(const LiftedDisc& disc, double phi) {
  LiftedDisc out = disc;
  out.h = std::polar(1.0, phi) * disc.h;
  return out;
}

/// Image of the disc under (z, w) -> (s z, s^d w).
inline LiftedDisc scale_disc(const LiftedDisc& disc, double s, int d) {
  LiftedDisc out = disc;
  out.h = Complex(s) * disc.h;
  out.g = Complex(std::pow(s, d)) * disc.g;
  return out;
}

}  // namespace discforge
