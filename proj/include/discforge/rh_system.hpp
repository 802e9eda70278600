#pragma once

// Discretized modified operator T' = (T1', T2', T3') on truncated coefficient
// vectors and its exact linearization assembled from multiplication symbols.
//
// Unknown layout (reals): c' coords [c0, (Re c_n, Im c_n) n=1..nc],
// htilde coords (Re, Im) k=0..N, gtilde coords (Re, Im) k=0..N+d, where
// h = (1 - zeta) htilde and g = (1 - zeta) gtilde.
// Row layout: T1 (Re, Im) of modes -1..-(N+d), T2 the same, T3 Re of mode 0
// then (Re, Im) of modes 1..N+d+1.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "discforge/discs.hpp"
#include "discforge/error.hpp"
#include "discforge/fourier_circle.hpp"
#include "discforge/model.hpp"
#include "discforge/perturbation.hpp"

namespace discforge {

struct OperatorValue {
  TrigSeries t1;  ///< strictly negative modes
  TrigSeries t2;
  TrigSeries t3;  ///< real-valued
};

namespace detail {

struct Symbols {
  std::vector<Complex> xc, xh, yh, xg, yg;
  std::vector<Complex> value;
};

/// Pointwise data of a disc on `count` roots of unity.
struct Pointwise {
  std::vector<Complex> zeta, c, ht, gt, h, g, s;
};

inline Pointwise sample_disc(const TrigSeries& c, const TrigSeries& ht, const TrigSeries& gt,
                             const QFactorization& q, int count) {
  Pointwise p;
  p.zeta = roots_of_unity(count);
  p.c = c.samples(count);
  p.ht = ht.samples(count);
  p.gt = gt.samples(count);
  p.h.resize(p.zeta.size());
  p.g.resize(p.zeta.size());
  p.s.resize(p.zeta.size());
  double min_s = INFINITY;
  for (std::size_t i = 0; i < p.zeta.size(); ++i) {
    p.h[i] = (1.0 - p.zeta[i]) * p.ht[i];
    p.g[i] = (1.0 - p.zeta[i]) * p.gt[i];
    p.s[i] = q.eval_s(p.zeta[i]);
    min_s = std::min(min_s, std::abs(p.s[i]));
  }
  if (min_s <= 1e-8) throw numerical_error("T': s vanishes near the unit circle");
  return p;
}

/// r_z / (1 - zeta)^{d-1} expanded monomial by monomial, and its partials in
/// htilde, conj(htilde) and utilde = Im g / (1 - zeta).
struct FactoredRz {
  Complex g1 = 0.0, dh = 0.0, dhb = 0.0, du = 0.0;
};

inline FactoredRz factored_rz(const DefiningFunction& r, Complex zeta, Complex H, Complex U) {
  const int d = r.model().d();
  const Complex Hb = std::conj(H);
  const Complex one_minus = 1.0 - zeta;
  const Complex mzb = -std::conj(zeta);
  FactoredRz out;
  for (const auto& m : r.monomials()) {
    if (m.a == 0) continue;
    const int e = m.a + m.b + m.c - d;
    if (e < 0) throw internal_error("T': monomial below the model degree");
    const Complex base = m.kappa * static_cast<double>(m.a) * ipow(one_minus, e) * ipow(mzb, m.b);
    const Complex hb_b = ipow(Hb, m.b);
    const Complex u_c = ipow(U, m.c);
    out.g1 += base * ipow(H, m.a - 1) * hb_b * u_c;
    if (m.a >= 2) out.dh += base * (m.a - 1.0) * ipow(H, m.a - 2) * hb_b * u_c;
    if (m.b >= 1) out.dhb += base * static_cast<double>(m.b) * ipow(H, m.a - 1) * ipow(Hb, m.b - 1) * u_c;
    if (m.c >= 1) out.du += base * static_cast<double>(m.c) * ipow(H, m.a - 1) * hb_b * ipow(U, m.c - 1);
  }
  return out;
}

/// Values and X/Y symbols of the three components at every sample.
inline std::array<Symbols, 3> build_symbols(const DefiningFunction& r, const Pointwise& p, int k0) {
  const std::size_t n = p.zeta.size();
  std::array<Symbols, 3> sy;
  for (auto& s : sy) {
    for (auto* v : {&s.xc, &s.xh, &s.yh, &s.xg, &s.yg, &s.value}) v->assign(n, 0.0);
  }
  const Complex two_i(0.0, 2.0);
  for (std::size_t i = 0; i < n; ++i) {
    const Complex z = p.zeta[i];
    const Complex zb = std::conj(z);
    const Complex om = 1.0 - z;
    const Complex omb = 1.0 - zb;
    const Complex ut = (p.gt[i] + zb * std::conj(p.gt[i])) / two_i;
    const Complex c = p.c[i];

    const Complex pre1 = ipow(z, k0) / p.s[i];
    const FactoredRz f = factored_rz(r, z, p.ht[i], ut);
    sy[0].value[i] = pre1 * c * f.g1;
    sy[0].xc[i] = pre1 * f.g1;
    sy[0].xh[i] = pre1 * c * f.dh;
    sy[0].yh[i] = pre1 * c * f.dhb;
    sy[0].xg[i] = pre1 * c * f.du / two_i;
    sy[0].yg[i] = pre1 * c * f.du * zb / two_i;

    const Complex hz = p.h[i];
    const double u = p.g[i].imag();
    const Complex pre2 = ipow(z, k0);
    const Complex rw = -0.5 + r.poly_derivative(hz, u, 0, 0, 1) / two_i;
    const Complex rwz = r.poly_derivative(hz, u, 1, 0, 1) / two_i;
    const Complex rwzb = r.poly_derivative(hz, u, 0, 1, 1) / two_i;
    const Complex rwu = r.poly_derivative(hz, u, 0, 0, 2) / two_i;
    sy[1].value[i] = pre2 * c * rw;
    sy[1].xc[i] = pre2 * rw;
    sy[1].xh[i] = pre2 * c * rwz * om;
    sy[1].yh[i] = pre2 * c * rwzb * omb;
    sy[1].xg[i] = pre2 * c * rwu * om / two_i;
    sy[1].yg[i] = -pre2 * c * rwu * omb / two_i;

    const Complex rz = r.poly_derivative(hz, u, 1, 0, 0);
    const Complex rzb = r.poly_derivative(hz, u, 0, 1, 0);
    const Complex ru = r.poly_derivative(hz, u, 0, 0, 1);
    sy[2].value[i] = -p.g[i].real() + r.poly_derivative(hz, u, 0, 0, 0).real();
    sy[2].xh[i] = rz * om;
    sy[2].yh[i] = rzb * omb;
    sy[2].xg[i] = -0.5 * om + ru * om / two_i;
    sy[2].yg[i] = -0.5 * omb - ru * omb / two_i;
  }
  return sy;
}

inline int max_monomial_degree(const DefiningFunction& r) {
  int m = 1;
  for (const auto& mono : r.monomials()) m = std::max(m, mono.a + mono.b + mono.c);
  return m;
}

}  // namespace detail

/// T' at a disc given as (c, h, g). The (1 - zeta)^{d-1} in T1' is cancelled
/// algebraically; 1/s is applied at the samples.
inline OperatorValue eval_T_prime(const DefiningFunction& r, const LiftedDisc& disc,
                                  const QFactorization& q) {
  const TrigSeries ht = divide_one_minus_zeta(disc.h);
  const TrigSeries gt = divide_one_minus_zeta(disc.g);
  const int band = detail::max_monomial_degree(r) * std::max(disc.h.order(), disc.g.order()) +
                   disc.c.order() + disc.k0 + 64;
  const int count = next_pow2(2 * band + 2);
  const auto p = detail::sample_disc(disc.c, ht, gt, q, count);
  const auto sy = detail::build_symbols(r, p, disc.k0);
  OperatorValue out;
  out.t1 = negative_project(spectrum(sy[0].value));
  out.t2 = negative_project(spectrum(sy[1].value));
  out.t3 = spectrum(sy[2].value).real_part();
  return out;
}

class TPrimeSystem {
 public:
  /// `nc` is the largest c mode carried (defaults to N).
  TPrimeSystem(DefiningFunction r, QFactorization q, int N, int nc = -1)
      : r_(std::move(r)), q_(std::move(q)), N_(N), nc_(nc < 0 ? N : nc) {
    d_ = r_.model().d();
    k0_ = r_.model().k0();
    if (N_ < 1) throw domain_error("TPrimeSystem: N must be >= 1");
    const int band = detail::max_monomial_degree(r_) * (N_ + d_ + 1) + nc_ + k0_ + 64;
    count_ = next_pow2(std::max(2 * band + 2, 4 * (2 * N_ + 2 * d_ + k0_ + 4)));
  }

  int N() const { return N_; }
  int nc() const { return nc_; }
  int d() const { return d_; }
  int k0() const { return k0_; }
  int sample_count() const { return count_; }
  const DefiningFunction& defining() const { return r_; }
  const QFactorization& qfac() const { return q_; }

  int g_degree() const { return N_ + d_; }
  int c_offset() const { return 0; }
  int h_offset() const { return 2 * nc_ + 1; }
  int g_offset() const { return h_offset() + 2 * (N_ + 1); }
  int cols() const { return g_offset() + 2 * (g_degree() + 1); }
  int rows() const { return 4 * (N_ + d_) + 1 + 2 * (N_ + d_ + 1); }

  /// Column index of the real (part = 0) or imaginary (part = 1) c_n coordinate.
  int c_col(int n, int part) const { return n == 0 ? 0 : 2 * n - 1 + part; }

  /// Coordinates of a disc; series beyond the truncation are cut.
  Eigen::VectorXd pack(const LiftedDisc& disc) const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(cols());
    x[0] = disc.c[0].real();
    for (int n = 1; n <= nc_; ++n) {
      x[c_col(n, 0)] = disc.c[n].real();
      x[c_col(n, 1)] = disc.c[n].imag();
    }
    const TrigSeries ht = divide_one_minus_zeta(disc.h);
    const TrigSeries gt = divide_one_minus_zeta(disc.g);
    for (int k = 0; k <= N_; ++k) {
      x[h_offset() + 2 * k] = ht[k].real();
      x[h_offset() + 2 * k + 1] = ht[k].imag();
    }
    for (int k = 0; k <= g_degree(); ++k) {
      x[g_offset() + 2 * k] = gt[k].real();
      x[g_offset() + 2 * k + 1] = gt[k].imag();
    }
    return x;
  }

  TrigSeries c_of(const Eigen::VectorXd& x) const {
    std::vector<Complex> cc(2 * static_cast<std::size_t>(nc_) + 1);
    cc[static_cast<std::size_t>(nc_)] = x[0];
    for (int n = 1; n <= nc_; ++n) {
      const Complex v(x[c_col(n, 0)], x[c_col(n, 1)]);
      cc[static_cast<std::size_t>(nc_ + n)] = v;
      cc[static_cast<std::size_t>(nc_ - n)] = std::conj(v);
    }
    return TrigSeries(nc_, std::move(cc));
  }
  TrigSeries htilde_of(const Eigen::VectorXd& x) const { return analytic_block(x, h_offset(), N_); }
  TrigSeries gtilde_of(const Eigen::VectorXd& x) const {
    return analytic_block(x, g_offset(), g_degree());
  }

  LiftedDisc unpack(const Eigen::VectorXd& x) const {
    const TrigSeries om(1, {0.0, 1.0, -1.0});
    LiftedDisc disc;
    disc.k0 = k0_;
    disc.c = c_of(x);
    disc.h = multiply(om, htilde_of(x));
    disc.g = multiply(om, gtilde_of(x));
    return disc;
  }

  Eigen::VectorXd residual(const Eigen::VectorXd& x) const {
    const auto p = detail::sample_disc(c_of(x), htilde_of(x), gtilde_of(x), q_, count_);
    const auto sy = detail::build_symbols(r_, p, k0_);
    return rows_of({spectrum(sy[0].value), spectrum(sy[1].value), spectrum(sy[2].value)});
  }

  /// Exact Jacobian of `residual` at x.
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const {
    const auto p = detail::sample_disc(c_of(x), htilde_of(x), gtilde_of(x), q_, count_);
    const auto sy = detail::build_symbols(r_, p, k0_);
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(rows(), cols());
    int row0 = 0;
    for (int t = 0; t < 3; ++t) {
      const TrigSeries xc = spectrum(sy[t].xc);
      const TrigSeries xh = spectrum(sy[t].xh);
      const TrigSeries yh = spectrum(sy[t].yh);
      const TrigSeries xg = spectrum(sy[t].xg);
      const TrigSeries yg = spectrum(sy[t].yg);
      const auto modes = row_modes(t);
      auto put = [&](int col, auto&& value_at_mode) {
        int row = row0;
        for (const auto& [m, both] : modes) {
          const Complex v = value_at_mode(m);
          J(row++, col) = v.real();
          if (both) J(row++, col) = v.imag();
        }
      };
      put(0, [&](int m) { return xc[m]; });
      for (int n = 1; n <= nc_; ++n) {
        put(c_col(n, 0), [&](int m) { return xc[m - n] + xc[m + n]; });
        put(c_col(n, 1), [&](int m) { return Complex(0, 1) * (xc[m - n] - xc[m + n]); });
      }
      for (int k = 0; k <= N_; ++k) {
        put(h_offset() + 2 * k, [&](int m) { return xh[m - k] + yh[m + k]; });
        put(h_offset() + 2 * k + 1,
            [&](int m) { return Complex(0, 1) * (xh[m - k] - yh[m + k]); });
      }
      for (int k = 0; k <= g_degree(); ++k) {
        put(g_offset() + 2 * k, [&](int m) { return xg[m - k] + yg[m + k]; });
        put(g_offset() + 2 * k + 1,
            [&](int m) { return Complex(0, 1) * (xg[m - k] - yg[m + k]); });
      }
      for (const auto& mb : modes) row0 += mb.second ? 2 : 1;
    }
    return J;
  }

 private:
  TrigSeries analytic_block(const Eigen::VectorXd& x, int offset, int deg) const {
    std::vector<Complex> a(static_cast<std::size_t>(deg) + 1);
    for (int k = 0; k <= deg; ++k) a[static_cast<std::size_t>(k)] = {x[offset + 2 * k], x[offset + 2 * k + 1]};
    return TrigSeries::analytic(a);
  }

  /// (mode, carries imaginary row) for component t.
  std::vector<std::pair<int, bool>> row_modes(int t) const {
    std::vector<std::pair<int, bool>> m;
    if (t < 2) {
      for (int n = 1; n <= N_ + d_; ++n) m.emplace_back(-n, true);
    } else {
      m.emplace_back(0, false);
      for (int n = 1; n <= N_ + d_ + 1; ++n) m.emplace_back(n, true);
    }
    return m;
  }

  Eigen::VectorXd rows_of(const std::array<TrigSeries, 3>& f) const {
    Eigen::VectorXd v(rows());
    int row = 0;
    for (int t = 0; t < 3; ++t)
      for (const auto& [m, both] : row_modes(t)) {
        v[row++] = f[t][m].real();
        if (both) v[row++] = f[t][m].imag();
      }
    return v;
  }

  DefiningFunction r_;
  QFactorization q_;
  int N_;
  int nc_;
  int d_ = 0;
  int k0_ = 0;
  int count_ = 0;
};

/// Jacobian of T' at a disc, on the truncation of order N.
inline Eigen::MatrixXd linearize_at(const DefiningFunction& r, const LiftedDisc& disc,
                                    const QFactorization& q, int N) {
  TPrimeSystem sys(r, q, N);
  return sys.jacobian(sys.pack(disc));
}

}  // namespace discforge
