#pragma once

// Truncated two-sided Fourier series on the unit circle and the projections
// used by the disc constructions: Szego projection onto the Hardy space, the
// complementary projection onto conj(zeta A), and the conjugate function.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "discforge/error.hpp"

namespace discforge {

using Complex = std::complex<double>;

inline constexpr double kUnitCircleTol = 1e-12;
inline constexpr int kDefaultOrder = 128;

/// Smallest power of two >= n.
inline int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

/// z^n for n >= 0 by repeated squaring (0^0 = 1).
inline Complex ipow(Complex z, int n) {
  Complex r = 1.0;
  while (n > 0) {
    if (n & 1) r *= z;
    z *= z;
    n >>= 1;
  }
  return r;
}

/// Points e^{2 pi i k / count}, k = 0..count-1.
inline std::vector<Complex> roots_of_unity(int count) {
  std::vector<Complex> pts(count);
  for (int k = 0; k < count; ++k)
    pts[k] = std::polar(1.0, 2.0 * std::numbers::pi * k / count);
  return pts;
}

/**
 * Fourier series sum_{n=-N}^{N} c_n zeta^n.
 *
 * Values are immutable once built; every operation returns a new series.
 * Indices outside [-N, N] read as zero.
 */
class TrigSeries {
 public:
  TrigSeries() : TrigSeries(0) {}

  explicit TrigSeries(int order)
      : order_(order), coeffs_(2 * static_cast<std::size_t>(order) + 1) {
    if (order < 0) throw domain_error("TrigSeries: negative truncation order");
  }

  /// Coefficients in index order -N..N.
  TrigSeries(int order, std::vector<Complex> coeffs)
      : order_(order), coeffs_(std::move(coeffs)) {
    if (order < 0 || coeffs_.size() != 2 * static_cast<std::size_t>(order) + 1)
      throw domain_error("TrigSeries: coefficient count must be 2N+1");
  }

  static TrigSeries constant(Complex value) {
    TrigSeries s(0);
    s.coeffs_[0] = value;
    return s;
  }

  static TrigSeries monomial(int n, Complex value = 1.0) {
    TrigSeries s(std::abs(n));
    s.slot(n) = value;
    return s;
  }

  /// Analytic series sum_{n>=0} a[n] zeta^n.
  static TrigSeries analytic(std::span<const Complex> a) {
    const int order = a.empty() ? 0 : static_cast<int>(a.size()) - 1;
    TrigSeries s(order);
    for (int n = 0; n <= order && n < static_cast<int>(a.size()); ++n)
      s.slot(n) = a[n];
    return s;
  }

  /// Real-valued series; symmetry c_n = conj(c_{-n}) is imposed exactly by
  /// averaging the two halves.
  static TrigSeries real_valued(int order, std::vector<Complex> coeffs) {
    TrigSeries s(order, std::move(coeffs));
    return s.real_part();
  }

  int order() const { return order_; }

  Complex operator[](int n) const {
    if (n < -order_ || n > order_) return 0.0;
    return coeffs_[static_cast<std::size_t>(n + order_)];
  }

  std::span<const Complex> coefficients() const { return coeffs_; }

  /// Series of Re(f) on the circle: (c_n + conj(c_{-n})) / 2.
  TrigSeries real_part() const {
    TrigSeries out(order_);
    for (int n = -order_; n <= order_; ++n)
      out.slot(n) = 0.5 * ((*this)[n] + std::conj((*this)[-n]));
    out.slot(0) = (*this)[0].real();
    return out;
  }

  Complex operator()(Complex z) const {
    // Horner in zeta for n >= 0 and in conj(zeta) = 1/zeta for n < 0.
    Complex pos = 0.0;
    for (int n = order_; n >= 0; --n) pos = pos * z + (*this)[n];
    Complex neg = 0.0;
    const Complex zinv = 1.0 / z;
    for (int n = order_; n >= 1; --n) neg = (neg + (*this)[-n]) * zinv;
    return pos + neg;
  }

  /// Values at the `count` roots of unity (modes folded modulo count, so the
  /// result is exact for any order).
  std::vector<Complex> samples(int count) const {
    std::vector<Complex> folded(count, 0.0);
    for (int n = -order_; n <= order_; ++n) {
      const int idx = ((n % count) + count) % count;
      folded[idx] += (*this)[n];
    }
    std::vector<Complex> values;
    Eigen::FFT<double> fft;
    fft.inv(values, folded);
    for (auto& v : values) v *= static_cast<double>(count);
    return values;
  }

  bool is_real_valued(double tol = 1e-12) const {
    const double scale = std::max(1.0, max_abs_coeff());
    for (int n = 0; n <= order_; ++n)
      if (std::abs((*this)[n] - std::conj((*this)[-n])) > tol * scale) return false;
    return true;
  }

  bool is_analytic(double tol = 1e-12) const {
    const double scale = std::max(1.0, max_abs_coeff());
    for (int n = 1; n <= order_; ++n)
      if (std::abs((*this)[-n]) > tol * scale) return false;
    return true;
  }

  bool is_coanalytic(double tol = 1e-12) const {
    const double scale = std::max(1.0, max_abs_coeff());
    for (int n = 1; n <= order_; ++n)
      if (std::abs((*this)[n]) > tol * scale) return false;
    return true;
  }

  double max_abs_coeff() const {
    double m = 0.0;
    for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
    return m;
  }

  double l1_norm() const {
    double s = 0.0;
    for (const auto& c : coeffs_) s += std::abs(c);
    return s;
  }

  double l2_norm() const {
    double s = 0.0;
    for (const auto& c : coeffs_) s += std::norm(c);
    return std::sqrt(s);
  }

  /// Re-truncation to order n; the l2 mass of the dropped modes goes to
  /// `discarded` when provided.
  TrigSeries truncated(int n, double* discarded = nullptr) const {
    TrigSeries out(n);
    double tail = 0.0;
    for (int k = -std::max(n, order_); k <= std::max(n, order_); ++k) {
      if (k >= -n && k <= n)
        out.slot(k) = (*this)[k];
      else
        tail += std::norm((*this)[k]);
    }
    if (discarded) *discarded = std::sqrt(tail);
    return out;
  }

  TrigSeries operator-() const {
    TrigSeries out(order_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) out.coeffs_[i] = -coeffs_[i];
    return out;
  }

  friend TrigSeries operator+(const TrigSeries& a, const TrigSeries& b) {
    const int n = std::max(a.order_, b.order_);
    TrigSeries out(n);
    for (int k = -n; k <= n; ++k) out.slot(k) = a[k] + b[k];
    return out;
  }

  friend TrigSeries operator-(const TrigSeries& a, const TrigSeries& b) {
    return a + (-b);
  }

  friend TrigSeries operator*(Complex s, const TrigSeries& a) {
    TrigSeries out(a.order_);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) out.coeffs_[i] = s * a.coeffs_[i];
    return out;
  }

  friend bool operator==(const TrigSeries&, const TrigSeries&) = default;

 private:
  Complex& slot(int n) { return coeffs_[static_cast<std::size_t>(n + order_)]; }

  friend TrigSeries multiply(const TrigSeries& a, const TrigSeries& b);
  friend TrigSeries conjugate(const TrigSeries& a);
  friend TrigSeries szego_project(const TrigSeries& a);
  friend TrigSeries negative_project(const TrigSeries& a);
  friend TrigSeries shift(const TrigSeries& a, int k);

  int order_;
  std::vector<Complex> coeffs_;
};

/// Coefficient convolution; the result has order N_a + N_b and is exact.
inline TrigSeries multiply(const TrigSeries& a, const TrigSeries& b) {
  TrigSeries out(a.order() + b.order());
  for (int i = -a.order(); i <= a.order(); ++i) {
    const Complex ai = a[i];
    if (ai == 0.0) continue;
    for (int j = -b.order(); j <= b.order(); ++j) out.slot(i + j) += ai * b[j];
  }
  return out;
}

/// Product re-truncated to `order`, reporting the discarded tail.
inline TrigSeries multiply(const TrigSeries& a, const TrigSeries& b, int order,
                           double* discarded) {
  return multiply(a, b).truncated(order, discarded);
}

inline TrigSeries power(const TrigSeries& a, int k) {
  TrigSeries out = TrigSeries::constant(1.0);
  for (int i = 0; i < k; ++i) out = multiply(out, a);
  return out;
}

/// zeta^k * a.
inline TrigSeries shift(const TrigSeries& a, int k) {
  TrigSeries out(a.order() + std::abs(k));
  for (int n = -a.order(); n <= a.order(); ++n) out.slot(n + k) = a[n];
  return out;
}

/// Series of conj(a(zeta)) on the circle: c_n -> conj(c_{-n}).
inline TrigSeries conjugate(const TrigSeries& a) {
  TrigSeries out(a.order());
  for (int n = -a.order(); n <= a.order(); ++n) out.slot(n) = std::conj(a[-n]);
  return out;
}

/// Keeps n >= 0.
inline TrigSeries szego_project(const TrigSeries& a) {
  TrigSeries out(a.order());
  for (int n = 0; n <= a.order(); ++n) out.slot(n) = a[n];
  return out;
}

/// Keeps n < 0. Vanishes exactly when a extends holomorphically.
inline TrigSeries negative_project(const TrigSeries& a) {
  TrigSeries out(a.order());
  for (int n = 1; n <= a.order(); ++n) out.slot(-n) = a[-n];
  return out;
}

/// Conjugate function T(a) = i a + i mean(a) - 2i P'(a) for real-valued a.
inline TrigSeries hilbert_transform(const TrigSeries& a) {
  if (!a.is_real_valued(1e-10))
    throw domain_error("hilbert_transform: input is not real-valued");
  const Complex i(0.0, 1.0);
  TrigSeries out = i * a + TrigSeries::constant(i * a[0]) -
                   (2.0 * i) * szego_project(a);
  return out.real_part();
}

/// n-th complex derivative at z0 of the holomorphic polynomial sum c_k z^k.
inline Complex derivative_at(const TrigSeries& a, Complex z0, int n) {
  if (!a.is_analytic(1e-10))
    throw domain_error("derivative_at: series has negative modes");
  if (n < 0) throw domain_error("derivative_at: negative order");
  if (n > a.order()) return 0.0;
  Complex acc = 0.0;
  // Horner on the n-th derivative polynomial.
  for (int k = a.order(); k >= n; --k) {
    double falling = 1.0;
    for (int m = 0; m < n; ++m) falling *= static_cast<double>(k - m);
    acc = acc * z0 + falling * a[k];
  }
  return acc;
}

/// Direct evaluation at unit-modulus points.
inline std::vector<Complex> evaluate(const TrigSeries& s,
                                     std::span<const Complex> points) {
  std::vector<Complex> out;
  out.reserve(points.size());
  for (const auto& z : points) {
    if (std::abs(std::abs(z) - 1.0) > kUnitCircleTol)
      throw domain_error("evaluate: point off the unit circle");
    out.push_back(s(z));
  }
  return out;
}

struct SampledSeries {
  TrigSeries series;
  double aliased_tail = 0.0;  ///< l2 mass of the modes beyond N
};

/// DFT of values at the 2M-th roots of unity, truncated to order N.
inline SampledSeries from_samples(std::span<const Complex> values, int order) {
  const int count = static_cast<int>(values.size());
  if (count == 0 || (count & (count - 1)) != 0)
    throw domain_error("from_samples: sample count must be a power of two");
  if (count < 2 * order + 2)
    throw domain_error("from_samples: too few samples for requested order");
  std::vector<Complex> in(values.begin(), values.end());
  std::vector<Complex> freq;
  Eigen::FFT<double> fft;
  fft.fwd(freq, in);
  std::vector<Complex> coeffs(2 * static_cast<std::size_t>(order) + 1);
  double tail = 0.0;
  for (int k = 0; k < count; ++k) {
    const int n = k < count / 2 ? k : k - count;
    const Complex c = freq[k] / static_cast<double>(count);
    if (n >= -order && n <= order)
      coeffs[static_cast<std::size_t>(n + order)] = c;
    else
      tail += std::norm(c);
  }
  return {TrigSeries(order, std::move(coeffs)), std::sqrt(tail)};
}

/// All modes |n| < count/2 of the sampled function (Nyquist mode dropped).
inline TrigSeries spectrum(std::span<const Complex> values) {
  return from_samples(values, static_cast<int>(values.size()) / 2 - 1).series;
}

/// Sup over max(4N, 16) equispaced samples.
inline double sup_norm(const TrigSeries& a) {
  const int count = next_pow2(std::max(4 * a.order(), 16));
  double m = 0.0;
  for (const auto& v : a.samples(count)) m = std::max(m, std::abs(v));
  return m;
}

/// max |c_n| over the top quartile of |n|; a large value relative to the
/// series means the truncation does not resolve it.
inline double coeff_decay(const TrigSeries& a) {
  const int n = a.order();
  const int lo = n - std::max(0, n / 4);
  double m = 0.0;
  for (int k = std::max(lo, 1); k <= n; ++k)
    m = std::max({m, std::abs(a[k]), std::abs(a[-k])});
  if (n == 0) m = std::abs(a[0]);
  return m;
}

inline bool is_resolved(const TrigSeries& a, double rel_threshold = 1e-10) {
  return coeff_decay(a) <= rel_threshold * std::max(a.max_abs_coeff(), 1e-300);
}

}  // namespace discforge
