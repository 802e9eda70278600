#pragma once

// Kernel diagnostics, explicit kernel basis at the base disc and the
// Gauss-Newton continuation with the coefficient function pinned to c(b).

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "discforge/discs.hpp"
#include "discforge/error.hpp"
#include "discforge/fourier_circle.hpp"
#include "discforge/model.hpp"
#include "discforge/perturbation.hpp"
#include "discforge/rh_system.hpp"

namespace discforge {

inline constexpr double kSvdThreshold = 1e-8;

struct KernelDimReport {
  int dim = 0;
  double gap_ratio = 0.0;  ///< smallest kept / largest dropped singular value
  bool indeterminate = false;
  std::vector<double> singular_values;
};

/// Number of singular values below threshold * sigma_max, counted against
/// the column dimension.
template <class Matrix>
KernelDimReport kernel_dim_svd(const Matrix& A, double threshold = kSvdThreshold) {
  Eigen::BDCSVD<Matrix> svd(A);
  const auto& s = svd.singularValues();
  KernelDimReport rep;
  rep.singular_values.assign(s.data(), s.data() + s.size());
  const double cut = threshold * (s.size() ? s[0] : 0.0);
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] >= cut) ++rank;
  rep.dim = static_cast<int>(A.cols()) - rank;
  const double kept = rank > 0 ? s[rank - 1] : 0.0;
  const double dropped = rank < s.size() ? s[rank] : 0.0;
  rep.gap_ratio = dropped > 0.0 ? kept / dropped : std::numeric_limits<double>::infinity();
  rep.indeterminate = kept < 10.0 * cut || (dropped > 0.0 && dropped > cut / 10.0);
  return rep;
}

/// Matrix of u -> P(zeta^m u) on co-analytic modes -K..0, rows = modes
/// -(K+m)..-1.
inline Eigen::MatrixXcd toy_toeplitz(int m, int K) {
  if (m < 0 || K < m) throw domain_error("toy_toeplitz: need 0 <= m <= K");
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(K + m, K + 1);
  for (int col = 0; col <= K; ++col) {
    const int n = -col;
    const int out = n + m;
    if (out < 0) A(-out - 1, col) = 1.0;
  }
  return A;
}

/// Minimal-norm least-squares solution with relative singular-value cut.
inline Eigen::VectorXd pinv_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                  double threshold = kSvdThreshold) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(threshold);
  return svd.solve(b);
}

struct KernelVector {
  TrigSeries c;
  TrigSeries h;
  TrigSeries g;
};

struct KernelBasis {
  std::vector<KernelVector> vectors;
  Eigen::MatrixXd coords;  ///< one column per vector, TPrimeSystem layout
  int dim = 0;
  double max_residual = 0.0;
  double gram_condition = 0.0;
};

/// Explicit basis of ker T'_Y at the base disc f0: c' directions 1,
/// 2 Re zeta^n, -2 Im zeta^n (n <= k0) completed by least squares in
/// (htilde', gtilde'), then htilde' in {1, 1/(1 - conj(r_j) zeta)^{i+1}} times
/// {1, i} with gtilde' from the T3' rows.
inline KernelBasis kernel_basis_p0(const ModelPolynomial& model, const QFactorization& q,
                                   int N = 24) {
  const DefiningFunction rho(model);
  const TPrimeSystem sys(rho, q, N);
  const LiftedDisc f0 = model_disc(model, {}, 4);
  const Eigen::MatrixXd J = sys.jacobian(sys.pack(f0));
  const int k0 = model.k0();
  const int hg_cols = sys.cols() - sys.h_offset();
  const Eigen::MatrixXd Jhg = J.rightCols(hg_cols);

  std::vector<Eigen::VectorXd> vecs;
  auto complete = [&](Eigen::VectorXd v) {
    const Eigen::VectorXd rhs = -J * v;
    v.tail(hg_cols) += pinv_solve(Jhg, rhs);
    vecs.push_back(v);
  };
  {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(sys.cols());
    v[0] = 1.0;
    complete(v);
  }
  for (int n = 1; n <= k0; ++n)
    for (int part = 0; part < 2; ++part) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(sys.cols());
      // 2 Re zeta^n has c_n = 1; -2 Im zeta^n has c_n = i.
      v[sys.c_col(n, part)] = 1.0;
      complete(v);
    }

  const int t3_row = 4 * (N + model.d());
  const int t3_rows = sys.rows() - t3_row;
  const int g_cols = sys.cols() - sys.g_offset();
  const Eigen::MatrixXd J3g = J.block(t3_row, sys.g_offset(), t3_rows, g_cols);
  auto homogeneous = [&](const std::vector<Complex>& ht) {
    for (const Complex unit : {Complex(1.0), Complex(0.0, 1.0)}) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(sys.cols());
      for (int k = 0; k <= N; ++k) {
        const Complex a = unit * ht[static_cast<std::size_t>(k)];
        v[sys.h_offset() + 2 * k] = a.real();
        v[sys.h_offset() + 2 * k + 1] = a.imag();
      }
      const Eigen::VectorXd rhs = -(J.middleRows(t3_row, t3_rows) * v);
      v.tail(g_cols) = pinv_solve(J3g, rhs);
      vecs.push_back(v);
    }
  };
  std::vector<Complex> one(static_cast<std::size_t>(N) + 1, 0.0);
  one[0] = 1.0;
  homogeneous(one);
  for (const auto& root : q.roots_inside) {
    const Complex rho_bar = std::conj(root.root);
    for (int i = 0; i < root.multiplicity; ++i) {
      // 1/(1 - x zeta)^{i+1} = sum_k C(k+i, i) x^k zeta^k
      std::vector<Complex> ht(static_cast<std::size_t>(N) + 1);
      for (int k = 0; k <= N; ++k) {
        double binom = 1.0;
        for (int m = 1; m <= i; ++m) binom = binom * (k + m) / m;
        ht[static_cast<std::size_t>(k)] = binom * ipow(rho_bar, k);
      }
      homogeneous(ht);
    }
  }

  KernelBasis basis;
  basis.dim = static_cast<int>(vecs.size());
  basis.coords.resize(sys.cols(), basis.dim);
  for (int k = 0; k < basis.dim; ++k) {
    basis.coords.col(k) = vecs[static_cast<std::size_t>(k)];
    const double res = (J * vecs[static_cast<std::size_t>(k)]).cwiseAbs().maxCoeff();
    basis.max_residual = std::max(basis.max_residual, res);
    const LiftedDisc as_disc = sys.unpack(vecs[static_cast<std::size_t>(k)]);
    basis.vectors.push_back({as_disc.c, as_disc.h, as_disc.g});
  }
  const Eigen::MatrixXd gram = basis.coords.transpose() * basis.coords;
  Eigen::JacobiSVD<Eigen::MatrixXd> gs(gram);
  const auto& sv = gs.singularValues();
  basis.gram_condition = sv[0] / sv[sv.size() - 1];
  if (basis.dim != 4 * k0 - model.d() + 3)
    throw internal_error("kernel_basis_p0: basis size disagrees with 4k0-d+3");
  return basis;
}

struct NewtonOptions {
  int N = 32;
  double tol = 1e-9;
  int max_iter = 25;
  double svd_threshold = kSvdThreshold;
  double armijo = 1e-4;
  int max_halvings = 30;
};

struct NewtonResult {
  LiftedDisc disc;
  int iterations = 0;
  StationarityResidual residual;
  std::vector<double> history;  ///< ||T'|| on the truncation per iterate
};

/// Gauss-Newton on the truncated T' system. The c modes |n| <= k0 are held at
/// c(b); higher c modes, htilde and gtilde are unknowns. Steps are minimal
/// norm, which pins the remaining fiber directions.
inline NewtonResult solve_newton(const DefiningFunction& r, const QFactorization& q, Complex b,
                                 const LiftedDisc& init, const NewtonOptions& opts = {}) {
  if (std::abs(b) > 0.4 + 1e-15) throw domain_error("solve_newton: |b| must be <= 0.4");
  const int k0 = r.model().k0();
  const TPrimeSystem sys(r, q, opts.N);
  Eigen::VectorXd x = sys.pack(init);
  const TrigSeries cb = gamma_coefficient(b, k0);
  x[0] = cb[0].real();
  for (int n = 1; n <= std::min(k0, sys.nc()); ++n) {
    x[sys.c_col(n, 0)] = cb[n].real();
    x[sys.c_col(n, 1)] = cb[n].imag();
  }
  std::vector<int> free_cols;
  for (int n = k0 + 1; n <= sys.nc(); ++n) {
    free_cols.push_back(sys.c_col(n, 0));
    free_cols.push_back(sys.c_col(n, 1));
  }
  for (int col = sys.h_offset(); col < sys.cols(); ++col) free_cols.push_back(col);

  NewtonResult out;
  Eigen::VectorXd F = sys.residual(x);
  for (int it = 0;; ++it) {
    out.disc = sys.unpack(x);
    out.residual = stationarity_residual(out.disc, r);
    out.history.push_back(F.norm());
    out.iterations = it;
    if (out.residual.max() < opts.tol) return out;
    if (it >= opts.max_iter)
      throw numerical_error("solve_newton: no convergence in " + std::to_string(opts.max_iter) +
                            " iterations (residual " + std::to_string(out.residual.max()) + ")");
    const Eigen::MatrixXd J = sys.jacobian(x);
    Eigen::MatrixXd Jf(J.rows(), static_cast<Eigen::Index>(free_cols.size()));
    for (std::size_t k = 0; k < free_cols.size(); ++k)
      Jf.col(static_cast<Eigen::Index>(k)) = J.col(free_cols[k]);
    const Eigen::VectorXd step = pinv_solve(Jf, -F, opts.svd_threshold);
    const double f0 = F.norm();
    double lambda = 1.0;
    bool accepted = false;
    for (int hv = 0; hv <= opts.max_halvings; ++hv, lambda *= 0.5) {
      Eigen::VectorXd trial = x;
      for (std::size_t k = 0; k < free_cols.size(); ++k)
        trial[free_cols[k]] += lambda * step[static_cast<Eigen::Index>(k)];
      const Eigen::VectorXd Ft = sys.residual(trial);
      if (Ft.norm() <= (1.0 - opts.armijo * lambda) * f0) {
        x = trial;
        F = Ft;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      const LiftedDisc d = sys.unpack(x);
      if (!is_resolved(d.h, 1e-9) || !is_resolved(d.g, 1e-9))
        throw numerical_error("solve_newton: truncation N=" + std::to_string(opts.N) +
                              " does not resolve the disc (coefficient tail too large)");
      throw numerical_error("solve_newton: step rejected after full backtracking (residual " +
                            std::to_string(out.residual.max()) + ")");
    }
  }
}

}  // namespace discforge
