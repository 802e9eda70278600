#pragma once

// Desk-scale jet determination: dilate (r, H), attach a disc to r_t, push it
// forward by H_t and measure how far H_t o f stays from f.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "discforge/discs.hpp"
#include "discforge/error.hpp"
#include "discforge/jets.hpp"
#include "discforge/perturbation.hpp"
#include "discforge/rh_solver.hpp"

namespace discforge {

struct DeterminationOptions {
  double t = 0.125;
  std::vector<Complex> b_samples{0.0};
  Complex v_seed = 0.5;
  int disc_order = 64;
  NewtonOptions newton{};
  double defect_tol = 1e-6;  ///< hypothesis: H_t maps {r_t = 0} into itself to this tolerance
};

struct DeterminationSample {
  Complex b;
  int newton_iterations = 0;
  StationarityResidual seed_residual;
  StationarityResidual composed_residual;
  double residual_change = 0.0;
  std::vector<Complex> jets_seed;
  std::vector<Complex> jets_composed;
  double jet_distance = 0.0;
  double aligned_distance = 0.0;  ///< between the jet_reconstruct images
  double disc_distance = 0.0;     ///< max coefficient difference of (h, g)
  double center_distance = 0.0;   ///< |H_t(q) - q| at the disc center
};

struct DeterminationReport {
  double t = 0.0;
  int tangency_order = 0;
  int required_order = 0;
  double x_norm = 0.0;
  double map_distance = 0.0;  ///< coefficients of H_t - Id
  double composition_defect = 0.0;
  std::vector<DeterminationSample> samples;

  double max_residual() const {
    double m = 0.0;
    for (const auto& s : samples) m = std::max(m, s.composed_residual.max());
    return m;
  }
  double max_disc_distance() const {
    double m = 0.0;
    for (const auto& s : samples) m = std::max(m, s.disc_distance);
    return m;
  }
};

namespace detail {

/// sup |r(H(p))| over points p of {r = 0} with |z| <= 1, |Im w| <= 1.
inline double preservation_defect(const DefiningFunction& r, const BiholoMap& H) {
  double m = 0.0;
  for (int ir = 0; ir <= 8; ++ir)
    for (int ia = 0; ia < 16; ++ia)
      for (int iu = -4; iu <= 4; ++iu) {
        const Complex z = std::polar(ir / 8.0, 2.0 * std::numbers::pi * ia / 16.0);
        const double u = iu / 4.0;
        const Complex w(r.poly_derivative(z, u, 0, 0, 0).real(), u);
        const auto [z2, w2] = H(z, w);
        m = std::max(m, std::abs(r.eval_r(z2, w2)));
      }
  return m;
}

inline double coeff_distance(const TrigSeries& a, const TrigSeries& b) {
  double m = 0.0;
  const int n = std::max(a.order(), b.order());
  for (int k = -n; k <= n; ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

template <class F>
auto staged(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("determination[") + stage + "]: " + e.what());
  }
}

}  // namespace detail

inline DeterminationReport determination_experiment(const DefiningFunction& r,
                                                    const BiholoMap& H,
                                                    const QFactorization& q,
                                                    const DeterminationOptions& opts = {}) {
  const ModelPolynomial& model = r.model();
  const int d = model.d();
  DeterminationReport rep;
  rep.t = opts.t;
  rep.required_order = model.k0() - d / 2 + 2;
  rep.tangency_order = H.tangency_order(d);

  detail::staged("hypothesis", [&] {
    if (!H.fixes_origin()) throw domain_error("H does not fix the origin");
    if (rep.tangency_order < rep.required_order)
      throw domain_error("H is tangent to the identity only to order " +
                         std::to_string(rep.tangency_order) + ", need " +
                         std::to_string(rep.required_order));
    return 0;
  });

  const DefiningFunction rt = detail::staged("dilate", [&] { return dilate(r, opts.t); });
  const BiholoMap Ht = detail::staged("dilate", [&] { return dilate_map(H, opts.t, d); });
  rep.x_norm = x_norm_distance(rt);
  rep.map_distance = Ht.distance_to_identity();
  rep.composition_defect = detail::preservation_defect(rt, Ht);
  if (rep.composition_defect > opts.defect_tol)
    throw domain_error("determination[hypothesis]: H_t moves {r_t = 0} by " +
                       std::to_string(rep.composition_defect));

  const int n_jet = rep.required_order;
  for (const Complex b : opts.b_samples) {
    DeterminationSample s;
    s.b = b;
    const NewtonResult fq = detail::staged("solve", [&] {
      const LiftedDisc init = model_disc(model, {b, opts.v_seed, 0.0}, opts.disc_order);
      NewtonOptions no = opts.newton;
      no.N = std::max(no.N, opts.disc_order);
      return solve_newton(rt, q, b, init, no);
    });
    s.newton_iterations = fq.iterations;
    s.seed_residual = fq.residual;
    LiftedDisc composed = fq.disc;
    detail::staged("compose", [&] {
      auto [h2, g2] = compose_disc(Ht, fq.disc.h, fq.disc.g);
      composed.h = std::move(h2);
      composed.g = std::move(g2);
      return 0;
    });
    s.composed_residual = detail::staged("residual", [&] { return stationarity_residual(composed, rt); });
    s.residual_change = std::max({std::abs(s.composed_residual.res1 - s.seed_residual.res1),
                                  std::abs(s.composed_residual.res2 - s.seed_residual.res2),
                                  std::abs(s.composed_residual.res3 - s.seed_residual.res3)});
    detail::staged("jets", [&] {
      s.jets_seed = jet_map(fq.disc.h, n_jet);
      s.jets_composed = jet_map(composed.h, n_jet);
      for (int k = 0; k < n_jet; ++k)
        s.jet_distance = std::max(s.jet_distance, std::abs(s.jets_seed[static_cast<std::size_t>(k)] -
                                                           s.jets_composed[static_cast<std::size_t>(k)]));
      s.aligned_distance = detail::coeff_distance(jet_reconstruct(model, q, s.jets_seed),
                                                  jet_reconstruct(model, q, s.jets_composed));
      return 0;
    });
    s.disc_distance = std::max(detail::coeff_distance(composed.h, fq.disc.h),
                               detail::coeff_distance(composed.g, fq.disc.g));
    const auto c0 = disc_center(fq.disc);
    const auto c1 = disc_center(composed);
    s.center_distance = std::max(std::abs(c1[0] - c0[0]), std::abs(c1[1] - c0[1]));
    rep.samples.push_back(std::move(s));
  }
  return rep;
}

}  // namespace discforge
