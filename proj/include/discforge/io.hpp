#pragma once

// JSON encoding of series, models, perturbations, discs and run-configs.
// Requires nlohmann/json (vendor/json.hpp) on the include path.

#include <algorithm>
#include <complex>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "discforge/determination.hpp"
#include "discforge/discs.hpp"
#include "discforge/error.hpp"
#include "discforge/fourier_circle.hpp"
#include "discforge/model.hpp"
#include "discforge/perturbation.hpp"
#include "discforge/rh_solver.hpp"

namespace discforge::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

inline void check_keys(const json& j, std::initializer_list<const char*> allowed,
                       const std::string& where) {
  if (!j.is_object()) throw config_error(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      throw config_error(where + ": unknown key '" + key + "'");
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw config_error(where + "." + key + ": " + e.what());
  }
}

template <class T>
T require(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw config_error(where + ": missing key '" + key + "'");
  return get_or<T>(j, key, T{}, where);
}

/// A number, or {"re": x, "im": y}.
inline Complex complex_from(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  check_keys(j, {"re", "im"}, where);
  return {get_or<double>(j, "re", 0.0, where), get_or<double>(j, "im", 0.0, where)};
}

inline json to_json(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

inline json to_json(const TrigSeries& s) {
  json re = json::array();
  json im = json::array();
  for (const auto& c : s.coefficients()) {
    re.push_back(c.real());
    im.push_back(c.imag());
  }
  return json{{"N", s.order()}, {"re", re}, {"im", im}};
}

inline TrigSeries series_from(const json& j, const std::string& where) {
  check_keys(j, {"N", "re", "im"}, where);
  const int N = require<int>(j, "N", where);
  const auto re = require<std::vector<double>>(j, "re", where);
  const auto im = get_or<std::vector<double>>(j, "im", std::vector<double>(re.size(), 0.0), where);
  if (N < 0 || re.size() != 2 * static_cast<std::size_t>(N) + 1 || im.size() != re.size())
    throw config_error(where + ": series needs 2N+1 coefficients");
  std::vector<Complex> c(re.size());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = {re[k], im[k]};
  return TrigSeries(N, std::move(c));
}

inline json to_json(const ModelPolynomial& m) {
  json alpha = json::array();
  for (int j = m.d() / 2; j <= m.k0(); ++j)
    if (m.alpha(j) != 0.0)
      alpha.push_back({{"j", j}, {"re", m.alpha(j).real()}, {"im", m.alpha(j).imag()}});
  return json{{"d", m.d()}, {"k0", m.k0()}, {"alpha", alpha}};
}

inline ModelPolynomial model_from(const json& j) {
  const std::string where = "model";
  check_keys(j, {"d", "k0", "alpha"}, where);
  const int d = require<int>(j, "d", where);
  const int k0 = require<int>(j, "k0", where);
  if (!j.contains("alpha") || !j.at("alpha").is_array())
    throw config_error("model: 'alpha' must be an array");
  std::map<int, Complex> alpha;
  for (const auto& a : j.at("alpha")) {
    check_keys(a, {"j", "re", "im"}, "model.alpha[]");
    const int idx = require<int>(a, "j", "model.alpha[]");
    if (alpha.count(idx)) throw config_error("model: duplicate alpha index " + std::to_string(idx));
    alpha[idx] = {get_or<double>(a, "re", 0.0, "model.alpha[]"),
                  get_or<double>(a, "im", 0.0, "model.alpha[]")};
  }
  return ModelPolynomial(d, k0, alpha);
}

inline json perturbation_to_json(const DefiningFunction& r) {
  json terms = json::array();
  for (const auto& t : r.terms()) {
    json coeffs = json::array();
    for (const auto& [pq, k] : t.coeffs) coeffs.push_back({pq.first, pq.second, k.real(), k.imag()});
    terms.push_back({{"i", t.i}, {"j", t.j}, {"l", t.l}, {"coeffs", coeffs}});
  }
  json theta = json::array();
  for (std::size_t c = 0; c < r.theta1().size(); ++c)
    if (r.theta1()[c] != 0.0) theta.push_back({static_cast<int>(c), r.theta1()[c]});
  return json{{"terms", terms}, {"theta1", theta}};
}

inline DefiningFunction defining_from(const ModelPolynomial& model, const json* pert) {
  if (!pert || pert->is_null()) return DefiningFunction(model);
  const std::string where = "perturbation";
  check_keys(*pert, {"terms", "theta1"}, where);
  std::vector<PerturbationTerm> terms;
  if (pert->contains("terms")) {
    for (const auto& t : pert->at("terms")) {
      check_keys(t, {"i", "j", "l", "coeffs"}, "perturbation.terms[]");
      PerturbationTerm term;
      term.i = require<int>(t, "i", "perturbation.terms[]");
      term.j = require<int>(t, "j", "perturbation.terms[]");
      term.l = get_or<int>(t, "l", 0, "perturbation.terms[]");
      for (const auto& c : t.value("coeffs", json::array())) {
        if (!c.is_array() || c.size() != 4)
          throw config_error("perturbation: coeffs entries are [deg_z, deg_u, re, im]");
        term.coeffs[{c[0].get<int>(), c[1].get<int>()}] += Complex(c[2].get<double>(), c[3].get<double>());
      }
      terms.push_back(std::move(term));
    }
  }
  std::vector<double> theta;
  if (pert->contains("theta1")) {
    for (const auto& c : pert->at("theta1")) {
      if (!c.is_array() || c.size() != 2)
        throw config_error("perturbation: theta1 entries are [deg, value]");
      const int deg = c[0].get<int>();
      if (deg < 0 || deg > kMaxPerturbationDegree) throw config_error("perturbation: theta1 degree out of range");
      if (theta.size() <= static_cast<std::size_t>(deg)) theta.resize(static_cast<std::size_t>(deg) + 1, 0.0);
      theta[static_cast<std::size_t>(deg)] += c[1].get<double>();
    }
  }
  return DefiningFunction(model, std::move(terms), std::move(theta));
}

inline json to_json(const LiftedDisc& d) {
  return json{{"k0", d.k0}, {"c", to_json(d.c)}, {"h", to_json(d.h)}, {"g", to_json(d.g)}};
}

inline LiftedDisc disc_from(const json& j) {
  check_keys(j, {"k0", "c", "h", "g"}, "disc");
  LiftedDisc d;
  d.k0 = require<int>(j, "k0", "disc");
  d.c = series_from(j.at("c"), "disc.c");
  d.h = series_from(j.at("h"), "disc.h");
  d.g = series_from(j.at("g"), "disc.g");
  return d;
}

inline BiholoMap map_from(const json& j) {
  check_keys(j, {"h1", "h2"}, "map");
  BiholoMap H;
  H.h1.clear();
  H.h2.clear();
  auto read = [&](const char* key, auto& comp) {
    for (const auto& c : j.value(key, json::array())) {
      if (!c.is_array() || c.size() != 4)
        throw config_error(std::string("map.") + key + ": entries are [deg_z, deg_w, re, im]");
      comp[{c[0].get<int>(), c[1].get<int>()}] += Complex(c[2].get<double>(), c[3].get<double>());
    }
  };
  read("h1", H.h1);
  read("h2", H.h2);
  return H;
}

inline json to_json(const BiholoMap& H) {
  json out;
  for (const auto& [name, comp] : {std::pair{"h1", &H.h1}, std::pair{"h2", &H.h2}}) {
    json arr = json::array();
    for (const auto& [jl, c] : *comp) arr.push_back({jl.first, jl.second, c.real(), c.imag()});
    out[name] = arr;
  }
  return out;
}

struct RunConfig {
  ModelPolynomial model = ModelPolynomial::circular(4);
  DefiningFunction defining{ModelPolynomial::circular(4)};
  NewtonOptions solver{};
  ModelDiscParams disc{};
  int disc_order = kDefaultOrder;
  int kernel_order = 24;
  int gap_samples = 64;
  std::vector<double> t_grid{1.0, 0.5, 0.25, 0.125};
  std::optional<BiholoMap> map;
  DeterminationOptions determine{};
  std::vector<Complex> jets;
  int random_discs = 0;
  unsigned seed = 0;
};

inline RunConfig parse_config(const json& j) {
  check_keys(j, {"schema_version", "model", "perturbation", "solver", "disc", "kernel", "gap",
                 "dilation", "map", "determine", "jet", "residual", "seed"},
             "config");
  const int version = get_or<int>(j, "schema_version", kSchemaVersion, "config");
  if (version != kSchemaVersion)
    throw config_error("config: unsupported schema_version " + std::to_string(version));
  if (!j.contains("model")) throw config_error("config: missing 'model'");
  RunConfig cfg;
  cfg.model = model_from(j.at("model"));
  cfg.defining = defining_from(cfg.model, j.contains("perturbation") ? &j.at("perturbation") : nullptr);
  cfg.seed = get_or<unsigned>(j, "seed", 0u, "config");
  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    check_keys(s, {"N", "tol", "max_iter", "svd_threshold"}, "solver");
    cfg.solver.N = get_or<int>(s, "N", cfg.solver.N, "solver");
    cfg.solver.tol = get_or<double>(s, "tol", cfg.solver.tol, "solver");
    cfg.solver.max_iter = get_or<int>(s, "max_iter", cfg.solver.max_iter, "solver");
    cfg.solver.svd_threshold = get_or<double>(s, "svd_threshold", cfg.solver.svd_threshold, "solver");
    if (cfg.solver.N < 1 || cfg.solver.tol <= 0.0 || cfg.solver.max_iter < 0 ||
        cfg.solver.svd_threshold <= 0.0)
      throw config_error("solver: options out of range");
  }
  if (j.contains("disc")) {
    const auto& d = j.at("disc");
    check_keys(d, {"b", "v", "theta", "N"}, "disc");
    if (d.contains("b")) cfg.disc.b = complex_from(d.at("b"), "disc.b");
    if (d.contains("v")) cfg.disc.v = complex_from(d.at("v"), "disc.v");
    cfg.disc.theta = get_or<double>(d, "theta", 0.0, "disc");
    cfg.disc_order = get_or<int>(d, "N", cfg.disc_order, "disc");
    if (!(std::abs(cfg.disc.b) < 0.5) || cfg.disc.v == 0.0 || cfg.disc_order < 1)
      throw config_error("disc: need |b| < 1/2, v != 0, N >= 1");
  }
  if (j.contains("kernel")) {
    check_keys(j.at("kernel"), {"N"}, "kernel");
    cfg.kernel_order = get_or<int>(j.at("kernel"), "N", cfg.kernel_order, "kernel");
  }
  if (j.contains("gap")) {
    check_keys(j.at("gap"), {"samples"}, "gap");
    cfg.gap_samples = get_or<int>(j.at("gap"), "samples", cfg.gap_samples, "gap");
    if (cfg.gap_samples < 1) throw config_error("gap: samples must be positive");
  }
  if (j.contains("dilation")) {
    check_keys(j.at("dilation"), {"t"}, "dilation");
    cfg.t_grid = get_or<std::vector<double>>(j.at("dilation"), "t", cfg.t_grid, "dilation");
    for (double t : cfg.t_grid)
      if (!(t > 0.0 && t <= 1.0)) throw config_error("dilation: t values must lie in (0, 1]");
  }
  if (j.contains("map")) cfg.map = map_from(j.at("map"));
  if (j.contains("determine")) {
    const auto& d = j.at("determine");
    check_keys(d, {"t", "v_seed", "b_samples", "defect_tol", "disc_N"}, "determine");
    cfg.determine.t = get_or<double>(d, "t", cfg.determine.t, "determine");
    if (d.contains("v_seed")) cfg.determine.v_seed = complex_from(d.at("v_seed"), "determine.v_seed");
    if (d.contains("b_samples")) {
      cfg.determine.b_samples.clear();
      for (const auto& b : d.at("b_samples")) cfg.determine.b_samples.push_back(complex_from(b, "determine.b_samples[]"));
    }
    cfg.determine.defect_tol = get_or<double>(d, "defect_tol", cfg.determine.defect_tol, "determine");
    cfg.determine.disc_order = get_or<int>(d, "disc_N", cfg.determine.disc_order, "determine");
  }
  cfg.determine.newton = cfg.solver;
  if (j.contains("jet")) {
    check_keys(j.at("jet"), {"jets"}, "jet");
    for (const auto& z : j.at("jet").value("jets", json::array())) cfg.jets.push_back(complex_from(z, "jet.jets[]"));
  }
  if (j.contains("residual")) {
    check_keys(j.at("residual"), {"random_discs"}, "residual");
    cfg.random_discs = get_or<int>(j.at("residual"), "random_discs", 0, "residual");
  }
  return cfg;
}

/// Schema-checked run config; malformed JSON values surface as config errors.
inline RunConfig config_from(const json& j) {
  try {
    return parse_config(j);
  } catch (const json::exception& e) {
    throw config_error(std::string("config: ") + e.what());
  }
}

}  // namespace discforge::io
