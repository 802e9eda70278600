#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "discforge/discforge.hpp"
#include "discforge/io.hpp"
#include "output.hpp"

namespace {

using namespace discforge;
using cli::OutputDir;
using io::json;
using io::to_json;

bool g_verbose = false;

void note(const std::string& msg) {
  if (g_verbose) std::cerr << "[discforge] " << msg << "\n";
}

std::string format_coeff(Complex c) {
  char buf[64];
  if (c.imag() == 0.0)
    std::snprintf(buf, sizeof buf, "%.10g", c.real());
  else
    std::snprintf(buf, sizeof buf, "(%.10g%+.10gi)", c.real(), c.imag());
  return buf;
}

/// Polynomial in zeta as text, e.g. "0.75ζ - 4ζ^2 + 0.75ζ^3".
std::string format_poly(const std::vector<Complex>& q) {
  std::string out;
  for (std::size_t k = 0; k < q.size(); ++k) {
    Complex c = q[k];
    if (c == 0.0) continue;
    const bool neg = c.imag() == 0.0 && c.real() < 0.0;
    if (!out.empty()) out += neg ? " - " : " + ";
    else if (neg) out += "-";
    if (neg) c = -c;
    const std::string mono = k == 0 ? "" : (k == 1 ? "ζ" : "ζ^" + std::to_string(k));
    if (c == 1.0 && k > 0)
      out += mono;
    else
      out += format_coeff(c) + mono;
  }
  return out.empty() ? "0" : out;
}

json complex_list(const std::vector<Complex>& v) {
  json a = json::array();
  for (const auto& z : v) a.push_back(to_json(z));
  return a;
}

json matrix_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

json residual_json(const StationarityResidual& r) {
  return json{{"res1", r.res1}, {"res2", r.res2}, {"res3", r.res3}};
}

json cmd_analyze(const io::RunConfig& cfg, OutputDir& out) {
  const auto& m = cfg.model;
  const auto sub = check_subharmonic(m);
  const auto q = factor_Q(m);
  const auto Q = compute_Q(m);
  json roots_in = json::array();
  for (const auto& r : q.roots_inside)
    roots_in.push_back({{"root", to_json(r.root)}, {"multiplicity", r.multiplicity}});
  note("kernel dimension by SVD at N=" + std::to_string(cfg.kernel_order));
  const auto kd = kernel_dim_svd(
      linearize_at(DefiningFunction(m), model_disc(m, {}, 4), q, cfg.kernel_order));
  json rep{{"model", to_json(m)},
           {"subharmonic", {{"passed", sub.passed}, {"min_ratio", sub.min_ratio}}},
           {"Q", Q.size() ? complex_list(Q) : json::array()},
           {"Q_text", format_poly(Q)},
           {"C", to_json(q.C)},
           {"roots_inside", roots_in},
           {"roots_outside", complex_list(q.roots_outside)},
           {"ell0", q.ell0},
           {"i0", q.i0},
           {"ell1", q.ell1},
           {"kernel_dim", 4 * m.k0() - m.d() + 3},
           {"kernel_dim_svd", kd.dim},
           {"kernel_gap_ratio", kd.gap_ratio},
           {"kernel_indeterminate", kd.indeterminate},
           {"winding_s", winding_number(q.s_series())},
           {"winding_t", winding_number(q.t_series())}};
  out.write_json("analyze.json", rep);
  return rep;
}

void write_disc_samples(OutputDir& out, const std::string& name, const LiftedDisc& d) {
  const int count = 256;
  const auto hv = d.h.samples(count);
  const auto gv = d.g.samples(count);
  std::vector<std::vector<double>> rows;
  for (int k = 0; k < count; ++k) {
    const double th = 2.0 * std::numbers::pi * k / count;
    rows.push_back({th, std::cos(th), std::sin(th), hv[k].real(), hv[k].imag(), gv[k].real(), gv[k].imag()});
  }
  out.write_csv(name, {"theta", "zeta_re", "zeta_im", "h_re", "h_im", "g_re", "g_im"}, rows);
}

json cmd_disc(const io::RunConfig& cfg, OutputDir& out) {
  double tail = 0.0;
  const LiftedDisc d = model_disc(cfg.model, cfg.disc, cfg.disc_order, &tail);
  const auto c = disc_center(d);
  json rep{{"disc", to_json(d)},
           {"tail_bound", tail},
           {"a", to_json(mobius_a(cfg.disc.b))},
           {"center", {to_json(c[0]), to_json(c[1])}},
           {"cauchy_center", to_json(cauchy_center(d.h, cfg.model))},
           {"residual", residual_json(stationarity_residual(d, DefiningFunction(cfg.model)))}};
  out.write_json("disc.json", rep);
  write_disc_samples(out, "disc_samples.csv", d);
  return rep;
}

json cmd_residual(const io::RunConfig& cfg, OutputDir& out) {
  const LiftedDisc d = model_disc(cfg.model, cfg.disc, cfg.disc_order);
  json rep{{"b", to_json(cfg.disc.b)},
           {"v", to_json(cfg.disc.v)},
           {"x_norm", x_norm_distance(cfg.defining)},
           {"residual", residual_json(stationarity_residual(d, cfg.defining))}};
  if (cfg.random_discs > 0) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::vector<double>> rows;
    for (int k = 0; k < cfg.random_discs; ++k) {
      const Complex b = std::polar(0.4 * std::sqrt(unit(rng)), 2.0 * std::numbers::pi * unit(rng));
      const Complex v = std::polar(0.1 + 1.9 * unit(rng), 2.0 * std::numbers::pi * unit(rng));
      const auto r = stationarity_residual(model_disc(cfg.model, {b, v, 0.0}, cfg.disc_order), cfg.defining);
      rows.push_back({b.real(), b.imag(), v.real(), v.imag(), r.res1, r.res2, r.res3});
    }
    out.write_csv("residuals.csv", {"b_re", "b_im", "v_re", "v_im", "res1", "res2", "res3"}, rows);
    rep["random_discs"] = cfg.random_discs;
  }
  out.write_json("residual.json", rep);
  return rep;
}

json cmd_solve(const io::RunConfig& cfg, OutputDir& out) {
  const auto q = factor_Q(cfg.model);
  const LiftedDisc init = model_disc(cfg.model, cfg.disc, std::max(cfg.solver.N, 8));
  note("Newton at N=" + std::to_string(cfg.solver.N));
  const NewtonResult res = solve_newton(cfg.defining, q, cfg.disc.b, init, cfg.solver);
  const TrigSeries hinit = init.h;
  double change = 0.0;
  for (int k = 0; k <= std::max(res.disc.h.order(), hinit.order()); ++k)
    change = std::max(change, std::abs(res.disc.h[k] - hinit[k]));
  json rep{{"iterations", res.iterations},
           {"residual", residual_json(res.residual)},
           {"history", res.history},
           {"x_norm", x_norm_distance(cfg.defining)},
           {"h_change_from_init", change},
           {"disc", to_json(res.disc)}};
  out.write_json("solve.json", rep);
  write_disc_samples(out, "solve_samples.csv", res.disc);
  return rep;
}

json cmd_kernel(const io::RunConfig& cfg, OutputDir& out) {
  const auto q = factor_Q(cfg.model);
  const auto kb = kernel_basis_p0(cfg.model, q, cfg.kernel_order);
  const auto kd = kernel_dim_svd(
      linearize_at(DefiningFunction(cfg.model), model_disc(cfg.model, {}, 4), q, cfg.kernel_order));
  json vecs = json::array();
  for (const auto& v : kb.vectors)
    vecs.push_back({{"c", to_json(v.c)}, {"h", to_json(v.h)}, {"g", to_json(v.g)}});
  json rep{{"expected_dim", 4 * cfg.model.k0() - cfg.model.d() + 3},
           {"basis_dim", kb.dim},
           {"svd_dim", kd.dim},
           {"gap_ratio", kd.gap_ratio},
           {"indeterminate", kd.indeterminate},
           {"max_residual", kb.max_residual},
           {"gram_condition", kb.gram_condition},
           {"singular_values_tail",
            std::vector<double>(kd.singular_values.end() - std::min<std::size_t>(kd.singular_values.size(), 16),
                                kd.singular_values.end())},
           {"vectors", vecs}};
  out.write_json("kernel.json", rep);
  return rep;
}

json cmd_jet(const io::RunConfig& cfg, OutputDir& out) {
  const auto q = factor_Q(cfg.model);
  const auto jm = jet_matrix(cfg.model, q);
  json rep{{"n", jm.n},
           {"matrix", matrix_json(jm.entries)},
           {"determinant", to_json(jm.determinant)},
           {"reduced", matrix_json(jm.reduced)},
           {"reduced_determinant", to_json(jm.reduced_determinant)},
           {"scaling", to_json(jm.scaling)},
           {"chi", complex_list(jm.chi)},
           {"condition_number", jm.condition_number}};
  if (!cfg.jets.empty()) {
    const TrigSeries h = jet_reconstruct(cfg.model, q, cfg.jets);
    rep["reconstructed"] = to_json(h);
    rep["roundtrip_jets"] = complex_list(jet_map(h, jm.n));
  }
  out.write_json("jet.json", rep);
  return rep;
}

json cmd_gap(const io::RunConfig& cfg, OutputDir& out) {
  std::vector<std::vector<double>> rows;
  double lo = INFINITY, hi = -INFINITY;
  for (int k = 0; k < cfg.gap_samples; ++k) {
    const double th = 2.0 * std::numbers::pi * k / cfg.gap_samples;
    const auto r = surjectivity_report(cfg.model, th);
    rows.push_back({th, r.gap_printed, r.gap, std::norm(r.i1_printed), std::norm(r.i2_printed),
                    std::norm(r.i1_quadrature), std::norm(r.i2_quadrature)});
    lo = std::min(lo, r.gap);
    hi = std::max(hi, r.gap);
  }
  out.write_csv("gap.csv",
                {"theta", "gap_printed", "gap", "I1_printed_sq", "I2_printed_sq", "I1_sq", "I2_sq"}, rows);
  json rep{{"samples", cfg.gap_samples}, {"gap_min", lo}, {"gap_max", hi}};
  out.write_json("gap.json", rep);
  return rep;
}

json cmd_determine(const io::RunConfig& cfg, OutputDir& out) {
  if (!cfg.map) throw config_error("determine: config needs a 'map' block");
  const auto q = factor_Q(cfg.model);
  std::vector<std::vector<double>> dil;
  for (double t : cfg.t_grid)
    dil.push_back({t, x_norm_distance(dilate(cfg.defining, t)),
                   dilate_map(*cfg.map, t, cfg.model.d()).distance_to_identity()});
  out.write_csv("dilation.csv", {"t", "x_norm", "map_distance"}, dil);
  const auto rep = determination_experiment(cfg.defining, *cfg.map, q, cfg.determine);
  json samples = json::array();
  for (const auto& s : rep.samples)
    samples.push_back({{"b", to_json(s.b)},
                       {"newton_iterations", s.newton_iterations},
                       {"seed_residual", residual_json(s.seed_residual)},
                       {"composed_residual", residual_json(s.composed_residual)},
                       {"residual_change", s.residual_change},
                       {"jets_seed", complex_list(s.jets_seed)},
                       {"jets_composed", complex_list(s.jets_composed)},
                       {"jet_distance", s.jet_distance},
                       {"aligned_distance", s.aligned_distance},
                       {"disc_distance", s.disc_distance},
                       {"center_distance", s.center_distance}});
  json j{{"t", rep.t},
         {"tangency_order", rep.tangency_order},
         {"required_order", rep.required_order},
         {"x_norm", rep.x_norm},
         {"map_distance", rep.map_distance},
         {"composition_defect", rep.composition_defect},
         {"max_residual", rep.max_residual()},
         {"max_disc_distance", rep.max_disc_distance()},
         {"samples", samples}};
  out.write_json("determine.json", j);
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"discforge: k0-stationary discs attached to model hypersurfaces"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir = "out";
  long long seed = -1;
  app.add_flag("-v,--verbose", g_verbose, "Progress messages on stderr");

  const std::pair<const char*, const char*> commands[] = {
      {"analyze", "Factor Q, report roots, index and kernel dimension"},
      {"disc", "Evaluate an explicit family disc and its residuals"},
      {"residual", "Residual table for the family discs under a perturbation"},
      {"solve", "Newton continuation from a family disc"},
      {"kernel", "Linearization spectrum and explicit kernel basis"},
      {"jet", "Jet matrix, determinant and jet round-trips"},
      {"gap", "Surjectivity gap over theta"},
      {"determine", "Map determination experiment"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "Run-config JSON")->required();
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--seed", seed, "RNG seed (overrides config)");
    sub->add_flag("-v,--verbose", g_verbose, "Progress messages on stderr");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();

  try {
    cli::Stopwatch watch;
    std::ifstream in(config_path);
    if (!in) throw config_error("cannot read config file " + config_path);
    json raw;
    try {
      raw = json::parse(in);
    } catch (const json::exception& e) {
      throw config_error(std::string("config is not valid JSON: ") + e.what());
    }
    io::RunConfig cfg = io::config_from(raw);
    if (seed >= 0) cfg.seed = static_cast<unsigned>(seed);
    OutputDir out(out_dir);
    note("running " + cmd);
    json summary;
    if (cmd == "analyze") summary = cmd_analyze(cfg, out);
    else if (cmd == "disc") summary = cmd_disc(cfg, out);
    else if (cmd == "residual") summary = cmd_residual(cfg, out);
    else if (cmd == "solve") summary = cmd_solve(cfg, out);
    else if (cmd == "kernel") summary = cmd_kernel(cfg, out);
    else if (cmd == "jet") summary = cmd_jet(cfg, out);
    else if (cmd == "gap") summary = cmd_gap(cfg, out);
    else summary = cmd_determine(cfg, out);

    json manifest{{"tool", "discforge"},
                  {"version", kVersion},
                  {"schema_version", io::kSchemaVersion},
                  {"command", cmd},
                  {"config", raw},
                  {"seed", cfg.seed},
                  {"N", {{"solver", cfg.solver.N}, {"disc", cfg.disc_order}, {"kernel", cfg.kernel_order}}},
                  {"tolerances", {{"tol", cfg.solver.tol}, {"svd_threshold", cfg.solver.svd_threshold}}},
                  {"files", out.files()},
                  {"wall_time_s", watch.seconds()}};
    out.write_json("manifest.json", manifest);
    note("done in " + cli::fmt_double(watch.seconds()) + " s");
    return 0;
  } catch (const Error& e) {
    std::cerr << "discforge " << cmd << ": " << e.what() << "\n";
    return e.kind() == ErrorKind::config ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "discforge " << cmd << ": " << e.what() << "\n";
    return 1;
  }
}
