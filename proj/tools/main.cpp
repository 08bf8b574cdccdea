#include "io.hpp"

#include "weylpos/gabor.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <numbers>
#include <optional>

using namespace weylpos;
using namespace weylpos::cli;

namespace {

constexpr const char* kVersion = "1.0.0";

struct Global {
  double eta = 0.0;
  std::optional<std::uint64_t> seed;
  double tol = 1e-8;
  int threads = 0;
  std::string out;
};

struct Inputs {
  std::string input;
  std::string mixture;
  std::string symbol;
  std::string gaussian;
  double N = 3.0;
  double spacing = 0.0;
  std::size_t trials = 200;
  std::size_t max_points = 8;
  std::size_t refine = 0;
  std::size_t probes = 16;
  std::vector<double> lambda{0.0, 0.0};
  std::vector<double> mu{0.0, 0.0};
  std::vector<double> n_list{1.0, 2.0, 3.0, 4.0};
  bool prime = false;
};

// Exit codes: 0 positive / ok, 1 violation, 2 configuration, 3 inconclusive,
// 4 resolution, 5 internal consistency.
constexpr int kOk = 0, kViolation = 1, kConfig = 2, kInconclusive = 3, kResolution = 4, kConsistency = 5;

EtaParam require_eta(const Global& g) {
  if (g.eta == 0.0) throw ConfigError("--eta is required and must be nonzero");
  return EtaParam(g.eta);
}

std::uint64_t require_seed(const Global& g) {
  if (!g.seed) throw ConfigError("--seed is required for randomized search");
  return *g.seed;
}

json header(const std::string& command, const Global& g) {
  json cfg{{"eta", g.eta}, {"tol", g.tol}};
  if (g.seed) cfg["seed"] = *g.seed;
  return json{{"tool", "weylpos"}, {"version", kVersion}, {"command", command}, {"config", cfg}};
}

void emit(const json& report, const Global& g, bool report_to_out = true) {
  std::cout << report.dump(2) << '\n';
  if (report_to_out && !g.out.empty()) write_text(g.out, report.dump(2) + "\n");
}

void write_grid(const SymbolGrid& a, const Global& g) {
  if (g.out.empty()) return;
  const bool csv = g.out.size() >= 4 && g.out.compare(g.out.size() - 4, 4, ".csv") == 0;
  write_text(g.out, csv ? symbol_csv(a) : to_json(a).dump() + "\n");
}

// Symbol from exactly one of --mixture / --symbol; fills the eta actually used.
SymbolGrid symbol_input(const Inputs& in, const Global& g, double& eta_used) {
  if (in.mixture.empty() == in.symbol.empty()) throw ConfigError("give exactly one of --mixture or --symbol");
  if (!in.mixture.empty()) {
    const SpectralMixture m = load_mixture(in.mixture, g.eta);
    eta_used = m.eta().value();
    return symbol_from_mixture(m);
  }
  const EtaParam eta = require_eta(g);
  eta_used = eta.value();
  SymbolGrid a = load_symbol_grid(in.symbol);
  if (!a.grid.same_as(wigner_grid(a.grid.x, eta))) {
    throw ConfigError(in.symbol + ": momentum axis is not the Wigner grid of the x-axis at this eta");
  }
  return a;
}

GaborFrameSpec frame_for(const Grid1D& x, const EtaParam& eta, double spacing) {
  GaborFrameSpec spec = GaborFrameSpec::standard(x, eta);
  if (spacing > 0.0) spec.lattice = Lattice::square(1, spacing);
  return spec;
}

json psd_json(const PsdReport& r) {
  return json{{"size", r.size},
              {"min_eigenvalue", r.min_eigenvalue},
              {"max_eigenvalue", r.max_eigenvalue},
              {"tolerance_used", r.tolerance_used},
              {"verdict", to_string(r.verdict)}};
}

json klm_json(const KlmReport& k) {
  json j{{"trials_requested", k.trials_requested},
         {"trials_run", k.trials_run},
         {"max_points", k.max_points},
         {"refine_steps", k.refine_steps},
         {"tolerance", k.tolerance},
         {"support_radius", k.support_radius},
         {"interpolation_error", k.interpolation_error},
         {"l1_suspect", k.l1_suspect},
         {"candidates_rejected", k.candidates_rejected},
         {"violation_found", k.violation_found()}};
  if (k.certificate) {
    json pts = json::array();
    for (const auto& z : k.certificate->points) pts.push_back(to_json(z));
    json zeta = json::array();
    for (Eigen::Index i = 0; i < k.certificate->zeta.size(); ++i) {
      zeta.push_back({k.certificate->zeta(i).real(), k.certificate->zeta(i).imag()});
    }
    j["certificate"] = json{{"trial", k.certificate->trial},
                            {"points", pts},
                            {"zeta", zeta},
                            {"value", k.certificate->value},
                            {"min_eigenvalue", k.certificate->min_eigenvalue}};
  }
  return j;
}

int cmd_wigner(const Inputs& in, const Global& g, bool ambiguity_mode) {
  const EtaParam eta = require_eta(g);
  const GridFunction1D psi = load_grid_function(in.input);
  json r = header(ambiguity_mode ? "ambiguity" : "wigner", g);
  r["input"] = in.input;
  const double n2 = psi.norm() * psi.norm();
  r["norm_squared"] = n2;
  const Grid2D grid = ambiguity_mode ? ambiguity_grid(psi.grid, eta) : wigner_grid(psi.grid, eta);
  SymbolGrid a = SymbolGrid::zeros(grid);
  if (n2 == 0.0) {
    r["warning"] = "zero function: output grid is identically zero";
  } else {
    a = ambiguity_mode ? ambiguity(psi, eta) : wigner(psi, eta);
  }
  const double l2 = a.values.cwiseAbs2().sum() * a.grid.cell();
  const double expected = n2 * n2 / (2.0 * std::numbers::pi * eta.abs());
  const double expected_amb = n2 * n2 * 2.0 * std::numbers::pi * eta.abs();
  r["l2_norm_squared"] = l2;
  r["moyal_expected"] = ambiguity_mode ? expected_amb : expected;
  r["moyal_residual"] = std::abs(l2 - (ambiguity_mode ? expected_amb : expected));
  r["grid"] = to_json(a.grid);
  write_grid(a, g);
  emit(r, g, false);
  return kOk;
}

int cmd_symbol(const Inputs& in, const Global& g) {
  if (in.mixture.empty()) throw ConfigError("--mixture is required");
  const SpectralMixture m = load_mixture(in.mixture, g.eta);
  const SymbolGrid a = symbol_from_mixture(m);
  json r = header("symbol", g);
  r["eta"] = m.eta().value();
  r["terms"] = m.size();
  r["trace_from_coefficients"] = trace_from_mixture(m);
  r["trace_from_symbol"] = trace_from_symbol(a, m.eta());
  r["grid"] = to_json(a.grid);
  write_grid(a, g);
  emit(r, g, false);
  return kOk;
}

int cmd_check_gaussian(const Inputs& in, const Global& g) {
  const json j = read_json(in.gaussian);
  double e = g.eta;
  if (e == 0.0 && j.contains("eta")) e = j.at("eta").get<double>();
  if (e == 0.0) throw ConfigError("eta missing (pass --eta or set \"eta\")");
  const CovarianceModel cm(load_matrix(in.gaussian, "sigma"), EtaParam(e));
  const auto p = gaussian_positivity(cm);
  json r = header("check", g);
  r["input_kind"] = "gaussian";
  r["methods"] = json{{"gaussian_closed_form",
                       {{"symplectic_eigenvalues", to_json(p.lambda)},
                        {"margin", p.margin},
                        {"lambda_test", p.lambda_test},
                        {"matrix_min_eigenvalue", p.matrix_min_eigenvalue},
                        {"matrix_test", p.matrix_test},
                        {"verdict", to_string(p.verdict)}}}};
  r["verdict"] = p.positive() ? "positive" : "violation";
  emit(r, g);
  return p.positive() ? kOk : kViolation;
}

int cmd_check(const Inputs& in, const Global& g) {
  const int given = !in.gaussian.empty() + !in.mixture.empty() + !in.symbol.empty();
  if (given != 1) throw ConfigError("check needs exactly one of --gaussian, --mixture, --symbol");
  if (!in.gaussian.empty()) return cmd_check_gaussian(in, g);

  const std::uint64_t seed = require_seed(g);
  double e = 0.0;
  const SymbolGrid a = symbol_input(in, g, e);
  const EtaParam eta(e);
  json r = header("check", g);
  r["input_kind"] = in.mixture.empty() ? "symbol" : "mixture";
  r["eta"] = e;

  bool violation = false, inconclusive = false;
  json methods;
  try {
    const Eigen::VectorXd spec = weyl_kernel(a, eta).spectrum();
    const double scale = std::max(1.0, spec.cwiseAbs().maxCoeff());
    const double kmin = spec.minCoeff();
    const bool neg = kmin < -1e-6 * scale;
    violation = violation || neg;
    methods["kernel_oracle"] = {{"min_eigenvalue", kmin}, {"max_eigenvalue", spec.maxCoeff()}, {"negative", neg}};
  } catch (const ResolutionError& ex) {
    inconclusive = true;
    methods["kernel_oracle"] = {{"error", ex.what()}};
  }

  const PsdReport mp = psd_check(build_M(a, frame_for(a.grid.x, eta, in.spacing), in.N).values);
  methods["gabor_M"] = psd_json(mp);
  methods["gabor_M"]["N"] = in.N;
  violation = violation || !mp.psd();

  const KlmReport k = check_eta_positive_type(a, eta, in.trials, in.max_points, seed, g.tol, in.refine);
  methods["klm"] = klm_json(k);
  violation = violation || k.violation_found();
  inconclusive = inconclusive || k.l1_suspect;

  r["methods"] = methods;
  const int code = violation ? kViolation : (inconclusive ? kInconclusive : kOk);
  r["verdict"] = violation ? "violation" : (inconclusive ? "inconclusive" : "positive");
  emit(r, g);
  return code;
}

int cmd_klm(const Inputs& in, const Global& g) {
  const std::uint64_t seed = require_seed(g);
  double e = 0.0;
  const SymbolGrid a = symbol_input(in, g, e);
  const KlmReport k = check_eta_positive_type(a, EtaParam(e), in.trials, in.max_points, seed, g.tol, in.refine);
  json r = header("klm", g);
  r["eta"] = e;
  r["klm"] = klm_json(k);
  emit(r, g);
  return k.violation_found() ? kViolation : kOk;
}

int cmd_gabor_m(const Inputs& in, const Global& g) {
  double e = 0.0;
  const SymbolGrid a = symbol_input(in, g, e);
  const EtaParam eta(e);
  const GaborFrameSpec spec = frame_for(a.grid.x, eta, in.spacing);
  const TruncatedMatrix M = in.prime ? build_M_prime(a, spec, in.N) : build_M(a, spec, in.N);
  json idx = json::array();
  for (const auto& lp : M.index) idx.push_back({{"k", {lp.index(0), lp.index(1)}}, {"point", to_json(lp.point)}});
  json r = header("gabor-m", g);
  r["eta"] = e;
  r["matrix"] = in.prime ? "M_prime" : "M";
  r["N"] = in.N;
  r["index"] = idx;
  r["values"] = to_json(M.values);
  r["psd"] = psd_json(psd_check(M.values));
  emit(r, g);
  return kOk;
}

int cmd_average_klm(const Inputs& in, const Global& g) {
  if (in.lambda.size() != 2 || in.mu.size() != 2) throw ConfigError("--lambda and --mu take two numbers x,p");
  double e = 0.0;
  const SymbolGrid a = symbol_input(in, g, e);
  const EtaParam eta(e);
  const PhasePoint l(in.lambda[0], in.lambda[1]), m(in.mu[0], in.mu[1]);
  const cd av = klm_entry_from_average(a, l, m, eta);
  const cd direct = klm_entry_direct(a, l, m, eta);
  json r = header("average-klm", g);
  r["eta"] = e;
  r["lambda"] = to_json(l);
  r["mu"] = to_json(m);
  r["average"] = {av.real(), av.imag()};
  r["direct"] = {direct.real(), direct.imag()};
  r["relative_difference"] = std::abs(av - direct) / std::max(std::abs(direct), 1e-300);
  emit(r, g);
  return kOk;
}

int cmd_almost_pos(const Inputs& in, const Global& g) {
  const EtaParam eta = require_eta(g);
  const std::uint64_t seed = require_seed(g);
  const Grid1D grid = Grid1D::centered(0.1 * std::sqrt(eta.abs()), 256);
  const GaborFrameSpec spec = frame_for(grid, eta, in.spacing);
  std::vector<SymbolAtN> fam;
  for (double N : in.n_list) fam.push_back({N, almost_positive_example(N, grid, eta)});
  const auto rep = almost_positivity_diagnostic(fam, spec, in.trials, seed);
  json rows = json::array();
  for (const auto& row : rep.rows) {
    rows.push_back({{"N", row.N},
                    {"M_min_eigenvalue", row.m_matrix_min},
                    {"hypothesis_met", row.hypothesis_met},
                    {"m_span", row.m_span},
                    {"m_random", row.m_random}});
  }
  json r = header("almost-pos", g);
  r["trials"] = rep.trials;
  r["span_radius"] = rep.span_radius;
  r["rows"] = rows;
  r["noise_floor"] = rep.noise_floor;
  r["all_hypotheses_met"] = rep.all_hypotheses_met;
  r["fitted_exponent"] = rep.fitted_exponent ? json(*rep.fitted_exponent) : json(nullptr);
  if (!rep.all_hypotheses_met) r["note"] = "hypothesis not met for some N";
  emit(r, g);
  return kOk;
}

int cmd_williamson(const Inputs& in, const Global& g) {
  if (in.input.empty()) throw ConfigError("--sigma is required");
  const Eigen::MatrixXd S = load_matrix(in.input, "sigma");
  if (S.rows() != S.cols() || S.rows() == 0 || S.rows() % 2 != 0) throw ConfigError("Sigma must be 2n x 2n");
  const double scale = std::max(1.0, S.cwiseAbs().maxCoeff());
  if ((S - S.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) throw ConfigError("Sigma is not symmetric");
  json r = header("williamson", g);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
  if (!(es.eigenvalues()(0) > 0.0)) {
    r["error"] = "Sigma is not positive definite";
    r["min_eigenvalue"] = es.eigenvalues()(0);
    emit(r, g);
    return kViolation;
  }
  const CovarianceModel cm(S, EtaParam(g.eta == 0.0 ? 1.0 : g.eta));
  const WilliamsonFactors f = williamson_decompose(cm);
  r["symplectic_eigenvalues"] = to_json(f.lambda);
  r["S"] = to_json(f.S);
  r["D"] = to_json(f.D);
  r["symplectic_residual"] = f.symplectic_residual;
  r["reconstruction_residual"] = f.reconstruction_residual;
  if (g.eta != 0.0) r["gaussian_verdict"] = to_string(gaussian_positivity(cm).verdict);
  emit(r, g);
  return kOk;
}

int cmd_frame_bounds(const Inputs& in, const Global& g) {
  const EtaParam eta = require_eta(g);
  const GaborFrameSpec spec = frame_for(default_grid(eta), eta, in.spacing);
  const FrameBounds fb = frame_bounds_estimate(spec, in.probes);
  json r = header("frame-bounds", g);
  r["spacing"] = spec.lattice.generator(0, 0);
  r["probes"] = fb.probes;
  r["lattice_points"] = fb.lattice_points;
  r["A"] = fb.A;
  r["B"] = fb.B;
  r["is_frame"] = fb.is_frame;
  emit(r, g);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Positivity diagnostics for Weyl operators"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  Inputs in;
  app.add_option("--eta", g.eta, "Deformation parameter (nonzero)");
  app.add_option("--seed", g.seed, "Seed for randomized searches");
  app.add_option("--tol", g.tol, "Relative PSD tolerance")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads for linear algebra (0 = all)");
  app.add_option("--out", g.out, "Output file (grid JSON/CSV or report)");

  auto* w = app.add_subcommand("wigner", "Wigner transform of a wavefunction file");
  w->add_option("--input", in.input, "Wavefunction JSON")->required();
  auto* amb = app.add_subcommand("ambiguity", "Ambiguity function of a wavefunction file");
  amb->add_option("--input", in.input, "Wavefunction JSON")->required();
  auto* sym = app.add_subcommand("symbol", "Weyl symbol of a spectral mixture");
  sym->add_option("--mixture", in.mixture, "Mixture JSON")->required();

  auto symbol_opts = [&](CLI::App* c) {
    c->add_option("--mixture", in.mixture, "Mixture JSON");
    c->add_option("--symbol", in.symbol, "Symbol grid JSON");
  };
  auto* chk = app.add_subcommand("check", "Aggregate positivity verdict");
  symbol_opts(chk);
  chk->add_option("--gaussian", in.gaussian, "Covariance JSON");
  chk->add_option("--N", in.N, "Gabor truncation radius")->capture_default_str();
  chk->add_option("--trials", in.trials, "KLM trials")->capture_default_str();
  chk->add_option("--max-points", in.max_points, "KLM points per trial")->capture_default_str();
  chk->add_option("--refine", in.refine, "Hill-climbing steps per KLM trial")->capture_default_str();
  chk->add_option("--spacing", in.spacing, "Square lattice spacing");
  auto* klm = app.add_subcommand("klm", "Randomized KLM search");
  symbol_opts(klm);
  klm->add_option("--trials", in.trials, "Trials")->capture_default_str();
  klm->add_option("--max-points", in.max_points, "Points per trial")->capture_default_str();
  klm->add_option("--refine", in.refine, "Hill-climbing steps per trial")->capture_default_str();
  auto* gm = app.add_subcommand("gabor-m", "Truncated Gabor matrix M_(N)");
  symbol_opts(gm);
  gm->add_option("--N", in.N, "Truncation radius")->capture_default_str();
  gm->add_option("--spacing", in.spacing, "Square lattice spacing");
  gm->add_flag("--prime", in.prime, "Build M' instead of M");
  auto* avg = app.add_subcommand("average-klm", "KLM entry from window averaging");
  symbol_opts(avg);
  avg->add_option("--lambda", in.lambda, "x p")->expected(2)->delimiter(',');
  avg->add_option("--mu", in.mu, "x p")->expected(2)->delimiter(',');
  auto* ap = app.add_subcommand("almost-pos", "Almost-positivity diagnostic on the test family");
  ap->add_option("--N-list", in.n_list, "Truncation radii")->delimiter(',');
  ap->add_option("--trials", in.trials, "Random trials per N")->capture_default_str();
  ap->add_option("--spacing", in.spacing, "Square lattice spacing");
  auto* wil = app.add_subcommand("williamson", "Williamson decomposition of a covariance");
  wil->add_option("--sigma", in.input, "Covariance JSON")->required();
  auto* fbc = app.add_subcommand("frame-bounds", "Frame bound estimate");
  fbc->add_option("--spacing", in.spacing, "Square lattice spacing");
  fbc->add_option("--probes", in.probes, "Hermite probe count")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfig;
  }
  if (g.threads > 0) Eigen::setNbThreads(g.threads);

  try {
    if (*w) return cmd_wigner(in, g, false);
    if (*amb) return cmd_wigner(in, g, true);
    if (*sym) return cmd_symbol(in, g);
    if (*chk) return cmd_check(in, g);
    if (*klm) return cmd_klm(in, g);
    if (*gm) return cmd_gabor_m(in, g);
    if (*avg) return cmd_average_klm(in, g);
    if (*ap) return cmd_almost_pos(in, g);
    if (*wil) return cmd_williamson(in, g);
    if (*fbc) return cmd_frame_bounds(in, g);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const ResolutionError& e) {
    std::cerr << "resolution error: " << e.what() << '\n';
    return kResolution;
  } catch (const ConsistencyError& e) {
    std::cerr << "internal consistency error: " << e.what() << '\n';
    return kConsistency;
  }
  return kConfig;
}
