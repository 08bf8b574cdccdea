// Acceptance run: one PASS/FAIL line per criterion.
#include "weylpos/gabor.hpp"
#include "weylpos/gaussian.hpp"
#include "weylpos/operators.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

using namespace weylpos;

namespace {

constexpr double kPi = std::numbers::pi;

int failures = 0;

void report(int id, const char* title, bool pass, const std::string& detail) {
  std::printf("criterion %2d [%s] %s: %s\n", id, pass ? "PASS" : "FAIL", title, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void run(int id, const char* title, const std::function<std::pair<bool, std::string>()>& body) {
  try {
    const auto [ok, detail] = body();
    report(id, title, ok, detail);
  } catch (const std::exception& e) {
    report(id, title, false, std::string("exception: ") + e.what());
  }
}

GridFunction1D hermite_combo(const Grid1D& g, const EtaParam& eta, std::mt19937_64& rng, int terms) {
  std::normal_distribution<double> nd;
  GridFunction1D psi = GridFunction1D::zeros(g);
  for (int k = 0; k < terms; ++k) psi = psi + cd(nd(rng), nd(rng)) * hermite_function(static_cast<std::size_t>(k), g, eta);
  return psi;
}

double max_diff(const RowMatrixXcd& a, const RowMatrixXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }

Eigen::MatrixXd diag2(double a, double b) { return Eigen::Vector2d(a, b).asDiagonal(); }

Eigen::MatrixXd rotation(double t) {
  Eigen::MatrixXd R(2, 2);
  R << std::cos(t), std::sin(t), -std::sin(t), std::cos(t);
  return R;
}

// ---------------------------------------------------------------------------

std::pair<bool, std::string> closed_form_wigner() {
  double worst = 0.0;
  for (double e : {0.5, 1.0, 2.0}) {
    const EtaParam eta(e);
    const Grid1D g = default_grid(eta);
    const SymbolGrid w = wigner(hermite_function(0, g, eta), eta);
    for (std::size_t i = 0; i < g.K; ++i) {
      for (std::size_t j = 0; j < w.grid.p.K; ++j) {
        const double r2 = w.x(i) * w.x(i) + w.p(j) * w.p(j);
        const double ref = std::exp(-r2 / e) / (kPi * e);
        worst = std::max(worst, std::abs(w.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - ref));
      }
    }
  }
  return {worst < 1e-8, fmt("max grid error %.2e over eta in {0.5,1,2}", worst)};
}

std::pair<bool, std::string> moyal_suite() {
  std::mt19937_64 rng(2024);
  double moyal = 0.0, moyal2 = 0.0, marg = 0.0;
  for (int t = 0; t < 20; ++t) {
    const EtaParam eta(t % 2 == 0 ? 1.0 : 0.5);
    const Grid1D g = default_grid(eta);
    const GridFunction1D psi = hermite_combo(g, eta, rng, 1 + t % 5);
    const GridFunction1D phi = hermite_combo(g, eta, rng, 1 + (t + 2) % 5);
    const SymbolGrid wp = wigner(psi, eta);
    const SymbolGrid wf = wigner(phi, eta);
    const double cell = wp.grid.cell();
    const double lhs = wp.values.cwiseProduct(wf.values).sum().real() * cell;
    const double rhs = std::norm(psi.inner(phi)) / (2.0 * kPi * eta.abs());
    moyal = std::max(moyal, std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300));
    const double n2 = psi.norm() * psi.norm();
    const double l2 = wp.values.squaredNorm() * cell;
    const double r2 = n2 * n2 / (2.0 * kPi * eta.abs());
    moyal2 = std::max(moyal2, std::abs(l2 - r2) / r2);

    double xm = 0.0, xerr = 0.0;
    for (std::size_t i = 0; i < g.K; ++i) {
      const double m = wp.values.row(static_cast<Eigen::Index>(i)).sum().real() * wp.grid.p.dx;
      xerr = std::max(xerr, std::abs(m - std::norm(psi[i])));
      xm = std::max(xm, std::norm(psi[i]));
    }
    const GridFunction1D f = eta_fourier(psi, eta);
    double pm = 0.0, perr = 0.0;
    for (std::size_t j = 0; j < g.K; j += 2) {
      const double m = wp.values.col(static_cast<Eigen::Index>(j)).sum().real() * g.dx;
      const std::size_t fj = j / 2 + g.K / 4;
      perr = std::max(perr, std::abs(m - std::norm(f[fj])));
      pm = std::max(pm, std::norm(f[fj]));
    }
    marg = std::max({marg, xerr / xm, perr / pm});
  }
  const bool ok = moyal < 1e-6 && moyal2 < 1e-6 && marg < 1e-6;
  return {ok, fmt("20 mixtures: Moyal rel %.1e, norm form rel %.1e, marginals rel %.1e", moyal, moyal2, marg)};
}

std::pair<bool, std::string> transform_algebra() {
  std::mt19937_64 rng(7);
  double w5 = 0.0, inv = 0.0, dia = 0.0, sc1 = 0.0, sc2 = 0.0;
  for (double e : {0.5, 1.0, 2.0}) {
    const EtaParam eta(e);
    const Grid1D g = default_grid(eta);
    const GridFunction1D psi = hermite_combo(g, eta, rng, 4);
    const GridFunction1D phi = hermite_combo(g, eta, rng, 4);
    const SymbolGrid w = wigner_cross(psi, phi, eta);
    w5 = std::max(w5, max_diff(ambiguity_cross(psi, phi, eta).values, symplectic_ft(w, eta).values));
    inv = std::max(inv, max_diff(symplectic_ft(symplectic_ft(w, eta), eta).values, w.values) / std::max(1.0, w.max_abs()));

    const SymbolGrid a = wigner(psi, eta);
    const SymbolGrid d = reduced_symplectic_ft(a);
    const SymbolGrid s = symplectic_ft(a, eta);
    const std::size_t Kx = d.grid.x.K, Kp = d.grid.p.K;
    for (std::size_t i = 1; i < Kx; ++i) {
      for (std::size_t j = 1; j < Kp; ++j) {
        dia = std::max(dia, std::abs(d.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -
                                     2.0 * kPi * e * s.values(static_cast<Eigen::Index>(Kx - i), static_cast<Eigen::Index>(Kp - j))));
      }
    }
  }
  const Grid1D g = default_grid(EtaParam(2.0));
  const GridFunction1D psi = hermite_combo(g, EtaParam(1.0), rng, 4);
  const SymbolGrid wh = wigner(psi, EtaParam(1.0));
  for (double lam : {0.5, 1.7, 2.0}) sc1 = std::max(sc1, max_diff(wigner(psi, EtaParam(lam)).values, wh.values / lam));
  for (double e : {1.0, 0.6}) {
    sc2 = std::max(sc2, max_diff(wigner(psi, EtaParam(e)).values, -wigner(psi.conj(), EtaParam(-e)).values));
  }
  const bool ok = w5 < 1e-8 && inv < 1e-8 && dia < 1e-8 && sc1 < 1e-8 && sc2 < 1e-8;
  return {ok, fmt("w5 %.1e, involution %.1e, diasig12 %.1e, scale1 %.1e, scale2 %.1e", w5, inv, dia, sc1, sc2)};
}

std::pair<bool, std::string> gaussian_boundary() {
  // (a) sweep across s = 1/2
  bool flip_ok = true;
  for (int k = 0; k <= 40; ++k) {
    const double s = 0.3 + 0.01 * k;
    const auto r = gaussian_positivity(CovarianceModel(diag2(s, s), EtaParam(1.0)));
    const bool expect = s >= 0.5 - 1e-12;
    flip_ok = flip_ok && (r.positive() == expect);
  }
  for (double s : {0.5 - 1e-6, 0.5 + 1e-6}) {
    flip_ok = flip_ok && (gaussian_positivity(CovarianceModel(diag2(s, s), EtaParam(1.0))).positive() == (s > 0.5));
  }
  flip_ok = flip_ok && gaussian_positivity(CovarianceModel(diag2(0.5, 0.5), EtaParam(1.0))).verdict == PsdVerdict::borderline;

  // (b) both criterion forms on 100 random (Sigma, eta)
  std::mt19937_64 rng(77);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ue(0.1, 3.0);
  int agree = 0;
  for (int t = 0; t < 100; ++t) {
    const auto m = static_cast<Eigen::Index>(2 * (1 + t % 2));
    Eigen::MatrixXd G(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) G(i, j) = nd(rng);
    }
    const Eigen::MatrixXd Sigma = G * G.transpose() / static_cast<double>(m) + 0.05 * Eigen::MatrixXd::Identity(m, m);
    const auto r = gaussian_positivity(CovarianceModel(Sigma, EtaParam(ue(rng) * (t % 3 == 0 ? -1.0 : 1.0))));
    if (r.lambda_test == r.matrix_test) ++agree;
  }

  // (c) kernel oracle on 12 pairs straddling |eta| = 2 lambda_min
  int oracle_ok = 0;
  double eig_err = 0.0;
  int idx = 0;
  for (double e : {1.0, 0.7}) {
    const EtaParam eta(e);
    const Grid1D g = default_grid(eta);
    const Grid2D wg = wigner_grid(g, eta);
    for (double delta : {-0.2, -0.1, -0.05, 0.05, 0.1, 0.2}) {
      const double lam = 0.5 * e * (1.0 + delta);
      const Eigen::MatrixXd S = rotation(0.3 + 0.4 * idx) * diag2(std::exp(0.15), std::exp(-0.15));
      const Eigen::MatrixXd Sigma = lam * S.transpose() * S;
      const CovarianceModel cm(0.5 * (Sigma + Sigma.transpose()), eta);
      const SymbolGrid a = (2.0 * kPi * eta.abs()) * gaussian_symbol(cm, wg);
      const Eigen::VectorXd spec = weyl_kernel(a, eta).spectrum();
      const bool verdict = gaussian_positivity(cm).positive();
      if ((spec.minCoeff() >= -1e-4) == verdict) ++oracle_ok;
      // Closed-form spectrum with nu = 2 lambda / |eta|: 2 / (nu + 1) ((nu - 1) / (nu + 1))^k.
      const double nu = 2.0 * lam / eta.abs();
      std::vector<double> ref;
      for (int k = 0; k < 6; ++k) ref.push_back(2.0 / (nu + 1.0) * std::pow((nu - 1.0) / (nu + 1.0), k));
      std::sort(ref.begin(), ref.end(), std::greater<>());
      std::vector<double> got(spec.data(), spec.data() + spec.size());
      for (double r : ref) {
        const auto it = std::min_element(got.begin(), got.end(), [r](double x, double y) { return std::abs(x - r) < std::abs(y - r); });
        eig_err = std::max(eig_err, std::abs(*it - r));
      }
      ++idx;
    }
  }
  const bool ok = flip_ok && agree == 100 && oracle_ok == 12 && eig_err < 1e-4;
  return {ok, fmt("flip at s=0.5 %s; forms agree %d/100; kernel oracle agrees %d/12, eigenvalue error %.1e",
                  flip_ok ? "exact" : "wrong", agree, oracle_ok, eig_err)};
}


struct BatteryItem {
  std::vector<double> alpha;
  std::vector<std::size_t> index;
  bool has_negative = false;
};

std::vector<BatteryItem> mixture_battery() {
  std::mt19937_64 rng(515);
  std::uniform_real_distribution<double> up(0.2, 1.0), un(0.25, 0.6);
  std::vector<BatteryItem> out;
  for (int t = 0; t < 20; ++t) {
    BatteryItem b;
    const int terms = 1 + t % 3 + (t >= 10 ? 1 : 0);
    std::vector<std::size_t> pool{0, 1, 2, 3};
    std::shuffle(pool.begin(), pool.end(), rng);
    for (int k = 0; k < terms; ++k) {
      b.index.push_back(pool[static_cast<std::size_t>(k)]);
      b.alpha.push_back(up(rng));
    }
    if (t >= 10) {
      b.alpha.back() = -un(rng) * b.alpha.front();
      b.has_negative = true;
    }
    out.push_back(b);
  }
  return out;
}

std::pair<bool, std::string> gabor_equivalence() {
  const EtaParam eta(1.0);
  const Grid1D g = default_grid(eta);
  const auto spec = GaborFrameSpec::standard(g, eta);
  int match = 0, total = 0;
  double prime_err = 0.0, prime_ratio = 0.0;
  for (const auto& b : mixture_battery()) {
    const SymbolGrid a = symbol_from_mixture(SpectralMixture::hermite(g, eta, b.alpha, b.index));
    const double kmin = weyl_kernel(a, eta).spectrum().minCoeff();
    const bool oracle_positive = kmin >= -1e-6;
    const TruncatedMatrix M = build_M(a, spec, 4.0);
    if (psd_check(M.values).psd() == oracle_positive) ++match;
    ++total;
    if (total <= 4) {
      const TruncatedMatrix Mp = build_M_prime(a, spec, 4.0);
      const double stated = 2.0 / std::pow(2.0 * kPi * eta.value(), 2);
      for (Eigen::Index i = 0; i < M.values.rows(); ++i) {
        for (Eigen::Index j = 0; j < M.values.cols(); ++j) {
          const double mag = std::abs(M.values(i, j));
          if (mag < 1e-6 * M.values.cwiseAbs().maxCoeff()) continue;
          prime_err = std::max(prime_err, std::abs(Mp.values(i, j) - stated * M.values(i, j)) / (stated * mag));
          prime_ratio = std::abs(Mp.values(i, j) / (stated * M.values(i, j)));
        }
      }
    }
  }
  const bool ok = match == total && prime_err < 1e-6;
  return {ok, fmt("M_(4) verdict matches kernel oracle %d/%d; M' vs 2^n (2 pi eta)^{-2n} M: rel error %.3g (M'/stated = %.6f)",
                  match, total, prime_err, prime_ratio)};
}

std::pair<bool, std::string> nesting() {
  const EtaParam eta(1.0);
  const Grid1D g = default_grid(eta);
  const auto spec = GaborFrameSpec::standard(g, eta);
  bool ok = true;
  int checked = 0;
  for (const auto& b : mixture_battery()) {
    if (checked == 4) break;
    const SymbolGrid a = symbol_from_mixture(SpectralMixture::hermite(g, eta, b.alpha, b.index));
    std::vector<TruncatedMatrix> Ms;
    for (double N : {1.0, 2.0, 3.0, 4.0}) Ms.push_back(build_M(a, spec, N));
    for (std::size_t k = 0; k + 1 < Ms.size(); ++k) {
      const Eigen::Index P = Ms[k].values.rows();
      ok = ok && Ms[k + 1].values.rows() >= P;
      ok = ok && (Ms[k + 1].values.topLeftCorner(P, P).array() == Ms[k].values.array()).all();
    }
    ++checked;
  }
  return {ok, fmt("%d symbols, N = 1..4: leading blocks %s", checked, ok ? "bitwise identical" : "differ")};
}

std::pair<bool, std::string> averaging() {
  const EtaParam eta(1.0);
  const Grid2D wg = wigner_grid(default_grid(EtaParam(2.0)), eta);
  Eigen::Matrix2d S1 = diag2(1.2, 1.2), S2;
  S2 << 0.9, 0.35, 0.35, 0.6;
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double worst = 0.0, mean = 0.0;
  int count = 0;
  for (const Eigen::Matrix2d& S : {S1, S2}) {
    const SymbolGrid a = (2.0 * kPi) * gaussian_symbol(CovarianceModel(S, eta), wg);
    for (int t = 0; t < 25; ++t) {
      const PhasePoint l(u(rng), u(rng)), m(u(rng), u(rng));
      const cd d = klm_entry_direct(a, l, m, eta);
      const cd av = klm_entry_from_average(a, l, m, eta);
      const double rel = std::abs(av - d) / std::abs(d);
      worst = std::max(worst, rel);
      mean += rel;
      ++count;
    }
  }
  mean /= count;
  return {worst < 1e-2, fmt("2 gaussian symbols x 25 pairs: max rel error %.2e, mean %.2e", worst, mean)};
}

std::pair<bool, std::string> klm_necessity() {
  const EtaParam eta(1.0);
  const Grid1D g = default_grid(eta);
  int pos_clean = 0, pos_total = 0, neg_found = 0, neg_total = 0;
  std::size_t worst_trial = 0;
  double verify_err = 0.0;
  std::uint64_t seed = 1000;
  for (const auto& b : mixture_battery()) {
    const SymbolGrid a = symbol_from_mixture(SpectralMixture::hermite(g, eta, b.alpha, b.index));
    if (!b.has_negative) {
      ++pos_total;
      if (!check_eta_positive_type(a, eta, 200, 8, seed++, 1e-8).violation_found()) ++pos_clean;
    } else {
      ++neg_total;
      const KlmReport r = check_eta_positive_type(a, eta, 500, 16, seed++, 1e-8, 200);
      if (r.certificate) {
        const cd v = klm_polynomial(a, r.certificate->points, r.certificate->zeta, eta);
        verify_err = std::max(verify_err, std::abs(v.real() - r.certificate->value));
        if (v.real() < 0.0) ++neg_found;
        worst_trial = std::max(worst_trial, r.certificate->trial);
      }
    }
  }
  const bool ok = pos_clean == pos_total && neg_found == neg_total;
  return {ok, fmt("positive: %d/%d clean after 200 trials; negative: %d/%d certified (latest trial index %zu), "
                  "re-evaluation diff %.1e",
                  pos_clean, pos_total, neg_found, neg_total, worst_trial, verify_err)};
}


Eigen::MatrixXcd random_psd(std::mt19937_64& rng, Eigen::Index n, Eigen::Index rank) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXcd G(rank, n);
  for (Eigen::Index i = 0; i < rank; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) G(i, j) = cd(nd(rng), nd(rng));
  }
  return G.adjoint() * G;
}

std::pair<bool, std::string> schur_gram() {
  std::mt19937_64 rng(909);
  std::normal_distribution<double> nd;
  std::uniform_int_distribution<int> un(2, 12);
  double worst_schur = 0.0, worst_gram = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Eigen::Index n = un(rng);
    const Eigen::MatrixXcd H = hadamard_product(random_psd(rng, n, 1 + t % 3), random_psd(rng, n, 1 + (t + 1) % 4));
    const PsdReport r = psd_check(H, 1e-10);
    worst_schur = std::min(worst_schur, r.min_eigenvalue / std::max(1.0, r.max_eigenvalue));
  }
  for (int t = 0; t < 100; ++t) {
    const auto n = static_cast<std::size_t>(un(rng));
    const Eigen::MatrixXcd Rc = random_psd(rng, 2, 1 + t % 2);
    const Eigen::MatrixXd R = Rc.real();
    PointSet pts;
    for (std::size_t k = 0; k < n; ++k) pts.emplace_back(nd(rng), nd(rng));
    const PsdReport r = psd_check(quadratic_point_matrix(R, pts), 1e-10);
    worst_gram = std::min(worst_gram, r.min_eigenvalue / std::max(1.0, r.max_eigenvalue));
  }
  const bool ok = worst_schur >= -1e-10 && worst_gram >= -1e-10;
  return {ok, fmt("min eigenvalue / scale: Hadamard %.1e, quadratic point matrices %.1e (100 each)", worst_schur,
                  worst_gram)};
}

std::pair<bool, std::string> williamson() {
  double planted = 0.0, sympl = 0.0, recon = 0.0;
  for (std::size_t n : {1u, 2u, 3u}) {
    for (std::uint64_t s = 0; s < 10; ++s) {
      const Eigen::MatrixXd S = random_symplectic(n, 7000 + 17 * n + s);
      Eigen::VectorXd lam(static_cast<Eigen::Index>(n));
      for (Eigen::Index k = 0; k < lam.size(); ++k) lam(k) = 0.3 + 0.9 * static_cast<double>(k) + 0.03 * static_cast<double>(s);
      Eigen::VectorXd d(2 * lam.size());
      d << lam, lam;
      const Eigen::MatrixXd Sigma = S.transpose() * d.asDiagonal() * S;
      const auto f = williamson_decompose(CovarianceModel(0.5 * (Sigma + Sigma.transpose()), EtaParam(1.0)));
      planted = std::max(planted, (f.lambda - lam).cwiseAbs().maxCoeff());
    }
  }
  std::mt19937_64 rng(4242);
  std::normal_distribution<double> nd;
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + static_cast<std::size_t>(t % 3);
    const auto m = static_cast<Eigen::Index>(2 * n);
    Eigen::MatrixXd G(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) G(i, j) = nd(rng);
    }
    const Eigen::MatrixXd Sigma = G * G.transpose() + 0.1 * Eigen::MatrixXd::Identity(m, m);
    const auto f = williamson_decompose(CovarianceModel(Sigma, EtaParam(1.0)));
    sympl = std::max(sympl, f.symplectic_residual);
    recon = std::max(recon, f.reconstruction_residual / Sigma.norm());
  }
  const bool ok = planted < 1e-8 && sympl < 1e-10 && recon < 1e-10;
  return {ok, fmt("planted lambda error %.1e; S^T J S - J residual %.1e; relative reconstruction %.1e", planted, sympl,
                  recon)};
}

std::pair<bool, std::string> almost_positivity() {
  const EtaParam eta(1.0);
  const Grid1D g = Grid1D::centered(0.1, 256);
  const auto spec = GaborFrameSpec::standard(g, eta);
  std::vector<SymbolAtN> fam;
  for (double N : {1.0, 2.0, 3.0, 4.0, 5.0}) fam.push_back({N, almost_positive_example(N, g, eta)});
  const auto r1 = almost_positivity_diagnostic(fam, spec, 20, 2718);
  const auto r2 = almost_positivity_diagnostic(fam, spec, 20, 2718);

  bool nonpos = true, increasing = true, repro = true;
  for (std::size_t k = 0; k < r1.rows.size(); ++k) {
    nonpos = nonpos && r1.rows[k].m_span <= r1.noise_floor;
    if (k > 0) increasing = increasing && r1.rows[k].m_span >= r1.rows[k - 1].m_span - r1.noise_floor;
    repro = repro && r1.rows[k].m_span == r2.rows[k].m_span && r1.rows[k].m_random == r2.rows[k].m_random &&
            r1.rows[k].m_matrix_min == r2.rows[k].m_matrix_min;
  }
  // Each a_N stops being detected as PSD once the truncation reaches the negative part.
  bool psd_only_up_to_n0 = true;
  for (const auto& f : fam) psd_only_up_to_n0 = psd_only_up_to_n0 && !psd_check(build_M(f.a, spec, f.N + 4.0).values).psd();

  std::ostringstream seq;
  for (const auto& row : r1.rows) seq << (seq.tellp() > 0 ? ", " : "") << fmt("%.4f", row.m_span);
  const bool ok = r1.all_hypotheses_met && psd_only_up_to_n0 && nonpos && increasing && repro && r1.rows.size() >= 4;
  return {ok, fmt("m(N), N=1..5: [%s]; hypotheses %s; M_(N+4) indefinite %s; fitted s %.2f; reproducible %s",
                  seq.str().c_str(), r1.all_hypotheses_met ? "met" : "NOT met", psd_only_up_to_n0 ? "yes" : "no",
                  r1.fitted_exponent.value_or(std::nan("")), repro ? "yes" : "no")};
}

std::pair<bool, std::string> mixture_identity() {
  const EtaParam hbar(1.0);
  const Grid1D g = default_grid(EtaParam(2.0));
  // Same operator written in two orthonormal bases of a degenerate eigenspace.
  const GridFunction1D h0 = hermite_function(0, g, hbar), h1 = hermite_function(1, g, hbar);
  const double r = 1.0 / std::sqrt(2.0);
  const SpectralMixture a(g, hbar, {0.5, 0.5, 0.2}, {h0, h1, hermite_function(2, g, hbar)});
  const SpectralMixture b(g, hbar, {0.5, 0.5, 0.2}, {cd(r) * (h0 + h1), cd(r) * (h0 + cd(-1.0) * h1), hermite_function(2, g, hbar)});
  const auto same = mixture_norm_identity_check(a, b);
  const double rel_same = std::abs(same.lhs_moyal - same.rhs_moyal) / same.rhs_moyal;

  const auto c = SpectralMixture::hermite(g, EtaParam(0.5), {1.0}, {0});
  const auto d = SpectralMixture::hermite(g, hbar, {1.0}, {0});
  const auto half = mixture_norm_identity_check(c, d);
  const double ratio = half.lhs_moyal / half.rhs_moyal;
  const bool ok = same.sums_match && same.identity_holds && rel_same < 1e-6 && std::abs(half.lhs / half.rhs - 2.0) < 1e-6 &&
                  std::abs(ratio - 2.0) < 1e-6;
  return {ok, fmt("eta = hbar: sums match %s, identity rel diff %.1e; eta = hbar/2: ratio %.8f (coefficients), %.8f (Moyal)",
                  same.sums_match ? "yes" : "no", rel_same, half.lhs / half.rhs, ratio)};
}

}  // namespace

int main() {
  run(1, "closed-form Wigner", closed_form_wigner);
  run(2, "Moyal and marginals", moyal_suite);
  run(3, "transform algebra", transform_algebra);
  run(4, "gaussian boundary", gaussian_boundary);
  run(5, "Gabor matrix equivalence", gabor_equivalence);
  run(6, "nesting", nesting);
  run(7, "window averaging", averaging);
  run(8, "KLM necessity", klm_necessity);
  run(9, "Schur and Gram lemmas", schur_gram);
  run(10, "Williamson", williamson);
  run(11, "almost positivity", almost_positivity);
  run(12, "mixture norm identity", mixture_identity);
  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
