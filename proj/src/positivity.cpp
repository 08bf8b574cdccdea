#include "weylpos/positivity.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <random>

namespace weylpos {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return std::mt19937_64(seq);
}

PhasePoint random_point_in_disc(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double r = radius * std::sqrt(u01(rng));
  const double th = kTwoPi * u01(rng);
  return PhasePoint(r * std::cos(th), r * std::sin(th));
}

Eigen::MatrixXcd klm_matrix_from(const std::function<cd(const PhasePoint&)>& f, const PointSet& pts,
                                 double eta) {
  const auto N = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXcd M(N, N);
  for (Eigen::Index j = 0; j < N; ++j) {
    for (Eigen::Index k = 0; k < N; ++k) {
      const double s = symplectic_form(pts[j], pts[k]);
      M(j, k) = std::polar(1.0, -0.5 * eta * s) * f(pts[j] - pts[k]);
    }
  }
  return M;
}

}  // namespace

std::string to_string(PsdVerdict v) {
  switch (v) {
    case PsdVerdict::positive:
      return "positive";
    case PsdVerdict::borderline:
      return "borderline";
    case PsdVerdict::indefinite:
      return "indefinite";
  }
  return "unknown";
}

PsdReport psd_check(const Eigen::MatrixXcd& M, double scale_tol) {
  if (M.rows() != M.cols()) throw DomainError("psd_check: matrix must be square");
  if (!(scale_tol >= 0.0)) throw DomainError("psd_check: tolerance must be nonnegative");
  if (!M.allFinite()) throw DomainError("psd_check: non-finite entries");
  PsdReport r;
  r.size = static_cast<std::size_t>(M.rows());
  if (M.rows() == 0) return r;

  const double fro = M.norm();
  if ((M - M.adjoint()).norm() > 1e-8 * fro) throw DomainError("psd_check: matrix is not Hermitian");
  const Eigen::MatrixXcd H = 0.5 * (M + M.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  const Eigen::VectorXd& ev = es.eigenvalues();
  r.min_eigenvalue = ev(0);
  r.max_eigenvalue = ev(ev.size() - 1);
  r.min_eigenvector = es.eigenvectors().col(0);
  const double norm2 = std::max(std::abs(r.min_eigenvalue), std::abs(r.max_eigenvalue));
  r.tolerance_used = scale_tol * std::max(1.0, norm2);
  if (r.min_eigenvalue > r.tolerance_used) {
    r.verdict = PsdVerdict::positive;
  } else if (r.min_eigenvalue >= -r.tolerance_used) {
    r.verdict = PsdVerdict::borderline;
  } else {
    r.verdict = PsdVerdict::indefinite;
  }
  return r;
}

Eigen::MatrixXcd bochner_matrix(const Sampler& rho_diamond, const PointSet& pts) {
  const auto N = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXcd M(N, N);
  for (Eigen::Index j = 0; j < N; ++j) {
    for (Eigen::Index k = 0; k < N; ++k) M(j, k) = rho_diamond(pts[j] - pts[k]);
  }
  return M;
}

Eigen::MatrixXcd klm_matrix(const Sampler& a_diamond, const PointSet& pts, const EtaParam& eta) {
  return klm_matrix_from(a_diamond, pts, eta.value());
}

Eigen::MatrixXcd hadamard_product(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B) {
  if (A.rows() != B.rows() || A.cols() != B.cols()) throw DomainError("hadamard_product: shape mismatch");
  return A.cwiseProduct(B);
}

Eigen::MatrixXcd quadratic_point_matrix(const Eigen::MatrixXd& R, const PointSet& pts) {
  const auto N = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXcd M(N, N);
  for (Eigen::Index j = 0; j < N; ++j) {
    const Eigen::VectorXd zj = pts[j].stacked();
    if (R.rows() != zj.size() || R.cols() != zj.size()) throw DomainError("quadratic_point_matrix: dimension mismatch");
    for (Eigen::Index k = 0; k < N; ++k) M(j, k) = (R * zj).dot(pts[k].stacked());
  }
  return M;
}

DiamondSampler::DiamondSampler(const SymbolGrid& a) : symbol_(a), diamond_(reduced_symplectic_ft(a)) {
  const double peak = diamond_.max_abs();
  const Grid2D& g = diamond_.grid;
  for (std::size_t i = 0; i < g.x.K; ++i) {
    for (std::size_t j = 0; j < g.p.K; ++j) {
      if (std::abs(diamond_.values(i, j)) >= 1e-3 * peak && peak > 0.0) {
        support_radius_ = std::max(support_radius_, std::hypot(g.x.point(i), g.p.point(j)));
      }
    }
  }
  if (support_radius_ == 0.0) support_radius_ = 10.0 * std::max(g.x.dx, g.p.dx);

  std::mt19937_64 rng(0x5eedULL);
  for (int t = 0; t < 16; ++t) {
    const PhasePoint z = random_point_in_disc(rng, support_radius_);
    interpolation_error_ = std::max(interpolation_error_, std::abs((*this)(z) - exact(z)));
  }
}

cd DiamondSampler::operator()(const PhasePoint& z) const {
  if (z.dim() != 1) throw DomainError("DiamondSampler: n = 1 only");
  const Grid2D& g = diamond_.grid;
  const double fx = (z.x1() - g.x.x0) / g.x.dx;
  const double fp = (z.p1() - g.p.x0) / g.p.dx;
  if (!(fx >= 0.0) || !(fp >= 0.0) || fx > static_cast<double>(g.x.K - 1) || fp > static_cast<double>(g.p.K - 1)) {
    return 0.0;
  }
  const auto i = std::min(static_cast<std::size_t>(fx), g.x.K - 2);
  const auto j = std::min(static_cast<std::size_t>(fp), g.p.K - 2);
  const double tx = fx - static_cast<double>(i);
  const double tp = fp - static_cast<double>(j);
  const auto& v = diamond_.values;
  return (1 - tx) * (1 - tp) * v(i, j) + tx * (1 - tp) * v(i + 1, j) + (1 - tx) * tp * v(i, j + 1) +
         tx * tp * v(i + 1, j + 1);
}

cd DiamondSampler::exact(const PhasePoint& z) const { return reduced_symplectic_ft_at(symbol_, z); }

cd klm_polynomial(const SymbolGrid& a, const PointSet& pts, const Eigen::VectorXcd& zeta, const EtaParam& eta) {
  if (static_cast<std::size_t>(zeta.size()) != pts.size()) throw DomainError("klm_polynomial: size mismatch");
  const Eigen::MatrixXcd L =
      klm_matrix_from([&](const PhasePoint& z) { return reduced_symplectic_ft_at(a, z); }, pts, eta.value());
  // sum_jk zeta_j conj(zeta_k) L_jk
  return (zeta.transpose() * L * zeta.conjugate())(0);
}

KlmReport check_eta_positive_type(const SymbolGrid& a, const EtaParam& eta, std::size_t trials,
                                  std::size_t max_points, std::uint64_t seed, double tol, std::size_t refine_steps) {
  if (max_points == 0) throw DomainError("check_eta_positive_type: max_points must be >= 1");
  if (a.max_imag() > 1e-10 * std::max(1.0, a.max_abs())) {
    throw DomainError("check_eta_positive_type: symbol must be real-valued");
  }
  const DiamondSampler sampler(a);

  KlmReport rep;
  rep.eta = eta.value();
  rep.seed = seed;
  rep.trials_requested = trials;
  rep.max_points = max_points;
  rep.tolerance = tol;
  rep.refine_steps = refine_steps;
  rep.support_radius = sampler.support_radius();
  rep.interpolation_error = sampler.interpolation_error();

  // Integrability flag: share of sum |a| in the outer tenth of each axis.
  {
    const Grid2D& g = a.grid;
    const std::size_t bx = std::max<std::size_t>(1, g.x.K / 10);
    const std::size_t bp = std::max<std::size_t>(1, g.p.K / 10);
    double total = 0.0;
    double outer = 0.0;
    for (std::size_t i = 0; i < g.x.K; ++i) {
      for (std::size_t j = 0; j < g.p.K; ++j) {
        const double v = std::abs(a.values(i, j));
        total += v;
        if (i < bx || i + bx >= g.x.K || j < bp || j + bp >= g.p.K) outer += v;
      }
    }
    rep.l1_suspect = total > 0.0 && outer > 1e-3 * total;
  }

  std::uniform_int_distribution<std::size_t> size_dist(1, max_points);
  std::uniform_real_distribution<double> scale_dist(0.1, 1.0);
  for (std::size_t t = 0; t < trials; ++t) {
    auto rng = trial_rng(seed, t);
    const std::size_t N = size_dist(rng);
    const double radius = rep.support_radius * scale_dist(rng);
    PointSet pts;
    pts.reserve(N);
    for (std::size_t k = 0; k < N; ++k) pts.push_back(random_point_in_disc(rng, radius));

    if (refine_steps > 0) {
      // Hill climbing on the interpolated minimum eigenvalue, one point at a time.
      std::normal_distribution<double> nd;
      double current = psd_check(klm_matrix(sampler, pts, eta), tol).min_eigenvalue;
      double step = 0.3 * radius;
      for (std::size_t it = 0; it < refine_steps; ++it) {
        PointSet trial_pts = pts;
        PhasePoint& z = trial_pts[it % N];
        z = PhasePoint(z.x1() + step * nd(rng), z.p1() + step * nd(rng));
        const double v = psd_check(klm_matrix(sampler, trial_pts, eta), tol).min_eigenvalue;
        if (v < current) {
          current = v;
          pts = std::move(trial_pts);
        } else {
          step *= 0.99;
        }
      }
    }

    const PsdReport screen = psd_check(klm_matrix(sampler, pts, eta), tol);
    rep.trial_log.push_back({N, screen.min_eigenvalue, screen.max_eigenvalue});
    rep.trials_run = t + 1;
    if (screen.verdict != PsdVerdict::indefinite) continue;

    const Eigen::MatrixXcd exact =
        klm_matrix_from([&](const PhasePoint& z) { return sampler.exact(z); }, pts, eta.value());
    const PsdReport verify = psd_check(exact, tol);
    if (verify.verdict != PsdVerdict::indefinite) {
      ++rep.candidates_rejected;
      continue;
    }
    const Eigen::VectorXcd zeta = verify.min_eigenvector.conjugate();
    const double value = klm_polynomial(a, pts, zeta, eta).real();
    if (value < -verify.tolerance_used * zeta.squaredNorm()) {
      rep.certificate = KlmCertificate{pts, zeta, value, verify.min_eigenvalue, t};
      break;
    }
    ++rep.candidates_rejected;
  }
  return rep;
}

cd continuous_positivity_functional(const SymbolGrid& a, const SymbolGrid& c, const EtaParam& eta) {
  const Grid2D dual = symplectic_dual_grid(a.grid, eta.value());
  if (!c.grid.same_as(dual)) throw DomainError("continuous_positivity_functional: c must live on the dual grid of a");
  const SymbolGrid A = symplectic_ft(a, eta);
  const Grid2D& g = dual;
  const auto Kx = static_cast<long long>(g.x.K);
  const auto Kp = static_cast<long long>(g.p.K);
  const long long hx = Kx / 2;
  const long long hp = Kp / 2;
  const double e2 = 2.0 * eta.value();

  std::vector<cd> xphase(static_cast<std::size_t>(Kx));
  std::vector<cd> pphase(static_cast<std::size_t>(Kp));
  cd total = 0.0;
  for (long long i = 0; i < Kx; ++i) {
    const double x = g.x.point(static_cast<std::size_t>(i));
    // exp(-i sigma(z, z') / 2 eta) = exp(-i p x' / 2 eta) exp(i x p' / 2 eta)
    for (long long jp = 0; jp < Kp; ++jp) pphase[jp] = std::polar(1.0, x * g.p.point(static_cast<std::size_t>(jp)) / e2);
    for (long long j = 0; j < Kp; ++j) {
      const cd Az = A.values(i, j);
      if (Az == cd(0.0)) continue;
      const double p = g.p.point(static_cast<std::size_t>(j));
      for (long long ip = 0; ip < Kx; ++ip) xphase[ip] = std::polar(1.0, -p * g.x.point(static_cast<std::size_t>(ip)) / e2);
      cd inner = 0.0;
      for (long long ip = 0; ip < Kx; ++ip) {
        const long long di = ip - i + hx;
        if (di < 0 || di >= Kx) continue;
        cd racc = 0.0;
        for (long long jp = 0; jp < Kp; ++jp) {
          const long long dj = jp - j + hp;
          if (dj < 0 || dj >= Kp) continue;
          racc += pphase[jp] * c.values(di, dj) * std::conj(c.values(ip, jp));
        }
        inner += xphase[ip] * racc;
      }
      total += Az * inner;
    }
  }
  return total * g.cell() * g.cell();
}

}  // namespace weylpos
