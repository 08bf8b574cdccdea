#include "weylpos/gabor.hpp"

#include "weylpos/operators.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <utility>

namespace weylpos {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

void require_1d(const GaborFrameSpec& spec, const char* what) {
  if (spec.lattice.dim() != 1) throw DomainError(std::string(what) + ": only n = 1 lattices are supported");
}

void require_symbol_grid(const SymbolGrid& a, const GaborFrameSpec& spec, const char* what) {
  if (!a.grid.same_as(wigner_grid(spec.window.grid, spec.eta))) {
    throw DomainError(std::string(what) + ": symbol is not on the Wigner grid of the window");
  }
}

// J (mu - lambda) / eta
PhasePoint frequency(const PhasePoint& lam, const PhasePoint& mu, double eta) {
  const PhasePoint d = mu - lam;
  return PhasePoint(d.p1() / eta, -d.x1() / eta);
}

// sum_ij B_ij exp(-i (x_i zx + p_j zp))
cd phase_sum(const RowMatrixXcd& B, const Grid2D& g, double zx, double zp) {
  const auto Kx = static_cast<Eigen::Index>(g.x.K);
  const auto Kp = static_cast<Eigen::Index>(g.p.K);
  Eigen::VectorXcd ep(Kp);
  for (Eigen::Index j = 0; j < Kp; ++j) ep(j) = std::polar(1.0, -g.p.point(static_cast<std::size_t>(j)) * zp);
  const Eigen::VectorXcd rows = B * ep;
  cd s = 0.0;
  for (Eigen::Index i = 0; i < Kx; ++i) s += rows(i) * std::polar(1.0, -g.x.point(static_cast<std::size_t>(i)) * zx);
  return s;
}

}  // namespace

GaborFrameSpec::GaborFrameSpec(GridFunction1D w, Lattice lat, EtaParam e)
    : window(std::move(w)), lattice(std::move(lat)), eta(e) {
  if (lattice.dim() != 1) throw DomainError("GaborFrameSpec: only n = 1 lattices are supported");
  if (std::abs(window.norm() - 1.0) > 1e-8) throw DomainError("GaborFrameSpec: window must be normalized");
}

GaborFrameSpec GaborFrameSpec::standard(const Grid1D& grid, const EtaParam& eta) {
  return GaborFrameSpec(hermite_function(0, grid, eta), Lattice::square(1, std::sqrt(kPi * eta.abs())), eta);
}

GridFunction1D GaborFrameSpec::atom(const PhasePoint& lambda) const {
  return displace_interpolated(window, lambda, eta);
}

Eigen::MatrixXcd synthesis_matrix(const GaborFrameSpec& spec, const std::vector<LatticePoint>& pts) {
  Eigen::MatrixXcd S(static_cast<Eigen::Index>(spec.window.grid.K), static_cast<Eigen::Index>(pts.size()));
  for (std::size_t k = 0; k < pts.size(); ++k) S.col(static_cast<Eigen::Index>(k)) = spec.atom(pts[k].point).values;
  return S;
}

FrameBounds frame_bounds_estimate(const GaborFrameSpec& spec, std::size_t probe_count) {
  if (probe_count < 1) throw DomainError("frame_bounds_estimate: probe_count must be positive");
  const Grid1D& g = spec.window.grid;
  const double x_half = 0.5 * g.span();
  const double p_half = kPi * spec.eta.abs() / g.dx;
  const auto pts = lattice_points(spec.lattice, 0.9 * std::min(x_half, p_half));

  Eigen::MatrixXcd H(static_cast<Eigen::Index>(g.K), static_cast<Eigen::Index>(probe_count));
  for (std::size_t j = 0; j < probe_count; ++j) {
    H.col(static_cast<Eigen::Index>(j)) = hermite_function(j, g, spec.eta).values;
  }
  // C_{lambda j} = (h_j | T(lambda) g)
  const Eigen::MatrixXcd C = synthesis_matrix(spec, pts).adjoint() * H * g.dx;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(C.adjoint() * C, Eigen::EigenvaluesOnly);

  FrameBounds fb;
  fb.A = es.eigenvalues()(0);
  fb.B = es.eigenvalues()(es.eigenvalues().size() - 1);
  fb.probes = probe_count;
  fb.lattice_points = pts.size();
  fb.is_frame = fb.A > 1e-3 * fb.B;
  return fb;
}

GaborReconstruction gabor_reconstruct(const GridFunction1D& f, const GaborFrameSpec& spec, double radius) {
  if (!f.grid.same_as(spec.window.grid)) throw DomainError("gabor_reconstruct: function and window grids differ");
  GaborReconstruction r{lattice_points(spec.lattice, radius), {}, GridFunction1D::zeros(f.grid), 0.0};
  const Eigen::MatrixXcd S = synthesis_matrix(spec, r.points);
  r.coefficients = S.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(f.values);
  r.reconstruction.values = S * r.coefficients;
  const double fn = f.values.norm();
  r.relative_residual = fn > 0.0 ? (r.reconstruction.values - f.values).norm() / fn : 0.0;
  return r;
}

cd twisted_gabor_coeff(const SymbolGrid& a, const GaborFrameSpec& spec, const PhasePoint& lam, const PhasePoint& mu) {
  require_symbol_grid(a, spec, "twisted_gabor_coeff");
  const PhasePoint c = (lam + mu) * 0.5;
  const SymbolGrid wc = wigner(spec.atom(c), spec.eta);
  const PhasePoint zeta = frequency(lam, mu, spec.eta);
  const RowMatrixXcd B = a.values.cwiseProduct(wc.values.real().cast<cd>());
  return phase_sum(B, a.grid, zeta.x1(), zeta.p1()) * a.grid.cell();
}

cd twisted_gabor_coeff_stft(const SymbolGrid& a, const GaborFrameSpec& spec, const PhasePoint& lam,
                            const PhasePoint& mu) {
  require_symbol_grid(a, spec, "twisted_gabor_coeff_stft");
  const SymbolGrid w = wigner(spec.window, spec.eta);
  const StftQuery q{(lam + mu) * 0.5, frequency(lam, mu, spec.eta)};
  return stft(a, w, std::span<const StftQuery>(&q, 1)).front();
}


namespace {

enum class EntryKind { M, M_prime };

TruncatedMatrix build_truncated(const SymbolGrid& a, const GaborFrameSpec& spec, double N, EntryKind kind,
                                const char* what) {
  require_1d(spec, what);
  require_symbol_grid(a, spec, what);
  const double eta = spec.eta.value();
  TruncatedMatrix T{N, lattice_points(spec.lattice, N), {}};
  const auto P = static_cast<Eigen::Index>(T.index.size());
  T.values = Eigen::MatrixXcd::Zero(P, P);
  const bool hermitian = a.max_imag() <= 1e-10 * std::max(1.0, a.max_abs());

  // Pairs grouped by center (lambda + mu) / 2 so each window Wigner function is built once.
  std::map<std::pair<double, double>, std::vector<std::pair<Eigen::Index, Eigen::Index>>> by_center;
  for (Eigen::Index j = 0; j < P; ++j) {
    for (Eigen::Index k = hermitian ? j : 0; k < P; ++k) {
      const PhasePoint c = (T.index[static_cast<std::size_t>(j)].point + T.index[static_cast<std::size_t>(k)].point) * 0.5;
      by_center[{c.x1(), c.p1()}].emplace_back(j, k);
    }
  }

  const double cell = a.grid.cell();
  for (const auto& [key, pairs] : by_center) {
    const PhasePoint c(key.first, key.second);
    const SymbolGrid wc = wigner(spec.atom(c), spec.eta);
    const RowMatrixXcd B = a.values.cwiseProduct(wc.values.real().cast<cd>());
    for (const auto& [j, k] : pairs) {
      const PhasePoint& lam = T.index[static_cast<std::size_t>(j)].point;
      const PhasePoint& mu = T.index[static_cast<std::size_t>(k)].point;
      cd v;
      if (kind == EntryKind::M) {
        const PhasePoint zeta = frequency(lam, mu, eta);
        v = std::polar(1.0, -symplectic_form(lam, mu) / (2.0 * eta)) * phase_sum(B, a.grid, zeta.x1(), zeta.p1()) * cell;
      } else {
        // W_eta(a, w^v)(Z, Zeta) = (2 pi eta)^{-2} int exp(-i Zeta . y / eta) a(Z + y/2) W phi(y/2 - Z) dy
        // with y = 2 (u - Z): dy = 4 du and W phi(u - 2 Z) = W(T(2 Z) phi)(u).
        const PhasePoint Z = (lam + mu) * 0.25;
        const PhasePoint d = mu - lam;
        const PhasePoint Zeta(0.5 * d.p1(), -0.5 * d.x1());
        const double zx = 2.0 * Zeta.x1() / eta;
        const double zp = 2.0 * Zeta.p1() / eta;
        const cd shift = std::polar(1.0, (zx * Z.x1() + zp * Z.p1()));
        v = 4.0 / ((kTwoPi * eta) * (kTwoPi * eta)) * shift * phase_sum(B, a.grid, zx, zp) * cell;
      }
      T.values(j, k) = v;
      if (hermitian && j != k) T.values(k, j) = std::conj(v);
    }
  }
  return T;
}

}  // namespace

TruncatedMatrix build_M(const SymbolGrid& a, const GaborFrameSpec& spec, double N) {
  return build_truncated(a, spec, N, EntryKind::M, "build_M");
}

TruncatedMatrix build_M_prime(const SymbolGrid& a, const GaborFrameSpec& spec, double N) {
  return build_truncated(a, spec, N, EntryKind::M_prime, "build_M_prime");
}

cd klm_entry_direct(const SymbolGrid& a, const PhasePoint& lam, const PhasePoint& mu, const EtaParam& eta) {
  return std::polar(1.0, -symplectic_form(lam, mu) / (2.0 * eta.value())) * symplectic_ft_at(a, eta, lam - mu);
}

namespace {

std::vector<double> trapezoid_nodes(double L, std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t k = 0; k < n; ++k) t[k] = -L + 2.0 * L * static_cast<double>(k) / static_cast<double>(n - 1);
  return t;
}

double trapezoid_weight(double L, std::size_t n, std::size_t k) {
  const double h = 2.0 * L / static_cast<double>(n - 1);
  return (k == 0 || k + 1 == n) ? 0.5 * h : h;
}

// sum_k w_k (pi |eta|)^{-1/2} exp(-(t - nu_k)^2 / |eta|)
double axis_unity(double t, double ae, double L, std::size_t n) {
  const auto nu = trapezoid_nodes(L, n);
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += trapezoid_weight(L, n, k) * std::exp(-(t - nu[k]) * (t - nu[k]) / ae);
  return s / std::sqrt(kPi * ae);
}

}  // namespace

double partition_of_unity(const PhasePoint& z, const EtaParam& eta, double half_width, std::size_t nodes) {
  if (nodes < 2 || !(half_width > 0.0)) throw DomainError("partition_of_unity: need >= 2 nodes and a positive box");
  return axis_unity(z.x1(), eta.abs(), half_width, nodes) * axis_unity(z.p1(), eta.abs(), half_width, nodes);
}

cd klm_entry_from_average(const SymbolGrid& a, const PhasePoint& lam, const PhasePoint& mu, const EtaParam& eta,
                          const AverageQuadrature& quad) {
  const std::size_t n = quad.nodes;
  if (n < 2) throw DomainError("klm_entry_from_average: need at least 2 nodes");
  const double ae = eta.abs();
  const PhasePoint c = (lam + mu) * 0.5;
  const Grid2D& g = a.grid;
  const auto Kx = static_cast<Eigen::Index>(g.x.K);
  const auto Kp = static_cast<Eigen::Index>(g.p.K);

  // Support box of the symbol, relative to the center.
  const double amax = a.max_abs();
  double xlo = 0.0, xhi = 0.0, plo = 0.0, phi = 0.0, radius = 0.0;
  bool any = false;
  for (Eigen::Index i = 0; i < Kx; ++i) {
    for (Eigen::Index j = 0; j < Kp; ++j) {
      if (std::abs(a.values(i, j)) < 1e-8 * amax) continue;
      const double x = g.x.point(static_cast<std::size_t>(i));
      const double p = g.p.point(static_cast<std::size_t>(j));
      const double tx = x - c.x1(), tp = p - c.p1();
      if (!any) {
        xlo = xhi = tx;
        plo = phi = tp;
        any = true;
      }
      xlo = std::min(xlo, tx);
      xhi = std::max(xhi, tx);
      plo = std::min(plo, tp);
      phi = std::max(phi, tp);
      radius = std::max(radius, std::hypot(x, p));
    }
  }
  if (!any) return 0.0;
  const double L = quad.half_width > 0.0 ? quad.half_width : radius + c.norm() + 6.0 * std::sqrt(ae);
  const double pou = std::min({axis_unity(xlo, ae, L, n), axis_unity(xhi, ae, L, n)}) *
                     std::min({axis_unity(plo, ae, L, n), axis_unity(phi, ae, L, n)});
  if (std::abs(pou - 1.0) > 1e-6) {
    throw DomainError("klm_entry_from_average: nu box misses window mass over the symbol support");
  }

  const PhasePoint zeta = frequency(lam, mu, eta.value());
  const auto nu = trapezoid_nodes(L, n);
  const auto Nn = static_cast<Eigen::Index>(n);
  // Gx(i, k) = w_k exp(-i zeta_x x_i) exp(-(x_i - c_x - nu_k)^2 / |eta|), likewise Gp.
  Eigen::MatrixXcd Gx(Kx, Nn), Gp(Kp, Nn);
  for (Eigen::Index k = 0; k < Nn; ++k) {
    const double w = trapezoid_weight(L, n, static_cast<std::size_t>(k));
    for (Eigen::Index i = 0; i < Kx; ++i) {
      const double x = g.x.point(static_cast<std::size_t>(i));
      const double t = x - c.x1() - nu[static_cast<std::size_t>(k)];
      Gx(i, k) = w * std::exp(-t * t / ae) * std::polar(1.0, -zeta.x1() * x);
    }
    for (Eigen::Index j = 0; j < Kp; ++j) {
      const double p = g.p.point(static_cast<std::size_t>(j));
      const double t = p - c.p1() - nu[static_cast<std::size_t>(k)];
      Gp(j, k) = w * std::exp(-t * t / ae) * std::polar(1.0, -zeta.p1() * p);
    }
  }
  // sum over nu_x, nu_p of the STFT with window W phi_nu
  const Eigen::MatrixXcd R = Gx.transpose() * a.values * Gp;
  const cd total = R.sum() * g.cell() / (kPi * ae);
  return std::polar(1.0, -symplectic_form(lam, mu) / (2.0 * eta.value())) * total / (kTwoPi * eta.value());
}


namespace {

// min (H d | d) / (G d | d) over the range of G, G >= 0.
double reduced_min(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& G) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eg(0.5 * (G + G.adjoint()));
  const Eigen::VectorXd lam = eg.eigenvalues();
  const double cut = 1e-10 * lam.maxCoeff();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam(i) > cut) keep.push_back(i);
  }
  Eigen::MatrixXcd B(G.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    B.col(static_cast<Eigen::Index>(k)) = eg.eigenvectors().col(keep[k]) / std::sqrt(lam(keep[k]));
  }
  const Eigen::MatrixXcd R = B.adjoint() * H * B;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> er(0.5 * (R + R.adjoint()), Eigen::EigenvaluesOnly);
  return er.eigenvalues()(0);
}

}  // namespace

AlmostPositivityReport almost_positivity_diagnostic(const std::vector<SymbolAtN>& family, const GaborFrameSpec& spec,
                                                    std::size_t trials, std::uint64_t seed) {
  require_1d(spec, "almost_positivity_diagnostic");
  if (family.empty()) throw DomainError("almost_positivity_diagnostic: empty family");
  AlmostPositivityReport rep;
  rep.seed = seed;
  rep.trials = trials;
  double n_max = 0.0;
  for (const auto& f : family) {
    if (!(f.N >= 0.0)) throw DomainError("almost_positivity_diagnostic: N must be >= 0");
    n_max = std::max(n_max, f.N);
  }
  rep.span_radius = 2.0 * n_max;
  const auto span_pts = lattice_points(spec.lattice, rep.span_radius);
  const Eigen::MatrixXcd S = synthesis_matrix(spec, span_pts);
  const double dx = spec.window.grid.dx;
  const Eigen::MatrixXcd G = S.adjoint() * S * dx;

  rep.all_hypotheses_met = true;
  double scale = 0.0;
  for (std::size_t r = 0; r < family.size(); ++r) {
    const auto& f = family[r];
    AlmostPositivityRow row;
    row.N = f.N;
    const PsdReport pr = psd_check(build_M(f.a, spec, f.N).values);
    row.m_matrix_min = pr.min_eigenvalue;
    row.hypothesis_met = pr.psd();
    rep.all_hypotheses_met = rep.all_hypotheses_met && row.hypothesis_met;

    const KernelMatrix kern = weyl_kernel(f.a, spec.eta);
    const Eigen::MatrixXcd H = S.adjoint() * kern.values * S * (dx * dx);
    row.m_span = reduced_min(H, G);
    scale = std::max(scale, H.cwiseAbs().maxCoeff());

    std::seed_seq ss{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                     static_cast<std::uint32_t>(r)};
    std::mt19937_64 rng(ss);
    std::normal_distribution<double> nd;
    row.m_random = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < trials; ++t) {
      Eigen::VectorXcd c(S.cols());
      for (Eigen::Index k = 0; k < c.size(); ++k) c(k) = cd(nd(rng), nd(rng));
      const GridFunction1D psi(spec.window.grid, S * c);
      const double n2 = psi.norm() * psi.norm();
      if (n2 > 0.0) row.m_random = std::min(row.m_random, quadratic_form(f.a, psi, spec.eta) / n2);
    }
    if (trials == 0) row.m_random = 0.0;
    rep.rows.push_back(row);
  }

  rep.noise_floor = 1e-9 * std::max(scale, 1.0);
  std::vector<double> lx, ly;
  for (const auto& row : rep.rows) {
    if (row.N > 0.0 && row.m_span < -10.0 * rep.noise_floor) {
      lx.push_back(std::log(row.N));
      ly.push_back(std::log(-row.m_span));
    }
  }
  if (lx.size() >= 2) {
    const double n = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sx += lx[i];
      sy += ly[i];
      sxx += lx[i] * lx[i];
      sxy += lx[i] * ly[i];
    }
    const double den = n * sxx - sx * sx;
    if (den > 0.0) rep.fitted_exponent = -(n * sxy - sx * sy) / den;
  }
  return rep;
}

SymbolGrid almost_positive_example(double N, const Grid1D& grid, const EtaParam& eta, double background,
                                   double background_var, double offset, double strength) {
  if (!(N >= 0.0) || !(background >= 0.0) || !(background_var > 0.0) || !(N + offset > 0.0)) {
    throw DomainError("almost_positive_example: bad parameters");
  }
  const Grid2D g = wigner_grid(grid, eta);
  const double ae = eta.abs();
  const double r = N + offset;
  const double eps = strength / (r * r);
  SymbolGrid a = SymbolGrid::zeros(g);
  for (std::size_t i = 0; i < g.x.K; ++i) {
    const double x = g.x.point(i);
    for (std::size_t j = 0; j < g.p.K; ++j) {
      const double p = g.p.point(j);
      const double bg = background * std::exp(-(x * x + p * p) / (2.0 * background_var));
      // 2 pi |eta| W_eta of the coherent state at (r, 0)
      const double proj = 2.0 * std::exp(-((x - r) * (x - r) + p * p) / ae);
      a.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = bg - eps * proj;
    }
  }
  return a;
}

}  // namespace weylpos
