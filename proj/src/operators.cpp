#include "weylpos/operators.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace weylpos {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_real(const SymbolGrid& a, const char* what) {
  if (a.max_imag() > 1e-10 * std::max(1.0, a.max_abs())) {
    throw DomainError(std::string(what) + ": symbol must be real-valued");
  }
}

void require_wigner_grid(const SymbolGrid& a, const Grid1D& g, const EtaParam& eta, const char* what) {
  if (!a.grid.same_as(wigner_grid(g, eta))) {
    throw DomainError(std::string(what) + ": symbol grid is not the Wigner grid of the wavefunction grid");
  }
}

}  // namespace

SpectralMixture::SpectralMixture(Grid1D grid, EtaParam eta, std::vector<double> coefficients,
                                 std::vector<GridFunction1D> functions)
    : grid_(grid), eta_(eta), alpha_(std::move(coefficients)), psi_(std::move(functions)) {
  if (alpha_.size() != psi_.size()) throw DomainError("SpectralMixture: coefficient/function count mismatch");
  for (double a : alpha_) {
    if (!std::isfinite(a)) throw DomainError("SpectralMixture: non-finite coefficient");
  }
  for (const auto& f : psi_) {
    if (!f.grid.same_as(grid_)) throw DomainError("SpectralMixture: function on a different grid");
  }
  for (std::size_t j = 0; j < psi_.size(); ++j) {
    for (std::size_t k = j; k < psi_.size(); ++k) {
      const cd ip = psi_[j].inner(psi_[k]);
      if (std::abs(ip - cd(j == k ? 1.0 : 0.0)) > 1e-8) {
        throw DomainError("SpectralMixture: functions are not orthonormal on the grid");
      }
    }
  }
}

SpectralMixture SpectralMixture::hermite(const Grid1D& grid, const EtaParam& eta, const std::vector<double>& coefficients,
                                         const std::vector<std::size_t>& indices) {
  if (coefficients.size() != indices.size()) throw DomainError("SpectralMixture: coefficient/index count mismatch");
  std::vector<GridFunction1D> fs;
  fs.reserve(indices.size());
  for (std::size_t k : indices) fs.push_back(hermite_function(k, grid, eta));
  return SpectralMixture(grid, eta, coefficients, std::move(fs));
}

SymbolGrid symbol_from_mixture(const SpectralMixture& m) {
  const EtaParam& eta = m.eta();
  SymbolGrid a = SymbolGrid::zeros(wigner_grid(m.grid(), eta));
  for (std::size_t j = 0; j < m.size(); ++j) {
    a.values += m.coefficients()[j] * wigner(m.functions()[j], eta).values.real().cast<cd>();
  }
  a.values *= kTwoPi * eta.abs();
  return a;
}

SymbolGrid twisted_symbol_from_mixture(const SpectralMixture& m) {
  const EtaParam& eta = m.eta();
  SymbolGrid a = SymbolGrid::zeros(ambiguity_grid(m.grid(), eta));
  for (std::size_t j = 0; j < m.size(); ++j) {
    a.values += m.coefficients()[j] * ambiguity(m.functions()[j], eta).values;
  }
  a.values *= kTwoPi * eta.value();
  return a;
}

double quadratic_form(const SymbolGrid& a, const GridFunction1D& psi, const EtaParam& eta) {
  require_real(a, "quadratic_form");
  require_wigner_grid(a, psi.grid, eta, "quadratic_form");
  const SymbolGrid w = wigner(psi, eta);
  return (a.values.real().cwiseProduct(w.values.real())).sum() * a.grid.cell();
}

double hs_pairing(const SymbolGrid& a, const SymbolGrid& b, const EtaParam& eta) {
  if (!a.grid.same_as(b.grid)) throw DomainError("hs_pairing: symbols live on different grids");
  require_real(a, "hs_pairing");
  require_real(b, "hs_pairing");
  return (a.values.real().cwiseProduct(b.values.real())).sum() * a.grid.cell() / (kTwoPi * eta.abs());
}

double trace_from_mixture(const SpectralMixture& m) {
  double t = 0.0;
  for (double a : m.coefficients()) t += a;
  return t;
}

double trace_from_symbol(const SymbolGrid& a, const EtaParam& eta) {
  return a.integral().real() / (kTwoPi * eta.abs());
}

Eigen::VectorXd KernelMatrix::spectrum() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(values * grid.dx, Eigen::EigenvaluesOnly);
  return es.eigenvalues().reverse();
}

double KernelMatrix::trace() const { return values.diagonal().real().sum() * grid.dx; }

KernelMatrix weyl_kernel(const SymbolGrid& a, const EtaParam& eta) {
  require_real(a, "weyl_kernel");
  const Grid1D& gx = a.grid.x;
  require_wigner_grid(a, gx, eta, "weyl_kernel");
  require_resolved(a, "weyl_kernel");
  const auto K = static_cast<Eigen::Index>(gx.K);

  // a(x_i + dx/2, p) per momentum column
  RowMatrixXcd half(K, K);
  for (Eigen::Index l = 0; l < K; ++l) {
    const GridFunction1D col(gx, a.values.col(l));
    half.col(l) = fourier_shift(col, -0.5 * gx.dx).values;
  }
  const RowMatrixXcd whole = a.values.real().cast<cd>();
  const RowMatrixXcd halfr = half.real().cast<cd>();

  // phase(d, l) = exp(i p_l d dx / eta) for d = i - j in [-(K-1), K-1]
  const Grid1D& gp = a.grid.p;
  RowMatrixXcd phase(2 * K - 1, K);
  for (Eigen::Index d = -(K - 1); d < K; ++d) {
    for (Eigen::Index l = 0; l < K; ++l) {
      phase(d + K - 1, l) = std::polar(1.0, gp.point(static_cast<std::size_t>(l)) * static_cast<double>(d) * gx.dx / eta.value());
    }
  }

  const double pref = gp.dx / (kTwoPi * eta.value());
  Eigen::MatrixXcd kern(K, K);
  for (Eigen::Index i = 0; i < K; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const Eigen::Index s = i + j;
      const RowMatrixXcd& src = (s % 2 == 0) ? whole : halfr;
      const auto row = src.row(s / 2);
      const cd v = pref * (row.cwiseProduct(phase.row(i - j + K - 1))).sum();
      kern(i, j) = v;
      kern(j, i) = std::conj(v);
    }
  }
  return KernelMatrix{gx, std::move(kern)};
}

MixtureNormReport mixture_norm_identity_check(const SpectralMixture& m_eta, const SpectralMixture& m_hbar,
                                              double match_tol) {
  if (!m_eta.grid().same_as(m_hbar.grid())) throw DomainError("mixture_norm_identity_check: grids differ");
  const double eta = m_eta.eta().value();
  const double hbar = m_hbar.eta().value();
  if (!(hbar > 0.0)) throw DomainError("mixture_norm_identity_check: hbar must be positive");

  // The Wigner sum at eta is periodic in p with period pi |eta| / dx; the
  // narrower of the two Wigner grids stays inside both periods.
  const EtaParam narrow(std::min(std::abs(eta), hbar));
  const Grid1D p_axis = wigner_grid(m_hbar.grid(), narrow).p;
  const Grid2D g2{m_hbar.grid(), p_axis};
  auto wigner_sum = [&](const SpectralMixture& m) {
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(g2.x.K), static_cast<Eigen::Index>(p_axis.K));
    for (std::size_t j = 0; j < m.size(); ++j) {
      const auto& f = m.functions()[j];
      s += m.coefficients()[j] * wigner_cross_on(f, f, m.eta(), p_axis).values.real();
    }
    return s;
  };
  const Eigen::MatrixXd A = wigner_sum(m_eta);
  const Eigen::MatrixXd B = wigner_sum(m_hbar);

  MixtureNormReport r;
  r.eta = eta;
  r.hbar = hbar;
  const double cell = g2.cell();
  r.wigner_distance = std::sqrt((A - B).squaredNorm() * cell);
  r.reference_norm = std::sqrt(B.squaredNorm() * cell);

  double a2 = 0.0;
  for (double a : m_eta.coefficients()) a2 += a * a;
  double b2 = 0.0;
  for (double b : m_hbar.coefficients()) b2 += b * b;
  r.lhs = hbar * a2;
  r.rhs = std::abs(eta) * b2;
  r.lhs_moyal = hbar * kTwoPi * std::abs(eta) * A.squaredNorm() * cell;
  r.rhs_moyal = std::abs(eta) * kTwoPi * hbar * B.squaredNorm() * cell;

  const double scale = std::max({r.lhs, r.rhs, 1e-300});
  r.sums_match = r.wigner_distance <= match_tol * std::max(r.reference_norm, 1e-300);
  r.identity_holds = std::abs(r.lhs - r.rhs) <= match_tol * scale;
  r.violation = r.sums_match && !r.identity_holds;
  return r;
}

}  // namespace weylpos
