#pragma once

#include "weylpos/transforms.hpp"

#include <vector>

namespace weylpos {

/// Self-adjoint trace-class operator sum_j alpha_j |psi_j)(psi_j| with an
/// orthonormal family psi_j, all sampled on one grid.
class SpectralMixture {
 public:
  SpectralMixture(Grid1D grid, EtaParam eta, std::vector<double> coefficients, std::vector<GridFunction1D> functions);

  /// alpha_j attached to the eta-scaled Hermite functions h_{k_j}.
  static SpectralMixture hermite(const Grid1D& grid, const EtaParam& eta, const std::vector<double>& coefficients,
                                 const std::vector<std::size_t>& indices);

  const Grid1D& grid() const { return grid_; }
  const EtaParam& eta() const { return eta_; }
  const std::vector<double>& coefficients() const { return alpha_; }
  const std::vector<GridFunction1D>& functions() const { return psi_; }
  std::size_t size() const { return alpha_.size(); }

 private:
  Grid1D grid_;
  EtaParam eta_;
  std::vector<double> alpha_;
  std::vector<GridFunction1D> psi_;
};

/// a = (2 pi |eta|)^n sum_j alpha_j W_eta psi_j on wigner_grid(m.grid(), eta).
SymbolGrid symbol_from_mixture(const SpectralMixture& m);

/// a_{sigma,eta} = (2 pi eta)^n sum_j alpha_j Amb_eta psi_j on ambiguity_grid(m.grid(), eta).
SymbolGrid twisted_symbol_from_mixture(const SpectralMixture& m);

/// int a W_eta psi dz = (A psi | psi). `a` must live on wigner_grid(psi.grid, eta) and be real.
double quadratic_form(const SymbolGrid& a, const GridFunction1D& psi, const EtaParam& eta);

/// Tr(A B) = (2 pi |eta|)^{-n} int a b dz for real symbols on one grid.
double hs_pairing(const SymbolGrid& a, const SymbolGrid& b, const EtaParam& eta);

double trace_from_mixture(const SpectralMixture& m);

/// Tr(A) = (2 pi |eta|)^{-n} int a dz.
double trace_from_symbol(const SymbolGrid& a, const EtaParam& eta);

/// Discretized integral kernel of Op_eta(a) on the x-axis of the symbol grid.
struct KernelMatrix {
  Grid1D grid;
  Eigen::MatrixXcd values;

  /// Eigenvalues of values * dx, descending.
  Eigen::VectorXd spectrum() const;
  /// sum_i K(x_i, x_i) dx
  double trace() const;
};

/// K(x, y) = (2 pi eta)^{-1} int exp(i p (x - y) / eta) a((x + y) / 2, p) dp.
/// Half-grid midpoints come from band-limited interpolation along x.
/// `a` must live on wigner_grid(x-axis, eta) and be real.
KernelMatrix weyl_kernel(const SymbolGrid& a, const EtaParam& eta);

struct MixtureNormReport {
  double eta = 0.0;
  double hbar = 0.0;
  /// L2 distance between sum alpha_j W_eta psi_j and sum beta_j W_hbar phi_j.
  double wigner_distance = 0.0;
  /// L2 norm of the hbar-side Wigner sum, for scale.
  double reference_norm = 0.0;
  /// hbar^n ||alpha||^2 and |eta|^n ||beta||^2 from the coefficients.
  double lhs = 0.0;
  double rhs = 0.0;
  /// The same two quantities recovered from the Wigner sums through Moyal's identity.
  double lhs_moyal = 0.0;
  double rhs_moyal = 0.0;
  bool sums_match = false;
  bool identity_holds = false;
  /// Wigner sums agree but the identity fails.
  bool violation = false;
};

/// Compares sum alpha_j W_eta psi_j (m_eta) with sum beta_j W_hbar phi_j (m_hbar).
/// Both sums are evaluated on the momentum axis of wigner_grid(m_hbar.grid(), hbar).
MixtureNormReport mixture_norm_identity_check(const SpectralMixture& m_eta, const SpectralMixture& m_hbar,
                                              double match_tol = 1e-6);

}  // namespace weylpos
