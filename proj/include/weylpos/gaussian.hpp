#pragma once

#include "weylpos/positivity.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace weylpos {

/// The two positivity tests for a gaussian disagreed outside the tolerance band.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Centered gaussian with covariance Sigma (2n x 2n, ordered (x_1..x_n, p_1..p_n)).
struct CovarianceModel {
  Eigen::MatrixXd sigma;
  EtaParam eta;

  CovarianceModel(Eigen::MatrixXd s, EtaParam e);
  std::size_t dim() const { return static_cast<std::size_t>(sigma.rows() / 2); }
};

struct WilliamsonFactors {
  Eigen::MatrixXd S;
  Eigen::MatrixXd D;
  /// lambda_1 <= ... <= lambda_n
  Eigen::VectorXd lambda;
  double symplectic_residual = 0.0;    // ||S^T J S - J||
  double reconstruction_residual = 0.0;  // ||S^T D S - Sigma||
};

/// lambda_j with +-i lambda_j the eigenvalues of J Sigma, ascending.
Eigen::VectorXd symplectic_eigenvalues(const CovarianceModel& cm);

/// Sigma = S^T D S with S symplectic and D = diag(Lambda, Lambda). Built from
/// the real Schur form of Sigma^{1/2} J Sigma^{1/2}. Throws DomainError when
/// cond(Sigma) > 1e12.
WilliamsonFactors williamson_decompose(const CovarianceModel& cm);

struct GaussianPositivityReport {
  Eigen::VectorXd lambda;
  double eta = 0.0;
  /// 2 lambda_min - |eta|
  double margin = 0.0;
  bool lambda_test = false;
  /// Minimum eigenvalue of the Hermitian matrix Sigma + (i eta / 2) J.
  double matrix_min_eigenvalue = 0.0;
  bool matrix_test = false;
  PsdVerdict verdict = PsdVerdict::positive;

  bool positive() const { return verdict != PsdVerdict::indefinite; }
};

/// |eta| <= 2 lambda_min, cross-checked with Sigma + (i eta / 2) J >= 0.
/// Borderline when |margin| <= 1e-9 max(|eta|, 2 lambda_min). Throws
/// ConsistencyError if the two tests disagree outside that band.
GaussianPositivityReport gaussian_positivity(const CovarianceModel& cm);

/// rho(z) = (2 pi)^{-n} det(Sigma)^{-1/2} exp(-Sigma^{-1} z . z / 2) on an n = 1 grid
/// reaching at least 8 standard deviations along both axes.
SymbolGrid gaussian_symbol(const CovarianceModel& cm, const Grid2D& grid);

/// rho_diamond(z) = exp(-(J z) . Sigma (J z) / 2), the reduced symplectic transform of rho.
Sampler gaussian_diamond(const CovarianceModel& cm);

struct RsReport {
  double hbar = 0.0;
  /// sigma_xj^2 sigma_pj^2 - sigma_xjpj^2 - hbar^2 / 4 per degree of freedom.
  std::vector<double> margins;
  bool satisfied = false;
};

RsReport rs_inequalities(const CovarianceModel& cm, double hbar);

/// Deterministic pseudo-random symplectic matrix, a product of shears and
/// block scalings with entries of order `spread`.
Eigen::MatrixXd random_symplectic(std::size_t n, std::uint64_t seed, double spread = 0.5);

}  // namespace weylpos
