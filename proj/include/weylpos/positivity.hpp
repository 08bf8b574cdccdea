#pragma once

#include "weylpos/transforms.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace weylpos {

enum class PsdVerdict { positive, borderline, indefinite };

std::string to_string(PsdVerdict v);

struct PsdReport {
  std::size_t size = 0;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  /// Absolute threshold actually applied: scale_tol * max(1, ||M||_2).
  double tolerance_used = 0.0;
  PsdVerdict verdict = PsdVerdict::positive;
  /// Unit eigenvector for min_eigenvalue.
  Eigen::VectorXcd min_eigenvector;

  /// Positive or borderline.
  bool psd() const { return verdict != PsdVerdict::indefinite; }
};

/// Eigenvalue-based PSD verdict for a Hermitian matrix. Rejects non-square input
/// and Hermiticity defects above 1e-8 ||M||; the matrix is then symmetrized.
PsdReport psd_check(const Eigen::MatrixXcd& M, double scale_tol = 1e-9);

using PointSet = std::vector<PhasePoint>;
using Sampler = std::function<cd(const PhasePoint&)>;

/// M_jk = rho_diamond(z_j - z_k)
Eigen::MatrixXcd bochner_matrix(const Sampler& rho_diamond, const PointSet& pts);

/// Lambda_jk = exp(-i eta sigma(z_j, z_k) / 2) a_diamond(z_j - z_k)
Eigen::MatrixXcd klm_matrix(const Sampler& a_diamond, const PointSet& pts, const EtaParam& eta);

/// Entrywise product; PSD whenever both factors are (Schur).
Eigen::MatrixXcd hadamard_product(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B);

/// (R z_j . z_k) for a symmetric matrix R acting on stacked phase-space points.
Eigen::MatrixXcd quadratic_point_matrix(const Eigen::MatrixXd& R, const PointSet& pts);

/// a_diamond of a grid symbol, sampled anywhere.
class DiamondSampler {
 public:
  explicit DiamondSampler(const SymbolGrid& a);

  /// Bilinear interpolation of the grid transform; zero outside the grid.
  cd operator()(const PhasePoint& z) const;
  /// Direct quadrature of int exp(i sigma(z, z')) a(z') dz'.
  cd exact(const PhasePoint& z) const;

  const SymbolGrid& grid_transform() const { return diamond_; }
  /// Radius beyond which |a_diamond| stays below 1e-3 of its maximum on the grid.
  double support_radius() const { return support_radius_; }
  /// Largest |interpolated - exact| seen on a fixed probe set inside the support.
  double interpolation_error() const { return interpolation_error_; }

 private:
  SymbolGrid symbol_;
  SymbolGrid diamond_;
  double support_radius_ = 0.0;
  double interpolation_error_ = 0.0;
};

/// sum_jk zeta_j conj(zeta_k) Lambda_jk with a_diamond evaluated by direct quadrature.
cd klm_polynomial(const SymbolGrid& a, const PointSet& pts, const Eigen::VectorXcd& zeta, const EtaParam& eta);

struct KlmTrial {
  std::size_t size = 0;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
};

struct KlmCertificate {
  PointSet points;
  Eigen::VectorXcd zeta;
  /// klm_polynomial at (points, zeta); negative by construction.
  double value = 0.0;
  /// Minimum eigenvalue of the exactly evaluated KLM matrix.
  double min_eigenvalue = 0.0;
  std::size_t trial = 0;
};

struct KlmReport {
  double eta = 0.0;
  std::uint64_t seed = 0;
  std::size_t trials_requested = 0;
  std::size_t trials_run = 0;
  std::size_t max_points = 0;
  double tolerance = 0.0;
  std::size_t refine_steps = 0;
  double support_radius = 0.0;
  double interpolation_error = 0.0;
  /// Symbol mass sits far out on the grid; integrability is doubtful.
  bool l1_suspect = false;
  /// Screening hits that did not survive exact re-evaluation.
  std::size_t candidates_rejected = 0;
  std::vector<KlmTrial> trial_log;
  std::optional<KlmCertificate> certificate;

  bool violation_found() const { return certificate.has_value(); }
};

/// Randomized KLM search. Each trial draws N in [1, max_points] points in the
/// ball of radius support_radius * u, u ~ U(0.1, 1], screens the interpolated
/// KLM matrix and re-verifies any candidate with exact quadrature. Stops at the
/// first verified violation. With refine_steps > 0 each draw is first improved
/// by random single-point moves that lower the screened minimum eigenvalue.
KlmReport check_eta_positive_type(const SymbolGrid& a, const EtaParam& eta, std::size_t trials,
                                  std::size_t max_points, std::uint64_t seed, double tol = 1e-8,
                                  std::size_t refine_steps = 0);

/// int F_{sigma,eta} a(z) (int exp(-i sigma(z, z') / (2 eta)) c(z' - z) conj(c(z')) dz') dz.
/// `c` lives on symplectic_dual_grid(a.grid, eta), which must be centered.
cd continuous_positivity_functional(const SymbolGrid& a, const SymbolGrid& c, const EtaParam& eta);

}  // namespace weylpos
