#pragma once

#include "weylpos/positivity.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace weylpos {

/// Gabor system {T_eta(lambda) window : lambda in lattice}.
struct GaborFrameSpec {
  GridFunction1D window;
  Lattice lattice;
  EtaParam eta;

  GaborFrameSpec(GridFunction1D w, Lattice lat, EtaParam e);

  /// Ground-state window on `grid` with the square lattice of cell area pi |eta|.
  static GaborFrameSpec standard(const Grid1D& grid, const EtaParam& eta);

  /// T_eta(lambda) window; off-grid shifts use band-limited interpolation.
  GridFunction1D atom(const PhasePoint& lambda) const;
};

struct FrameBounds {
  double A = 0.0;
  double B = 0.0;
  std::size_t probes = 0;
  std::size_t lattice_points = 0;
  /// A below 1e-3 B: the system does not behave as a frame on the probes.
  bool is_frame = false;
};

/// Extreme eigenvalues of the frame operator compressed to the span of the
/// first `probe_count` Hermite functions (the exact min/max Rayleigh
/// quotients over that subspace). Lattice points are taken out to 0.9 of the
/// smaller half-span of the position and momentum grids.
FrameBounds frame_bounds_estimate(const GaborFrameSpec& spec, std::size_t probe_count = 16);

/// Columns T_eta(lambda) window for the given lattice points.
Eigen::MatrixXcd synthesis_matrix(const GaborFrameSpec& spec, const std::vector<LatticePoint>& pts);

/// Least-squares coefficients c with sum c_lambda T(lambda) window ~ f over
/// the lattice points with |lambda| <= radius; returns the reconstruction.
struct GaborReconstruction {
  std::vector<LatticePoint> points;
  Eigen::VectorXcd coefficients;
  GridFunction1D reconstruction;
  double relative_residual = 0.0;
};
GaborReconstruction gabor_reconstruct(const GridFunction1D& f, const GaborFrameSpec& spec, double radius);

/// a_{lambda,mu} = int exp(-i sigma(z, lambda - mu) / eta) a(z) W_eta phi(z - (lambda + mu) / 2) dz.
/// `a` must live on wigner_grid(window grid, eta).
cd twisted_gabor_coeff(const SymbolGrid& a, const GaborFrameSpec& spec, const PhasePoint& lam, const PhasePoint& mu);

/// Same coefficient via the 2-D STFT with window W_eta phi at ((lambda + mu) / 2, J (mu - lambda) / eta).
cd twisted_gabor_coeff_stft(const SymbolGrid& a, const GaborFrameSpec& spec, const PhasePoint& lam,
                            const PhasePoint& mu);

struct TruncatedMatrix {
  double N = 0.0;
  std::vector<LatticePoint> index;
  Eigen::MatrixXcd values;
};

/// M_{lambda,mu} = exp(-i sigma(lambda, mu) / (2 eta)) a_{lambda,mu} for |lambda|, |mu| <= N.
TruncatedMatrix build_M(const SymbolGrid& a, const GaborFrameSpec& spec, double N);

/// M'_{lambda,mu} = W_eta(a, (W_eta phi)^v)((lambda + mu) / 4, J (mu - lambda) / 2), the 2n-dimensional
/// cross-Wigner transform of the symbol with the reflected window Wigner function.
TruncatedMatrix build_M_prime(const SymbolGrid& a, const GaborFrameSpec& spec, double N);

/// exp(-i sigma(lambda, mu) / (2 eta)) a_{sigma,eta}(lambda - mu) by direct quadrature.
cd klm_entry_direct(const SymbolGrid& a, const PhasePoint& lam, const PhasePoint& mu, const EtaParam& eta);

struct AverageQuadrature {
  std::size_t nodes = 64;
  /// Half-width of the nu box; 0 selects symbol radius + |(lambda + mu) / 2| + 6 sqrt|eta|.
  double half_width = 0.0;
};

/// (2 pi eta)^{-n} int M^{phi_nu}_{lambda,mu} dnu with the gaussian windows
/// W phi_nu(z) = (pi |eta|)^{-n} exp(-|z - nu|^2 / |eta|), trapezoid rule on a
/// square nu box. Throws DomainError if the box misses window mass over the
/// symbol support (partition-of-unity check at 1e-6).
cd klm_entry_from_average(const SymbolGrid& a, const PhasePoint& lam, const PhasePoint& mu, const EtaParam& eta,
                          const AverageQuadrature& quad = {});

/// Trapezoid integral over nu of (pi |eta|)^{-1} exp(-|z - nu|^2 / |eta|); 1 when the box covers z.
double partition_of_unity(const PhasePoint& z, const EtaParam& eta, double half_width, std::size_t nodes);

struct AlmostPositivityRow {
  double N = 0.0;
  /// Minimum eigenvalue of M_(N) and whether it passed psd_check.
  double m_matrix_min = 0.0;
  bool hypothesis_met = false;
  /// min (A psi | psi) / ||psi||^2 over the span of the windows with |lambda| <= 2 N_max.
  double m_span = 0.0;
  /// Same minimum over `trials` random coefficient vectors.
  double m_random = 0.0;
};

struct AlmostPositivityReport {
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  double span_radius = 0.0;
  std::vector<AlmostPositivityRow> rows;
  /// Fitted exponent s in |m(N)| ~ C N^{-s} from the span minima; empty if fewer than 2 usable rows.
  std::optional<double> fitted_exponent;
  double noise_floor = 0.0;
  bool all_hypotheses_met = false;
};

struct SymbolAtN {
  double N = 0.0;
  SymbolGrid a;
};

/// Almost-positivity diagnostic over a family of symbols indexed by N. Each
/// row checks M_(N) >= 0 and then measures m(N).
AlmostPositivityReport almost_positivity_diagnostic(const std::vector<SymbolAtN>& family, const GaborFrameSpec& spec,
                                                    std::size_t trials, std::uint64_t seed);

/// Test family for the diagnostic: a broad positive gaussian background minus
/// a coherent-state projector at radius N + offset with weight
/// strength / (N + offset)^2. On the standard frame M_(N) stays PSD while
/// the operator is not positive.
SymbolGrid almost_positive_example(double N, const Grid1D& grid, const EtaParam& eta, double background = 0.05,
                                   double background_var = 8.0, double offset = 3.0, double strength = 1.0);

}  // namespace weylpos
