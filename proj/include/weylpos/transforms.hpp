#pragma once

#include "weylpos/phase_space.hpp"

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

namespace weylpos {

using cd = std::complex<double>;
using RowMatrixXcd = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Samples of a wavefunction on a uniform grid (n = 1).
struct GridFunction1D {
  Grid1D grid;
  Eigen::VectorXcd values;

  GridFunction1D(Grid1D g, Eigen::VectorXcd v);
  static GridFunction1D zeros(const Grid1D& g);

  /// (psi|phi) = sum psi conj(phi) dx
  cd inner(const GridFunction1D& other) const;
  double norm() const;
  cd operator[](std::size_t k) const { return values(static_cast<Eigen::Index>(k)); }
  GridFunction1D conj() const;
};

GridFunction1D operator+(const GridFunction1D& a, const GridFunction1D& b);
GridFunction1D operator*(cd s, const GridFunction1D& a);

/// Samples of a function on a phase-space grid. values(i, j) = f(x_i, p_j).
struct SymbolGrid {
  Grid2D grid;
  RowMatrixXcd values;

  SymbolGrid(Grid2D g, RowMatrixXcd v);
  static SymbolGrid zeros(const Grid2D& g);

  double x(std::size_t i) const { return grid.x.point(i); }
  double p(std::size_t j) const { return grid.p.point(j); }
  cd integral() const;
  double max_abs() const;
  double max_imag() const;
  SymbolGrid conj() const;
};

SymbolGrid operator+(const SymbolGrid& a, const SymbolGrid& b);
SymbolGrid operator-(const SymbolGrid& a, const SymbolGrid& b);
SymbolGrid operator*(cd s, const SymbolGrid& a);

/// Normalised Hermite function h_k^eta(x) = |eta|^{-1/4} h_k(x / sqrt|eta|).
GridFunction1D hermite_function(std::size_t k, const Grid1D& g, const EtaParam& eta);

/// Coherent state T_eta(z0) phi_0, phi_0 the ground state of width |eta|.
GridFunction1D coherent_state(const PhasePoint& z0, const Grid1D& g, const EtaParam& eta);

/// K = 256 samples centered at 0 with dx = 16 sqrt(max(|eta|, 1)) / K.
Grid1D default_grid(const EtaParam& eta, std::size_t K = 256);

/// Phase-space grid carrying W_eta of functions on `g`: x-axis is `g`,
/// p-axis is centered with step 2 pi |eta| / (2 K dx).
Grid2D wigner_grid(const Grid1D& g, const EtaParam& eta);

/// Grid carrying Amb_eta of functions on `g`: steps (2 dx, 2 pi |eta| / (K dx)).
/// It coincides with the symplectic-Fourier dual of wigner_grid(g, eta).
Grid2D ambiguity_grid(const Grid1D& g, const EtaParam& eta);

/// Dual grid produced by a symplectic Fourier transform with kernel
/// exp(-i sigma / scale): x-step 2 pi |scale| / (Kp dp), p-step 2 pi |scale| / (Kx dx).
Grid2D symplectic_dual_grid(const Grid2D& g, double scale);

/// Fraction of |f|^2 mass sitting within `width` samples of the boundary.
double edge_mass_fraction(const GridFunction1D& f, std::size_t width = 2);
double edge_mass_fraction(const SymbolGrid& a, std::size_t width = 2);

/// Throws ResolutionError when the edge fraction exceeds `limit`.
void require_resolved(const GridFunction1D& f, const char* what, double limit = 1e-6);
void require_resolved(const SymbolGrid& a, const char* what, double limit = 1e-6);

/// W_eta(psi, phi) on wigner_grid(psi.grid, eta).
SymbolGrid wigner_cross(const GridFunction1D& psi, const GridFunction1D& phi, const EtaParam& eta);
SymbolGrid wigner(const GridFunction1D& psi, const EtaParam& eta);

/// W_eta(psi, phi) on the x-grid of psi and an arbitrary momentum axis, by
/// direct quadrature. Used to compare Wigner sums taken at different eta.
/// The axis must stay within |p| <= pi |eta| / (2 dx).
SymbolGrid wigner_cross_on(const GridFunction1D& psi, const GridFunction1D& phi, const EtaParam& eta,
                           const Grid1D& p_axis);

/// Amb_eta(psi, phi) on ambiguity_grid(psi.grid, eta).
SymbolGrid ambiguity_cross(const GridFunction1D& psi, const GridFunction1D& phi, const EtaParam& eta);
SymbolGrid ambiguity(const GridFunction1D& psi, const EtaParam& eta);

/// F_eta psi on the centered grid with step 2 pi |eta| / (K dx).
GridFunction1D eta_fourier(const GridFunction1D& psi, const EtaParam& eta);

/// F_{sigma,eta} a on symplectic_dual_grid(a.grid, eta).
SymbolGrid symplectic_ft(const SymbolGrid& a, const EtaParam& eta);

/// a_diamond(z) = int exp(i sigma(z, z')) a(z') dz' on symplectic_dual_grid(a.grid, -1).
SymbolGrid reduced_symplectic_ft(const SymbolGrid& a);

/// Exact quadrature of F_{sigma,eta} a at an arbitrary point.
cd symplectic_ft_at(const SymbolGrid& a, const EtaParam& eta, const PhasePoint& z);
/// Exact quadrature of a_diamond at an arbitrary point.
cd reduced_symplectic_ft_at(const SymbolGrid& a, const PhasePoint& z);

/// psi(x - shift) by band-limited (Fourier) interpolation on the periodic grid.
GridFunction1D fourier_shift(const GridFunction1D& psi, double shift);

/// T_eta(z0) psi. x0 must be an integer multiple of dx; anything else is rejected.
GridFunction1D displace(const GridFunction1D& psi, const PhasePoint& z0, const EtaParam& eta);

/// T_eta(z0) psi for arbitrary x0, shifting with band-limited interpolation.
GridFunction1D displace_interpolated(const GridFunction1D& psi, const PhasePoint& z0, const EtaParam& eta);

/// V_g f(x, p) = int exp(-i p y) f(y) conj(g(y - x)) dy at the query points.
std::vector<cd> stft(const GridFunction1D& f, const GridFunction1D& g, std::span<const PhasePoint> queries);

/// Two-dimensional STFT of a symbol with a symbol window:
/// V_w a(z, zeta) = int exp(-i zeta . z') a(z') conj(w(z' - z)) dz'.
/// Off-grid window shifts use band-limited interpolation.
struct StftQuery {
  PhasePoint z;
  PhasePoint zeta;
};
std::vector<cd> stft(const SymbolGrid& a, const SymbolGrid& window, std::span<const StftQuery> queries);

/// (a_s *_eta b_s)(z) = (2 pi eta)^{-1} int exp(i sigma(z, z') / (2 eta)) a_s(z - z') b_s(z') dz'
/// by direct quadrature on the shared grid (which must be centered).
SymbolGrid twisted_convolution(const SymbolGrid& as, const SymbolGrid& bs, const EtaParam& eta);

/// (a x_eta b)(z) = (4 pi eta)^{-2} int int exp(i sigma(z', z'') / (2 eta)) a(z + z'/2) b(z - z''/2) dz' dz''
/// by direct quadrature: the z'' integral is summed for every needed offset
/// first, then the z' integral.
SymbolGrid twisted_product(const SymbolGrid& a, const SymbolGrid& b, const EtaParam& eta);

namespace detail {
/// Unnormalized DFT: out_k = sum_n in_n exp(sign * 2 pi i k n / N).
void dft(std::vector<cd>& data, int sign);
}  // namespace detail

}  // namespace weylpos
