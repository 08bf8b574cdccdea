#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace weylpos {

/// Thrown when a grid cannot resolve the function it carries (edge mass, aliasing).
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown on malformed inputs: dimension mismatches, non-finite data, bad parameters.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// z = (x, p) in R^{2n}.
struct PhasePoint {
  Eigen::VectorXd x;
  Eigen::VectorXd p;

  PhasePoint() = default;
  PhasePoint(Eigen::VectorXd x_, Eigen::VectorXd p_);
  /// n = 1 convenience.
  PhasePoint(double x_, double p_);

  static PhasePoint from_stacked(const Eigen::VectorXd& z);

  std::size_t dim() const { return static_cast<std::size_t>(x.size()); }
  Eigen::VectorXd stacked() const;
  double norm() const;

  // n = 1 accessors; callers are expected to have checked dim() == 1.
  double x1() const { return x(0); }
  double p1() const { return p(0); }

  PhasePoint operator+(const PhasePoint& o) const;
  PhasePoint operator-(const PhasePoint& o) const;
  PhasePoint operator-() const;
  PhasePoint operator*(double s) const;
};

/// Nonzero real deformation parameter (Planck's constant when positive).
class EtaParam {
 public:
  explicit EtaParam(double eta);
  double value() const { return eta_; }
  double abs() const;
  bool negative() const { return eta_ < 0.0; }
  operator double() const { return eta_; }

 private:
  double eta_;
};

/// Uniform 1-D grid x_k = x0 + k*dx, k = 0..K-1. K must be even.
struct Grid1D {
  double x0 = 0.0;
  double dx = 1.0;
  std::size_t K = 2;

  Grid1D() = default;
  Grid1D(double x0_, double dx_, std::size_t K_);

  /// Grid with x_{K/2} = 0.
  static Grid1D centered(double dx, std::size_t K);

  double point(std::size_t k) const { return x0 + static_cast<double>(k) * dx; }
  double span() const { return dx * static_cast<double>(K); }
  bool is_centered(double tol = 1e-12) const;
  bool same_as(const Grid1D& o, double rel_tol = 1e-12) const;
};

/// Phase-space grid, row index along x, column index along p.
struct Grid2D {
  Grid1D x;
  Grid1D p;

  std::size_t size() const { return x.K * p.K; }
  double cell() const { return x.dx * p.dx; }
  bool same_as(const Grid2D& o, double rel_tol = 1e-12) const;
};

/// Phase-space lattice {G k : k in Z^{2n}}.
struct Lattice {
  Eigen::MatrixXd generator;

  explicit Lattice(Eigen::MatrixXd G);
  /// Square lattice with spacing h in every direction.
  static Lattice square(std::size_t n, double h);
  std::size_t dim() const { return static_cast<std::size_t>(generator.rows() / 2); }
};

/// One lattice point together with the integer index that generated it.
struct LatticePoint {
  Eigen::VectorXi index;
  PhasePoint point;
};

Eigen::MatrixXd standard_J(std::size_t n);

/// sigma(z, z') = J z . z' = p.x' - x.p'
double symplectic_form(const PhasePoint& z, const PhasePoint& z2);

/// All lattice points with |lambda| <= radius, ordered by norm and then
/// lexicographically by integer index, so that the list for a smaller radius
/// is always a prefix of the list for a larger one.
std::vector<LatticePoint> lattice_points(const Lattice& lat, double radius);

}  // namespace weylpos
