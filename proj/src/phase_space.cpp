#include "weylpos/phase_space.hpp"

#include <algorithm>
#include <cmath>

namespace weylpos {

PhasePoint::PhasePoint(Eigen::VectorXd x_, Eigen::VectorXd p_) : x(std::move(x_)), p(std::move(p_)) {
  if (x.size() != p.size() || x.size() == 0) {
    throw DomainError("PhasePoint: x and p must have equal nonzero length");
  }
}

PhasePoint::PhasePoint(double x_, double p_) : x(Eigen::VectorXd::Constant(1, x_)), p(Eigen::VectorXd::Constant(1, p_)) {}

PhasePoint PhasePoint::from_stacked(const Eigen::VectorXd& z) {
  if (z.size() == 0 || z.size() % 2 != 0) {
    throw DomainError("PhasePoint: stacked vector must have even nonzero length");
  }
  const Eigen::Index n = z.size() / 2;
  return PhasePoint(z.head(n), z.tail(n));
}

Eigen::VectorXd PhasePoint::stacked() const {
  Eigen::VectorXd z(2 * x.size());
  z << x, p;
  return z;
}

double PhasePoint::norm() const { return std::sqrt(x.squaredNorm() + p.squaredNorm()); }

PhasePoint PhasePoint::operator+(const PhasePoint& o) const {
  if (dim() != o.dim()) throw DomainError("PhasePoint: dimension mismatch");
  return PhasePoint(x + o.x, p + o.p);
}

PhasePoint PhasePoint::operator-(const PhasePoint& o) const {
  if (dim() != o.dim()) throw DomainError("PhasePoint: dimension mismatch");
  return PhasePoint(x - o.x, p - o.p);
}

PhasePoint PhasePoint::operator-() const { return PhasePoint(-x, -p); }

PhasePoint PhasePoint::operator*(double s) const { return PhasePoint(s * x, s * p); }

EtaParam::EtaParam(double eta) : eta_(eta) {
  if (!(eta != 0.0) || !std::isfinite(eta)) {
    throw DomainError("eta must be a finite nonzero real");
  }
}

double EtaParam::abs() const { return std::abs(eta_); }

Grid1D::Grid1D(double x0_, double dx_, std::size_t K_) : x0(x0_), dx(dx_), K(K_) {
  if (!(dx > 0.0) || !std::isfinite(dx) || !std::isfinite(x0)) {
    throw DomainError("Grid1D: dx must be positive and finite");
  }
  if (K < 2 || K % 2 != 0) {
    throw DomainError("Grid1D: K must be even and >= 2");
  }
}

Grid1D Grid1D::centered(double dx, std::size_t K) {
  return Grid1D(-static_cast<double>(K / 2) * dx, dx, K);
}

bool Grid1D::is_centered(double tol) const {
  return std::abs(x0 + static_cast<double>(K / 2) * dx) <= tol * std::max(1.0, dx);
}

bool Grid1D::same_as(const Grid1D& o, double rel_tol) const {
  const double scale = std::max({std::abs(dx), std::abs(o.dx), 1e-300});
  return K == o.K && std::abs(dx - o.dx) <= rel_tol * scale &&
         std::abs(x0 - o.x0) <= rel_tol * std::max(scale * static_cast<double>(K), std::abs(x0));
}

bool Grid2D::same_as(const Grid2D& o, double rel_tol) const {
  return x.same_as(o.x, rel_tol) && p.same_as(o.p, rel_tol);
}

Lattice::Lattice(Eigen::MatrixXd G) : generator(std::move(G)) {
  if (generator.rows() != generator.cols() || generator.rows() == 0 || generator.rows() % 2 != 0) {
    throw DomainError("Lattice: generator must be a 2n x 2n matrix");
  }
  const double det = generator.determinant();
  if (!(std::abs(det) > 0.0) || !std::isfinite(det)) {
    throw DomainError("Lattice: generator must be invertible");
  }
}

Lattice Lattice::square(std::size_t n, double h) {
  if (!(h > 0.0)) throw DomainError("Lattice: spacing must be positive");
  return Lattice(h * Eigen::MatrixXd::Identity(2 * n, 2 * n));
}

Eigen::MatrixXd standard_J(std::size_t n) {
  if (n == 0) throw DomainError("standard_J: n must be >= 1");
  const auto m = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  J.topRightCorner(m, m).setIdentity();
  J.bottomLeftCorner(m, m) = -Eigen::MatrixXd::Identity(m, m);
  return J;
}

double symplectic_form(const PhasePoint& z, const PhasePoint& z2) {
  if (z.dim() != z2.dim()) throw DomainError("symplectic_form: dimension mismatch");
  return z.p.dot(z2.x) - z.x.dot(z2.p);
}

std::vector<LatticePoint> lattice_points(const Lattice& lat, double radius) {
  if (!(radius >= 0.0)) throw DomainError("lattice_points: radius must be >= 0");
  const Eigen::MatrixXd& G = lat.generator;
  const Eigen::Index d = G.rows();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(G);
  const double smin = svd.singularValues()(d - 1);
  const int bound = static_cast<int>(std::floor(radius / smin + 1e-9));

  std::vector<LatticePoint> out;
  Eigen::VectorXi k = Eigen::VectorXi::Constant(d, -bound);
  const double r2 = radius * radius * (1.0 + 1e-12);
  while (true) {
    const Eigen::VectorXd z = G * k.cast<double>();
    if (z.squaredNorm() <= r2) {
      out.push_back({k, PhasePoint::from_stacked(z)});
    }
    Eigen::Index i = d - 1;
    while (i >= 0 && k(i) == bound) {
      k(i) = -bound;
      --i;
    }
    if (i < 0) break;
    ++k(i);
  }

  std::sort(out.begin(), out.end(), [](const LatticePoint& a, const LatticePoint& b) {
    const double na = a.point.stacked().squaredNorm();
    const double nb = b.point.stacked().squaredNorm();
    if (na != nb) return na < nb;
    return std::lexicographical_compare(a.index.data(), a.index.data() + a.index.size(), b.index.data(),
                                        b.index.data() + b.index.size());
  });
  return out;
}

}  // namespace weylpos
