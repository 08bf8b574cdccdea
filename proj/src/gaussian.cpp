#include "weylpos/gaussian.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace weylpos {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Eigen::MatrixXd sqrt_spd(const Eigen::MatrixXd& S, bool inverse) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  Eigen::VectorXd d = es.eigenvalues().cwiseSqrt();
  if (inverse) d = d.cwiseInverse();
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

Eigen::MatrixXd skew_core(const CovarianceModel& cm) {
  const Eigen::MatrixXd R = sqrt_spd(cm.sigma, false);
  Eigen::MatrixXd A = R * standard_J(cm.dim()) * R;
  return 0.5 * (A - A.transpose());
}

}  // namespace

CovarianceModel::CovarianceModel(Eigen::MatrixXd s, EtaParam e) : sigma(std::move(s)), eta(e) {
  if (sigma.rows() != sigma.cols() || sigma.rows() == 0 || sigma.rows() % 2 != 0) {
    throw DomainError("CovarianceModel: Sigma must be 2n x 2n with n >= 1");
  }
  if (!sigma.allFinite()) throw DomainError("CovarianceModel: non-finite entries");
  const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw DomainError("CovarianceModel: Sigma is not symmetric");
  }
  sigma = 0.5 * (sigma + sigma.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma, Eigen::EigenvaluesOnly);
  if (!(es.eigenvalues()(0) > 0.0)) throw DomainError("CovarianceModel: Sigma is not positive definite");
}

Eigen::VectorXd symplectic_eigenvalues(const CovarianceModel& cm) {
  // A = Sigma^{1/2} J Sigma^{1/2} is skew; A^T A has each lambda_j^2 twice.
  const Eigen::MatrixXd A = skew_core(cm);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A.transpose() * A, Eigen::EigenvaluesOnly);
  const auto n = static_cast<Eigen::Index>(cm.dim());
  Eigen::VectorXd lam(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    lam(j) = std::sqrt(std::max(0.0, 0.5 * (es.eigenvalues()(2 * j) + es.eigenvalues()(2 * j + 1))));
  }
  return lam;
}

WilliamsonFactors williamson_decompose(const CovarianceModel& cm) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ev(cm.sigma, Eigen::EigenvaluesOnly);
  const double cond = ev.eigenvalues().maxCoeff() / ev.eigenvalues().minCoeff();
  if (cond > 1e12) throw DomainError("williamson_decompose: Sigma is ill-conditioned (cond > 1e12)");

  const auto n = static_cast<Eigen::Index>(cm.dim());
  const Eigen::MatrixXd A = skew_core(cm);
  Eigen::RealSchur<Eigen::MatrixXd> schur(A);
  const Eigen::MatrixXd& U = schur.matrixU();
  const Eigen::MatrixXd& T = schur.matrixT();

  // 2x2 blocks [[0, b], [-b, 0]]; orient each so that b > 0.
  struct Block {
    double lambda;
    Eigen::VectorXd e, f;
  };
  std::vector<Block> blocks;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double b = T(2 * k, 2 * k + 1);
    if (b > 0.0) {
      blocks.push_back({b, U.col(2 * k), U.col(2 * k + 1)});
    } else {
      blocks.push_back({-b, U.col(2 * k + 1), U.col(2 * k)});
    }
  }
  std::stable_sort(blocks.begin(), blocks.end(), [](const Block& a, const Block& b) { return a.lambda < b.lambda; });

  // O^T A O = [[0, Lambda], [-Lambda, 0]] = D J, then S = D^{-1/2} O^T Sigma^{1/2}.
  Eigen::MatrixXd O(2 * n, 2 * n);
  WilliamsonFactors f;
  f.lambda.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    O.col(k) = blocks[static_cast<std::size_t>(k)].e;
    O.col(n + k) = blocks[static_cast<std::size_t>(k)].f;
    f.lambda(k) = blocks[static_cast<std::size_t>(k)].lambda;
  }
  Eigen::VectorXd d(2 * n);
  d << f.lambda, f.lambda;
  f.D = d.asDiagonal();
  f.S = d.cwiseSqrt().cwiseInverse().asDiagonal() * O.transpose() * sqrt_spd(cm.sigma, false);

  const Eigen::MatrixXd J = standard_J(cm.dim());
  f.symplectic_residual = (f.S.transpose() * J * f.S - J).norm();
  f.reconstruction_residual = (f.S.transpose() * f.D * f.S - cm.sigma).norm();
  return f;
}

GaussianPositivityReport gaussian_positivity(const CovarianceModel& cm) {
  GaussianPositivityReport r;
  r.lambda = symplectic_eigenvalues(cm);
  r.eta = cm.eta.value();
  const double two_lmin = 2.0 * r.lambda.minCoeff();
  const double ae = cm.eta.abs();
  r.margin = two_lmin - ae;
  r.lambda_test = r.margin >= 0.0;

  const Eigen::MatrixXcd H =
      cm.sigma.cast<cd>() + cd(0.0, 0.5 * r.eta) * standard_J(cm.dim()).cast<cd>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
  r.matrix_min_eigenvalue = es.eigenvalues()(0);
  const double sn = cm.sigma.operatorNorm();
  r.matrix_test = r.matrix_min_eigenvalue >= -1e-10 * sn;

  const double band = 1e-9 * std::max(ae, two_lmin);
  if (std::abs(r.margin) <= band) {
    r.verdict = PsdVerdict::borderline;
    return r;
  }
  if (r.lambda_test != r.matrix_test) {
    throw ConsistencyError("gaussian_positivity: symplectic-eigenvalue and matrix tests disagree");
  }
  r.verdict = r.lambda_test ? PsdVerdict::positive : PsdVerdict::indefinite;
  return r;
}

SymbolGrid gaussian_symbol(const CovarianceModel& cm, const Grid2D& grid) {
  if (cm.dim() != 1) throw DomainError("gaussian_symbol: grids are n = 1 only");
  const double sx = std::sqrt(cm.sigma(0, 0));
  const double sp = std::sqrt(cm.sigma(1, 1));
  auto covers = [](const Grid1D& g, double s) {
    const double lo = g.point(0), hi = g.point(g.K - 1) + g.dx;
    return std::min(-lo, hi) >= 8.0 * s * (1.0 - 1e-9);
  };
  if (!covers(grid.x, sx) || !covers(grid.p, sp)) {
    throw ResolutionError("gaussian_symbol: grid does not reach 8 standard deviations");
  }
  const Eigen::Matrix2d P = cm.sigma.inverse();
  const double pref = 1.0 / (kTwoPi * std::sqrt(cm.sigma.determinant()));
  SymbolGrid a = SymbolGrid::zeros(grid);
  for (std::size_t i = 0; i < grid.x.K; ++i) {
    const double x = grid.x.point(i);
    for (std::size_t j = 0; j < grid.p.K; ++j) {
      const double p = grid.p.point(j);
      const double q = P(0, 0) * x * x + 2.0 * P(0, 1) * x * p + P(1, 1) * p * p;
      a.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = pref * std::exp(-0.5 * q);
    }
  }
  return a;
}

Sampler gaussian_diamond(const CovarianceModel& cm) {
  const Eigen::MatrixXd Q = standard_J(cm.dim()).transpose() * cm.sigma * standard_J(cm.dim());
  return [Q](const PhasePoint& z) {
    const Eigen::VectorXd s = z.stacked();
    return cd(std::exp(-0.5 * s.dot(Q * s)), 0.0);
  };
}

RsReport rs_inequalities(const CovarianceModel& cm, double hbar) {
  RsReport r;
  r.hbar = hbar;
  const auto n = static_cast<Eigen::Index>(cm.dim());
  r.satisfied = true;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double xx = cm.sigma(j, j), pp = cm.sigma(n + j, n + j), xp = cm.sigma(j, n + j);
    const double m = xx * pp - xp * xp - 0.25 * hbar * hbar;
    r.margins.push_back(m);
    if (m < -1e-12 * std::max(1.0, xx * pp)) r.satisfied = false;
  }
  return r;
}

Eigen::MatrixXd random_symplectic(std::size_t n, std::uint64_t seed, double spread) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  const auto N = static_cast<Eigen::Index>(n);
  auto sym = [&] {
    Eigen::MatrixXd B(N, N);
    for (Eigen::Index i = 0; i < N; ++i) {
      for (Eigen::Index j = 0; j < N; ++j) B(i, j) = spread * nd(rng);
    }
    return Eigen::MatrixXd(0.5 * (B + B.transpose()));
  };
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(N, N);
  Eigen::MatrixXd upper = Eigen::MatrixXd::Identity(2 * N, 2 * N);
  upper.topRightCorner(N, N) = sym();
  Eigen::MatrixXd lower = Eigen::MatrixXd::Identity(2 * N, 2 * N);
  lower.bottomLeftCorner(N, N) = sym();

  Eigen::MatrixXd R(N, N);
  for (Eigen::Index i = 0; i < N; ++i) {
    for (Eigen::Index j = 0; j < N; ++j) R(i, j) = nd(rng);
  }
  const Eigen::MatrixXd Qo = Eigen::HouseholderQR<Eigen::MatrixXd>(R).householderQ() * I;
  Eigen::VectorXd t(N);
  for (Eigen::Index i = 0; i < N; ++i) t(i) = std::exp(spread * nd(rng));
  const Eigen::MatrixXd A = Qo * t.asDiagonal();
  Eigen::MatrixXd scale = Eigen::MatrixXd::Zero(2 * N, 2 * N);
  scale.topLeftCorner(N, N) = A;
  scale.bottomRightCorner(N, N) = A.inverse().transpose();
  return lower * upper * scale;
}

}  // namespace weylpos
