#include "weylpos/transforms.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <numbers>

namespace weylpos {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double parity(long long m) { return (m % 2 == 0) ? 1.0 : -1.0; }

void require_same_grid(const Grid1D& a, const Grid1D& b, const char* what) {
  if (!a.same_as(b)) throw DomainError(std::string(what) + ": functions live on different grids");
}

void require_same_grid(const Grid2D& a, const Grid2D& b, const char* what) {
  if (!a.same_as(b)) throw DomainError(std::string(what) + ": symbols live on different grids");
}

void require_finite(const Eigen::Ref<const Eigen::VectorXcd>& v, const char* what) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v(i).real()) || !std::isfinite(v(i).imag())) {
      throw DomainError(std::string(what) + ": non-finite sample");
    }
  }
}

// Kernel exp(-i sigma(z, z') / scale) with a constant prefactor, evaluated on
// symplectic_dual_grid(a.grid, scale) with two passes of 1-D DFTs.
SymbolGrid symplectic_dft(const SymbolGrid& a, double scale, cd prefactor) {
  const Grid2D& g = a.grid;
  const std::size_t Kx = g.x.K;
  const std::size_t Kp = g.p.K;
  const int s = scale > 0 ? 1 : -1;
  const Grid2D out_grid = symplectic_dual_grid(g, scale);

  // Pass 1: along p (index l) with sign +s, giving the output x index.
  RowMatrixXcd U(Kx, Kp);
  std::vector<cd> row(Kp);
  for (std::size_t k = 0; k < Kx; ++k) {
    for (std::size_t l = 0; l < Kp; ++l) {
      row[l] = a.values(k, l) * parity(static_cast<long long>(k + l));
    }
    detail::dft(row, s);
    for (std::size_t aa = 0; aa < Kp; ++aa) U(k, aa) = row[aa];
  }

  // Pass 2: along x (index k) with sign -s, giving the output p index.
  RowMatrixXcd out(Kp, Kx);
  std::vector<cd> col(Kx);
  for (std::size_t aa = 0; aa < Kp; ++aa) {
    for (std::size_t k = 0; k < Kx; ++k) col[k] = U(k, aa);
    detail::dft(col, -s);
    for (std::size_t b = 0; b < Kx; ++b) out(aa, b) = col[b];
  }

  const double x0 = g.x.x0;
  const double p0 = g.p.x0;
  const cd pref = prefactor * g.x.dx * g.p.dx;
  std::vector<cd> post_b(Kx);
  for (std::size_t b = 0; b < Kx; ++b) {
    const double Pb = out_grid.p.point(b);
    post_b[b] = std::polar(1.0, -Pb * x0 / scale);
  }
  for (std::size_t aa = 0; aa < Kp; ++aa) {
    const double Xa = out_grid.x.point(aa);
    const cd post_a = std::polar(1.0, Xa * p0 / scale) * pref;
    for (std::size_t b = 0; b < Kx; ++b) out(aa, b) *= post_a * post_b[b];
  }
  return SymbolGrid(out_grid, std::move(out));
}

cd symplectic_point(const SymbolGrid& a, double scale, cd prefactor, const PhasePoint& z) {
  if (z.dim() != 1) throw DomainError("grid transforms support n = 1 only");
  const Grid2D& g = a.grid;
  const double zx = z.x1();
  const double zp = z.p1();
  Eigen::VectorXcd colphase(g.p.K);
  for (std::size_t l = 0; l < g.p.K; ++l) colphase(l) = std::polar(1.0, zx * g.p.point(l) / scale);
  cd total = 0.0;
  for (std::size_t k = 0; k < g.x.K; ++k) {
    const cd rowsum = (a.values.row(k) * colphase)(0);
    total += std::polar(1.0, -zp * g.x.point(k) / scale) * rowsum;
  }
  return prefactor * g.x.dx * g.p.dx * total;
}

}  // namespace

namespace detail {

void dft(std::vector<cd>& data, int sign) {
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  std::vector<cd> out(data.size());
  if (sign < 0) {
    fft.fwd(out, data);
  } else {
    fft.inv(out, data);
  }
  data.swap(out);
}

}  // namespace detail

GridFunction1D::GridFunction1D(Grid1D g, Eigen::VectorXcd v) : grid(g), values(std::move(v)) {
  if (static_cast<std::size_t>(values.size()) != grid.K) {
    throw DomainError("GridFunction1D: sample count does not match grid");
  }
  require_finite(values, "GridFunction1D");
}

GridFunction1D GridFunction1D::zeros(const Grid1D& g) { return GridFunction1D(g, Eigen::VectorXcd::Zero(g.K)); }

cd GridFunction1D::inner(const GridFunction1D& other) const {
  require_same_grid(grid, other.grid, "inner product");
  // Eigen's dot conjugates its first argument.
  return other.values.dot(values) * grid.dx;
}

double GridFunction1D::norm() const { return std::sqrt(values.squaredNorm() * grid.dx); }

GridFunction1D GridFunction1D::conj() const { return GridFunction1D(grid, values.conjugate()); }

GridFunction1D operator+(const GridFunction1D& a, const GridFunction1D& b) {
  require_same_grid(a.grid, b.grid, "GridFunction1D +");
  return GridFunction1D(a.grid, a.values + b.values);
}

GridFunction1D operator*(cd s, const GridFunction1D& a) { return GridFunction1D(a.grid, s * a.values); }

SymbolGrid::SymbolGrid(Grid2D g, RowMatrixXcd v) : grid(g), values(std::move(v)) {
  if (static_cast<std::size_t>(values.rows()) != grid.x.K || static_cast<std::size_t>(values.cols()) != grid.p.K) {
    throw DomainError("SymbolGrid: sample matrix does not match grid");
  }
  require_finite(values.reshaped(), "SymbolGrid");
}

SymbolGrid SymbolGrid::zeros(const Grid2D& g) { return SymbolGrid(g, RowMatrixXcd::Zero(g.x.K, g.p.K)); }

cd SymbolGrid::integral() const { return values.sum() * grid.cell(); }

double SymbolGrid::max_abs() const { return values.size() ? values.cwiseAbs().maxCoeff() : 0.0; }

double SymbolGrid::max_imag() const { return values.size() ? values.imag().cwiseAbs().maxCoeff() : 0.0; }

SymbolGrid SymbolGrid::conj() const { return SymbolGrid(grid, values.conjugate()); }

SymbolGrid operator+(const SymbolGrid& a, const SymbolGrid& b) {
  require_same_grid(a.grid, b.grid, "SymbolGrid +");
  return SymbolGrid(a.grid, a.values + b.values);
}

SymbolGrid operator-(const SymbolGrid& a, const SymbolGrid& b) {
  require_same_grid(a.grid, b.grid, "SymbolGrid -");
  return SymbolGrid(a.grid, a.values - b.values);
}

SymbolGrid operator*(cd s, const SymbolGrid& a) { return SymbolGrid(a.grid, s * a.values); }

GridFunction1D hermite_function(std::size_t k, const Grid1D& g, const EtaParam& eta) {
  const double scale = std::sqrt(eta.abs());
  const double norm = std::pow(kPi * eta.abs(), -0.25);
  Eigen::VectorXcd out(g.K);
  for (std::size_t i = 0; i < g.K; ++i) {
    const double t = g.point(i) / scale;
    double hm1 = 0.0;
    double h = norm * std::exp(-0.5 * t * t);
    for (std::size_t j = 0; j < k; ++j) {
      const double jj = static_cast<double>(j);
      const double next = std::sqrt(2.0 / (jj + 1.0)) * t * h - std::sqrt(jj / (jj + 1.0)) * hm1;
      hm1 = h;
      h = next;
    }
    out(static_cast<Eigen::Index>(i)) = h;
  }
  return GridFunction1D(g, std::move(out));
}

GridFunction1D coherent_state(const PhasePoint& z0, const Grid1D& g, const EtaParam& eta) {
  if (z0.dim() != 1) throw DomainError("coherent_state: n = 1 only");
  const double x0 = z0.x1();
  const double p0 = z0.p1();
  const double norm = std::pow(kPi * eta.abs(), -0.25);
  Eigen::VectorXcd out(g.K);
  for (std::size_t i = 0; i < g.K; ++i) {
    const double x = g.point(i);
    const double d = x - x0;
    out(static_cast<Eigen::Index>(i)) =
        norm * std::exp(-0.5 * d * d / eta.abs()) * std::polar(1.0, (p0 * x - 0.5 * p0 * x0) / eta.value());
  }
  return GridFunction1D(g, std::move(out));
}

Grid1D default_grid(const EtaParam& eta, std::size_t K) {
  const double dx = 16.0 * std::sqrt(std::max(eta.abs(), 1.0)) / static_cast<double>(K);
  return Grid1D::centered(dx, K);
}

Grid2D wigner_grid(const Grid1D& g, const EtaParam& eta) {
  const double dp = kTwoPi * eta.abs() / (2.0 * static_cast<double>(g.K) * g.dx);
  return Grid2D{g, Grid1D::centered(dp, g.K)};
}

Grid2D ambiguity_grid(const Grid1D& g, const EtaParam& eta) {
  const double DP = kTwoPi * eta.abs() / (static_cast<double>(g.K) * g.dx);
  return Grid2D{Grid1D::centered(2.0 * g.dx, g.K), Grid1D::centered(DP, g.K)};
}

Grid2D symplectic_dual_grid(const Grid2D& g, double scale) {
  const double a = std::abs(scale);
  const double DX = kTwoPi * a / (static_cast<double>(g.p.K) * g.p.dx);
  const double DP = kTwoPi * a / (static_cast<double>(g.x.K) * g.x.dx);
  return Grid2D{Grid1D::centered(DX, g.p.K), Grid1D::centered(DP, g.x.K)};
}

double edge_mass_fraction(const GridFunction1D& f, std::size_t width) {
  const double total = f.values.squaredNorm();
  if (total == 0.0) return 0.0;
  double edge = 0.0;
  const std::size_t K = f.grid.K;
  for (std::size_t k = 0; k < K; ++k) {
    if (k < width || k + width >= K) edge += std::norm(f[k]);
  }
  return edge / total;
}

double edge_mass_fraction(const SymbolGrid& a, std::size_t width) {
  const double total = a.values.squaredNorm();
  if (total == 0.0) return 0.0;
  const std::size_t Kx = a.grid.x.K;
  const std::size_t Kp = a.grid.p.K;
  double edge = 0.0;
  for (std::size_t i = 0; i < Kx; ++i) {
    const bool xedge = i < width || i + width >= Kx;
    for (std::size_t j = 0; j < Kp; ++j) {
      if (xedge || j < width || j + width >= Kp) edge += std::norm(a.values(i, j));
    }
  }
  return edge / total;
}

void require_resolved(const GridFunction1D& f, const char* what, double limit) {
  const double frac = edge_mass_fraction(f);
  if (frac > limit) {
    throw ResolutionError(std::string(what) + ": function not resolved by grid (edge mass fraction " +
                          std::to_string(frac) + ")");
  }
}

void require_resolved(const SymbolGrid& a, const char* what, double limit) {
  const double frac = edge_mass_fraction(a);
  if (frac > limit) {
    throw ResolutionError(std::string(what) + ": symbol not resolved by grid (edge mass fraction " +
                          std::to_string(frac) + ")");
  }
}

SymbolGrid wigner_cross(const GridFunction1D& psi, const GridFunction1D& phi, const EtaParam& eta) {
  require_same_grid(psi.grid, phi.grid, "wigner_cross");
  if (eta.negative()) {
    // W_{-|eta|}(psi, phi) = -conj(W_{|eta|}(conj psi, conj phi))
    SymbolGrid w = wigner_cross(psi.conj(), phi.conj(), EtaParam(eta.abs()));
    w.values = -w.values.conjugate();
    return w;
  }
  require_resolved(psi, "wigner_cross");
  require_resolved(phi, "wigner_cross");

  const Grid1D& g = psi.grid;
  const auto K = static_cast<long long>(g.K);
  const long long half = K / 2;
  const Grid2D out_grid = wigner_grid(g, eta);
  RowMatrixXcd out(g.K, g.K);
  std::vector<cd> buf(g.K);
  const double pref = 2.0 * g.dx / (kTwoPi * eta.value());
  for (long long k = 0; k < K; ++k) {
    std::fill(buf.begin(), buf.end(), cd(0.0));
    for (long long m = -half; m < half; ++m) {
      const long long a = k + m;
      const long long b = k - m;
      if (a < 0 || a >= K || b < 0 || b >= K) continue;
      const cd v = psi.values(a) * std::conj(phi.values(b)) * parity(m);
      buf[static_cast<std::size_t>((m + K) % K)] = v;
    }
    detail::dft(buf, -1);
    for (long long j = 0; j < K; ++j) out(k, j) = pref * buf[static_cast<std::size_t>(j)];
  }
  SymbolGrid w(out_grid, std::move(out));
  require_resolved(w, "wigner_cross (momentum aliasing)");
  return w;
}

SymbolGrid wigner(const GridFunction1D& psi, const EtaParam& eta) { return wigner_cross(psi, psi, eta); }

SymbolGrid wigner_cross_on(const GridFunction1D& psi, const GridFunction1D& phi, const EtaParam& eta,
                           const Grid1D& p_axis) {
  require_same_grid(psi.grid, phi.grid, "wigner_cross_on");
  const Grid1D& g = psi.grid;
  const double pmax = std::max(std::abs(p_axis.x0), std::abs(p_axis.point(p_axis.K - 1)));
  if (pmax > kPi * eta.abs() / (2.0 * g.dx) * (1.0 + 1e-12)) {
    throw ResolutionError("wigner_cross_on: momentum axis exceeds the aliasing-free range");
  }
  const auto K = static_cast<long long>(g.K);
  const long long half = K / 2;
  RowMatrixXcd out(g.K, p_axis.K);
  const double pref = 2.0 * g.dx / (kTwoPi * eta.value());
  // phase(j, m) = exp(-i p_j 2 m dx / eta), stored for m in [-K/2, K/2).
  RowMatrixXcd phase(p_axis.K, g.K);
  for (std::size_t j = 0; j < p_axis.K; ++j) {
    const double w = -p_axis.point(j) * 2.0 * g.dx / eta.value();
    for (long long m = -half; m < half; ++m) phase(j, m + half) = std::polar(1.0, w * static_cast<double>(m));
  }
  Eigen::VectorXcd f(g.K);
  for (long long k = 0; k < K; ++k) {
    f.setZero();
    for (long long m = -half; m < half; ++m) {
      const long long a = k + m;
      const long long b = k - m;
      if (a < 0 || a >= K || b < 0 || b >= K) continue;
      f(m + half) = psi.values(a) * std::conj(phi.values(b));
    }
    out.row(k) = (pref * (phase * f)).transpose();
  }
  return SymbolGrid(Grid2D{g, p_axis}, std::move(out));
}

SymbolGrid ambiguity_cross(const GridFunction1D& psi, const GridFunction1D& phi, const EtaParam& eta) {
  require_same_grid(psi.grid, phi.grid, "ambiguity_cross");
  if (eta.negative()) {
    SymbolGrid a = ambiguity_cross(psi.conj(), phi.conj(), EtaParam(eta.abs()));
    a.values = -a.values.conjugate();
    return a;
  }
  require_resolved(psi, "ambiguity_cross");
  require_resolved(phi, "ambiguity_cross");

  const Grid1D& g = psi.grid;
  const auto K = static_cast<long long>(g.K);
  const long long half = K / 2;
  const Grid2D out_grid = ambiguity_grid(g, eta);
  RowMatrixXcd out(g.K, g.K);
  std::vector<cd> buf(g.K);
  std::vector<cd> post(g.K);
  for (std::size_t j = 0; j < g.K; ++j) {
    post[j] = std::polar(1.0, -out_grid.p.point(j) * g.x0 / eta.value()) * (g.dx / (kTwoPi * eta.value()));
  }
  for (long long m = 0; m < K; ++m) {
    const long long s = m - half;
    for (long long i = 0; i < K; ++i) {
      const long long a = i + s;
      const long long b = i - s;
      buf[static_cast<std::size_t>(i)] = (a < 0 || a >= K || b < 0 || b >= K)
                                             ? cd(0.0)
                                             : psi.values(a) * std::conj(phi.values(b)) * parity(i);
    }
    detail::dft(buf, -1);
    for (long long j = 0; j < K; ++j) out(m, j) = buf[static_cast<std::size_t>(j)] * post[static_cast<std::size_t>(j)];
  }
  return SymbolGrid(out_grid, std::move(out));
}

SymbolGrid ambiguity(const GridFunction1D& psi, const EtaParam& eta) { return ambiguity_cross(psi, psi, eta); }

GridFunction1D eta_fourier(const GridFunction1D& psi, const EtaParam& eta) {
  if (eta.negative()) {
    // Directly from the defining integral: F_{-|eta|} psi = conj(F_{|eta|} conj psi).
    return eta_fourier(psi.conj(), EtaParam(eta.abs())).conj();
  }
  require_resolved(psi, "eta_fourier");
  const Grid1D& g = psi.grid;
  const double DP = kTwoPi * eta.value() / (static_cast<double>(g.K) * g.dx);
  const Grid1D out_grid = Grid1D::centered(DP, g.K);
  std::vector<cd> buf(g.K);
  for (std::size_t k = 0; k < g.K; ++k) buf[k] = psi.values(static_cast<Eigen::Index>(k)) * parity(static_cast<long long>(k));
  detail::dft(buf, -1);
  Eigen::VectorXcd out(g.K);
  const double pref = g.dx / std::sqrt(kTwoPi * eta.value());
  for (std::size_t j = 0; j < g.K; ++j) {
    out(static_cast<Eigen::Index>(j)) = pref * buf[j] * std::polar(1.0, -out_grid.point(j) * g.x0 / eta.value());
  }
  return GridFunction1D(out_grid, std::move(out));
}

SymbolGrid symplectic_ft(const SymbolGrid& a, const EtaParam& eta) {
  require_resolved(a, "symplectic_ft");
  return symplectic_dft(a, eta.value(), cd(1.0 / (kTwoPi * eta.value())));
}

SymbolGrid reduced_symplectic_ft(const SymbolGrid& a) {
  require_resolved(a, "reduced_symplectic_ft");
  return symplectic_dft(a, -1.0, cd(1.0));
}

cd symplectic_ft_at(const SymbolGrid& a, const EtaParam& eta, const PhasePoint& z) {
  return symplectic_point(a, eta.value(), cd(1.0 / (kTwoPi * eta.value())), z);
}

cd reduced_symplectic_ft_at(const SymbolGrid& a, const PhasePoint& z) { return symplectic_point(a, -1.0, cd(1.0), z); }

GridFunction1D fourier_shift(const GridFunction1D& psi, double shift) {
  const std::size_t K = psi.grid.K;
  std::vector<cd> buf(psi.values.data(), psi.values.data() + K);
  detail::dft(buf, -1);
  const double span = psi.grid.span();
  for (std::size_t m = 0; m < K; ++m) {
    const long long sm = (m < K / 2) ? static_cast<long long>(m) : static_cast<long long>(m) - static_cast<long long>(K);
    const double w = kTwoPi * static_cast<double>(sm) / span;
    if (m == K / 2) {
      // Nyquist bin: the symmetric (real-preserving) choice.
      buf[m] *= std::cos(w * shift);
    } else {
      buf[m] *= std::polar(1.0, -w * shift);
    }
  }
  detail::dft(buf, +1);
  Eigen::VectorXcd out(K);
  for (std::size_t k = 0; k < K; ++k) out(static_cast<Eigen::Index>(k)) = buf[k] / static_cast<double>(K);
  return GridFunction1D(psi.grid, std::move(out));
}

namespace {

GridFunction1D apply_displacement_phase(GridFunction1D shifted, const PhasePoint& z0, const EtaParam& eta) {
  const double x0 = z0.x1();
  const double p0 = z0.p1();
  for (std::size_t k = 0; k < shifted.grid.K; ++k) {
    const double x = shifted.grid.point(k);
    shifted.values(static_cast<Eigen::Index>(k)) *= std::polar(1.0, (p0 * x - 0.5 * p0 * x0) / eta.value());
  }
  return shifted;
}

}  // namespace

GridFunction1D displace(const GridFunction1D& psi, const PhasePoint& z0, const EtaParam& eta) {
  if (z0.dim() != 1) throw DomainError("displace: grid functions support n = 1 only");
  const double r = z0.x1() / psi.grid.dx;
  const double n = std::round(r);
  if (std::abs(r - n) > 1e-9 * std::max(1.0, std::abs(r))) {
    throw DomainError("displace: x0 is not an integer multiple of dx");
  }
  const auto shift = static_cast<long long>(n);
  const auto K = static_cast<long long>(psi.grid.K);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(K);
  for (long long k = 0; k < K; ++k) {
    const long long src = k - shift;
    if (src >= 0 && src < K) out(k) = psi.values(src);
  }
  return apply_displacement_phase(GridFunction1D(psi.grid, std::move(out)), z0, eta);
}

GridFunction1D displace_interpolated(const GridFunction1D& psi, const PhasePoint& z0, const EtaParam& eta) {
  if (z0.dim() != 1) throw DomainError("displace: grid functions support n = 1 only");
  return apply_displacement_phase(fourier_shift(psi, z0.x1()), z0, eta);
}

std::vector<cd> stft(const GridFunction1D& f, const GridFunction1D& g, std::span<const PhasePoint> queries) {
  require_same_grid(f.grid, g.grid, "stft");
  if (g.values.squaredNorm() == 0.0) throw DomainError("stft: window must be nonzero");
  std::vector<cd> out;
  out.reserve(queries.size());
  for (const PhasePoint& q : queries) {
    if (q.dim() != 1) throw DomainError("stft: n = 1 only");
    const GridFunction1D gs = fourier_shift(g, q.x1());
    cd acc = 0.0;
    for (std::size_t k = 0; k < f.grid.K; ++k) {
      const double y = f.grid.point(k);
      acc += std::polar(1.0, -q.p1() * y) * f[k] * std::conj(gs[k]);
    }
    out.push_back(acc * f.grid.dx);
  }
  return out;
}

namespace {

RowMatrixXcd shift_symbol(const SymbolGrid& w, double sx, double sp) {
  const std::size_t Kx = w.grid.x.K;
  const std::size_t Kp = w.grid.p.K;
  RowMatrixXcd out = w.values;
  Eigen::VectorXcd col(Kx);
  for (std::size_t j = 0; j < Kp; ++j) {
    col = out.col(j);
    out.col(j) = fourier_shift(GridFunction1D(w.grid.x, col), sx).values;
  }
  Eigen::VectorXcd row(Kp);
  for (std::size_t i = 0; i < Kx; ++i) {
    row = out.row(i).transpose();
    out.row(i) = fourier_shift(GridFunction1D(w.grid.p, row), sp).values.transpose();
  }
  return out;
}

}  // namespace

std::vector<cd> stft(const SymbolGrid& a, const SymbolGrid& window, std::span<const StftQuery> queries) {
  require_same_grid(a.grid, window.grid, "stft");
  if (window.values.squaredNorm() == 0.0) throw DomainError("stft: window must be nonzero");
  const Grid2D& g = a.grid;
  std::vector<cd> out;
  out.reserve(queries.size());
  Eigen::VectorXcd colphase(g.p.K);
  for (const StftQuery& q : queries) {
    if (q.z.dim() != 1 || q.zeta.dim() != 1) throw DomainError("stft: n = 1 only");
    const RowMatrixXcd ws = shift_symbol(window, q.z.x1(), q.z.p1());
    for (std::size_t l = 0; l < g.p.K; ++l) colphase(l) = std::polar(1.0, -q.zeta.p1() * g.p.point(l));
    cd acc = 0.0;
    for (std::size_t k = 0; k < g.x.K; ++k) {
      const cd rowphase = std::polar(1.0, -q.zeta.x1() * g.x.point(k));
      cd rowsum = 0.0;
      for (std::size_t l = 0; l < g.p.K; ++l) rowsum += a.values(k, l) * std::conj(ws(k, l)) * colphase(l);
      acc += rowphase * rowsum;
    }
    out.push_back(acc * g.cell());
  }
  return out;
}

SymbolGrid twisted_convolution(const SymbolGrid& as, const SymbolGrid& bs, const EtaParam& eta) {
  require_same_grid(as.grid, bs.grid, "twisted_convolution");
  const Grid2D& g = as.grid;
  if (!g.x.is_centered() || !g.p.is_centered()) throw DomainError("twisted_convolution: grid must be centered");
  const auto Kx = static_cast<long long>(g.x.K);
  const auto Kp = static_cast<long long>(g.p.K);
  const long long hx = Kx / 2;
  const long long hp = Kp / 2;
  const double e2 = 2.0 * eta.value();
  RowMatrixXcd out = RowMatrixXcd::Zero(Kx, Kp);
  std::vector<cd> xphase(static_cast<std::size_t>(Kx));
  std::vector<cd> pphase(static_cast<std::size_t>(Kp));
  for (long long i = 0; i < Kx; ++i) {
    const double x = g.x.point(static_cast<std::size_t>(i));
    for (long long jp = 0; jp < Kp; ++jp) pphase[jp] = std::polar(1.0, -x * g.p.point(static_cast<std::size_t>(jp)) / e2);
    for (long long j = 0; j < Kp; ++j) {
      const double p = g.p.point(static_cast<std::size_t>(j));
      for (long long ip = 0; ip < Kx; ++ip) xphase[ip] = std::polar(1.0, p * g.x.point(static_cast<std::size_t>(ip)) / e2);
      cd acc = 0.0;
      for (long long ip = 0; ip < Kx; ++ip) {
        const long long di = i - ip + hx;
        if (di < 0 || di >= Kx) continue;
        cd racc = 0.0;
        for (long long jp = 0; jp < Kp; ++jp) {
          const long long dj = j - jp + hp;
          if (dj < 0 || dj >= Kp) continue;
          racc += pphase[jp] * as.values(di, dj) * bs.values(ip, jp);
        }
        acc += xphase[ip] * racc;
      }
      out(i, j) = acc * g.cell() / (kTwoPi * eta.value());
    }
  }
  return SymbolGrid(g, std::move(out));
}

SymbolGrid twisted_product(const SymbolGrid& a, const SymbolGrid& b, const EtaParam& eta) {
  require_same_grid(a.grid, b.grid, "twisted_product");
  const Grid2D& g = a.grid;
  const auto Kx = static_cast<long long>(g.x.K);
  const auto Kp = static_cast<long long>(g.p.K);
  const double h = eta.value();
  const long long Dx = 2 * Kx - 1;
  const long long Dp = 2 * Kp - 1;

  // inner(d) = sum_v exp((2i/eta) sigma(d, v)) b(v) dv for every grid offset d = z - u,
  // sigma(d, v) = d_p v_x - d_x v_p.
  RowMatrixXcd T(Kx, Dx);
  for (long long vx = 0; vx < Kx; ++vx) {
    for (long long e = 0; e < Dx; ++e) {
      const double dxo = static_cast<double>(e - (Kx - 1)) * g.x.dx;
      cd acc = 0.0;
      for (long long vp = 0; vp < Kp; ++vp) {
        acc += std::polar(1.0, -2.0 * dxo * g.p.point(static_cast<std::size_t>(vp)) / h) * b.values(vx, vp);
      }
      T(vx, e) = acc;
    }
  }
  RowMatrixXcd inner(Dx, Dp);
  for (long long f = 0; f < Dp; ++f) {
    const double dpo = static_cast<double>(f - (Kp - 1)) * g.p.dx;
    Eigen::VectorXcd ph(Kx);
    for (long long vx = 0; vx < Kx; ++vx) ph(vx) = std::polar(1.0, 2.0 * dpo * g.x.point(static_cast<std::size_t>(vx)) / h);
    for (long long e = 0; e < Dx; ++e) inner(e, f) = (T.col(e).transpose() * ph)(0) * g.cell();
  }

  // c(z) = (pi eta)^{-2} sum_u exp((2i/eta) sigma(u, z)) a(u) inner(z - u) du
  RowMatrixXcd out(Kx, Kp);
  const double pref = g.cell() / (kPi * kPi * h * h);
  std::vector<cd> uxphase(static_cast<std::size_t>(Kx));
  std::vector<cd> upphase(static_cast<std::size_t>(Kp));
  for (long long i = 0; i < Kx; ++i) {
    const double zx = g.x.point(static_cast<std::size_t>(i));
    for (long long up = 0; up < Kp; ++up) upphase[up] = std::polar(1.0, 2.0 * g.p.point(static_cast<std::size_t>(up)) * zx / h);
    for (long long j = 0; j < Kp; ++j) {
      const double zp = g.p.point(static_cast<std::size_t>(j));
      for (long long ux = 0; ux < Kx; ++ux) uxphase[ux] = std::polar(1.0, -2.0 * g.x.point(static_cast<std::size_t>(ux)) * zp / h);
      cd acc = 0.0;
      for (long long ux = 0; ux < Kx; ++ux) {
        const long long e = i - ux + (Kx - 1);
        cd racc = 0.0;
        for (long long up = 0; up < Kp; ++up) {
          const long long f = j - up + (Kp - 1);
          racc += upphase[up] * a.values(ux, up) * inner(e, f);
        }
        acc += uxphase[ux] * racc;
      }
      out(i, j) = pref * acc;
    }
  }
  return SymbolGrid(g, std::move(out));
}

}  // namespace weylpos
