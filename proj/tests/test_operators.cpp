#include <doctest.h>

#include "weylpos/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace weylpos;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> sorted_desc(std::vector<double> v) {
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

}  // namespace

TEST_CASE("symbol of the ground-state projector") {
  const EtaParam eta(1.0);
  const Grid1D g = default_grid(eta);
  const auto m = SpectralMixture::hermite(g, eta, {1.0}, {0});
  const SymbolGrid a = symbol_from_mixture(m);
  double err = 0.0;
  for (std::size_t i = 0; i < g.K; ++i) {
    for (std::size_t j = 0; j < g.K; ++j) {
      const double r2 = a.x(i) * a.x(i) + a.p(j) * a.p(j);
      err = std::max(err, std::abs(a.values(i, j) - cd(2.0 * std::exp(-r2))));
    }
  }
  CHECK(err < 1e-8);
  CHECK(a.max_imag() == 0.0);
}

TEST_CASE("empty mixtures and linearity") {
  const EtaParam eta(0.5);
  const Grid1D g = default_grid(eta);
  const auto empty = SpectralMixture::hermite(g, eta, {}, {});
  CHECK(symbol_from_mixture(empty).max_abs() == 0.0);
  CHECK(twisted_symbol_from_mixture(empty).max_abs() == 0.0);
  CHECK(trace_from_mixture(empty) == 0.0);

  const auto two = SpectralMixture::hermite(g, eta, {0.6, -0.25}, {1, 3});
  const auto t1 = SpectralMixture::hermite(g, eta, {0.6}, {1});
  const auto t2 = SpectralMixture::hermite(g, eta, {-0.25}, {3});
  const SymbolGrid sum = symbol_from_mixture(t1) + symbol_from_mixture(t2);
  CHECK((symbol_from_mixture(two).values - sum.values).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("mixture validation") {
  const EtaParam eta(1.0);
  const Grid1D g = default_grid(eta);
  CHECK_THROWS_AS(SpectralMixture::hermite(g, eta, {1.0, 1.0}, {2, 2}), DomainError);
  CHECK_THROWS_AS(SpectralMixture::hermite(g, eta, {1.0}, {0, 1}), DomainError);
  CHECK_THROWS_AS(SpectralMixture(g, eta, {1.0}, {cd(2.0) * hermite_function(0, g, eta)}), DomainError);
  CHECK_THROWS_AS(SpectralMixture(g, eta, {NAN}, {hermite_function(0, g, eta)}), DomainError);
}

TEST_CASE("twisted symbol of a mixture") {
  for (double e : {1.0, 0.5, -1.0}) {
    const EtaParam eta(e);
    const Grid1D g = default_grid(eta);
    const auto proj = SpectralMixture::hermite(g, eta, {1.0}, {0});
    const SymbolGrid t = twisted_symbol_from_mixture(proj);
    CHECK(std::abs(t.values(g.K / 2, g.K / 2) - cd(1.0)) < 1e-12);

    const auto m = SpectralMixture::hermite(g, eta, {0.5, 0.3, -0.2}, {0, 2, 5});
    const SymbolGrid via = symplectic_ft(symbol_from_mixture(m), eta);
    CHECK((twisted_symbol_from_mixture(m).values - via.values).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("quadratic form of projector symbols") {
  const EtaParam eta(1.0);
  const Grid1D g = default_grid(eta);
  const SymbolGrid a = symbol_from_mixture(SpectralMixture::hermite(g, eta, {1.0}, {0}));
  CHECK(quadratic_form(a, hermite_function(0, g, eta), eta) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(quadratic_form(a, hermite_function(1, g, eta), eta)) < 1e-8);
  CHECK(quadratic_form(SymbolGrid::zeros(a.grid), hermite_function(0, g, eta), eta) == 0.0);

  SymbolGrid c = a;
  c.values(10, 10) += cd(0.0, 1.0);
  CHECK_THROWS_AS(quadratic_form(c, hermite_function(0, g, eta), eta), DomainError);
  CHECK_THROWS_AS(quadratic_form(a, hermite_function(0, g, eta), EtaParam(2.0)), DomainError);
}

TEST_CASE("quadratic form reproduces the spectral decomposition") {
  std::mt19937_64 rng(43);
  std::normal_distribution<double> n01;
  for (double e : {1.0, 0.5, -1.0}) {
    const EtaParam eta(e);
    const Grid1D g = default_grid(eta);
    const std::vector<double> alpha = {0.5, -0.3, 0.15, 0.4};
    const auto m = SpectralMixture::hermite(g, eta, alpha, {0, 1, 3, 4});
    const SymbolGrid a = symbol_from_mixture(m);
    for (int t = 0; t < 3; ++t) {
      GridFunction1D psi = GridFunction1D::zeros(g);
      for (std::size_t k = 0; k < 6; ++k) psi = psi + cd(n01(rng), n01(rng)) * hermite_function(k, g, eta);
      double ref = 0.0;
      for (std::size_t j = 0; j < m.size(); ++j) ref += alpha[j] * std::norm(psi.inner(m.functions()[j]));
      CHECK(std::abs(quadratic_form(a, psi, eta) - ref) < 1e-6 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST_CASE("hilbert-schmidt pairing") {
  const EtaParam eta(1.0);
  const Grid1D g = default_grid(eta);
  const SymbolGrid p0 = symbol_from_mixture(SpectralMixture::hermite(g, eta, {1.0}, {0}));
  const SymbolGrid p1 = symbol_from_mixture(SpectralMixture::hermite(g, eta, {1.0}, {1}));
  CHECK(hs_pairing(p0, p0, eta) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(hs_pairing(p0, p1, eta)) < 1e-8);
  CHECK(hs_pairing(p0, SymbolGrid::zeros(p0.grid), eta) == 0.0);

  const SymbolGrid a = symbol_from_mixture(SpectralMixture::hermite(g, eta, {0.2, 0.7}, {0, 2}));
  const SymbolGrid b = symbol_from_mixture(SpectralMixture::hermite(g, eta, {0.5, 0.1, 0.4}, {1, 2, 6}));
  CHECK(hs_pairing(a, b, eta) == doctest::Approx(hs_pairing(b, a, eta)));
  CHECK(hs_pairing(a, b, eta) == doctest::Approx(0.7 * 0.1).epsilon(1e-8));
  CHECK(hs_pairing(a, b, eta) >= 0.0);

  const SymbolGrid other = symbol_from_mixture(SpectralMixture::hermite(default_grid(eta, 128), eta, {1.0}, {0}));
  CHECK_THROWS_AS(hs_pairing(a, other, eta), DomainError);
}

TEST_CASE("traces") {
  const EtaParam eta(0.5);
  const Grid1D g = default_grid(eta);
  const auto rho = SpectralMixture::hermite(g, eta, {0.5, 0.5}, {0, 3});
  CHECK(trace_from_mixture(rho) == 1.0);
  CHECK(trace_from_symbol(symbol_from_mixture(rho), eta) == doctest::Approx(1.0).epsilon(1e-6));
  const auto m = SpectralMixture::hermite(g, eta, {0.2, 0.3, 0.5}, {0, 1, 2});
  CHECK(trace_from_mixture(m) == doctest::Approx(1.0));
}

TEST_CASE("weyl kernel of a projector") {
  const EtaParam eta(1.0);
  const Grid1D g = default_grid(eta);
  const KernelMatrix k = weyl_kernel(symbol_from_mixture(SpectralMixture::hermite(g, eta, {1.0}, {0})), eta);
  CHECK((k.values - k.values.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  const Eigen::VectorXd s = k.spectrum();
  CHECK(std::abs(s(0) - 1.0) < 2e-3);
  CHECK(s.tail(s.size() - 1).cwiseAbs().maxCoeff() < 2e-3);
  // kernel of the projector is phi_0(x) phi_0(y)
  const GridFunction1D phi = hermite_function(0, g, eta);
  CHECK((k.values - phi.values * phi.values.adjoint()).cwiseAbs().maxCoeff() < 1e-8);

  const KernelMatrix z = weyl_kernel(SymbolGrid::zeros(wigner_grid(g, eta)), eta);
  CHECK(z.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("weyl kernel spectrum matches mixture coefficients") {
  for (double e : {1.0, 2.0, -0.5}) {
    const EtaParam eta(e);
    const Grid1D g = default_grid(eta);
    const std::vector<double> alpha = {0.7, 0.3};
    const KernelMatrix k = weyl_kernel(symbol_from_mixture(SpectralMixture::hermite(g, eta, alpha, {0, 1})), eta);
    const Eigen::VectorXd s = k.spectrum();
    CHECK(std::abs(s(0) - 0.7) < 2e-3);
    CHECK(std::abs(s(1) - 0.3) < 2e-3);
    CHECK(s.tail(s.size() - 2).cwiseAbs().maxCoeff() < 2e-3);
  }

  const EtaParam eta(1.0);
  const Grid1D g = default_grid(eta);
  const std::vector<double> alpha = {0.3, -0.2, 0.15, 0.1, 0.08, -0.05, 0.02, 0.6};
  const auto m = SpectralMixture::hermite(g, eta, alpha, {0, 1, 2, 3, 4, 5, 6, 7});
  const KernelMatrix k = weyl_kernel(symbol_from_mixture(m), eta);
  const Eigen::VectorXd s = k.spectrum();
  std::vector<double> top;
  for (Eigen::Index i = 0; i < 6; ++i) top.push_back(s(i));
  top.push_back(s(s.size() - 2));
  top.push_back(s(s.size() - 1));
  const auto want = sorted_desc(alpha);
  const auto got = sorted_desc(top);
  for (std::size_t i = 0; i < want.size(); ++i) CHECK(std::abs(got[i] - want[i]) < 2e-3);
  CHECK(std::abs(k.trace() - trace_from_mixture(m)) < 1e-3);
}

TEST_CASE("weyl kernel rejects complex symbols and wrong grids") {
  const EtaParam eta(1.0);
  const Grid1D g = default_grid(eta, 64);
  SymbolGrid a = SymbolGrid::zeros(wigner_grid(g, eta));
  a.values(3, 3) = cd(0.0, 1.0);
  CHECK_THROWS_AS(weyl_kernel(a, eta), DomainError);
  CHECK_THROWS_AS(weyl_kernel(SymbolGrid::zeros(wigner_grid(g, eta)), EtaParam(0.5)), DomainError);
}

TEST_CASE("mixture norm identity") {
  const EtaParam hbar(1.0);
  const Grid1D g = default_grid(EtaParam(2.0));

  SUBCASE("identical mixtures") {
    const auto m = SpectralMixture::hermite(g, hbar, {0.6, 0.4}, {0, 1});
    const auto r = mixture_norm_identity_check(m, m);
    CHECK(r.wigner_distance == 0.0);
    CHECK(r.sums_match);
    CHECK(r.identity_holds);
    CHECK(r.lhs == r.rhs);
  }
  SUBCASE("permuted basis") {
    const auto a = SpectralMixture::hermite(g, hbar, {0.5, 0.3, 0.2}, {0, 1, 2});
    const auto b = SpectralMixture::hermite(g, hbar, {0.3, 0.2, 0.5}, {1, 2, 0});
    const auto r = mixture_norm_identity_check(a, b);
    CHECK(r.sums_match);
    CHECK(r.identity_holds);
    CHECK(std::abs(r.lhs_moyal - r.rhs_moyal) < 1e-6 * r.lhs);
    CHECK(std::abs(r.lhs_moyal - r.lhs) < 1e-6 * r.lhs);
    CHECK_FALSE(r.violation);
  }
  SUBCASE("half planck constant") {
    const EtaParam half(0.5);
    const auto a = SpectralMixture::hermite(g, half, {1.0}, {0});
    const auto b = SpectralMixture::hermite(g, hbar, {1.0}, {0});
    const auto r = mixture_norm_identity_check(a, b);
    CHECK_FALSE(r.sums_match);
    CHECK(r.wigner_distance > 0.1 * r.reference_norm);
    CHECK(r.lhs / r.rhs == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(r.lhs_moyal / r.rhs_moyal - 2.0) < 1e-6);
    CHECK_FALSE(r.identity_holds);
  }
}
