#include <doctest.h>

#include "lapstrip/ghost.hpp"
#include "oracles.hpp"

using namespace lapstrip;

namespace {

// (1/2 pi i) int over gamma_M of exp(e^{-z^2}) h(z) dz by Simpson's rule on
// each of the three pieces; the arms are cut at tau = M + 3 where the
// integrand is far below double precision.
cplx contour_oracle(double M, const std::function<cplx(cplx)>& h) {
  auto g = [&](cplx z) { return std::exp(std::exp(-z * z)) * h(z); };
  const double top = M + 3.0, half = oracle::pi / (2 * M);
  auto left = [&](double tau) {
    cplx z(-oracle::pi / (2 * tau), tau), dz(oracle::pi / (2 * tau * tau), 1.0);
    return g(z) * dz;
  };
  auto right = [&](double tau) {
    cplx z(oracle::pi / (2 * tau), tau), dz(-oracle::pi / (2 * tau * tau), 1.0);
    return g(z) * dz;
  };
  auto bottom = [&](double sigma) { return g(cplx(sigma, M)); };
  cplx total = -oracle::simpson(left, M, top, 20000) + oracle::simpson(bottom, -half, half, 20000) +
               oracle::simpson(right, M, top, 20000);
  return total / (2 * oracle::pi * kI);
}

} // namespace

TEST_CASE("third derivative at the origin is gamma / 2") {
  CHECK(std::abs(ghost_density(0.0, 3) - oracle::euler_gamma / 2) < 1e-10);
}

TEST_CASE("density against an independent contour integral") {
  for (double t : {0.0, 0.7, 1.5, -1.2}) {
    cplx ref = contour_oracle(1.0, [t](cplx z) { return std::exp(z * t); });
    CHECK(std::abs(ghost_density(t, 0) - ref) < 1e-9 * std::max(1.0, std::abs(ref)));
    cplx ref2 = contour_oracle(1.0, [t](cplx z) { return z * z * std::exp(z * t); });
    CHECK(std::abs(ghost_density(t, 2) - ref2) < 1e-9 * std::max(1.0, std::abs(ref2)));
  }
}

TEST_CASE("Cauchy integral against an independent contour integral") {
  for (cplx s : {cplx(0.5, 0.0), cplx(-1.0, 0.4), cplx(0.2, 2.0), cplx(1.5, -0.7)}) {
    cplx ref = contour_oracle(1.0, [s](cplx z) { return 1.0 / (s - z); });
    CHECK(std::abs(ghost_I(s) - ref) < 1e-9);
  }
}

TEST_CASE("conjugate symmetry of the derivatives") {
  for (int k = 0; k <= 3; ++k)
    for (double t : {0.5, 1.3, 2.5}) {
      cplx a = ghost_density(-t, k), b = ghost_density(t, k);
      double sign = (k + 1) % 2 ? -1.0 : 1.0;
      CHECK(std::abs(a - sign * std::conj(b)) < 1e-9 * std::max(1.0, std::abs(b)));
    }
}

TEST_CASE("contour geometry") {
  GhostConfig cfg;
  ContourPath path = gamma_m_path(cfg);
  REQUIRE(path.segments.size() == 3);
  CHECK(path.orientation == Orientation::Counterclockwise);
  cplx start = path.segments.front().start(), end = path.segments.back().end();
  CHECK(start.real() < 0);
  CHECK(start.imag() > 1.0);
  CHECK(end.real() > 0);
  CHECK(end.imag() > 1.0);
  CHECK(std::abs(path.segments[1].start() - cplx(-oracle::pi / 2, 1.0)) < 1e-12);
  CHECK(in_region({0.0, 2.0}, 1.0));
  CHECK_FALSE(in_region({1.0, 2.0}, 1.0));
  CHECK_FALSE(in_region({0.0, 0.5}, 1.0));
  CHECK(distance_to_gamma({0.0, 0.0}, 1.0) == doctest::Approx(1.0));
  CHECK(distance_to_gamma({oracle::pi / 3, 1.5}, 1.0) < 1e-12);
}

TEST_CASE("F does not depend on the contour parameter") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> re(-1.5, 1.5), im(-1.0, 2.2);
  int across = 0;
  for (int i = 0; i < 12; ++i) {
    cplx s(re(rng), im(rng));
    if (distance_to_gamma(s, 0.9) < 0.05 || distance_to_gamma(s, 1.4) < 0.05) continue;
    GhostConfig a, b;
    a.M = 0.9;
    b.M = 1.4;
    across += in_region(s, 0.9) != in_region(s, 1.4);
    cplx Fa = ghost_F(s, a), Fb = ghost_F(s, b);
    CHECK(std::abs(Fa - Fb) < 1e-9 * std::max(1.0, std::abs(Fa)));
  }
  CHECK(across > 0);
  // explicit term dominates high on the imaginary axis
  GhostConfig low, high;
  high.M = 2.02;
  cplx s(0.0, 2.0);
  CHECK(std::abs(ghost_F(s, low) / ghost_F(s, high) - 1.0) < 1e-12);
  CHECK(std::abs(ghost_log_abs(s) - std::log(std::abs(ghost_F(s)))) < 1e-12);
}

TEST_CASE("log magnitude without overflow") {
  cplx s(0.0, 25.0); // e^{-s^2} = e^{625}, so |F| itself overflows
  double la = ghost_log_abs(s);
  CHECK(std::isfinite(la));
  CHECK(la == doctest::Approx(std::exp(625.0)).epsilon(1e-12));
}

TEST_CASE("Cauchy integral bound") {
  double A = ghost_I_bound_constant();
  CHECK(A > 0);
  for (cplx s : {cplx(0.3, 0.1), cplx(-2.0, 1.2), cplx(0.0, 10.0), cplx(3.0, -4.0)})
    CHECK(std::abs(ghost_I(s)) <= A / distance_to_gamma(s, 1.0) * (1 + 1e-9));
}

TEST_CASE("one-sided Laplace representations of F") {
  for (double s : {0.7, -0.7, 1.5, -1.5}) {
    QuadResult r = ghost_laplace(s);
    cplx F = ghost_F(s);
    CHECK(std::abs(r.value - F) < 1e-8 * std::max(1.0, std::abs(F)));
  }
}

TEST_CASE("singular and invalid inputs") {
  CHECK_THROWS_AS(ghost_I(cplx(oracle::pi / 3, 1.5)), NearSingularityError);
  GhostConfig bad;
  bad.M = -1.0;
  CHECK_THROWS_AS(ghost_F(0.5, bad), DomainError);
  GhostConfig floor;
  floor.tau_floor = 2.0;
  CHECK_THROWS_AS(ghost_density(0.0, 0, floor), DomainError);
}

TEST_CASE("heat function: two forms agree and solve the heat equation") {
  HeatFn spectral = [](double x, double t) { return heat_spectral(x, t); };
  HeatFn contour = [](double x, double t) { return heat_contour(x, t); };
  for (double x : {-0.8, 0.0, 0.6})
    for (double t : {0.25, 0.9}) {
      cplx a = heat_spectral(x, t), b = heat_contour(x, t);
      CHECK(std::abs(a - b) < 1e-8 * std::max(1.0, std::abs(a)));
      CHECK(heat_residual(contour, x, t) < 1e-4);
      CHECK(heat_residual(spectral, x, t) < 1e-4);
    }
  CHECK(std::abs(heat_contour(0, 0.05)) < std::abs(heat_contour(0, 0.1)));
}

TEST_CASE("heat residual on exact and non-solutions") {
  HeatFn exact = [](double x, double t) { return cplx(std::exp(-t) * std::sin(x)); };
  HeatFn gauss = [](double x, double t) {
    return cplx(std::exp(-x * x / (4 * t)) / std::sqrt(4 * oracle::pi * t));
  };
  HeatFn wrong = [](double x, double t) { return cplx(x * x + t); };
  CHECK(heat_residual(exact, 0.4, 1.0) < 1e-6);
  CHECK(heat_residual(gauss, 0.3, 0.5) < 1e-5);
  CHECK(heat_residual(wrong, 0.3, 0.5) > 0.5);
}
