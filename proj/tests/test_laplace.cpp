#include <doctest.h>

#include "lapstrip/laplace.hpp"
#include "oracles.hpp"

using namespace lapstrip;

namespace {

// e^{-t} H(t): F = 1/(s+1) on Re s > -1
LaplacePair decaying_exponential() {
  LaplacePair p;
  p.F = [](cplx s) { return 1.0 / (s + 1.0); };
  p.strip = {-1.0, kInf};
  p.det.kind = Kind::Density;
  p.det.pieces.push_back({0.0, kInf, [](double t) { return cplx(std::exp(-t)); },
                          [](double t) { return cplx(-std::exp(-t)); }});
  return p;
}

// e^{-|t|}: F = 2/(1-s^2) on -1 < Re s < 1
LaplacePair two_sided() {
  LaplacePair p;
  p.F = [](cplx s) { return 2.0 / (1.0 - s * s); };
  p.strip = {-1.0, 1.0};
  p.det.kind = Kind::Density;
  p.det.pieces.push_back({-kInf, 0.0, [](double t) { return cplx(std::exp(t)); }, nullptr});
  p.det.pieces.push_back({0.0, kInf, [](double t) { return cplx(std::exp(-t)); }, nullptr});
  return p;
}

} // namespace

TEST_CASE("transform of closed-form pairs") {
  for (auto p : {decaying_exponential(), two_sided()})
    for (cplx s : {cplx(0.2, 0.0), cplx(-0.5, 3.0), cplx(0.9, -7.0)}) {
      auto r = laplace_transform(p.det, s, p.strip);
      CHECK(std::abs(r.value - p.F(s)) < 1e-9);
      CHECK(r.abs_error_estimate < 1e-8);
    }
}

TEST_CASE("transform rejects points outside the strip") {
  auto p = two_sided();
  CHECK_THROWS_AS(laplace_transform(p.det, cplx(1.0, 0.0), p.strip), DomainError);
  CHECK_THROWS_AS(laplace_transform(p.det, cplx(-3.0, 1.0), p.strip), DomainError);
}

TEST_CASE("linearity: transform of a sum is the sum of transforms") {
  auto a = decaying_exponential(), b = two_sided();
  DeterminingFunction sum = b.det;
  sum.pieces[1].density = [](double t) { return cplx(2.0 * std::exp(-t)); };
  cplx s(0.4, 1.1);
  VerticalStrip both(-1.0, 1.0);
  CHECK(std::abs(laplace_transform(sum, s, both).value -
                 laplace_transform(a.det, s, both).value - laplace_transform(b.det, s, both).value) <
        1e-9);
}

TEST_CASE("Bromwich inversion recovers cumulative and density") {
  auto p = decaying_exponential();
  for (double t : {0.5, 1.0, 3.0}) {
    auto c = bromwich_invert(p.F, 0.5, t);
    CHECK(std::abs(c.value - (1.0 - std::exp(-t))) < 1e-6);
    BromwichOptions d;
    d.target = InversionTarget::Density;
    auto f = bromwich_invert([](cplx s) { return 1.0 / ((s + 1.0) * (s + 1.0)); }, 0.5, t, d);
    CHECK(std::abs(f.value - t * std::exp(-t)) < 1e-6);
  }
  // cumulative is zero to the left of the support
  CHECK(std::abs(bromwich_invert(p.F, 0.5, -1.0).value) < 1e-6);
}

TEST_CASE("inversion returns the midpoint at a jump") {
  BromwichOptions d;
  d.target = InversionTarget::Density;
  auto r = bromwich_invert([](cplx s) { return 1.0 / s; }, 1.0, 0.0, d);
  CHECK(std::abs(r.value - 0.5) < 1e-6);
  auto shifted = bromwich_invert([](cplx s) { return std::exp(-s) / s; }, 1.0, 1.0, d);
  CHECK(std::abs(shifted.value - 0.5) < 1e-6);
}

TEST_CASE("Bromwich argument checks") {
  auto p = decaying_exponential();
  CHECK_THROWS_AS(bromwich_invert(p.F, 0.0, 1.0), DomainError);
  BromwichOptions bad;
  bad.tol = -1;
  CHECK_THROWS_AS(bromwich_invert(p.F, 0.5, 1.0, bad), DomainError);
}

TEST_CASE("vertical L2 norm matches Plancherel") {
  // |1/(iy+1)|^2 integrates to pi
  CHECK(std::abs(vertical_l2([](cplx s) { return 1.0 / (s + 1.0); }, 0.0) - oracle::pi) < 1e-8);
  // int |F(iy)|^2 dy = 2 pi int |f|^2 dt; e^{-|t|} gives 2 pi
  auto p = two_sided();
  CHECK(std::abs(vertical_l2(p.F, 0.0) - 2.0 * oracle::pi) < 1e-8);
}

TEST_CASE("growth diagnostic separates bounded from doubly exponential") {
  VerticalStrip strip(0.0, 1.0);
  auto ok = pl_diagnostic([](cplx s) { return 1.0 / (s + 2.0); }, strip, 40.0, 32);
  CHECK(ok.satisfied == Ternary::Yes);
  CHECK(ok.K < ok.K_limit);

  // log|F| = e^{10|y|} grows faster than pi / width allows
  auto fast = pl_diagnostic(nullptr, strip, 5.0, 32,
                            [](cplx s) { return std::exp(10.0 * std::abs(s.imag())); });
  CHECK(fast.satisfied == Ternary::Violated);
  CHECK(fast.K_fit == doctest::Approx(10.0).epsilon(1e-6));
  CHECK_FALSE(fast.witnesses.empty());

  CHECK_THROWS_AS(pl_diagnostic([](cplx) { return cplx(1.0); }, strip, -1.0, 32), DomainError);
}
