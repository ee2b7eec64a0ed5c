#include <doctest.h>

#include "lapstrip/catalog.hpp"
#include "lapstrip/transition.hpp"
#include "oracles.hpp"

using namespace lapstrip;

namespace {

PoleSet random_poles(std::mt19937_64& rng, bool mirrored = false) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PoleSet ps;
  ps.separatrix = u(rng);
  int count = 1 + static_cast<int>(rng() % 3);
  while (static_cast<int>(ps.poles.size()) < count) {
    double p = 0.3 + 9.0 * std::abs(u(rng));
    bool close = false;
    for (const auto& q : ps.poles) close |= std::abs(std::abs(q.p) - p) < 0.5;
    if (close) continue;
    PoleSpec spec;
    spec.p = mirrored ? p : p * (u(rng) < 0 ? -1 : 1);
    int order = 1 + static_cast<int>(rng() % 3);
    for (int k = 0; k < order; ++k) spec.coeffs.emplace_back(u(rng), u(rng));
    ps.poles.push_back(spec);
    if (mirrored) {
      PoleSpec twin = spec;
      twin.p = -p;
      for (auto& c : twin.coeffs) c = std::conj(c);
      ps.poles.push_back(twin);
    }
  }
  return ps;
}

cplx principal_parts(const PoleSet& ps, cplx s) {
  cplx v = 0.0;
  for (std::size_t n = 0; n < ps.poles.size(); ++n)
    for (int k = 0; k < ps.poles[n].order(); ++k)
      v += ps.poles[n].coeffs[k] / std::pow(s - ps.location(n), k + 1);
  return v;
}

// Circle radius that keeps other poles and the origin outside.
double safe_radius(const PoleSet& ps, std::size_t n) {
  double r = 0.5;
  for (std::size_t m = 0; m < ps.poles.size(); ++m)
    if (m != n) r = std::min(r, 0.4 * std::abs(ps.location(m) - ps.location(n)));
  double d0 = std::abs(ps.location(n));
  if (d0 > 1e-9) r = std::min(r, 0.4 * d0);
  return r;
}

PoleSequence geometric_sequence() {
  PoleSequence seq;
  seq.separatrix = 0.0;
  seq.at = [](std::size_t n) {
    return PoleSpec{static_cast<double>(n + 1), {std::pow(2.0, -static_cast<double>(n + 1))}};
  };
  return seq;
}

PoleSequence power_sequence(double power) {
  PoleSequence seq;
  seq.at = [power](std::size_t n) {
    double m = static_cast<double>(n + 1);
    return PoleSpec{m, {std::pow(m, -power)}};
  };
  return seq;
}

} // namespace

TEST_CASE("jump and density residues against circle integrals") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<cplx> a;
    int order = 1 + static_cast<int>(rng() % 4);
    for (int k = 0; k < order; ++k) a.emplace_back(u(rng), u(rng));
    // small |s0 t| exercises the series branch, large the closed form
    cplx s0(2.0 * u(rng), 8.0 * u(rng));
    if (trial % 2) s0 *= 0.05;
    double r = std::min(0.5, 0.5 * std::abs(s0));
    for (double t : {-2.0, 0.01, 0.7, 3.0}) {
      auto F = [&](cplx s) {
        cplx v = 0.0;
        for (int k = 0; k < order; ++k) v += a[k] / std::pow(s - s0, k + 1);
        return v;
      };
      cplx jump_ref = oracle::circle_residue(
          [&](cplx s) { return (std::exp(s * t) - 1.0) * F(s) / s; }, s0, r);
      cplx dens_ref = oracle::circle_residue([&](cplx s) { return std::exp(s * t) * F(s); }, s0, r);
      double scale = std::max(1.0, std::abs(jump_ref));
      CHECK(std::abs(jump_residue(a, s0, t) - jump_ref) < 1e-9 * scale);
      CHECK(std::abs(density_residue(a, s0, t) - dens_ref) < 1e-9 * std::max(1.0, std::abs(dens_ref)));
    }
    CHECK(jump_residue(a, s0, 0.0) == cplx(0.0));
  }
}

TEST_CASE("jump derivative is the density (property over random pole sets)") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    PoleSet ps = random_poles(rng);
    for (double t : {-1.5, -0.2, 0.6, 1.8}) {
      cplx fd = oracle::derivative([&](double x) { return transition_jump(ps, x); }, t, 1e-3);
      cplx d = transition_density(ps, t);
      CHECK(std::abs(fd - d) < 1e-7 * std::max(1.0, std::abs(d)));
    }
    CHECK(transition_jump(ps, 0.0) == cplx(0.0));
  }
}

TEST_CASE("mirrored conjugate pole sets give real transitions") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    PoleSet ps = random_poles(rng, true);
    for (double t : {-1.0, 0.5, 2.0}) {
      cplx j = transition_jump(ps, t), d = transition_density(ps, t);
      CHECK(std::abs(j.imag()) < 1e-12 * std::max(1.0, std::abs(j)));
      CHECK(std::abs(d.imag()) < 1e-12 * std::max(1.0, std::abs(d)));
    }
  }
}

TEST_CASE("empty pole set has zero transition") {
  PoleSet ps;
  CHECK(transition_jump(ps, 1.0) == cplx(0.0));
  CHECK(transition_density(ps, -2.0) == cplx(0.0));
  auto tr = make_transition(ps);
  CHECK(tr.truncation.poles_used == 0);
  CHECK(tr.density(0.3) == cplx(0.0));
}

TEST_CASE("make_transition matches the direct formulas") {
  std::mt19937_64 rng(17);
  PoleSet ps = random_poles(rng);
  auto tr = make_transition(ps);
  CHECK(tr.truncation.poles_used == ps.poles.size());
  for (double t : {-0.7, 1.1}) {
    CHECK(tr.cumulative(t) == transition_jump(ps, t));
    CHECK(tr.density(t) == transition_density(ps, t));
  }
}

TEST_CASE("numeric principal parts") {
  std::mt19937_64 rng(23);
  PoleSet ps = random_poles(rng);
  auto F = [&](cplx s) { return principal_parts(ps, s) + std::exp(s) / 3.0; };
  for (std::size_t n = 0; n < ps.poles.size(); ++n) {
    PoleSpec got = residue_numeric(F, ps.location(n), 4, safe_radius(ps, n));
    REQUIRE(got.order() == ps.poles[n].order());
    for (int k = 0; k < got.order(); ++k)
      CHECK(std::abs(got.coeffs[k] - ps.poles[n].coeffs[k]) < 1e-9);
  }
  std::vector<cplx> locs;
  for (std::size_t n = 0; n < ps.poles.size(); ++n) locs.push_back(ps.location(n));
  cplx numeric = transition_jump([&](cplx s) { return principal_parts(ps, s); }, locs, 0.8, 4, 0.2);
  CHECK(std::abs(numeric - transition_jump(ps, 0.8)) < 1e-8);
  // a regular point has no principal part
  CHECK(residue_numeric([](cplx s) { return std::exp(s); }, 0.3, 3, 0.5).coeffs.empty());
}

TEST_CASE("numeric principal parts reject bad circles") {
  auto F = [](cplx s) { return 1.0 / s + 1.0 / (s - 0.25); };
  CHECK_THROWS_AS(residue_numeric(F, 0.0, 2, 0.25), BadRadiusError);
  CHECK_THROWS_AS(residue_numeric(F, 0.0, 0, 0.1), DomainError);
  CHECK_THROWS_AS(residue_numeric(F, 0.0, 2, -1.0), DomainError);
}

TEST_CASE("convergence check") {
  CHECK(convergence_check(power_sequence(2.0)));
  CHECK(convergence_check(geometric_sequence()));
  CHECK_FALSE(convergence_check(power_sequence(1.0)));
  // square wave: a_n = 2 / (i pi n) for odd n, both signs
  PoleSequence sq;
  sq.at = [](std::size_t n) {
    double m = 2.0 * static_cast<double>(n / 2) + 1.0;
    if (n % 2) m = -m;
    return PoleSpec{m, {2.0 / (kI * oracle::pi * m)}};
  };
  CHECK_FALSE(convergence_check(sq));
  PoleSequence finite = PoleSequence::from(square_wave_pair(5).poles);
  CHECK(convergence_check(finite));
  CHECK_THROWS_AS(convergence_check(geometric_sequence(), {}), DomainError);
  CHECK_THROWS_AS(convergence_check(geometric_sequence(), {0.0}), DomainError);
}

TEST_CASE("principal series against a brute-force sum") {
  PoleSequence seq = power_sequence(2.0);
  for (cplx s : {cplx(0.5, 0.0), cplx(-0.3, 2.5)}) {
    // sum_{n<=10^6} 1 / (n^2 (s - i n)), tail below 1e-12
    cplx brute = 0.0;
    for (int n = 1000000; n >= 1; --n) {
      double m = n;
      brute += 1.0 / (m * m * (s - cplx(0, m)));
    }
    CHECK(std::abs(principal_series_eval(seq, s, 1e-12) - brute) < 1e-10);
  }
  CHECK_THROWS_AS(principal_series_eval(seq, cplx(0, 1), 1e-12), PoleError);
}

TEST_CASE("infinite transition density of a geometric pole sequence") {
  PoleSequence seq = geometric_sequence();
  SeriesValue at0 = infinite_transition_density(seq, 0.0, 1e-12);
  CHECK(std::abs(at0.value - 1.0) < 1e-11);
  CHECK(at0.truncation.poles_used > 0);
  CHECK(at0.truncation.tail_bound < 1e-12);
  SeriesValue atpi = infinite_transition_density(seq, oracle::pi, 1e-12);
  CHECK(std::abs(atpi.value + 1.0 / 3.0) < 1e-11);
  CHECK_THROWS_AS(infinite_transition_density(power_sequence(1.0), 0.5), HypothesisViolated);
}

TEST_CASE("polarity of simple determining functions") {
  std::vector<double> grid;
  for (int i = 0; i <= 100; ++i) grid.push_back(-5.0 + 0.1 * i);
  auto density = [](std::function<cplx(double)> f) {
    DeterminingFunction d;
    d.kind = Kind::Density;
    d.pieces.push_back({-kInf, kInf, f, nullptr});
    return d;
  };
  CHECK(polarity_check(density([](double t) { return cplx(std::exp(-t * t)); }), grid) ==
        Polarity::CoPositive);
  CHECK(polarity_check(density([](double t) { return cplx(-1.0 / (1 + t * t)); }), grid) ==
        Polarity::CoNegative);
  CHECK(polarity_check(density([](double t) { return cplx(std::sin(t)); }), grid) ==
        Polarity::NoPolarity);
  CHECK(polarity_check(density([](double t) { return cplx(1.0, 0.1 * t); }), grid) ==
        Polarity::NoPolarity);
  DeterminingFunction m;
  m.jumps = JumpSet({{0.5, -1.0}, {1.5, 2.0}});
  CHECK(polarity_check(m, grid) == Polarity::NoPolarity);
  CHECK(std::string(to_string(Polarity::CoNegative)) == "CoNegative");
}
