#include "lapstrip/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace lapstrip {

namespace {

bool is_nonpositive_integer(cplx z) {
  if (z.imag() != 0.0 || z.real() > 0.0) return false;
  return std::abs(z.real() - std::round(z.real())) <= 1e-13 * std::max(1.0, std::abs(z.real()));
}

int as_int(cplx z) { return static_cast<int>(std::lround(z.real())); }

// Neumaier-compensated complex sum.
struct CompensatedSum {
  double re = 0, im = 0, cre = 0, cim = 0;
  static void add1(double& s, double& c, double x) {
    double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  void add(cplx x) {
    add1(re, cre, x.real());
    add1(im, cim, x.imag());
  }
  cplx value() const { return {re + cre, im + cim}; }
};

cplx expm1c(cplx z) {
  if (std::abs(z) < 1e-3) {
    cplx term = z, sum = z;
    for (int k = 2; k < 12; ++k) {
      term *= z / static_cast<double>(k);
      sum += term;
    }
    return sum;
  }
  return std::exp(z) - 1.0;
}

double factorial(int n) { return std::tgamma(n + 1.0); }

} // namespace

// ---- zeta

namespace {

cplx zeta_euler_maclaurin(cplx s) {
  // sum_{n<N} n^{-s} + N^{1-s}/(s-1) + N^{-s}/2 + Bernoulli corrections
  constexpr int N = 32;
  static const double B2k[] = {1.0 / 6,        -1.0 / 30,     1.0 / 42,
                               -1.0 / 30,      5.0 / 66,      -691.0 / 2730,
                               7.0 / 6,        -3617.0 / 510, 43867.0 / 798,
                               -174611.0 / 330};
  CompensatedSum sum;
  for (int n = 1; n < N; ++n) sum.add(std::pow(static_cast<double>(n), -s));
  const double Nd = N;
  sum.add(std::pow(Nd, 1.0 - s) / (s - 1.0));
  sum.add(0.5 * std::pow(Nd, -s));
  cplx rising = s; // s (s+1) ... (s + 2k - 2)
  double fact = 2.0; // (2k)!
  cplx Npow = std::pow(Nd, -s - 1.0);
  for (int k = 1; k <= 10; ++k) {
    sum.add(B2k[k - 1] / fact * rising * Npow);
    rising *= (s + (2.0 * k - 1)) * (s + 2.0 * k);
    fact *= (2.0 * k + 1) * (2.0 * k + 2);
    Npow /= Nd * Nd;
  }
  return sum.value();
}

// Borwein's accelerated alternating series for eta(s).
cplx eta_borwein(cplx s) {
  const int n = std::min(350, 40 + static_cast<int>(std::ceil(2.0 * std::abs(s.imag()))));
  std::vector<double> d(n + 1);
  double term = 1.0 / n; // (n+i-1)! 4^i / ((n-i)! (2i)!) at i = 0
  double acc = term;
  d[0] = n * acc;
  for (int i = 1; i <= n; ++i) {
    term *= 4.0 * (n + i - 1) * (n - i + 1) / ((2.0 * i - 1) * (2.0 * i));
    acc += term;
    d[i] = n * acc;
  }
  CompensatedSum sum;
  for (int k = 0; k < n; ++k) {
    double sign = (k % 2 == 0) ? 1.0 : -1.0;
    sum.add(sign * (d[k] - d[n]) * std::pow(static_cast<double>(k + 1), -s));
  }
  return -sum.value() / d[n];
}

} // namespace

cplx zeta_oracle(cplx s) {
  if (s == cplx(1.0)) throw PoleError("zeta has a pole at s = 1", s, cplx(1.0));
  if (!(s.real() > 0)) throw DomainError("zeta_oracle covers Re(s) > 0 only");
  if (s.real() > 1.0) return zeta_euler_maclaurin(s);
  cplx denom = -expm1c((1.0 - s) * std::log(2.0)); // 1 - 2^{1-s}
  if (std::abs(denom) < 1e-8) return zeta_euler_maclaurin(s);
  return eta_borwein(s) / denom;
}

namespace {

cplx zeta_any(cplx s) {
  if (s.real() > 0) return zeta_oracle(s);
  // functional equation
  cplx w = 1.0 - s;
  return std::pow(2.0, s) * std::pow(kPi, s - 1.0) * std::sin(kPi * s / 2.0) *
         gamma_complex(w) * zeta_oracle(w);
}

SmoothJumpIndex zeta_jumps() {
  SmoothJumpIndex z;
  z.location = [](double u) { return std::log1p(u); };
  z.index_of = [](double t) { return std::expm1(t); };
  z.index_rate = [](double t) { return std::exp(t); };
  z.mass = [](double) { return cplx(1.0); };
  z.constant_mass = cplx(1.0);
  return z;
}

} // namespace

ZetaStripId parse_zeta_tag(const std::string& tag) {
  if (tag == "mu_1_inf") return ZetaStripId::Mu1Inf;
  if (tag == "mu_0_1") return ZetaStripId::Mu01;
  if (tag == "f_0_1") return ZetaStripId::F01;
  if (tag == "f_-1_0") return ZetaStripId::Fm10;
  throw DomainError("unknown zeta tag '" + tag + "'");
}

const char* to_string(ZetaStripId id) {
  switch (id) {
  case ZetaStripId::Mu1Inf: return "mu_1_inf";
  case ZetaStripId::Mu01: return "mu_0_1";
  case ZetaStripId::F01: return "f_0_1";
  case ZetaStripId::Fm10: return "f_-1_0";
  }
  return "?";
}

VerticalStrip zeta_strip(ZetaStripId id) {
  switch (id) {
  case ZetaStripId::Mu1Inf: return {1.0, kInf};
  case ZetaStripId::Mu01: return {0.0, 1.0};
  case ZetaStripId::F01: return {0.0, 1.0};
  case ZetaStripId::Fm10: return {-1.0, 0.0};
  }
  throw DomainError("unknown zeta strip");
}

DeterminingFunction zeta_measure(ZetaStripId id) {
  DeterminingFunction d;
  d.jumps = JumpSet(zeta_jumps());
  auto minus_exp = [](double t) { return cplx(-std::exp(t)); };
  switch (id) {
  case ZetaStripId::Mu1Inf:
    // floor(e^t) - 1/2 for t > 0, -1/2 for t < 0
    d.kind = Kind::Measure;
    d.tail_mean = [](double t) { return cplx(std::exp(t)); };
    break;
  case ZetaStripId::Mu01:
    // mu_{1,inf} - (e^t - 1)
    d.kind = Kind::Measure;
    d.pieces.push_back({-kInf, kInf, minus_exp, minus_exp});
    d.conditional = true;
    d.tail_mean = [](double) { return cplx(0.0); };
    break;
  case ZetaStripId::F01:
    // -{e^t} for t >= 0, -e^t for t < 0
    d.kind = Kind::Density;
    d.pieces.push_back({-kInf, kInf, minus_exp, minus_exp});
    d.tail_mean = [](double) { return cplx(-0.5); };
    break;
  case ZetaStripId::Fm10:
    // 1/2 - {e^t} for t >= 0, 1/2 - e^t for t < 0
    d.kind = Kind::Density;
    d.pieces.push_back({-kInf, kInf, [](double t) { return cplx(0.5 - std::exp(t)); },
                        [](double t) { return cplx(0.5 * t - std::exp(t)); }});
    d.tail_mean = [](double) { return cplx(0.0); };
    break;
  }
  return d;
}

LaplacePair zeta_pair(ZetaStripId id) {
  LaplacePair p;
  p.det = zeta_measure(id);
  p.strip = zeta_strip(id);
  if (id == ZetaStripId::Mu1Inf || id == ZetaStripId::Mu01) {
    p.F = [](cplx s) { return zeta_any(s); };
  } else {
    p.F = [](cplx s) {
      if (s == cplx(0.0)) throw PoleError("zeta(s)/s has a pole at 0", s, cplx(-0.5));
      return zeta_any(s) / s;
    };
  }
  return p;
}

// ---- periodic

PeriodicPair periodic_pair(const RealFn& f, double T, int n_range,
                           const std::vector<double>& breakpoints) {
  if (!(T > 0)) throw DomainError("period must be positive");
  if (n_range < 0) throw DomainError("n_range must be nonnegative");
  std::vector<double> cuts{0.0};
  for (double b : breakpoints)
    if (b > 0 && b < T) cuts.push_back(b);
  cuts.push_back(T);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto g = [f, cuts](cplx s) {
    cplx sum = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
      sum += integrate_interval([&](double u) { return std::exp(-s * u) * f(u); },
                                cuts[i], cuts[i + 1], 1e-14)
                 .value;
    return sum;
  };

  PeriodicPair out;
  out.F = [g, T](cplx s) {
    cplx den = -expm1c(-s * T);
    if (den == cplx(0.0)) throw PoleError("s is a pole of the periodic transform", s, g(s) / T);
    return g(s) / den;
  };
  std::vector<std::pair<double, cplx>> res;
  double biggest = 0.0;
  for (int n = -n_range; n <= n_range; ++n) {
    double p = 2 * kPi * n / T;
    cplx r = g(cplx(0.0, p)) / T;
    res.emplace_back(p, r);
    biggest = std::max(biggest, std::abs(r));
  }
  out.poles.separatrix = 0.0;
  for (auto& [p, r] : res)
    if (std::abs(r) > 1e-12 * std::max(1.0, biggest)) out.poles.poles.push_back({p, {r}});
  return out;
}

PeriodicPair square_wave_pair(int n_range) {
  // sgn(sin u) over one period, constant on (0, pi) and (pi, 2 pi)
  auto f = [](double u) { return cplx(u < kPi ? 1.0 : -1.0); };
  return periodic_pair(f, 2 * kPi, n_range, {kPi});
}

cplx cesaro_mean(const PoleSet& poles, int N, double t) {
  if (N < 1) throw DomainError("N must be at least 1");
  for (const auto& p : poles.poles)
    if (p.order() > 1) throw UnsupportedError("Cesaro means need simple poles");
  // rank poles by |p|
  std::vector<double> levels;
  for (const auto& p : poles.poles) levels.push_back(std::abs(p.p));
  std::sort(levels.begin(), levels.end());
  std::vector<double> distinct;
  for (double l : levels)
    if (distinct.empty() || l - distinct.back() > 1e-12 * std::max(1.0, l))
      distinct.push_back(l);
  auto rank = [&](double l) {
    auto it = std::lower_bound(distinct.begin(), distinct.end(), l - 1e-12 * std::max(1.0, l));
    return static_cast<int>(it - distinct.begin()) + 1;
  };
  CompensatedSum sum;
  for (std::size_t n = 0; n < poles.poles.size(); ++n) {
    const auto& p = poles.poles[n];
    if (p.coeffs.empty()) continue;
    int g = rank(std::abs(p.p));
    if (g > N) continue;
    double w = static_cast<double>(N - g + 1) / N;
    sum.add(w * density_residue(p.coeffs, poles.location(n), t));
  }
  return sum.value();
}

// ---- Gamma

namespace {

constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {0.99999999999980993,     676.5203681218851,
                                -1259.1392167224028,     771.32342877765313,
                                -176.61502916214059,     12.507343278686905,
                                -0.13857109526572012,    9.9843695780195716e-6,
                                1.5056327351493116e-7};

// log sin(pi z) without overflow for large |Im z|; only exp() of it is used.
cplx log_sin_pi(cplx z) {
  const double y = z.imag();
  if (std::abs(y) < 5.0) return std::log(std::sin(kPi * z));
  if (y > 0)
    return -kI * kPi * z + std::log(1.0 - std::exp(2.0 * kI * kPi * z)) - std::log(-2.0 * kI);
  return kI * kPi * z + std::log(1.0 - std::exp(-2.0 * kI * kPi * z)) - std::log(2.0 * kI);
}

} // namespace

cplx log_gamma(cplx z) {
  if (is_nonpositive_integer(z)) throw PoleError("Gamma has a pole here", z);
  if (z.real() < 0.5) return std::log(kPi) - log_sin_pi(z) - log_gamma(1.0 - z);
  z -= 1.0;
  cplx x = kLanczos[0];
  for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + static_cast<double>(i));
  cplx t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

cplx gamma_complex(cplx z) {
  if (is_nonpositive_integer(z)) {
    int n = -as_int(z);
    double r = ((n % 2 == 0) ? 1.0 : -1.0) / factorial(n);
    throw PoleError("Gamma has a pole here", z, cplx(r));
  }
  if (z.imag() == 0.0 && z.real() > 0 && z.real() < 170) return std::tgamma(z.real());
  return std::exp(log_gamma(z));
}

void GammaQuotientParams::validate() const {
  if (!(a.real() > 0) || !(b.real() > 0))
    throw DomainError("Gamma quotient needs Re(a) > 0 and Re(b) > 0");
}

cplx gamma_residue_left(const GammaQuotientParams& q, int n) {
  q.validate();
  double sign = (n % 2 == 0) ? 1.0 : -1.0;
  return sign * std::exp(log_gamma(q.a + static_cast<double>(n)) - log_gamma(n + 1.0) -
                         log_gamma(q.b + static_cast<double>(n)));
}

cplx gamma_residue_right(const GammaQuotientParams& q, int n) {
  q.validate();
  cplx c = q.b - q.a - static_cast<double>(n);
  if (is_nonpositive_integer(c)) return 0.0; // cancelled by Gamma(b - s)
  double sign = (n % 2 == 0) ? 1.0 : -1.0;
  // Gamma(a - s) has residue -(-1)^n / n! at s = a + n
  return -sign * std::exp(log_gamma(q.a + static_cast<double>(n)) - log_gamma(n + 1.0) -
                          log_gamma(c));
}

cplx gamma_quotient(const GammaQuotientParams& q, cplx s) {
  q.validate();
  if (is_nonpositive_integer(s)) {
    int n = -as_int(s);
    throw PoleError("Gamma(s) pole", s, gamma_residue_left(q, n));
  }
  const cplx m = q.b - q.a;
  const bool integer_gap =
      m.imag() == 0.0 && m.real() > 0 && std::abs(m.real() - std::round(m.real())) < 1e-13;
  if (integer_gap) {
    // Gamma(a - s) / Gamma(b - s) = 1 / prod_{j<m} (a + j - s)
    cplx prod = 1.0;
    for (int j = 0; j < as_int(m); ++j) prod *= q.a + static_cast<double>(j) - s;
    if (prod == cplx(0.0)) {
      cplx k = s - q.a;
      throw PoleError("pole of Gamma(a - s) / Gamma(b - s)", s,
                      gamma_residue_right(q, as_int(k)));
    }
    return gamma_complex(s) / prod;
  }
  cplx as = q.a - s;
  if (is_nonpositive_integer(as)) {
    int n = -as_int(as);
    throw PoleError("Gamma(a - s) pole", s, gamma_residue_right(q, n));
  }
  if (is_nonpositive_integer(q.b - s)) return 0.0;
  return std::exp(log_gamma(s) + log_gamma(as) - log_gamma(q.b - s));
}

namespace {

cplx series_1f1(cplx a, cplx b, cplx z) {
  CompensatedSum sum;
  cplx term = 1.0;
  sum.add(term);
  int quiet = 0;
  for (int n = 0; n < 100000; ++n) {
    term *= (a + static_cast<double>(n)) / (b + static_cast<double>(n)) * z /
            static_cast<double>(n + 1);
    sum.add(term);
    if (term == cplx(0.0)) return sum.value();
    if (std::abs(term) < 1e-16 * std::abs(sum.value())) {
      if (++quiet >= 3) return sum.value();
    } else {
      quiet = 0;
    }
  }
  throw BudgetExceeded("1F1 series did not converge", sum.value(), kInf, 100000);
}

// Large-x expansion of 1F1(a; b; -x), dropping the e^{-x} part.
bool asymptotic_1f1(cplx a, cplx b, double x, cplx& out) {
  if (is_nonpositive_integer(b - a)) return false;
  CompensatedSum sum;
  cplx term = 1.0;
  double prev = kInf;
  for (int s = 0; s < 200; ++s) {
    double mag = std::abs(term);
    if (mag > prev) return false;
    sum.add(term);
    if (mag < 1e-17 * std::abs(sum.value())) {
      out = std::exp(log_gamma(b) - log_gamma(b - a) - a * std::log(x)) * sum.value();
      return true;
    }
    prev = mag;
    term *= (a + static_cast<double>(s)) * (a - b + static_cast<double>(s + 1)) /
            (static_cast<double>(s + 1) * x);
  }
  return false;
}

} // namespace

cplx kummer_1f1(cplx a, cplx b, cplx z) {
  if (is_nonpositive_integer(b)) throw PoleError("1F1 undefined for b = 0, -1, -2, ...", b);
  if (is_nonpositive_integer(a)) return series_1f1(a, b, z);
  if (z.real() < 0) {
    if (z.imag() == 0.0 && -z.real() > 50.0) {
      cplx v;
      if (asymptotic_1f1(a, b, -z.real(), v)) return v;
    }
    // Kummer's transformation keeps the terms of one sign for real data
    return std::exp(z) * series_1f1(b - a, b, -z);
  }
  return series_1f1(a, b, z);
}

namespace {

// f_0 for x = e^{-t}
cplx gamma_f0(const GammaQuotientParams& q, double x) {
  return std::exp(log_gamma(q.a) - log_gamma(q.b)) * kummer_1f1(q.a, q.b, cplx(-x));
}

} // namespace

cplx gamma_strip_density(const GammaQuotientParams& q, int k, double t) {
  q.validate();
  const double x = std::exp(-t);
  if (k == 0) return gamma_f0(q, x);
  if (k < 0) {
    // f_{-k} = sum_{n >= k} r_n x^n with r_n the residue at s = -n
    const int kk = -k;
    if (x <= 1.0) {
      CompensatedSum sum;
      cplx term = gamma_residue_left(q, kk) * std::pow(x, kk);
      int quiet = 0;
      for (int n = kk; n < 100000; ++n) {
        sum.add(term);
        if (std::abs(term) < 1e-17 * std::abs(sum.value()) || term == cplx(0.0)) {
          if (++quiet >= 3) break;
        } else {
          quiet = 0;
        }
        term *= -(q.a + static_cast<double>(n)) / ((q.b + static_cast<double>(n)) * (n + 1.0)) * x;
      }
      return sum.value();
    }
    cplx v = gamma_f0(q, x);
    for (int n = 0; n < kk; ++n) v -= gamma_residue_left(q, n) * std::pow(x, n);
    return v;
  }
  cplx gap = q.a - q.b;
  if (gap.imag() == 0.0 && std::abs(gap.real() - std::round(gap.real())) < 1e-13)
    throw UnsupportedError("a - b is an integer: right-hand poles merge or cancel");
  if (x > 50.0) {
    // asymptotic series of f_0 with its first k terms removed; term s is
    // -rho_s e^{(a+s)t}
    CompensatedSum sum;
    double prev = kInf;
    for (int s = k; s < k + 200; ++s) {
      cplx term = -gamma_residue_right(q, s) * std::exp((q.a + static_cast<double>(s)) * t);
      double mag = std::abs(term);
      if (mag > prev) break;
      sum.add(term);
      if (mag < 1e-17 * std::abs(sum.value())) break;
      prev = mag;
    }
    return sum.value();
  }
  cplx v = gamma_f0(q, x);
  for (int n = 0; n < k; ++n)
    v += gamma_residue_right(q, n) * std::exp((q.a + static_cast<double>(n)) * t);
  return v;
}

VerticalStrip gamma_strip(const GammaQuotientParams& q, int k) {
  q.validate();
  const double ra = q.a.real();
  if (k == 0) return {0.0, ra};
  if (k < 0) return {static_cast<double>(k), k + 1.0};
  return {ra + k - 1.0, ra + k};
}

LaplacePair gamma_pair(const GammaQuotientParams& q, int k) {
  LaplacePair p;
  p.strip = gamma_strip(q, k);
  p.F = [q](cplx s) { return gamma_quotient(q, s); };
  p.det.kind = Kind::Density;
  p.det.pieces.push_back({-kInf, kInf, [q, k](double t) { return gamma_strip_density(q, k, t); },
                          nullptr});
  return p;
}

LaplacePair integer_gamma_pair(double a, int m, int k) {
  if (!(a > 0)) throw DomainError("a must be positive");
  if (m < 1 || k < 0 || k > m) throw DomainError("need m >= 1 and 0 <= index <= m");
  // partial fractions: 1 / prod_j (a + j - s) = sum_j c_j / (a + j - s)
  std::vector<double> c(m);
  for (int j = 0; j < m; ++j) {
    double prod = 1.0;
    for (int i = 0; i < m; ++i)
      if (i != j) prod *= static_cast<double>(i - j);
    c[j] = 1.0 / prod;
  }
  // Poles left of the strip contribute -c_j e^{(a+j)t} on t > 0, the others
  // c_j e^{(a+j)t} on t < 0.
  auto left_density = [c, a, k](double t) {
    cplx v = 0.0;
    for (std::size_t j = k; j < c.size(); ++j) v += c[j] * std::exp((a + j) * t);
    return v;
  };
  auto left_primitive = [c, a, k](double t) {
    cplx v = 0.0;
    for (std::size_t j = k; j < c.size(); ++j) v += c[j] * std::exp((a + j) * t) / (a + j);
    return v;
  };
  auto right_density = [c, a, k](double t) {
    cplx v = 0.0;
    for (int j = 0; j < k; ++j) v -= c[j] * std::exp((a + j) * t);
    return v;
  };
  auto right_primitive = [c, a, k](double t) {
    cplx v = 0.0;
    for (int j = 0; j < k; ++j) v -= c[j] * std::exp((a + j) * t) / (a + j);
    return v;
  };
  LaplacePair p;
  p.det.kind = Kind::Density;
  if (k < m) p.det.pieces.push_back({-kInf, 0.0, left_density, left_primitive});
  if (k > 0) p.det.pieces.push_back({0.0, kInf, right_density, right_primitive});
  p.strip = {k == 0 ? -kInf : a + k - 1.0, k == m ? kInf : a + k};
  p.F = [a, m](cplx s) {
    cplx prod = 1.0;
    for (int j = 0; j < m; ++j) prod *= a + j - s;
    if (prod == cplx(0.0)) throw PoleError("pole of the rational quotient", s);
    return 1.0 / prod;
  };
  return p;
}

} // namespace lapstrip
