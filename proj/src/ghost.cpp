#include "lapstrip/ghost.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

namespace lapstrip {

namespace {

using LogMag = std::function<double(cplx)>;

constexpr double kTauCap = 40.0;

double log_g(cplx z) { return std::exp(-z * z).real(); }

cplx left_arm(double tau) { return {-kPi / (2 * tau), tau}; }
cplx right_arm(double tau) { return {kPi / (2 * tau), tau}; }

ContourSegment left_arm_segment(double top, double bottom) {
  ContourSegment s;
  s.z = [](double tau) { return left_arm(tau); };
  s.dz = [](double tau) { return cplx(kPi / (2 * tau * tau), 1.0); };
  s.u0 = top;
  s.u1 = bottom;
  return s;
}

ContourSegment right_arm_segment(double bottom, double top) {
  ContourSegment s;
  s.z = [](double tau) { return right_arm(tau); };
  s.dz = [](double tau) { return cplx(-kPi / (2 * tau * tau), 1.0); };
  s.u0 = bottom;
  s.u1 = top;
  return s;
}

// Height above `from` where the integrand on an arm falls below the floor.
double arm_top(bool right, double from, const LogMag& lm, double log_floor) {
  double tau = from;
  for (double step = 0.01; tau < kTauCap; tau += step) {
    cplx z = right ? right_arm(tau) : left_arm(tau);
    if (lm(z) < log_floor) return std::max(tau, from + 1e-3);
    step = std::min(0.05, step * 1.05);
  }
  throw InternalError("contour arm does not decay; integrand grows too fast");
}

ContourPath gamma_path(double M, const LogMag& lm, double log_floor) {
  ContourPath p;
  p.orientation = Orientation::Counterclockwise;
  p.open_at_start = p.open_at_end = true;
  double tl = arm_top(false, M, lm, log_floor);
  double tr = arm_top(true, M, lm, log_floor);
  p.segments.push_back(left_arm_segment(tl, M));
  p.segments.push_back(line_segment(left_arm(M), right_arm(M)));
  p.segments.push_back(right_arm_segment(M, tr));
  return p;
}

double peak(const ContourPath& path, const LogMag& lm, int samples = 128) {
  double best = -kInf;
  for (const auto& s : path.segments)
    for (int i = 0; i <= samples; ++i) {
      double u = s.u0 + (s.u1 - s.u0) * i / samples;
      best = std::max(best, lm(s.z(u)));
    }
  return best;
}

cplx integrate_path(const ContourPath& path, const ComplexFn& f, double pk, double tol) {
  QuadOptions q;
  q.abs_tol = tol * std::exp(std::min(pk, 700.0));
  if (q.abs_tol < 1e-300) q.abs_tol = 1e-300;
  q.max_evals = 4'000'000;
  return integrate_contour(path, f, q).value;
}

// Saddle of exp(-z^2) + t z near the positive-real-part branch.
bool saddle_point(double t, cplx& z) {
  double tau = 1.0;
  for (int i = 0; i < 60; ++i) tau = std::sqrt(std::max(std::log(t / (2 * tau)), 0.1));
  z = cplx(kPi / (4 * tau), tau);
  for (int i = 0; i < 80; ++i) {
    cplx e = std::exp(-z * z);
    cplx d = -2.0 * z * e + t;
    cplx dd = (4.0 * z * z - 2.0) * e;
    if (dd == cplx(0.0)) return false;
    cplx step = d / dd;
    z -= step;
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    if (std::abs(step) < 1e-14 * std::abs(z)) break;
  }
  return z.real() > 0 && z.imag() > 0 && std::abs(-2.0 * z * std::exp(-z * z) + t) < 1e-8 * t;
}

// Left arm down to the saddle height, across through the saddle, then up
// the right arm from the best height.
bool saddle_path(double t, const LogMag& lm, double log_floor, ContourPath& out) {
  cplx z0;
  if (!saddle_point(t, z0)) return false;
  const double ta = z0.imag();
  cplx A = left_arm(ta);
  if (!(A.real() < z0.real())) return false;
  double best = kInf, best_tb = ta + 0.5;
  for (int i = 1; i <= 40; ++i) {
    double tb = ta + 3.0 * i / 40;
    cplx B = right_arm(tb);
    double m = -kInf;
    for (int j = 0; j <= 64; ++j) m = std::max(m, lm(z0 + (B - z0) * (j / 64.0)));
    if (m < best) {
      best = m;
      best_tb = tb;
    }
  }
  ContourPath p;
  p.orientation = Orientation::Counterclockwise;
  p.open_at_start = p.open_at_end = true;
  double tl = arm_top(false, ta, lm, log_floor);
  double tr = arm_top(true, best_tb, lm, log_floor);
  p.segments.push_back(left_arm_segment(tl, ta));
  p.segments.push_back(line_segment(A, z0));
  p.segments.push_back(line_segment(z0, right_arm(best_tb)));
  p.segments.push_back(right_arm_segment(best_tb, tr));
  out = std::move(p);
  return true;
}

double distance_to_path(const ContourPath& path, cplx s) {
  double best = kInf;
  for (const auto& seg : path.segments) {
    const int n = 2000;
    int bi = 0;
    double bd = kInf;
    for (int i = 0; i <= n; ++i) {
      double d = std::abs(seg.z(seg.u0 + (seg.u1 - seg.u0) * i / n) - s);
      if (d < bd) {
        bd = d;
        bi = i;
      }
    }
    // golden-section refinement around the best sample
    double h = (seg.u1 - seg.u0) / n;
    double lo = seg.u0 + h * std::max(bi - 1, 0), hi = seg.u0 + h * std::min(bi + 1, n);
    if (lo > hi) std::swap(lo, hi);
    for (int it = 0; it < 80; ++it) {
      double m1 = lo + (hi - lo) * 0.381966, m2 = lo + (hi - lo) * 0.618034;
      if (std::abs(seg.z(m1) - s) < std::abs(seg.z(m2) - s))
        hi = m2;
      else
        lo = m1;
    }
    bd = std::min(bd, std::abs(seg.z(0.5 * (lo + hi)) - s));
    best = std::min(best, bd);
  }
  return best;
}

double log_floor(const GhostConfig& cfg) { return std::log(cfg.tau_floor); }

} // namespace

void GhostConfig::validate() const {
  if (!(M > 0) || !std::isfinite(M)) throw DomainError("M must be positive");
  if (!(tau_floor > 0) || !(tau_floor < 1)) throw DomainError("tau_floor must lie in (0, 1)");
  if (!(tol > 0)) throw DomainError("tol must be positive");
}

ContourPath gamma_m_path(const GhostConfig& cfg) {
  cfg.validate();
  return gamma_path(cfg.M, log_g, log_floor(cfg));
}

bool in_region(cplx s, double M) {
  return s.imag() > M && std::abs(s.real()) < kPi / (2 * s.imag());
}

double distance_to_gamma(cplx s, double M) {
  ContourPath p;
  double top = std::max(M + 1.0, s.imag() + std::abs(s) + 5.0);
  p.segments.push_back(left_arm_segment(top, M));
  p.segments.push_back(line_segment(left_arm(M), right_arm(M)));
  p.segments.push_back(right_arm_segment(M, top));
  return distance_to_path(p, s);
}

cplx ghost_I(cplx s, const GhostConfig& cfg) {
  cfg.validate();
  LogMag lm = [s](cplx z) { return log_g(z) - std::log(std::abs(s - z)); };
  ContourPath path = gamma_path(cfg.M, lm, log_floor(cfg));
  if (distance_to_path(path, s) < 1e-8) {
    std::ostringstream os;
    os << "s = " << s << " lies on gamma_M for M = " << cfg.M << "; use another M";
    throw NearSingularityError(os.str());
  }
  auto f = [s](cplx z) { return std::exp(std::exp(-z * z)) / (s - z); };
  return integrate_path(path, f, peak(path, lm), cfg.tol) / (2 * kPi * kI);
}

GhostParts ghost_parts(cplx s, const GhostConfig& cfg) {
  GhostParts p;
  p.inside = in_region(s, cfg.M);
  p.exponent = std::exp(-s * s);
  p.I = ghost_I(s, cfg);
  return p;
}

cplx ghost_F(cplx s, const GhostConfig& cfg) {
  GhostParts p = ghost_parts(s, cfg);
  return p.inside ? std::exp(p.exponent) + p.I : p.I;
}

double ghost_log_abs(cplx s, const GhostConfig& cfg) {
  GhostParts p = ghost_parts(s, cfg);
  if (!p.inside) return std::log(std::abs(p.I));
  if (p.exponent.real() < 700.0) return std::log(std::abs(std::exp(p.exponent) + p.I));
  return p.exponent.real() + std::log(std::abs(1.0 + p.I * std::exp(-p.exponent)));
}

double ghost_I_bound_constant(const GhostConfig& cfg) {
  ContourPath path = gamma_m_path(cfg);
  QuadOptions q;
  q.abs_tol = 1e-12;
  double total = 0.0;
  for (const auto& seg : path.segments) {
    total += integrate_interval(
                 [&](double u) {
                   return cplx(std::exp(log_g(seg.z(u))) * std::abs(seg.dz(u)));
                 },
                 std::min(seg.u0, seg.u1), std::max(seg.u0, seg.u1), q)
                 .value.real();
  }
  return total / (2 * kPi);
}

cplx ghost_density(double t, int k, const GhostConfig& cfg) {
  cfg.validate();
  if (k < 0) throw DomainError("derivative order must be nonnegative");
  if (t < 0) {
    // g(-conj z) = conj g(z) and the contour is symmetric about the axis
    cplx v = ghost_density(-t, k, cfg);
    return (k % 2 == 0 ? -1.0 : 1.0) * std::conj(v);
  }
  LogMag lm = [t, k](cplx z) {
    return log_g(z) + t * z.real() + (k > 0 ? k * std::log(std::abs(z)) : 0.0);
  };
  ContourPath path = gamma_path(cfg.M, lm, log_floor(cfg));
  double pk = peak(path, lm);
  if (cfg.adaptive && t > 2.0) {
    ContourPath alt;
    if (saddle_path(t, lm, log_floor(cfg), alt)) {
      double pa = peak(alt, lm);
      if (pa < pk) {
        path = std::move(alt);
        pk = pa;
      }
    }
  }
  auto f = [t, k](cplx z) {
    cplx v = std::exp(std::exp(-z * z) + z * t);
    for (int i = 0; i < k; ++i) v *= z;
    return v;
  };
  return integrate_path(path, f, pk, cfg.tol) / (2 * kPi * kI);
}

QuadResult ghost_laplace(cplx s, const GhostConfig& cfg) {
  const double sigma = s.real();
  if (sigma == 0.0) throw DomainError("no Laplace representation on Re(s) = 0");
  const double dir = sigma > 0 ? 1.0 : -1.0;
  auto integrand = [&](double t) { return std::exp(-s * t) * ghost_density(t, 0, cfg); };
  // cut where the integrand has decayed for good
  double T = 8.0;
  int quiet = 0;
  for (;; T += 8.0) {
    if (T > 4096) throw DivergenceError("ghost density does not decay against e^{-st}");
    double m = std::abs(integrand(dir * T));
    if (m < 1e-14) {
      if (++quiet >= 3) break;
    } else {
      quiet = 0;
    }
  }
  QuadResult out;
  QuadOptions q;
  q.abs_tol = 1e-9 / (T / 8.0);
  q.max_evals = 2'000'000;
  for (double a = 0; a < T; a += 8.0) {
    QuadResult r = integrate_interval(integrand, dir * a, dir * (a + 8.0), q);
    out.value += r.value;
    out.abs_error_estimate += r.abs_error_estimate;
    out.evaluations += r.evaluations;
  }
  return out;
}

namespace {

// f on the fixed quadrature nodes of heat_spectral, shared across calls.
cplx cached_density(double lambda, const GhostConfig& cfg) {
  static std::mutex mu;
  static std::map<std::tuple<double, double, double, bool, double>, cplx> cache;
  double key = std::abs(lambda);
  auto id = std::make_tuple(key, cfg.M, cfg.tau_floor, cfg.adaptive, cfg.tol);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(id);
    if (it != cache.end()) return lambda < 0 ? -std::conj(it->second) : it->second;
  }
  cplx v = ghost_density(key, 0, cfg);
  {
    std::lock_guard<std::mutex> lock(mu);
    if (cache.size() > 200000) cache.clear();
    cache.emplace(id, v);
  }
  return lambda < 0 ? -std::conj(v) : v;
}

constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525634290, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr double kWg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

// GK21 on fixed dyadic panels so the nodes repeat between calls.
cplx fixed_panel(const RealFn& f, double a, double b, double tol, int depth) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  cplx fc = f(c);
  cplx k = fc * kWgk[10], g = 0.0;
  for (int j = 0; j < 10; ++j) {
    cplx s = f(c - h * kXgk[j]) + f(c + h * kXgk[j]);
    k += kWgk[j] * s;
    if (j % 2 == 1) g += kWg[j / 2] * s;
  }
  k *= h;
  g *= h;
  if (std::abs(k - g) <= tol || depth >= 12) return k;
  return fixed_panel(f, a, c, tol / 2, depth + 1) + fixed_panel(f, c, b, tol / 2, depth + 1);
}

} // namespace

cplx heat_spectral(double x, double t, const GhostConfig& cfg) {
  cfg.validate();
  if (!(t > 0)) throw DomainError("heat_spectral needs t > 0");
  // envelope |f(lambda)| <= C e^{pi |lambda| / 2} against e^{-t lambda^2}
  double C = 0.0;
  for (double l = 0.0; l <= 2.0; l += 0.5)
    C = std::max(C, std::abs(cached_density(l, cfg)) * std::exp(-kPi * l / 2));
  C *= 2.0;
  const double tail_tol = 1e-13;
  double L = std::ceil(std::max(10.0, 6.0 / std::sqrt(t)));
  auto tail = [&](double L) {
    double slope = 2 * t * L - kPi / 2;
    if (slope <= 0) return kInf;
    return 2 * C * std::exp(-t * L * L + kPi * L / 2) / slope;
  };
  while (tail(L) > tail_tol) L += 1.0;
  auto f = [&](double l) {
    return std::exp(-t * l * l) * std::exp(kI * (x * l)) * cached_density(l, cfg);
  };
  const double width = 0.5;
  const int panels = static_cast<int>(std::ceil(2 * L / width));
  cplx sum = 0.0;
  for (int i = 0; i < panels; ++i) {
    double a = -L + i * width;
    sum += fixed_panel(f, a, a + width, 1e-13 / panels, 0);
  }
  return sum;
}

cplx heat_contour(double x, double t, const GhostConfig& cfg) {
  cfg.validate();
  if (!(t > 0)) throw DomainError("heat_contour needs t > 0");
  auto expo = [x, t](cplx z) {
    cplx w = x - kI * z;
    return -w * w / (4 * t);
  };
  LogMag lm = [expo](cplx z) { return log_g(z) + expo(z).real(); };
  const double fl = log_floor(cfg);
  ContourPath path;
  double pk = kInf;
  if (cfg.adaptive) {
    for (double M = 0.6; M <= 2.0 + 1e-9; M += 0.05) {
      ContourPath p;
      try {
        p = gamma_path(M, lm, fl);
      } catch (const InternalError&) {
        continue;
      }
      double m = peak(p, lm, 64);
      if (m < pk) {
        pk = m;
        path = std::move(p);
      }
    }
    pk = peak(path, lm);
  } else {
    path = gamma_path(cfg.M, lm, fl);
    pk = peak(path, lm);
  }
  auto f = [expo](cplx z) { return std::exp(std::exp(-z * z) + expo(z)); };
  return integrate_path(path, f, pk, cfg.tol) / (std::sqrt(4 * kPi * t) * kI);
}

double heat_residual(const HeatFn& H, double x, double t, double h) {
  if (!(h > 0)) throw DomainError("step must be positive");
  if (!(t - h > 0)) throw DomainError("stencil leaves t > 0");
  cplx c = H(x, t);
  cplx dt = (H(x, t + h) - H(x, t - h)) / (2 * h);
  cplx dxx = (H(x + h, t) - 2.0 * c + H(x - h, t)) / (h * h);
  return std::abs(dt - dxx) / std::max(1.0, std::abs(c));
}

} // namespace lapstrip
