#include <algorithm>
#include <cmath>

#include "lapstrip/quadrature.hpp"

namespace lapstrip {

namespace {

cplx expm1c(cplx z) {
  if (std::abs(z) < 1e-5) return z * (1.0 + z * (0.5 + z / 6.0));
  return std::exp(z) - 1.0;
}

// Integral of exp(-s t) over (a, b); either end may be infinite.
cplx exp_integral(cplx s, double a, double b) {
  if (a == b) return 0.0;
  if (std::isinf(b) && b > 0) {
    if (!(s.real() > 0)) throw DivergenceError("exp(-st) not integrable at +inf");
    if (std::isinf(a)) throw DivergenceError("exp(-st) not integrable on the line");
    return std::exp(-s * a) / s;
  }
  if (std::isinf(a) && a < 0) {
    if (!(s.real() < 0)) throw DivergenceError("exp(-st) not integrable at -inf");
    return -std::exp(-s * b) / s;
  }
  if (s == cplx(0.0)) return b - a;
  // e^{-sa} (1 - e^{-s(b-a)}) / s without cancellation for small s(b-a)
  return -std::exp(-s * a) * expm1c(-s * (b - a)) / s;
}

// e^{-st} v without overflow when e^{-st} is huge and v is tiny.
cplx kernel_times(cplx s, double t, cplx v) {
  if (v == cplx(0.0)) return 0.0;
  cplx e = std::exp(-s * t);
  if (std::isfinite(e.real()) && std::isfinite(e.imag())) return e * v;
  return std::exp(-s * t + std::log(v));
}

struct Acc {
  cplx value = 0.0;
  double err = 0.0;
  long evals = 0;

  void add(const QuadResult& r) {
    value += r.value;
    err += r.abs_error_estimate;
    evals += r.evaluations;
  }
};

QuadOptions quad_opts(const StieltjesOptions& opt, double tol, const Acc& acc) {
  QuadOptions q;
  q.abs_tol = tol;
  q.max_evals = std::max<long>(1000, opt.max_evals - acc.evals);
  return q;
}

// Smooth pieces restricted to (-inf, cut).
void add_pieces(const DeterminingFunction& mu, cplx s, double cut,
                const StieltjesOptions& opt, double tol, Acc& acc) {
  for (const auto& p : mu.pieces) {
    double hi = std::min(p.hi, cut);
    if (!(p.lo < hi)) continue;
    const auto& d = p.density;
    acc.add(integrate_interval([&](double t) { return kernel_times(s, t, d(t)); },
                               p.lo, hi, quad_opts(opt, tol, acc)));
  }
}

// Cumulative M(t) = mu((-inf, t)) on an interval free of jumps, anchored at
// a point where the value is known.
struct Cumulative {
  const DeterminingFunction* mu;
  double anchor;
  cplx base;
  cplx operator()(double t) const {
    return base + mu->smooth_integral(anchor, t);
  }
};

// e^{-s T} M(T-) + s * integral_{-inf}^{T} e^{-st} M(t) dt, where the jumps
// before T are given in increasing order.
void add_by_parts(const DeterminingFunction& mu, cplx s,
                  const std::vector<Jump>& jumps, double T,
                  const StieltjesOptions& opt, double tol, Acc& acc) {
  std::vector<double> cuts;
  for (const auto& j : jumps) cuts.push_back(j.location);
  for (const auto& p : mu.pieces) {
    if (std::isfinite(p.lo) && p.lo < T) cuts.push_back(p.lo);
    if (std::isfinite(p.hi) && p.hi < T) cuts.push_back(p.hi);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::size_t next_jump = 0;
  double left = -kInf;
  cplx base = 0.0; // M just right of `left`
  const double piece_tol = tol / static_cast<double>(cuts.size() + 2);
  auto integrate_span = [&](double a, double b) {
    Cumulative M{&mu, a, base};
    if (std::isinf(a)) M.anchor = -kInf;
    acc.add(integrate_interval(
        [&](double t) { return kernel_times(s, t, M(t)); }, a, b,
        quad_opts(opt, piece_tol / std::max(1.0, std::abs(s)), acc)));
    return base + mu.smooth_integral(a, b);
  };
  cplx integral_value_before = acc.value;
  acc.value = 0.0;
  for (double c : cuts) {
    base = integrate_span(left, c);
    while (next_jump < jumps.size() && jumps[next_jump].location == c) {
      base += jumps[next_jump].mass;
      ++next_jump;
    }
    left = c;
  }
  cplx M_T = integrate_span(left, T);
  cplx integral = acc.value;
  acc.value = integral_value_before + s * integral;
  if (std::isfinite(T)) acc.value += std::exp(-s * T) * M_T;
}

Acc finite_case(const DeterminingFunction& mu, cplx s, bool by_parts,
                const StieltjesOptions& opt) {
  Acc acc;
  const auto& jumps = mu.jumps.finite();
  if (by_parts) {
    add_by_parts(mu, s, jumps, kInf, opt, opt.tol, acc);
    return acc;
  }
  double tol = opt.tol / static_cast<double>(mu.pieces.size() + 1);
  if (mu.kind == Kind::Measure) {
    for (const auto& j : jumps) acc.value += j.mass * std::exp(-s * j.location);
  } else if (!jumps.empty()) {
    // staircase: sum_j m_j integral_{t_j}^{inf} e^{-st} dt
    cplx total = 0.0;
    for (const auto& j : jumps) total += j.mass;
    bool balanced = std::abs(total) <= 1e-15 * jumps.size();
    if (!balanced && !(s.real() > 0))
      throw DivergenceError("staircase density does not decay");
    if (s == cplx(0.0)) {
      for (const auto& j : jumps) acc.value -= j.mass * j.location;
    } else {
      for (const auto& j : jumps) acc.value += j.mass * std::exp(-s * j.location) / s;
    }
  }
  add_pieces(mu, s, kInf, opt, tol, acc);
  return acc;
}

// Five-point finite differences at u with unit step.
template <class G>
cplx d1(const G& g, double u) {
  return (-g(u + 2) + 8.0 * g(u + 1) - 8.0 * g(u - 1) + g(u - 2)) / 12.0;
}
template <class G>
cplx d2(const G& g, double u) {
  return (-g(u + 2) + 16.0 * g(u + 1) - 30.0 * g(u) + 16.0 * g(u - 1) - g(u - 2)) /
         12.0;
}
template <class G>
cplx d3(const G& g, double u) {
  return (g(u + 2) - 2.0 * g(u + 1) + 2.0 * g(u - 1) - g(u - 2)) / 2.0;
}
template <class G>
cplx d4(const G& g, double u) {
  return g(u + 2) - 4.0 * g(u + 1) + 6.0 * g(u) - 4.0 * g(u - 1) + g(u - 2);
}

Acc lazy_case(const DeterminingFunction& mu, cplx s, long N, bool by_parts,
              const StieltjesOptions& opt) {
  const auto& z = mu.jumps.smooth();
  Acc acc;
  const double T = z.location(static_cast<double>(N));
  const double tol = opt.tol / 4.0;

  std::vector<Jump> head;
  head.reserve(N);
  for (long j = 0; j < N; ++j) head.push_back(mu.jumps.at(static_cast<std::size_t>(j)));

  if (mu.kind == Kind::Measure) {
    if (by_parts) {
      add_by_parts(mu, s, head, T, opt, tol, acc);
    } else {
      for (const auto& j : head) acc.value += j.mass * std::exp(-s * j.location);
      add_pieces(mu, s, T, opt, tol, acc);
    }
    // tail: integral of the smoothed measure plus Euler-Maclaurin corrections
    RealFn mean = mu.tail_mean;
    if (!mean)
      mean = [&](double t) {
        return mu.smooth(t) + z.mass(z.index_of(t)) * z.index_rate(t);
      };
    acc.add(integrate_interval([&](double t) { return kernel_times(s, t, mean(t)); },
                               T, kInf, quad_opts(opt, tol, acc)));
    auto g = [&](double u) { return z.mass(u) * std::exp(-s * z.location(u)); };
    const double n = static_cast<double>(N);
    cplx em = g(n) / 2.0 - d1(g, n) / 12.0 + d3(g, n) / 720.0;
    acc.value += em;
    acc.err += std::abs(d3(g, n)) / 720.0 * 0.1;
    return acc;
  }

  // Density with a staircase of constant steps.
  if (by_parts) throw DomainError("integration by parts needs a measure");
  if (!z.constant_mass)
    throw UnsupportedError("lazy staircase needs a constant step");
  const cplx m = *z.constant_mass;
  // S = m (j + 1) between the j-th and (j+1)-th jump
  for (long j = 0; j < N; ++j) {
    double a = head[j].location;
    double b = (j + 1 < N) ? head[j + 1].location : T;
    acc.value += m * static_cast<double>(j + 1) * exp_integral(s, a, b);
  }
  add_pieces(mu, s, T, opt, tol, acc);
  RealFn mean = mu.tail_mean;
  if (!mean)
    mean = [&](double t) { return mu.smooth(t) + m * (z.index_of(t) + 0.5); };
  acc.add(integrate_interval([&](double t) { return kernel_times(s, t, mean(t)); },
                             T, kInf, quad_opts(opt, tol, acc)));
  // sawtooth m (1/2 - {u}) beyond index N
  auto h = [&](double u) {
    double t = z.location(u);
    return std::exp(-s * t) / z.index_rate(t);
  };
  const double n = static_cast<double>(N);
  acc.value += m * (h(n) / 12.0 - d2(h, n) / 720.0 + d4(h, n) / 30240.0);
  acc.err += std::abs(m * d4(h, n)) / 30240.0 * 0.1;
  return acc;
}

} // namespace

QuadResult stieltjes_laplace(const DeterminingFunction& mu, cplx s,
                             const StieltjesOptions& opt) {
  mu.validate();
  if (!(opt.tol > 0)) throw DomainError("tolerance must be positive");
  const cplx se = s - mu.weight;
  const bool by_parts = opt.mode == StieltjesMode::ByParts ||
                        (opt.mode == StieltjesMode::Auto && mu.conditional);
  if (by_parts && mu.kind != Kind::Measure)
    throw DomainError("integration by parts needs a measure");

  QuadResult out;
  if (!mu.jumps.lazy()) {
    Acc a = finite_case(mu, se, by_parts, opt);
    out.value = a.value;
    out.abs_error_estimate = a.err;
    out.evaluations = std::max<long>(1, a.evals);
    return out;
  }
  long N = std::max<long>(16, opt.head_jumps);
  Acc a1 = lazy_case(mu, se, N, by_parts, opt);
  Acc a2 = lazy_case(mu, se, 2 * N, by_parts, opt);
  double drift = std::abs(a2.value - a1.value);
  double scale = std::max(1.0, std::abs(a2.value));
  if (!std::isfinite(a2.value.real()) || !std::isfinite(a2.value.imag()) ||
      drift > 1e3 * std::max(opt.tol, 1e-8) * scale)
    throw DivergenceError("transform does not settle as more jumps are summed");
  out.value = a2.value;
  out.abs_error_estimate = a2.err + drift;
  out.evaluations = std::max<long>(1, a1.evals + a2.evals);
  return out;
}

} // namespace lapstrip
