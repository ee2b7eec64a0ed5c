#include "lapstrip/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace lapstrip {

namespace {

// 21-point Kronrod rule with its embedded 10-point Gauss rule (QUADPACK qk21).
constexpr double xgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr double wgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525634290, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr double wg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Panel {
  double a, b;
  cplx value;
  double err;
  double l1; // integral of |f|
  bool frozen = false;
};

struct Budget {
  long used = 0;
  long max;
};

cplx checked(cplx v) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw NonFiniteError("integrand is not finite");
  return v;
}

Panel gk21(const RealFn& f, double a, double b, Budget& budget) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  cplx fv1[10], fv2[10];
  cplx fc = checked(f(c));
  cplx resk = fc * wgk[10];
  cplx resg = 0.0;
  double resabs = std::abs(fc) * wgk[10];
  for (int j = 0; j < 10; ++j) {
    double x = h * xgk[j];
    cplx f1 = checked(f(c - x)), f2 = checked(f(c + x));
    fv1[j] = f1;
    fv2[j] = f2;
    resk += wgk[j] * (f1 + f2);
    resabs += wgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += wg[j / 2] * (f1 + f2);
  }
  budget.used += 21;
  cplx mean = 0.5 * resk;
  double resasc = wgk[10] * std::abs(fc - mean);
  for (int j = 0; j < 10; ++j)
    resasc += wgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));
  const double ah = std::abs(h);
  Panel p{a, b, resk * h, std::abs((resk - resg) * h), resabs * ah};
  resasc *= ah;
  if (resasc != 0.0 && p.err != 0.0)
    p.err = resasc * std::min(1.0, std::pow(200.0 * p.err / resasc, 1.5));
  if (p.l1 > std::numeric_limits<double>::min() / (50.0 * kEps))
    p.err = std::max(50.0 * kEps * p.l1, p.err);
  return p;
}

struct ByError {
  bool operator()(const Panel& x, const Panel& y) const { return x.err < y.err; }
};

struct Sum {
  cplx value = 0.0;
  double err = 0.0;
  double l1 = 0.0;
};

// Globally adaptive subdivision on a finite interval with a < b.
Sum adapt(const RealFn& f, double a, double b, double abs_tol, double rel_tol,
          Budget& budget) {
  std::priority_queue<Panel, std::vector<Panel>, ByError> heap;
  std::vector<Panel> done;
  Panel first = gk21(f, a, b, budget);
  cplx total = first.value;
  double err = first.err;
  heap.push(first);

  auto target = [&] { return std::max(abs_tol, rel_tol * std::abs(total)); };
  while (!heap.empty() && err > target()) {
    Panel worst = heap.top();
    heap.pop();
    double mid = 0.5 * (worst.a + worst.b);
    double scale = std::max(std::abs(worst.a), std::abs(worst.b));
    // Panels that cannot be split, or whose error is pure roundoff, are
    // retired; their error stays in the total.
    if (worst.b - worst.a <= 64.0 * kEps * std::max(scale, 1e-300) ||
        mid <= worst.a || mid >= worst.b ||
        worst.err <= 50.0 * kEps * worst.l1 * (1.0 + 1e-9)) {
      done.push_back(worst);
      continue;
    }
    if (budget.used + 42 > budget.max) {
      heap.push(worst);
      Sum partial;
      while (!heap.empty()) {
        partial.value += heap.top().value;
        partial.err += heap.top().err;
        heap.pop();
      }
      for (const auto& p : done) {
        partial.value += p.value;
        partial.err += p.err;
      }
      throw BudgetExceeded("quadrature budget exhausted", partial.value,
                           partial.err, budget.used);
    }
    Panel l = gk21(f, worst.a, mid, budget);
    Panel r = gk21(f, mid, worst.b, budget);
    total += l.value + r.value - worst.value;
    err += l.err + r.err - worst.err;
    heap.push(l);
    heap.push(r);
  }
  while (!heap.empty()) {
    done.push_back(heap.top());
    heap.pop();
  }
  // Fixed summation order keeps results reproducible.
  std::sort(done.begin(), done.end(),
            [](const Panel& x, const Panel& y) { return x.a < y.a; });
  Sum s;
  for (const auto& p : done) {
    s.value += p.value;
    s.err += p.err;
    s.l1 += p.l1;
  }
  return s;
}

// Integral from a towards +inf (dir = 1) or -inf (dir = -1) by doubling panels.
Sum semi_infinite(const RealFn& f, double a, int dir, const QuadOptions& opt,
                  double tol, Budget& budget) {
  Sum total;
  double start = a, width = opt.first_panel;
  double prev_l1 = -1.0;
  int rising = 0;
  const double panel_tol = tol / 8.0;
  for (int k = 0; k < opt.max_panels; ++k) {
    double end = start + dir * width;
    Sum p = dir > 0 ? adapt(f, start, end, panel_tol, opt.rel_tol, budget)
                    : adapt(f, end, start, panel_tol, opt.rel_tol, budget);
    if (dir < 0) p.value = -p.value;
    total.value += p.value;
    total.err += p.err;
    total.l1 += p.l1;
    if (prev_l1 >= 0.0 && p.l1 >= prev_l1 * (1.0 - 1e-9) && p.l1 > 0.0)
      ++rising;
    else
      rising = 0;
    if (k + 1 >= opt.min_panels) {
      if (p.l1 == 0.0 && prev_l1 == 0.0) return total;
      if (rising >= 6)
        throw DivergenceError("tail panels are not decreasing");
      if (prev_l1 > 0.0 && p.l1 < tol / 10.0) {
        double r = p.l1 / prev_l1;
        if (r < 1.0) {
          double tail = p.l1 * r / (1.0 - r);
          if (tail < tol / 10.0) {
            total.err += tail;
            return total;
          }
        }
      }
    }
    prev_l1 = p.l1;
    start = end;
    width *= 2.0;
    if (!std::isfinite(start)) break;
  }
  throw BudgetExceeded("infinite-range tail not certified", total.value,
                       total.err, budget.used);
}

} // namespace

QuadResult integrate_interval(const RealFn& f, double lo, double hi, double tol) {
  QuadOptions opt;
  opt.abs_tol = tol;
  return integrate_interval(f, lo, hi, opt);
}

QuadResult integrate_interval(const RealFn& f, double lo, double hi,
                              const QuadOptions& opt) {
  if (!(opt.abs_tol > 0.0) && !(opt.rel_tol > 0.0))
    throw DomainError("tolerance must be positive");
  if (std::isnan(lo) || std::isnan(hi)) throw DomainError("nan endpoint");
  QuadResult out;
  if (lo == hi) return out;
  double sign = 1.0;
  if (lo > hi) {
    std::swap(lo, hi);
    sign = -1.0;
  }
  Budget budget{0, opt.max_evals};
  Sum s;
  const double tol = opt.abs_tol;
  if (std::isfinite(lo) && std::isfinite(hi)) {
    s = adapt(f, lo, hi, tol, opt.rel_tol, budget);
  } else if (std::isfinite(lo)) {
    s = semi_infinite(f, lo, +1, opt, tol, budget);
  } else if (std::isfinite(hi)) {
    s = semi_infinite(f, hi, -1, opt, tol, budget);
    s.value = -s.value; // integrated from hi down to -inf
  } else {
    Sum r = semi_infinite(f, 0.0, +1, opt, tol / 2, budget);
    Sum l = semi_infinite(f, 0.0, -1, opt, tol / 2, budget);
    s.value = r.value - l.value;
    s.err = r.err + l.err;
  }
  out.value = sign * s.value;
  out.abs_error_estimate = s.err;
  out.evaluations = budget.used;
  return out;
}

QuadResult integrate_contour(const ContourPath& path, const ComplexFn& f,
                             double tol) {
  QuadOptions opt;
  opt.abs_tol = tol;
  return integrate_contour(path, f, opt);
}

QuadResult integrate_contour(const ContourPath& path, const ComplexFn& f,
                             const QuadOptions& opt) {
  path.validate(1e-9);
  QuadResult out;
  QuadOptions seg = opt;
  seg.abs_tol = opt.abs_tol / static_cast<double>(path.segments.size());
  for (const auto& s : path.segments) {
    seg.max_evals = opt.max_evals - out.evaluations;
    if (seg.max_evals <= 0)
      throw BudgetExceeded("contour budget exhausted", out.value,
                           out.abs_error_estimate, out.evaluations);
    const auto& z = s.z;
    const auto& dz = s.dz;
    QuadResult r = integrate_interval([&](double u) { return f(z(u)) * dz(u); },
                                      s.u0, s.u1, seg);
    out.value += r.value;
    out.abs_error_estimate += r.abs_error_estimate;
    out.evaluations += r.evaluations;
  }
  return out;
}

} // namespace lapstrip
