#include "lapstrip/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lapstrip {

QuadResult laplace_transform(const DeterminingFunction& det, cplx s,
                             const VerticalStrip& strip, double tol) {
  if (!strip.contains(s)) {
    std::ostringstream os;
    os << "s = " << s << " is outside the strip (" << strip.a << ", " << strip.b
       << ")";
    throw DomainError(os.str());
  }
  StieltjesOptions opt;
  opt.tol = tol;
  return stieltjes_laplace(det, s, opt);
}

BromwichResult bromwich_invert(const ComplexFn& F, double c, double t,
                               const BromwichOptions& opt) {
  if (c == 0.0 || std::isnan(c)) throw DomainError("abscissa c must be nonzero");
  if (!(opt.tol > 0) || !(opt.R0 > 0)) throw DomainError("bad Bromwich options");
  const bool cumulative = opt.target == InversionTarget::Cumulative;
  auto G = [&](double y) {
    cplx s(c, y);
    cplx v = F(s) * std::exp(s * t);
    return cumulative ? v / s : v;
  };

  double R = opt.R0;
  if (opt.extrapolate && t != 0.0) {
    double period = 2 * kPi / std::abs(t);
    R = std::ceil(opt.R0 / period) * period;
  }
  QuadOptions q;
  q.abs_tol = opt.tol / 20.0;
  q.max_evals = opt.max_evals;
  long evals = 0;
  auto band = [&](double lo, double hi) {
    q.max_evals = std::max<long>(1000, opt.max_evals - evals);
    QuadResult r = integrate_interval(G, lo, hi, q);
    evals += r.evaluations;
    return r.value;
  };

  cplx V = band(-R, R) / (2 * kPi);
  std::vector<cplx> plain{V}, first, second;
  auto estimate = [&]() -> cplx {
    if (!opt.extrapolate) return plain.back();
    if (!second.empty()) return second.back();
    if (!first.empty()) return first.back();
    return plain.back();
  };
  cplx prev = estimate();
  int quiet = 0;
  double change = std::abs(prev);
  for (int k = 1; k <= opt.max_levels; ++k) {
    double R2 = 2 * R;
    V += (band(R, R2) + band(-R2, -R)) / (2 * kPi);
    R = R2;
    plain.push_back(V);
    std::size_t n = plain.size();
    first.push_back(2.0 * plain[n - 1] - plain[n - 2]);
    if (first.size() >= 2)
      second.push_back((4.0 * first.back() - first[first.size() - 2]) / 3.0);
    cplx cur = estimate();
    change = std::abs(cur - prev);
    prev = cur;
    if (change < opt.tol) {
      if (++quiet >= 2) return {cur, change, k, evals};
    } else {
      quiet = 0;
    }
    if (evals > opt.max_evals) break;
  }
  std::ostringstream os;
  os << "Bromwich limit not reached; last iterate " << prev << ", last change "
     << change;
  throw BudgetExceeded(os.str(), prev, change, evals);
}

namespace {

std::vector<double> sample_lines(const VerticalStrip& strip) {
  const bool fa = std::isfinite(strip.a), fb = std::isfinite(strip.b);
  if (fa && fb) {
    double w = strip.b - strip.a;
    return {strip.a + 0.25 * w, strip.a + 0.5 * w, strip.a + 0.75 * w};
  }
  if (fa) return {strip.a + 0.5, strip.a + 1.0, strip.a + 2.0};
  if (fb) return {strip.b - 2.0, strip.b - 1.0, strip.b - 0.5};
  return {-1.0, 0.0, 1.0};
}

} // namespace

PLReport pl_diagnostic(const ComplexFn& F, const VerticalStrip& strip,
                       double y_max, int samples, const LogMagFn& log_abs) {
  if (!(y_max > 0) || samples < 8) throw DomainError("need y_max > 0 and samples >= 8");
  PLReport rep;
  rep.Y = y_max / 10.0;
  rep.K_limit = std::isfinite(strip.width()) ? kPi / strip.width() : 0.0;

  bool overflow = false;
  int growing = 0, total = 0;
  double k_fit = 0.0, log_b = 0.0;
  std::vector<std::pair<double, double>> all; // (|y|, log|F|)
  for (double x : sample_lines(strip)) {
    for (int sign : {1, -1}) {
      std::vector<double> ys, lls;
      for (int i = 0; i < samples; ++i) {
        double y = rep.Y + (y_max - rep.Y) * i / (samples - 1);
        cplx s(x, sign * y);
        double L;
        if (log_abs) {
          L = log_abs(s);
        } else {
          double m = std::abs(F(s));
          if (!std::isfinite(m)) {
            overflow = true;
            continue;
          }
          L = std::log(m);
        }
        ++total;
        all.emplace_back(y, L);
        if (L > 1.0) {
          ys.push_back(y);
          lls.push_back(std::log(L));
        }
      }
      growing += static_cast<int>(ys.size());
      if (ys.size() >= 3) {
        double my = 0, ml = 0;
        for (std::size_t i = 0; i < ys.size(); ++i) {
          my += ys[i];
          ml += lls[i];
        }
        my /= ys.size();
        ml /= ys.size();
        double sxy = 0, sxx = 0;
        for (std::size_t i = 0; i < ys.size(); ++i) {
          sxy += (ys[i] - my) * (lls[i] - ml);
          sxx += (ys[i] - my) * (ys[i] - my);
        }
        double k = sxx > 0 ? sxy / sxx : 0.0;
        if (k > k_fit) {
          k_fit = k;
          log_b = ml - k * my;
        }
      }
    }
  }
  std::sort(all.begin(), all.end(),
            [](auto& p, auto& q) { return p.second > q.second; });
  for (std::size_t i = 0; i < all.size() && i < 5; ++i) rep.witnesses.push_back(all[i]);

  rep.K_fit = k_fit;
  if (overflow && !log_abs) return rep; // inconclusive
  if (total == 0) return rep;

  // Most samples bounded by e: no doubly exponential growth on this range.
  const bool bounded = growing * 2 < total;
  if (!bounded && k_fit > 1.2 * rep.K_limit) {
    rep.satisfied = Ternary::Violated;
    rep.K = k_fit;
    rep.B = std::exp(log_b);
    return rep;
  }
  double k_use = bounded ? 0.0 : k_fit;
  if (rep.K_limit > 0 && 1.2 * k_use < rep.K_limit) {
    rep.satisfied = Ternary::Yes;
    rep.K = k_use > 0 ? k_use : 0.5 * rep.K_limit;
    rep.B = k_use > 0 ? std::exp(log_b) : 1.0;
    double log_a = 0.0;
    for (auto& [y, L] : all) log_a = std::max(log_a, L - rep.B * std::exp(rep.K * y));
    rep.A = std::exp(log_a);
  }
  return rep;
}

double vertical_l2(const ComplexFn& F, double x, double tol) {
  QuadOptions q;
  q.abs_tol = tol;
  auto r = integrate_interval(
      [&](double y) { return cplx(std::norm(F(cplx(x, y)))); }, -kInf, kInf, q);
  return r.value.real();
}

} // namespace lapstrip
