#include "lapstrip/transition.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "lapstrip/core.hpp"

namespace lapstrip {

PoleSequence PoleSequence::from(const PoleSet& set) {
  PoleSequence seq;
  auto poles = std::make_shared<std::vector<PoleSpec>>(set.poles);
  seq.at = [poles](std::size_t n) { return (*poles)[n]; };
  seq.count = set.poles.size();
  seq.separatrix = set.separatrix;
  return seq;
}

const char* to_string(Polarity p) {
  switch (p) {
  case Polarity::CoPositive: return "CoPositive";
  case Polarity::CoNegative: return "CoNegative";
  case Polarity::NoPolarity: return "NoPolarity";
  }
  return "?";
}

PoleSpec residue_numeric(const ComplexFn& F, cplx s0, int max_order, double radius) {
  if (max_order < 1) throw DomainError("max_order must be at least 1");
  if (!(radius > 0) || !std::isfinite(radius)) throw DomainError("radius must be positive");
  auto on_circle = [&](double th) { return s0 + radius * std::exp(kI * th); };

  double maxF = 0.0;
  for (int i = 0; i < 64; ++i) {
    cplx v = F(on_circle(2 * kPi * i / 64));
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw BadRadiusError("F is not finite on the circle");
    maxF = std::max(maxF, std::abs(v));
  }
  PoleSpec out;
  out.p = s0.imag();
  if (maxF == 0.0) return out;

  std::vector<cplx> a;
  for (int k = 1; k <= max_order; ++k) {
    const double scale = maxF * std::pow(radius, k);
    QuadOptions q;
    q.abs_tol = 1e-13 * scale;
    q.max_evals = 200'000;
    QuadResult r;
    try {
      r = integrate_interval(
          [&](double th) {
            cplx e = std::exp(kI * (k * th));
            return F(on_circle(th)) * std::pow(radius, k) * e;
          },
          0.0, 2 * kPi, q);
    } catch (const NonFiniteError&) {
      throw BadRadiusError("F is not finite on the circle");
    } catch (const BudgetExceeded&) {
      throw BadRadiusError("circle integral did not converge; radius too close to a singularity");
    }
    if (r.abs_error_estimate > 1e-6 * scale)
      throw BadRadiusError("circle integral error too large; choose another radius");
    a.push_back(r.value / (2 * kPi));
  }
  int r = 0;
  for (int k = 1; k <= max_order; ++k)
    if (std::abs(a[k - 1]) > 1e-10 * maxF) r = k;
  out.coeffs.assign(a.begin(), a.begin() + r);
  return out;
}

namespace {

// Taylor coefficient of G(s) = (e^{st} - 1)/s at s0 for (s - s0)^j, by the
// power series of G.  Used where the closed form cancels.
cplx g_series(int j, cplx s0, double t) {
  if (t == 0.0) return 0.0;
  cplx term = 1.0;
  for (int i = 1; i <= j + 1; ++i) term *= t / i; // t^{j+1}/(j+1)!
  cplx sum = term;
  const cplx ts = t * s0;
  for (int n = j + 1; n < 400; ++n) {
    term *= ts / static_cast<double>(n + 1) * (static_cast<double>(n) / (n - j));
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum) && n > j + 4) break;
  }
  return sum;
}

} // namespace

cplx jump_residue(const std::vector<cplx>& coeffs, cplx s0, double t) {
  cplx total = 0.0;
  const int r = static_cast<int>(coeffs.size());
  if (std::abs(s0 * t) <= 4.0) {
    for (int k = 1; k <= r; ++k) total += coeffs[k - 1] * g_series(k - 1, s0, t);
    return total;
  }
  const cplx e = std::exp(s0 * t);
  for (int k = 1; k <= r; ++k) {
    // e^{s0 t} sum_l t^l/l! (-1)^{k-1-l} / s0^{k-l}  -  (-1)^{k-1} / s0^k
    cplx inner = 0.0, tl = 1.0;
    for (int l = 0; l < k; ++l) {
      if (l > 0) tl *= t / l;
      double sign = ((k - 1 - l) % 2 == 0) ? 1.0 : -1.0;
      inner += tl * sign / std::pow(s0, k - l);
    }
    double sign = ((k - 1) % 2 == 0) ? 1.0 : -1.0;
    total += coeffs[k - 1] * (e * inner - sign / std::pow(s0, k));
  }
  return total;
}

cplx density_residue(const std::vector<cplx>& coeffs, cplx s0, double t) {
  cplx sum = 0.0, tk = 1.0;
  for (std::size_t k = 1; k <= coeffs.size(); ++k) {
    if (k > 1) tk *= t / static_cast<double>(k - 1);
    sum += coeffs[k - 1] * tk;
  }
  return std::exp(s0 * t) * sum;
}

cplx transition_jump(const PoleSet& poles, double t) {
  cplx sum = 0.0;
  for (std::size_t n = 0; n < poles.poles.size(); ++n)
    sum += jump_residue(poles.poles[n].coeffs, poles.location(n), t);
  return sum;
}

cplx transition_jump(const ComplexFn& F, const std::vector<cplx>& locations,
                     double t, int max_order, double radius) {
  cplx sum = 0.0;
  for (cplx s0 : locations) {
    PoleSpec p = residue_numeric(F, s0, max_order, radius);
    sum += jump_residue(p.coeffs, s0, t);
  }
  return sum;
}

cplx transition_density(const PoleSet& poles, double t) {
  cplx sum = 0.0;
  for (std::size_t n = 0; n < poles.poles.size(); ++n)
    sum += density_residue(poles.poles[n].coeffs, poles.location(n), t);
  return sum;
}

TransitionResult make_transition(const PoleSet& poles) {
  TransitionResult r;
  r.density = [poles](double t) { return transition_density(poles, t); };
  r.cumulative = [poles](double t) { return transition_jump(poles, t); };
  r.truncation.poles_used = poles.poles.size();
  return r;
}

namespace {

constexpr int kMaxBlock = 22; // up to 2^23 - 1 terms

// Dyadic blocks [2^j - 1, 2^{j+1} - 1) of a nonnegative series.  Block sums
// with a settled ratio below one certify convergence (condensation); ratios
// pinned at one certify divergence.
class BlockWatch {
public:
  enum class Verdict { Open, Converges, Diverges };

  Verdict push(double block, int j) {
    blocks_.push_back(block);
    if (block < 1e-12) {
      if (++small_ >= 3) return Verdict::Converges;
    } else {
      small_ = 0;
    }
    if (j < 6 || blocks_.size() < 5) return Verdict::Open;
    std::vector<double> r;
    for (std::size_t i = blocks_.size() - 4; i < blocks_.size(); ++i) {
      double prev = blocks_[i - 1];
      r.push_back(prev > 0 ? blocks_[i] / prev : (blocks_[i] > 0 ? kInf : 0.0));
    }
    if (r[1] >= 1 - 1e-3 && r[2] >= 1 - 1e-3 && r[3] >= 1 - 1e-3)
      return Verdict::Diverges;
    auto [lo, hi] = std::minmax_element(r.begin(), r.end());
    if (*hi < 0.95 && *hi - *lo < 0.05) return Verdict::Converges;
    return Verdict::Open;
  }

  // Geometric estimate of everything after the last block.
  double tail_estimate() const {
    if (blocks_.size() < 2) return kInf;
    double last = blocks_.back(), prev = blocks_[blocks_.size() - 2];
    if (last == 0.0) return 0.0;
    double r = prev > 0 ? last / prev : kInf;
    if (!(r < 0.95)) return kInf;
    return last * r / (1 - r);
  }

private:
  std::vector<double> blocks_;
  int small_ = 0;
};

std::size_t block_begin(int j) { return (std::size_t{1} << j) - 1; }

double abs_weight(const PoleSpec& p, double eps, int shift) {
  double s = 0.0;
  for (int k = 1; k <= p.order(); ++k)
    s += std::abs(p.coeffs[k - 1]) / std::pow(eps, k - shift);
  return s;
}

} // namespace

bool convergence_check(const PoleSequence& seq, const std::vector<double>& eps_grid) {
  if (eps_grid.empty()) throw DomainError("eps_grid is empty");
  for (double e : eps_grid)
    if (!(e > 0)) throw DomainError("eps_grid entries must be positive");
  if (seq.count) return true; // finite sums always converge
  if (!seq.at) throw DomainError("pole sequence has no enumerator");

  for (double eps : eps_grid) {
    if (seq.tail_bound) {
      double b = seq.tail_bound(64, eps);
      if (std::isinf(b)) return false;
      continue;
    }
    BlockWatch watch;
    bool settled = false;
    for (int j = 0; j <= kMaxBlock && !settled; ++j) {
      double block = 0.0;
      for (std::size_t n = block_begin(j); n < block_begin(j + 1); ++n)
        block += abs_weight(seq.at(n), eps, 0);
      if (!std::isfinite(block)) return false;
      switch (watch.push(block, j)) {
      case BlockWatch::Verdict::Diverges: return false;
      case BlockWatch::Verdict::Converges: settled = true; break;
      case BlockWatch::Verdict::Open: break;
      }
    }
    if (!settled) {
      std::ostringstream os;
      os << "no convergence verdict for eps = " << eps << " within "
         << block_begin(kMaxBlock + 1) << " terms";
      throw InconclusiveError(os.str());
    }
  }
  return true;
}

cplx principal_series_eval(const PoleSequence& seq, cplx s, double tol) {
  if (!(tol > 0)) throw DomainError("tolerance must be positive");
  auto term = [&](const PoleSpec& p, double& mag) {
    cplx d = s - seq.location(p);
    if (d == cplx(0.0)) throw PoleError("s coincides with a pole", s);
    cplx sum = 0.0, dk = 1.0;
    mag = 0.0;
    for (int k = 1; k <= p.order(); ++k) {
      dk *= d;
      sum += p.coeffs[k - 1] / dk;
      mag += std::abs(p.coeffs[k - 1]) / std::abs(dk);
    }
    return sum;
  };
  cplx total = 0.0;
  double mag;
  if (seq.count) {
    for (std::size_t n = 0; n < *seq.count; ++n) total += term(seq.at(n), mag);
    return total;
  }
  // every remaining pole is at least this far away
  const double gap = std::abs(s.real() - seq.separatrix);
  BlockWatch watch;
  for (int j = 0; j <= kMaxBlock; ++j) {
    double block = 0.0;
    for (std::size_t n = block_begin(j); n < block_begin(j + 1); ++n) {
      total += term(seq.at(n), mag);
      block += mag;
    }
    watch.push(block, j);
    double tail = watch.tail_estimate();
    if (seq.tail_bound && gap > 0)
      tail = std::min(tail, seq.tail_bound(block_begin(j + 1), gap));
    if (tail < tol) return total;
  }
  throw BudgetExceeded("principal series tail not certified", total, kInf,
                       static_cast<long>(block_begin(kMaxBlock + 1)));
}

SeriesValue infinite_transition_density(const PoleSequence& seq, double t,
                                        double tol,
                                        const std::vector<double>& eps_grid) {
  if (!(tol > 0)) throw DomainError("tolerance must be positive");
  if (!convergence_check(seq, eps_grid))
    throw HypothesisViolated("sum of |a_nk| / eps^k diverges");
  SeriesValue out;
  if (seq.count) {
    for (std::size_t n = 0; n < *seq.count; ++n) {
      PoleSpec p = seq.at(n);
      out.value += density_residue(p.coeffs, seq.location(p), t);
    }
    out.truncation.poles_used = *seq.count;
    return out;
  }
  const double growth = std::exp(seq.separatrix * t);
  std::vector<BlockWatch> watches(eps_grid.size());
  for (int j = 0; j <= kMaxBlock; ++j) {
    std::vector<double> blocks(eps_grid.size(), 0.0);
    for (std::size_t n = block_begin(j); n < block_begin(j + 1); ++n) {
      PoleSpec p = seq.at(n);
      out.value += density_residue(p.coeffs, seq.location(p), t);
      for (std::size_t e = 0; e < eps_grid.size(); ++e)
        blocks[e] += abs_weight(p, eps_grid[e], 1);
    }
    const std::size_t used = block_begin(j + 1);
    double best = kInf;
    for (std::size_t e = 0; e < eps_grid.size(); ++e) {
      const double eps = eps_grid[e];
      watches[e].push(blocks[e], j);
      double tail = watches[e].tail_estimate();
      if (seq.tail_bound) tail = std::min(tail, eps * seq.tail_bound(used, eps));
      best = std::min(best, growth * std::exp(eps * std::abs(t)) * tail);
    }
    if (best < tol) {
      out.truncation = {used, best};
      return out;
    }
  }
  throw BudgetExceeded("transition series tail not certified", out.value, kInf,
                       static_cast<long>(block_begin(kMaxBlock + 1)));
}

Polarity polarity_check(const DeterminingFunction& det, const std::vector<double>& grid) {
  constexpr double kTol = 1e-12;
  bool pos = true, neg = true;
  auto see = [&](cplx v) {
    if (std::abs(v.imag()) > kTol * std::max(1.0, std::abs(v.real()))) {
      pos = neg = false;
      return;
    }
    if (v.real() < -kTol) pos = false;
    if (v.real() > kTol) neg = false;
  };
  for (double t : grid) {
    if (det.kind == Kind::Measure)
      see(det.smooth(t) * std::exp(det.weight * t));
    else
      see(evaluate_measure(det, t));
  }
  if (det.kind == Kind::Measure && !grid.empty()) {
    const double top = *std::max_element(grid.begin(), grid.end());
    const double bottom = *std::min_element(grid.begin(), grid.end());
    if (det.jumps.lazy()) {
      const auto& z = det.jumps.smooth();
      double last = std::min(1e6, std::floor(z.index_of(top)));
      for (double u = 0; u <= last; u += 1.0)
        if (z.location(u) >= bottom) see(z.mass(u));
    } else {
      for (const auto& j : det.jumps.finite())
        if (j.location >= bottom && j.location <= top) see(j.mass);
    }
  }
  if (pos) return Polarity::CoPositive;
  if (neg) return Polarity::CoNegative;
  return Polarity::NoPolarity;
}

} // namespace lapstrip
