#include "lapstrip/core.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "lapstrip/quadrature.hpp"

namespace lapstrip {

VerticalStrip::VerticalStrip(double lo, double hi) : a(lo), b(hi) {
  if (std::isnan(lo) || std::isnan(hi) || !(lo < hi))
    throw DomainError("strip needs a < b");
}

JumpSet::JumpSet(std::vector<Jump> finite) : finite_(std::move(finite)) {
  std::stable_sort(finite_.begin(), finite_.end(),
                   [](const Jump& x, const Jump& y) {
                     return x.location < y.location;
                   });
  for (const auto& j : finite_)
    if (!std::isfinite(j.location))
      throw DomainError("jump location must be finite");
}

JumpSet::JumpSet(SmoothJumpIndex lazy) : lazy_(std::move(lazy)) {
  if (!lazy_->location || !lazy_->index_of || !lazy_->index_rate)
    throw DomainError("lazy jump set needs location, index_of and index_rate");
  if (!lazy_->mass) {
    if (!lazy_->constant_mass)
      throw DomainError("lazy jump set needs a mass");
    cplx m = *lazy_->constant_mass;
    lazy_->mass = [m](double) { return m; };
  }
}

Jump JumpSet::at(std::size_t j) const {
  if (lazy_) {
    double u = static_cast<double>(j);
    return {lazy_->location(u), lazy_->mass(u)};
  }
  return finite_.at(j);
}

namespace {

// Half weight for a jump sitting exactly on an endpoint.
double endpoint_factor(double t, double lo, double hi) {
  if (t == lo || t == hi) return 0.5;
  return 1.0;
}

constexpr long kMaxEnumeratedJumps = 50'000'000;

} // namespace

cplx JumpSet::weighted_sum(double lo, double hi, double w) const {
  if (!(lo < hi)) return 0.0;
  if (!lazy_) {
    cplx acc = 0.0;
    for (const auto& j : finite_) {
      if (j.location < lo || j.location > hi) continue;
      double f = endpoint_factor(j.location, lo, hi);
      acc += f * j.mass * (w == 0.0 ? 1.0 : std::exp(w * j.location));
    }
    return acc;
  }

  const auto& z = *lazy_;
  auto loc = [&](long j) { return z.location(static_cast<double>(j)); };
  // first index with location >= lo
  long jlo = 0;
  if (std::isfinite(lo)) {
    double g = z.index_of(lo);
    jlo = std::isfinite(g) ? std::max<long>(0, static_cast<long>(std::ceil(g)) - 2)
                           : 0;
    while (loc(jlo) < lo) ++jlo;
    while (jlo > 0 && loc(jlo - 1) >= lo) --jlo;
  }
  // last index with location <= hi, or -1
  long jhi;
  if (!std::isfinite(hi)) throw DomainError("lazy jump sum needs a finite upper end");
  {
    double g = z.index_of(hi);
    if (!std::isfinite(g) || g < -1.0) {
      jhi = -1;
    } else {
      jhi = static_cast<long>(std::floor(g)) + 2;
      while (jhi >= 0 && loc(jhi) > hi) --jhi;
      while (loc(jhi + 1) <= hi) ++jhi;
    }
  }
  if (jhi < jlo) return 0.0;

  if (z.constant_mass && w == 0.0) {
    double count = static_cast<double>(jhi - jlo + 1);
    if (loc(jlo) == lo) count -= 0.5;
    if (loc(jhi) == hi) count -= 0.5;
    return count * *z.constant_mass;
  }
  if (jhi - jlo > kMaxEnumeratedJumps)
    throw BudgetExceeded("too many jumps to enumerate", 0.0, 0.0, 0);
  cplx acc = 0.0;
  for (long j = jlo; j <= jhi; ++j) {
    double t = loc(j);
    double f = endpoint_factor(t, lo, hi);
    acc += f * z.mass(static_cast<double>(j)) * (w == 0.0 ? 1.0 : std::exp(w * t));
  }
  return acc;
}

void DeterminingFunction::validate() const {
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto& p = pieces[i];
    if (!(p.lo < p.hi)) throw DomainError("piece needs lo < hi");
    if (!p.density) throw DomainError("piece without density");
    if (i > 0 && pieces[i - 1].hi > p.lo)
      throw DomainError("pieces must be sorted and disjoint");
  }
}

cplx DeterminingFunction::smooth(double t) const {
  cplx acc = 0.0;
  for (const auto& p : pieces) {
    if (t > p.lo && t < p.hi)
      acc += p.density(t);
    else if (t == p.lo || t == p.hi)
      acc += 0.5 * p.density(t);
  }
  return acc;
}

cplx DeterminingFunction::smooth_integral(double lo, double hi,
                                          double tol) const {
  if (lo == hi) return 0.0;
  double sign = 1.0;
  if (lo > hi) {
    std::swap(lo, hi);
    sign = -1.0;
  }
  cplx acc = 0.0;
  for (const auto& p : pieces) {
    double a = std::max(lo, p.lo), b = std::min(hi, p.hi);
    if (!(a < b)) continue;
    if (p.primitive)
      acc += p.primitive(b) - p.primitive(a);
    else
      acc += integrate_interval(p.density, a, b, tol).value;
  }
  return sign * acc;
}

std::vector<double> DeterminingFunction::breakpoints() const {
  std::vector<double> out;
  for (const auto& p : pieces) {
    if (std::isfinite(p.lo)) out.push_back(p.lo);
    if (std::isfinite(p.hi)) out.push_back(p.hi);
  }
  for (const auto& j : jumps.finite()) out.push_back(j.location);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

cplx evaluate_measure(const DeterminingFunction& mu, double t) {
  if (std::isnan(t)) throw DomainError("t is nan");
  const double w = mu.weight;
  if (mu.kind == Kind::Density) {
    cplx stair = mu.jumps.empty() ? cplx(0.0)
                                  : mu.jumps.weighted_sum(-kInf, t, 0.0);
    cplx v = mu.smooth(t) + stair;
    return w == 0.0 ? v : v * std::exp(w * t);
  }
  if (t == 0.0) return 0.0;
  double lo = std::min(0.0, t), hi = std::max(0.0, t);
  cplx dens;
  if (w == 0.0) {
    dens = mu.smooth_integral(lo, hi);
  } else {
    dens = 0.0;
    for (const auto& p : mu.pieces) {
      double a = std::max(lo, p.lo), b = std::min(hi, p.hi);
      if (!(a < b)) continue;
      auto d = p.density;
      dens += integrate_interval([&](double u) { return std::exp(w * u) * d(u); },
                                 a, b, 1e-13)
                  .value;
    }
  }
  cplx jumps = mu.jumps.empty() ? cplx(0.0) : mu.jumps.weighted_sum(lo, hi, w);
  double sign = t > 0 ? 1.0 : -1.0;
  return sign * (dens + jumps);
}

LaplacePair shift_pair(const LaplacePair& pair, double c) {
  if (c == 0.0) return pair;
  LaplacePair out = pair;
  auto F = pair.F;
  out.F = [F, c](cplx s) { return F(s + c); };
  out.strip = pair.strip.shifted(c);
  out.det.weight = pair.det.weight - c;
  return out;
}

PoleSet parse_pole_set(const std::string& text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw DomainError(std::string("pole set: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("poles") || !doc["poles"].is_array())
    throw DomainError("pole set: expected an object with a \"poles\" array");
  PoleSet out;
  if (doc.contains("separatrix")) {
    if (!doc["separatrix"].is_number())
      throw DomainError("pole set: separatrix must be a number");
    out.separatrix = doc["separatrix"].get<double>();
  }
  for (const auto& jp : doc["poles"]) {
    if (!jp.is_object() || !jp.contains("p") || !jp.contains("order") ||
        !jp.contains("coeffs"))
      throw DomainError("pole set: each pole needs p, order, coeffs");
    if (!jp["p"].is_number() || !jp["order"].is_number_integer() ||
        !jp["coeffs"].is_array())
      throw DomainError("pole set: bad field types");
    PoleSpec ps;
    ps.p = jp["p"].get<double>();
    int order = jp["order"].get<int>();
    for (const auto& c : jp["coeffs"]) {
      if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number())
        throw DomainError("pole set: coefficient must be [re, im]");
      ps.coeffs.emplace_back(c[0].get<double>(), c[1].get<double>());
    }
    if (order < 1 || order != ps.order())
      throw DomainError("pole set: order must equal the number of coefficients");
    out.poles.push_back(std::move(ps));
  }
  return out;
}

std::string to_json(const PoleSet& set) {
  using nlohmann::json;
  json doc;
  doc["separatrix"] = set.separatrix;
  doc["poles"] = json::array();
  for (const auto& p : set.poles) {
    json jp;
    jp["p"] = p.p;
    jp["order"] = p.order();
    jp["coeffs"] = json::array();
    for (auto c : p.coeffs) jp["coeffs"].push_back({c.real(), c.imag()});
    doc["poles"].push_back(jp);
  }
  return doc.dump(2);
}

ContourSegment line_segment(cplx a, cplx b) {
  ContourSegment s;
  s.z = [a, b](double u) { return a + u * (b - a); };
  s.dz = [a, b](double) { return b - a; };
  return s;
}

ContourSegment arc_segment(cplx center, double r, double th0, double th1) {
  ContourSegment s;
  s.z = [center, r](double u) { return center + std::polar(r, u); };
  s.dz = [r](double u) { return kI * std::polar(r, u); };
  s.u0 = th0;
  s.u1 = th1;
  return s;
}

ContourPath circle_path(cplx center, double radius) {
  ContourPath p;
  p.segments.push_back(arc_segment(center, radius, 0.0, 2 * kPi));
  p.orientation = Orientation::Counterclockwise;
  return p;
}

void ContourPath::validate(double tol) const {
  if (segments.empty()) throw DomainError("empty contour");
  for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
    cplx e = segments[i].end(), s = segments[i + 1].start();
    if (std::abs(e - s) > tol * std::max(1.0, std::abs(e)))
      throw DomainError("contour segments do not join");
  }
  if (orientation != Orientation::Open && !open_at_start && !open_at_end) {
    cplx e = segments.back().end(), s = segments.front().start();
    if (std::abs(e - s) > tol * std::max(1.0, std::abs(e)))
      throw DomainError("closed contour does not close");
  }
}

ContourPath ContourPath::reversed() const {
  ContourPath r;
  for (auto it = segments.rbegin(); it != segments.rend(); ++it) {
    ContourSegment s = *it;
    std::swap(s.u0, s.u1);
    r.segments.push_back(s);
  }
  r.open_at_start = open_at_end;
  r.open_at_end = open_at_start;
  switch (orientation) {
    case Orientation::Clockwise: r.orientation = Orientation::Counterclockwise; break;
    case Orientation::Counterclockwise: r.orientation = Orientation::Clockwise; break;
    default: r.orientation = Orientation::Open;
  }
  return r;
}

} // namespace lapstrip
