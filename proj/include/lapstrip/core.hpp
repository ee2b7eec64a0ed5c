#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "lapstrip/errors.hpp"

namespace lapstrip {

using cplx = std::complex<double>;
using RealFn = std::function<cplx(double)>;
using ComplexFn = std::function<cplx(cplx)>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

// Open vertical strip a < Re(s) < b.  Either end may be infinite.
struct VerticalStrip {
  double a = -kInf;
  double b = kInf;

  VerticalStrip() = default;
  VerticalStrip(double lo, double hi);

  bool contains(cplx s) const { return s.real() > a && s.real() < b; }
  double width() const { return b - a; }
  VerticalStrip shifted(double c) const { return {a - c, b - c}; }
};

struct Jump {
  double location;
  cplx mass;
};

// Jumps indexed by u = 0, 1, 2, ... with a smooth interpolation in u.  The
// interpolation is what lets the transform add an Euler-Maclaurin tail
// instead of enumerating every jump.
struct SmoothJumpIndex {
  std::function<double(double)> location;   // t(u), strictly increasing
  std::function<double(double)> index_of;   // u(t), inverse of location
  std::function<double(double)> index_rate; // du/dt
  std::function<cplx(double)> mass;         // m(u)
  std::optional<cplx> constant_mass;        // set when m(u) is constant
};

class JumpSet {
public:
  JumpSet() = default;
  explicit JumpSet(std::vector<Jump> finite);
  explicit JumpSet(SmoothJumpIndex lazy);

  bool lazy() const { return lazy_.has_value(); }
  bool empty() const { return !lazy_ && finite_.empty(); }
  // Number of finite jumps; lazy sets are unbounded.
  std::size_t size() const { return finite_.size(); }
  Jump at(std::size_t j) const;
  const std::vector<Jump>& finite() const { return finite_; }
  const SmoothJumpIndex& smooth() const { return *lazy_; }

  // Sum of masses with location in (lo, hi); endpoints contribute half.
  cplx weighted_sum(double lo, double hi, double weight_rate) const;

private:
  std::vector<Jump> finite_;
  std::optional<SmoothJumpIndex> lazy_;
};

struct Piece {
  double lo = -kInf;
  double hi = kInf;
  RealFn density;
  RealFn primitive; // optional antiderivative of density on (lo, hi)
};

enum class Kind {
  Measure, // dmu = density dt + sum of point masses
  Density  // f = smooth part + staircase sum m_j H(t - t_j)
};

// Normalized determining function.  Everything is multiplied by
// exp(weight * t), which is how shifted pairs are represented.
struct DeterminingFunction {
  Kind kind = Kind::Measure;
  std::vector<Piece> pieces;
  JumpSet jumps;
  double weight = 0.0;
  // Transform converges only conditionally; stieltjes_laplace then
  // integrates by parts.
  bool conditional = false;
  // Smoothed integrand beyond the enumerated jumps of a lazy set
  // (density plus mean jump density, or density plus mean staircase).
  // When absent it is assembled from the pieces and the jump index.
  RealFn tail_mean;

  void validate() const;
  // Sum of piece densities at t, averaging one-sided values at piece ends.
  cplx smooth(double t) const;
  // Integral of the smooth density over (lo, hi), unweighted.
  cplx smooth_integral(double lo, double hi, double tol = 1e-13) const;
  std::vector<double> breakpoints() const;
};

struct LaplacePair {
  ComplexFn F;
  VerticalStrip strip;
  DeterminingFunction det;
};

struct PoleSpec {
  double p = 0.0;          // pole at separatrix + i p
  std::vector<cplx> coeffs; // a_1 .. a_r, coefficient of (s - s0)^{-k}
  int order() const { return static_cast<int>(coeffs.size()); }
};

struct PoleSet {
  double separatrix = 0.0;
  std::vector<PoleSpec> poles;
  cplx location(std::size_t n) const { return {separatrix, poles[n].p}; }
};

PoleSet parse_pole_set(const std::string& json_text);
std::string to_json(const PoleSet& set);

// One piece of a contour, z(u) for u running from u0 to u1.
struct ContourSegment {
  std::function<cplx(double)> z;
  std::function<cplx(double)> dz;
  double u0 = 0.0;
  double u1 = 1.0;

  cplx start() const { return z(u0); }
  cplx end() const { return z(u1); }
};

enum class Orientation { Clockwise, Counterclockwise, Open };

struct ContourPath {
  std::vector<ContourSegment> segments;
  Orientation orientation = Orientation::Open;
  bool open_at_start = false; // first segment truncated at infinity
  bool open_at_end = false;

  void validate(double tol = 1e-12) const;
  ContourPath reversed() const;
};

ContourSegment line_segment(cplx a, cplx b);
ContourSegment arc_segment(cplx center, double radius, double theta0,
                           double theta1);
ContourPath circle_path(cplx center, double radius);

// Cumulative mu(t) for Kind::Measure, pointwise f(t) for Kind::Density.
cplx evaluate_measure(const DeterminingFunction& mu, double t);

LaplacePair shift_pair(const LaplacePair& pair, double c);

} // namespace lapstrip
