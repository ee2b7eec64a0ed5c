#pragma once

#include <optional>
#include <vector>

#include "lapstrip/quadrature.hpp"

namespace lapstrip {

// Possibly infinite list of poles, enumerated in a fixed order.
struct PoleSequence {
  std::function<PoleSpec(std::size_t)> at;
  std::optional<std::size_t> count; // unset means unbounded
  double separatrix = 0.0;
  // Optional certificate: bound on sum_{n>=N} sum_k |a_{n,k}| / eps^k,
  // +inf when the caller knows the series diverges.
  std::function<double(std::size_t, double)> tail_bound;

  static PoleSequence from(const PoleSet& set);
  cplx location(const PoleSpec& p) const { return {separatrix, p.p}; }
};

inline const std::vector<double> kDefaultEpsGrid{0.25, 0.5, 1.0, 2.0, 4.0};

struct Truncation {
  std::size_t poles_used = 0;
  double tail_bound = 0.0;
};

struct TransitionResult {
  std::function<cplx(double)> density;    // f_r - f_l
  std::function<cplx(double)> cumulative; // mu_r - mu_l
  Truncation truncation;
};

struct SeriesValue {
  cplx value;
  Truncation truncation;
};

// Laurent coefficients a_1..a_r of F at s0 from circle integrals.  The
// returned PoleSpec has p = Im(s0); an empty coefficient list means no pole.
PoleSpec residue_numeric(const ComplexFn& F, cplx s0, int max_order,
                         double radius);

// Res((e^{st} - 1) F(s) / s ; s0) from the principal part of F at s0.
cplx jump_residue(const std::vector<cplx>& coeffs, cplx s0, double t);
// Res(e^{st} F(s) ; s0).
cplx density_residue(const std::vector<cplx>& coeffs, cplx s0, double t);

cplx transition_jump(const PoleSet& poles, double t);
// Extracts the principal parts numerically first (no coefficients known).
cplx transition_jump(const ComplexFn& F, const std::vector<cplx>& locations,
                     double t, int max_order = 4, double radius = 0.25);
cplx transition_density(const PoleSet& poles, double t);
TransitionResult make_transition(const PoleSet& poles);

// Ternary: true / false, or InconclusiveError when neither can be shown.
bool convergence_check(const PoleSequence& seq,
                       const std::vector<double>& eps_grid = kDefaultEpsGrid);

cplx principal_series_eval(const PoleSequence& seq, cplx s, double tol = 1e-12);

SeriesValue infinite_transition_density(
    const PoleSequence& seq, double t, double tol = 1e-12,
    const std::vector<double>& eps_grid = kDefaultEpsGrid);

enum class Polarity { CoPositive, CoNegative, NoPolarity };

const char* to_string(Polarity p);

Polarity polarity_check(const DeterminingFunction& det,
                        const std::vector<double>& grid);

} // namespace lapstrip
