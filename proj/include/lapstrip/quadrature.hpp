#pragma once

#include "lapstrip/core.hpp"

namespace lapstrip {

struct QuadResult {
  cplx value = 0.0;
  double abs_error_estimate = 0.0;
  long evaluations = 0;
};

struct QuadOptions {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  long max_evals = 1'000'000;
  // Infinite ends: first panel width, then widths double.
  double first_panel = 1.0;
  int max_panels = 200;
  // Panels below this many are never used to declare the tail negligible.
  int min_panels = 6;
};

QuadResult integrate_interval(const RealFn& f, double lo, double hi, double tol);
QuadResult integrate_interval(const RealFn& f, double lo, double hi,
                              const QuadOptions& opt);

QuadResult integrate_contour(const ContourPath& path, const ComplexFn& f,
                             double tol);
QuadResult integrate_contour(const ContourPath& path, const ComplexFn& f,
                             const QuadOptions& opt);

enum class StieltjesMode { Auto, Direct, ByParts };

struct StieltjesOptions {
  double tol = 1e-10;
  StieltjesMode mode = StieltjesMode::Auto;
  // Lazy jump sets: number of jumps summed directly before the
  // Euler-Maclaurin tail takes over.  The result is also computed with
  // twice as many and the difference enters the error estimate.
  long head_jumps = 1024;
  long max_evals = 1'000'000;
};

QuadResult stieltjes_laplace(const DeterminingFunction& mu, cplx s,
                             const StieltjesOptions& opt = {});

} // namespace lapstrip
