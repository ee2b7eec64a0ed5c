#pragma once

#include <vector>

#include "lapstrip/quadrature.hpp"

namespace lapstrip {

QuadResult laplace_transform(const DeterminingFunction& det, cplx s,
                             const VerticalStrip& strip, double tol = 1e-10);

// What the inversion integral returns.  Cumulative is the inversion lemma:
// (1/2 pi i) int F(s) e^{st} / s ds = mu(t) - mu(-inf) for c > 0.  Density
// drops the 1/s and recovers the normalized density itself; it is the same
// integral as Cumulative applied to s F(s).
enum class InversionTarget { Cumulative, Density };

struct BromwichOptions {
  double R0 = 8.0;
  int max_levels = 40;
  double tol = 1e-8;
  InversionTarget target = InversionTarget::Cumulative;
  // Align R with the period 2 pi / |t| of e^{iyt} and extrapolate the
  // 1/R error away.  Off means the plain truncated limit.
  bool extrapolate = true;
  long max_evals = 5'000'000;
};

struct BromwichResult {
  cplx value;
  double last_change;
  int levels;
  long evaluations;
};

BromwichResult bromwich_invert(const ComplexFn& F, double c, double t,
                               const BromwichOptions& opt = {});

enum class Ternary { Yes, Violated, Inconclusive };

struct PLReport {
  Ternary satisfied = Ternary::Inconclusive;
  double A = 0.0, B = 0.0, K = 0.0;
  double Y = 0.0;
  double K_fit = 0.0;   // slope of log log |F| against |y|
  double K_limit = 0.0; // pi / (b - a)
  std::vector<std::pair<double, double>> witnesses; // (y, log|F|)
};

using LogMagFn = std::function<double(cplx)>;

PLReport pl_diagnostic(const ComplexFn& F, const VerticalStrip& strip,
                       double y_max, int samples,
                       const LogMagFn& log_abs = nullptr);

double vertical_l2(const ComplexFn& F, double x, double tol = 1e-10);

} // namespace lapstrip
