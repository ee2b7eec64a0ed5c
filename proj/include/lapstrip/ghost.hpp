#pragma once

#include "lapstrip/quadrature.hpp"

namespace lapstrip {

// Everything here integrates g(z) = exp(exp(-z^2)) against some kernel
// along gamma_M: the hyperbola arms |sigma| = pi / (2 tau), tau >= M, joined
// by the segment tau = M.  On the arms |g| = exp(-e^{tau^2 - sigma^2}).
struct GhostConfig {
  double M = 1.0;
  double tau_floor = 1e-280; // arms stop where the integrand drops below this
  double tol = 1e-12;        // relative to the largest integrand magnitude
  // Density and heat evaluations may pick a better contour (another M or a
  // path through the saddle point).  Off means gamma_M with the given M.
  bool adaptive = true;

  void validate() const;
};

// Counterclockwise: left arm downwards, bottom left to right, right arm
// upwards.  Only this orientation makes F entire and f'''(0) = +gamma/2.
ContourPath gamma_m_path(const GhostConfig& cfg);

bool in_region(cplx s, double M); // s in D_M
double distance_to_gamma(cplx s, double M);

cplx ghost_I(cplx s, const GhostConfig& cfg = {});

struct GhostParts {
  bool inside = false; // explicit term present
  cplx exponent = 0.0; // e^{-s^2}; the explicit term is exp(exponent)
  cplx I = 0.0;
};

GhostParts ghost_parts(cplx s, const GhostConfig& cfg = {});
cplx ghost_F(cplx s, const GhostConfig& cfg = {});
// log |F(s)| without forming exp(exp(-s^2)).
double ghost_log_abs(cplx s, const GhostConfig& cfg = {});

// (1/2 pi) integral of |g| |dz| over gamma_M; |I(s)| <= A / dist(s, gamma_M).
double ghost_I_bound_constant(const GhostConfig& cfg = {});

// k-th derivative of f(t) = (1/2 pi i) integral g(z) e^{zt} dz.
cplx ghost_density(double t, int k = 0, const GhostConfig& cfg = {});

// F(s) from f: integral_0^inf e^{-st} f(t) dt for Re(s) > 0 and
// -integral_{-inf}^0 e^{-st} f(t) dt for Re(s) < 0.
QuadResult ghost_laplace(cplx s, const GhostConfig& cfg = {});

cplx heat_spectral(double x, double t, const GhostConfig& cfg = {});
cplx heat_contour(double x, double t, const GhostConfig& cfg = {});

using HeatFn = std::function<cplx(double, double)>;
double heat_residual(const HeatFn& H, double x, double t, double h = 1e-3);

} // namespace lapstrip
