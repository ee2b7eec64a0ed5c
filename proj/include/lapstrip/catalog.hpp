#pragma once

#include <string>
#include <vector>

#include "lapstrip/transition.hpp"

namespace lapstrip {

// ---- Riemann zeta

// zeta(s) for Re(s) > 0, s != 1.
cplx zeta_oracle(cplx s);

enum class ZetaStripId { Mu1Inf, Mu01, F01, Fm10 };

ZetaStripId parse_zeta_tag(const std::string& tag); // "mu_1_inf", "mu_0_1", "f_0_1", "f_-1_0"
const char* to_string(ZetaStripId id);

DeterminingFunction zeta_measure(ZetaStripId id);
VerticalStrip zeta_strip(ZetaStripId id);
// F is zeta(s) for the measures and zeta(s)/s for the densities.  Left of
// Re(s) = 0 it goes through the functional equation.
LaplacePair zeta_pair(ZetaStripId id);

// ---- Periodic functions

struct PeriodicPair {
  ComplexFn F; // g(s) / (1 - e^{-sT}) for Re(s) > 0
  PoleSet poles;
};

// f is T-periodic on t >= 0; breakpoints in (0, T) split the quadrature.
PeriodicPair periodic_pair(const RealFn& f, double T, int n_range,
                           const std::vector<double>& breakpoints = {});

// N-th Cesaro mean of the partial sums of transition_density, where the
// m-th partial sum holds the poles with the m smallest distinct |p|.
cplx cesaro_mean(const PoleSet& poles, int N, double t);

// sgn(sin t): period 2 pi, poles at i(2n+1).
PeriodicPair square_wave_pair(int n_range);

// ---- Gamma function and the quotient Gamma(s) Gamma(a - s) / Gamma(b - s)

cplx log_gamma(cplx z);
cplx gamma_complex(cplx z);

struct GammaQuotientParams {
  cplx a;
  cplx b;
  void validate() const;
};

cplx gamma_quotient(const GammaQuotientParams& q, cplx s);

cplx kummer_1f1(cplx a, cplx b, cplx z);

// Residue of the quotient at s = -n and at s = a + n.
cplx gamma_residue_left(const GammaQuotientParams& q, int n);
cplx gamma_residue_right(const GammaQuotientParams& q, int n);

// Index 0 is the strip 0 < Re(s) < Re(a); index -n lies in (-n, -n + 1),
// index n > 0 in (Re(a) + n - 1, Re(a) + n).
cplx gamma_strip_density(const GammaQuotientParams& q, int strip_index, double t);
VerticalStrip gamma_strip(const GammaQuotientParams& q, int strip_index);
LaplacePair gamma_pair(const GammaQuotientParams& q, int strip_index);

// b - a = m a positive integer: Gamma(a - s) / Gamma(b - s) is
// 1 / ((a - s)(a + 1 - s) ... (a + m - 1 - s)).  Index k in 0..m is the
// strip left of s = a + k (index m is right of every pole).
LaplacePair integer_gamma_pair(double a, int m, int strip_index);

} // namespace lapstrip
