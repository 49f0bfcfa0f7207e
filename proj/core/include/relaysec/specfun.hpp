#pragma once

// Scalar special functions feeding the closed-form rate expressions.

#include "relaysec/quadrature.hpp"

namespace relaysec::specfun {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

// E1(x) = ∫_x^∞ e^{-t}/t dt for x > 0. Returns exact 0 once e^{-x} underflows.
double exp_integral_e1(double x);

// e^x·E1(x), evaluated without forming e^x (series below 1, continued
// fraction above), so it stays finite for arbitrarily large x.
double scaled_e1(double x);

// modified Bessel function of the second kind, order 1
double bessel_k1(double x);

// I_m(β, a) = ∫_0^∞ e^{-βu} (u+a)^{-m} du.  I_1(β, 1) = scaled_e1(β), and
// I_{m+1} = (a^{-m} - β·I_m)/m.
double exp_over_pole_power(double beta, double a, int m);

// K(β) = ∫_0^∞ scaled_e1(β/μ)·e^{-μ} dμ — the rate kernel averaged over the
// shared first-hop variable. Strictly decreasing in β, K(β) → 0 as β → ∞.
double asr_kernel(double beta, const QuadratureSpec& quad = {});

// repeated-pole generalization: ∫_0^∞ I_m(β/μ, a)·e^{-μ} dμ;
// asr_kernel(β) == asr_kernel(β, 1, 1)
double asr_kernel(double beta, double a, int m, const QuadratureSpec& quad = {});

}  // namespace relaysec::specfun
