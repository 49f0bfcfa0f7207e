#include "relaysec/specfun.hpp"

#include <cmath>
#include <stdexcept>

namespace relaysec::specfun {
namespace {

// E1 series, x <= 1:  -γ - ln x + Σ_{k>=1} (-1)^{k+1} x^k/(k·k!)
double e1_series(double x) {
    double sum = -kEulerGamma - std::log(x);
    double pw = 1.0;  // x^k / k!
    for (int k = 1; k <= 32; ++k) {
        pw *= x / k;
        const double add = (k & 1 ? pw : -pw) / k;
        sum += add;
        if (std::abs(add) <= 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

// modified-Lentz evaluation of G(s, y) with s = 1 - m <= 0, where
// I_m(β, a) = a^{1-m}·G(1-m, βa) and G(0, y) = e^y·E1(y). The continued
// fraction is the standard one for the upper incomplete gamma with the
// e^{-y}·y^s prefactor already stripped, so nothing here can overflow.
double pole_cf(double y, int m) {
    const double s = 1.0 - m;
    constexpr double tiny = 1e-300;
    double b = y + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 10000; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        d = 1.0 / d;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) return h;
    }
    throw std::runtime_error("specfun: pole continued fraction stalled");
}

}  // namespace

double scaled_e1(double x) {
    if (!(x > 0.0)) throw std::domain_error("scaled_e1: requires x > 0");
    if (x <= 1.0) return std::exp(x) * e1_series(x);
    return pole_cf(x, 1);
}

double exp_integral_e1(double x) {
    if (!(x > 0.0)) throw std::domain_error("exp_integral_e1: requires x > 0");
    if (x <= 1.0) return e1_series(x);
    return std::exp(-x) * pole_cf(x, 1);
}

double bessel_k1(double x) {
    if (!(x > 0.0)) throw std::domain_error("bessel_k1: requires x > 0");
    // libstdc++'s implementation is good to ~1e-15 relative over [1e-8, 700]
    // and underflows gracefully to 0 past x ≈ 750
    return std::cyl_bessel_k(1.0, x);
}

double exp_over_pole_power(double beta, double a, int m) {
    if (!(beta > 0.0) || !(a > 0.0) || m < 1)
        throw std::domain_error("exp_over_pole_power: requires beta > 0, a > 0, m >= 1");
    const double y = beta * a;
    if (y > 1e280) return std::pow(a, 1.0 - m) / y;  // leading asymptotic term; avoids inf/inf
    if (y >= 1.0) return std::pow(a, 1.0 - m) * pole_cf(y, m);
    // upward recurrence from I_1; for βa < 1 the subtraction stays far from
    // full cancellation (β·I_k ≤ (βa)·a^{-k}), while for large βa it would
    // lose ~(βa)^{m-2} in accuracy — hence the continued fraction above
    double val = std::exp(y) * e1_series(y);
    double ak = 1.0;  // a^{-k}
    for (int k = 1; k < m; ++k) {
        ak /= a;
        val = (ak - beta * val) / k;
    }
    return val;
}

double asr_kernel(double beta, const QuadratureSpec& quad) { return asr_kernel(beta, 1.0, 1, quad); }

double asr_kernel(double beta, double a, int m, const QuadratureSpec& quad) {
    if (!(beta > 0.0) || !(a > 0.0) || m < 1)
        throw std::domain_error("asr_kernel: requires beta > 0, a > 0, m >= 1");
    auto integrand = [beta, a, m](double mu) {
        if (mu <= 0.0) return 0.0;
        return exp_over_pole_power(beta / mu, a, m) * std::exp(-mu);
    };
    // the integrand's knee sits near μ ≈ β when β < 1
    const double split = std::min(beta, 1.0);
    return integrate(integrand, 0.0, split, quad) + integrate_to_inf(integrand, split, quad);
}

}  // namespace relaysec::specfun
