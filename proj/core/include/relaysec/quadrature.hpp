#pragma once

// Adaptive quadrature for the closed-form kernels and for the oracle
// integrals the closed forms are validated against.
//
// Primary rule: Gauss-Kronrod 7/15 with global worst-interval-first
// bisection. A structurally different second rule (recursive adaptive
// Simpson) is kept so oracle values can be confirmed by two independent
// methods. Both throw QuadratureError instead of returning a silent
// partial result.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace relaysec {

struct QuadratureSpec {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_subdivisions = 200;
};

class QuadratureError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

// 15-point Kronrod abscissae (positive half); the embedded 7-point Gauss
// rule sits at the odd indices plus the midpoint.
inline constexpr double kGkNode[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
};
inline constexpr double kKronrodW[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
inline constexpr double kGaussW[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct Interval {
    double a, b, estimate, error;
};

template <typename F>
Interval gk15(F&& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(mid);
    double kron = kKronrodW[7] * fc;
    double gauss = kGaussW[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kGkNode[i];
        const double f1 = f(mid - dx);
        const double f2 = f(mid + dx);
        kron += kKronrodW[i] * (f1 + f2);
        if (i & 1) gauss += kGaussW[i / 2] * (f1 + f2);
    }
    return {a, b, kron * half, std::abs((kron - gauss) * half)};
}

template <typename F>
double adaptive_gk(F&& f, double a, double b, const QuadratureSpec& spec, const char* what) {
    if (a == b) return 0.0;
    std::vector<Interval> parts;
    parts.reserve(static_cast<std::size_t>(spec.max_subdivisions) + 1);
    parts.push_back(gk15(f, a, b));
    double total = parts[0].estimate;
    double err = parts[0].error;
    for (int used = 0; used <= spec.max_subdivisions; ++used) {
        if (!std::isfinite(total) || !std::isfinite(err))
            throw QuadratureError(std::string(what) + ": integrand produced a non-finite value");
        if (err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
            double sum = 0.0;  // re-sum: the incremental total has accumulated rounding
            for (const Interval& p : parts) sum += p.estimate;
            return sum;
        }
        if (used == spec.max_subdivisions) break;
        auto worst = std::max_element(
            parts.begin(), parts.end(),
            [](const Interval& x, const Interval& y) { return x.error < y.error; });
        const Interval cut = *worst;
        const double mid = 0.5 * (cut.a + cut.b);
        const Interval left = gk15(f, cut.a, mid);
        const Interval right = gk15(f, mid, cut.b);
        total += left.estimate + right.estimate - cut.estimate;
        err += left.error + right.error - cut.error;
        *worst = left;
        parts.push_back(right);
    }
    throw QuadratureError(std::string(what) + ": did not converge within max_subdivisions");
}

template <typename F>
double simpson_rec(F&& f, double a, double m, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth, const char* what) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (!std::isfinite(delta))
        throw QuadratureError(std::string(what) + ": integrand produced a non-finite value");
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth <= 0)
        throw QuadratureError(std::string(what) + ": did not converge within the depth limit");
    return simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1, what) +
           simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1, what);
}

// maps [0, 1) onto [a, inf); the improper integrand must vanish at infinity
template <typename F>
auto to_inf(F&& f, double a) {
    return [f = std::forward<F>(f), a](double t) {
        const double om = 1.0 - t;
        if (om <= 0.0) return 0.0;
        return f(a + t / om) / (om * om);
    };
}

}  // namespace detail

template <typename F>
double integrate(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
    return detail::adaptive_gk(std::forward<F>(f), a, b, spec, "integrate");
}

template <typename F>
double integrate_to_inf(F&& f, double a, const QuadratureSpec& spec = {}) {
    return detail::adaptive_gk(detail::to_inf(std::forward<F>(f), a), 0.0, 1.0, spec,
                               "integrate_to_inf");
}

template <typename F>
double integrate_simpson(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(whole));
    const int depth = std::min(48, spec.max_subdivisions);
    return detail::simpson_rec(f, a, m, b, fa, fm, fb, whole, tol, depth, "integrate_simpson");
}

template <typename F>
double integrate_simpson_to_inf(F&& f, double a, const QuadratureSpec& spec = {}) {
    auto g = detail::to_inf(std::forward<F>(f), a);
    return integrate_simpson(g, 0.0, 1.0, spec);
}

}  // namespace relaysec
