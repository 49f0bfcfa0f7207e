#include "relaysec/opa.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "relaysec/rng.hpp"

namespace relaysec {
namespace {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

// sum conj(a_i) b_i
cplx dotc(const cvec& a, const cvec& b) {
    cplx s{};
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

double norm2(const cvec& a) {
    double s = 0.0;
    for (const auto& x : a) s += std::norm(x);
    return s;
}

double selection_rate_and_obj(const cvec& h_m, const cvec& h_e, double g0, double* best_obj) {
    double best = 0.0;
    for (std::size_t i = 0; i < h_m.size(); ++i) {
        const double obj = (1.0 + g0 * std::norm(h_m[i])) / (1.0 + g0 * std::norm(h_e[i]));
        if (obj > best) best = obj;
    }
    if (best_obj) *best_obj = best;
    return best > 1.0 ? std::log(best) : 0.0;
}

double resolve_gamma0(const NetworkConfig& config, double gamma0) {
    if (gamma0 > 0.0) return gamma0;
    return config.relays[0].gamma_avg;
}

}  // namespace

OpaSolution solve_opa(const OpaProblem& p) {
    const std::size_t n = p.h_m.size();
    if (n == 0 || p.h_e.size() != n)
        throw std::invalid_argument("opa: h_m and h_e must be non-empty and equally sized");
    if (!(p.gamma0 > 0.0) || !std::isfinite(p.gamma0))
        throw std::invalid_argument("opa: gamma0 must be positive and finite");

    const double g0 = p.gamma0;
    const double root_g0 = std::sqrt(g0);

    if (n == 1) {
        // Single direction: written to match the selection objective expression
        // exactly, so the two baselines coincide bit for bit.
        const double objective =
            (1.0 + g0 * std::norm(p.h_m[0])) / (1.0 + g0 * std::norm(p.h_e[0]));
        return {{cplx(root_g0, 0.0)}, objective > 1.0 ? std::log(objective) : 0.0, objective};
    }

    // Orthonormal basis of span{h_m, h_e}.
    std::vector<cvec> basis;
    for (const cvec* src : {&p.h_m, &p.h_e}) {
        cvec r = *src;
        const double orig = std::sqrt(norm2(r));
        if (orig == 0.0) continue;
        for (const auto& b : basis) {
            const cplx c = dotc(b, r);
            for (std::size_t i = 0; i < n; ++i) r[i] -= c * b[i];
        }
        const double res = std::sqrt(norm2(r));
        if (res > 1e-12 * orig) {
            for (auto& x : r) x /= res;
            basis.push_back(std::move(r));
        }
    }
    const std::size_t dim = basis.size();

    double lambda = 1.0;
    cvec w_span;
    if (dim >= 1) {
        const cplx m1 = dotc(basis[0], p.h_m);
        const cplx e1 = dotc(basis[0], p.h_e);
        if (dim == 1) {
            lambda = (1.0 + g0 * std::norm(m1)) / (1.0 + g0 * std::norm(e1));
            w_span = basis[0];
            for (auto& x : w_span) x *= root_g0;
        } else {
            const cplx m2 = dotc(basis[1], p.h_m);
            const cplx e2 = dotc(basis[1], p.h_e);
            const double p11 = 1.0 + g0 * std::norm(m1);
            const double p22 = 1.0 + g0 * std::norm(m2);
            const cplx p12 = g0 * m1 * std::conj(m2);
            const double q11 = 1.0 + g0 * std::norm(e1);
            const double q22 = 1.0 + g0 * std::norm(e2);
            const cplx q12 = g0 * e1 * std::conj(e2);

            // det(P - lambda Q) = a lambda^2 + b lambda + c
            const double a = q11 * q22 - std::norm(q12);
            const double b =
                -(p11 * q22 + p22 * q11 - 2.0 * std::real(p12 * std::conj(q12)));
            const double c = p11 * p22 - std::norm(p12);
            const double disc = std::max(b * b - 4.0 * a * c, 0.0);
            lambda = (-b + std::sqrt(disc)) / (2.0 * a);

            // Null vector of M = P - lambda Q from its larger row.
            const double m11 = p11 - lambda * q11;
            const double m22 = p22 - lambda * q22;
            const cplx m12 = p12 - lambda * q12;
            cplx y1, y2;
            if (std::abs(m11) >= std::abs(m22)) {
                y1 = m12;
                y2 = cplx(-m11, 0.0);
            } else {
                y1 = cplx(m22, 0.0);
                y2 = -std::conj(m12);
            }
            const double ny = std::sqrt(std::norm(y1) + std::norm(y2));
            if (ny == 0.0) {
                y1 = cplx(1.0, 0.0);
                y2 = cplx(0.0, 0.0);
            } else {
                y1 /= ny;
                y2 /= ny;
            }
            w_span.assign(n, cplx{});
            for (std::size_t i = 0; i < n; ++i)
                w_span[i] = root_g0 * (y1 * basis[0][i] + y2 * basis[1][i]);
        }
    }

    cvec w;
    if (dim >= 1 && (lambda > 1.0 || n == dim)) {
        w = std::move(w_span);
    } else {
        // Park the power orthogonally to both channels; objective is 1 and the
        // secrecy rate 0, which beats any in-span ratio below 1.
        std::size_t pick = 0;
        double min_load = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < n; ++k) {
            double load = 0.0;
            for (const auto& b : basis) load += std::norm(b[k]);
            if (load < min_load) {
                min_load = load;
                pick = k;
            }
        }
        cvec r(n, cplx{});
        r[pick] = cplx(1.0, 0.0);
        for (const auto& b : basis) {
            const cplx c = std::conj(b[pick]);
            for (std::size_t i = 0; i < n; ++i) r[i] -= c * b[i];
        }
        const double nr = std::sqrt(norm2(r));
        for (auto& x : r) x *= root_g0 / nr;
        w = std::move(r);
    }

    cplx pm{}, pe{};
    for (std::size_t i = 0; i < n; ++i) {
        pm += std::conj(p.h_m[i]) * w[i];
        pe += std::conj(p.h_e[i]) * w[i];
    }
    const double objective = (1.0 + std::norm(pm)) / (1.0 + std::norm(pe));
    return {std::move(w), objective > 1.0 ? std::log(objective) : 0.0, objective};
}

OpaComparison compare_opa_vs_selection(const NetworkConfig& config,
                                       const MonteCarloOptions& opts, double gamma0) {
    config.validate();
    if (opts.trials == 0) throw std::invalid_argument("montecarlo: trials must be >= 1");
    const double g0 = resolve_gamma0(config, gamma0);
    constexpr double kSlack = 1e-12;

    // acc: opa sum/sumsq, selection sum/sumsq, gap sum/sumsq, violations
    const auto totals = detail::accumulate_chunked<7>(opts.trials, opts.workers, [&] {
        return [&, prob = OpaProblem{{}, {}, g0}](std::uint64_t t,
                                                  std::array<double, 7>& acc) mutable {
            TrialRng rng(opts.seed, t);
            ComplexRealization real = sample_complex_realization(config, rng);
            prob.h_m = std::move(real.h_rd);
            prob.h_e = std::move(real.h_re);
            const double sel_rate = selection_rate_and_obj(prob.h_m, prob.h_e, g0, nullptr);
            const OpaSolution sol = solve_opa(prob);
            const double gap = sol.rate - sel_rate;
            acc[0] += sol.rate;
            acc[1] += sol.rate * sol.rate;
            acc[2] += sel_rate;
            acc[3] += sel_rate * sel_rate;
            acc[4] += gap;
            acc[5] += gap * gap;
            if (sol.rate < sel_rate - kSlack) acc[6] += 1.0;
        };
    });
    OpaComparison out;
    out.opa = detail::moments_to_estimate(totals[0], totals[1], opts.trials, opts.seed);
    out.selection = detail::moments_to_estimate(totals[2], totals[3], opts.trials, opts.seed);
    out.gap = detail::moments_to_estimate(totals[4], totals[5], opts.trials, opts.seed);
    out.violations = std::uint64_t(totals[6]);
    return out;
}

namespace {

template <typename RateToValue>
EstimateWithCI estimate_opa_metric(const NetworkConfig& config, const MonteCarloOptions& opts,
                                   double gamma0, RateToValue&& to_value) {
    config.validate();
    if (opts.trials == 0) throw std::invalid_argument("montecarlo: trials must be >= 1");
    const double g0 = resolve_gamma0(config, gamma0);
    const auto totals = detail::accumulate_chunked<2>(opts.trials, opts.workers, [&] {
        return [&, prob = OpaProblem{{}, {}, g0}](std::uint64_t t,
                                                  std::array<double, 2>& acc) mutable {
            TrialRng rng(opts.seed, t);
            ComplexRealization real = sample_complex_realization(config, rng);
            prob.h_m = std::move(real.h_rd);
            prob.h_e = std::move(real.h_re);
            const double v = to_value(solve_opa(prob).rate);
            acc[0] += v;
            acc[1] += v * v;
        };
    });
    return detail::moments_to_estimate(totals[0], totals[1], opts.trials, opts.seed);
}

}  // namespace

EstimateWithCI estimate_opa_asr(const NetworkConfig& config, const MonteCarloOptions& opts,
                                double gamma0) {
    return estimate_opa_metric(config, opts, gamma0, [](double rate) { return rate; });
}

EstimateWithCI estimate_opa_outage(const NetworkConfig& config, double target_rate,
                                   const MonteCarloOptions& opts, double gamma0) {
    if (!(target_rate >= 0.0))
        throw std::domain_error("estimate_opa_outage: target rate must be >= 0");
    return estimate_opa_metric(config, opts, gamma0, [target_rate](double rate) {
        return rate <= target_rate ? 1.0 : 0.0;
    });
}

}  // namespace relaysec
