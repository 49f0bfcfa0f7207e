#include "relaysec/analytic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

#include "relaysec/specfun.hpp"

namespace relaysec {

using specfun::asr_kernel;
using specfun::bessel_k1;
using specfun::exp_over_pole_power;
using specfun::scaled_e1;

namespace {

bool nearly_equal_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

double secrecy_rate(double z) {
    if (!(z > 0.0)) throw std::domain_error("secrecy_rate: z must be positive");
    return z > 1.0 ? std::log(z) : 0.0;
}

double cdf_z_df(double z, const RelayLinkParams& p) {
    if (!(z > 0.0)) throw std::domain_error("cdf_z_df: z must be positive");
    const double lm = p.lambda_m, le = p.lambda_e;
    if (z >= 1.0) return 1.0 - le * std::exp(-lm * (z - 1.0)) / (lm * z + le);
    return std::exp(-le * (1.0 - z) / z) * lm * z / (lm * z + le);
}

double cdf_z_af_approx(double z, const RelayLinkParams& p) {
    if (!(z >= 1.0)) throw std::domain_error("cdf_z_af_approx: defined for z >= 1");
    const double lm = p.lambda_m, le = p.lambda_e;
    const double q = 2.0 * std::sqrt(lm * (z - 1.0));
    if (q == 0.0) return lm / (lm + le);  // q K1(q) -> 1
    if (q > 700.0) return 1.0;            // survival term below 1e-300
    return 1.0 - le * q * bessel_k1(q) / (lm * z + le);
}

double cdf_selection(double z, const NetworkConfig& config, Strategy strategy) {
    config.validate();
    double prod = 1.0;
    for (const auto& r : config.relays)
        prod *= strategy == Strategy::kDF ? cdf_z_df(z, r) : cdf_z_af_approx(z, r);
    return prod;
}

double Expansion::survival(double z) const {
    double total = 0.0;
    for (const auto& t : terms) {
        const double den = z + t.alpha;
        double denp = den;
        for (int j = 1; j < t.mult; ++j) denp *= den;
        total += t.sigma * std::exp(-t.beta * (z - 1.0)) / denp;
    }
    return total;
}

Expansion expand_partial_fractions(const NetworkConfig& config, Strategy strategy) {
    if (strategy != Strategy::kDF)
        throw std::invalid_argument(
            "expand_partial_fractions: only the DF ratio CDF is expanded; the AF "
            "closed form reuses the DF terms");
    config.validate();
    const std::size_t n = config.size();
    if (n > kMaxClosedFormRelays)
        throw std::invalid_argument("expand_partial_fractions: closed form capped at " +
                                    std::to_string(kMaxClosedFormRelays) +
                                    " relays; use asr_quadrature_oracle beyond that");

    std::vector<double> alpha(n), lm(n);
    for (std::size_t i = 0; i < n; ++i) {
        lm[i] = config.relays[i].lambda_m;
        alpha[i] = config.relays[i].lambda_e / config.relays[i].lambda_m;
    }

    // Cluster pole locations once for the whole network by a greedy walk over
    // the sorted alphas; cluster location = mean of its members.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return alpha[a] < alpha[b]; });

    std::vector<int> cluster_of(n, -1);
    std::vector<double> rep_sum;
    std::vector<int> rep_count;
    double prev = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double a = alpha[order[k]];
        if (k == 0 || !nearly_equal_rel(a, prev, kPoleMergeRelTol)) {
            if (k > 0 && nearly_equal_rel(a, prev, kPoleGuardRelTol))
                throw PoleClusteringError(
                    "expand_partial_fractions: pole locations " + std::to_string(prev) +
                    " and " + std::to_string(a) +
                    " are distinct but too close for a stable decomposition; perturb the "
                    "parameters or use asr_quadrature_oracle");
            rep_sum.push_back(0.0);
            rep_count.push_back(0);
        }
        const int c = int(rep_sum.size()) - 1;
        cluster_of[order[k]] = c;
        rep_sum[std::size_t(c)] += a;
        ++rep_count[std::size_t(c)];
        prev = a;
    }
    const std::size_t nc = rep_sum.size();
    std::vector<double> rep(nc);
    for (std::size_t c = 0; c < nc; ++c) rep[c] = rep_sum[c] / rep_count[c];

    // 1 - prod(1 - g_n) expanded over non-empty subsets; per subset the
    // rational factor 1/prod(z + alpha) is decomposed over its pole clusters.
    // The Taylor coefficients t_k of prod_{d' != d} (u + rep_d' - rep_d)^{-m_d'}
    // around u = 0 follow from the log-derivative power series: the principal
    // part coefficient at (z + rep_d)^{-j} is t_{m_d - j}.
    Expansion out;
    std::vector<int> mult(nc);
    std::vector<double> inv_u, upow, tcoef, pcoef;
    std::vector<int> other_mult;
    for (std::uint32_t mask = 1; mask < (std::uint32_t(1) << n); ++mask) {
        double pref = 1.0, beta = 0.0;
        std::fill(mult.begin(), mult.end(), 0);
        for (std::uint32_t bits = mask; bits; bits &= bits - 1) {
            const int i = std::countr_zero(bits);
            pref *= alpha[std::size_t(i)];
            beta += lm[std::size_t(i)];
            ++mult[std::size_t(cluster_of[std::size_t(i)])];
        }
        const double sign = (std::popcount(mask) & 1) ? 1.0 : -1.0;

        for (std::size_t d = 0; d < nc; ++d) {
            const int md = mult[d];
            if (md == 0) continue;

            inv_u.clear();
            other_mult.clear();
            double t0 = 1.0;
            for (std::size_t e = 0; e < nc; ++e) {
                if (e == d || mult[e] == 0) continue;
                const double iu = 1.0 / (rep[e] - rep[d]);
                inv_u.push_back(iu);
                other_mult.push_back(mult[e]);
                for (int q = 0; q < mult[e]; ++q) t0 *= iu;
            }

            tcoef.assign(std::size_t(md), 0.0);
            tcoef[0] = t0;
            if (md > 1) {
                pcoef.assign(std::size_t(md - 1), 0.0);
                upow.assign(inv_u.begin(), inv_u.end());
                for (int j = 0; j < md - 1; ++j) {
                    double s = 0.0;
                    for (std::size_t e = 0; e < inv_u.size(); ++e) {
                        s += other_mult[e] * upow[e];
                        upow[e] *= inv_u[e];
                    }
                    pcoef[std::size_t(j)] = (j & 1) ? s : -s;  // (-1)^{j+1} sum m/u^{j+1}
                }
                for (int k = 0; k + 1 < md; ++k) {
                    double acc = 0.0;
                    for (int i = 0; i <= k; ++i)
                        acc += pcoef[std::size_t(i)] * tcoef[std::size_t(k - i)];
                    tcoef[std::size_t(k + 1)] = acc / (k + 1);
                }
            }

            for (int j = 1; j <= md; ++j) {
                const double c = tcoef[std::size_t(md - j)];
                if (c == 0.0) continue;
                out.terms.push_back({sign * pref * c, beta, rep[d], j});
            }
        }
    }

    // Aggregate identical (mult, alpha, beta) tuples; across the full subset
    // sum many coincide (all subsets of equal size in the IID case).
    std::sort(out.terms.begin(), out.terms.end(),
              [](const PartialFractionTerm& x, const PartialFractionTerm& y) {
                  if (x.mult != y.mult) return x.mult < y.mult;
                  if (x.alpha != y.alpha) return x.alpha < y.alpha;
                  return x.beta < y.beta;
              });
    std::vector<PartialFractionTerm> merged;
    for (const auto& t : out.terms) {
        if (!merged.empty()) {
            auto& b = merged.back();
            if (b.mult == t.mult && nearly_equal_rel(b.alpha, t.alpha, 1e-12) &&
                nearly_equal_rel(b.beta, t.beta, 1e-12)) {
                b.sigma += t.sigma;
                continue;
            }
        }
        merged.push_back(t);
    }
    std::erase_if(merged, [](const PartialFractionTerm& t) { return t.sigma == 0.0; });
    out.terms = std::move(merged);
    return out;
}

// Each term integrates to
//   sigma * [alpha^-m F_e(beta) - sum_{j=1..m} alpha^{j-1-m} I_j(beta, 1+alpha)]
// where I_j(beta, a) = integral_0^inf e^{-beta u} (u+a)^-j du and
// F_e(x) = e^x E1(x) = I_1(x, 1); the alpha powers come from re-decomposing
// 1/((u+1)(u+1+alpha)^m).
double asr_df_closed(const NetworkConfig& config) {
    const Expansion ex = expand_partial_fractions(config);
    double total = 0.0;
    for (const auto& t : ex.terms) {
        const double a1 = 1.0 + t.alpha;
        double apow = std::pow(t.alpha, -double(t.mult));
        double val = apow * scaled_e1(t.beta);
        for (int j = 1; j <= t.mult; ++j) {
            val -= apow * exp_over_pole_power(t.beta, a1, j);
            apow *= t.alpha;
        }
        total += t.sigma * val;
    }
    return std::max(total, 0.0);
}

// Same structure with every I_j replaced by its expectation over the shared
// first-hop gain, asr_kernel(beta, a, j); for mult-1 terms this reduces to
// (sigma/alpha) * [K(beta) - K(beta (1+alpha))].
double asr_af_closed(const NetworkConfig& config, const QuadratureSpec& quad) {
    const Expansion ex = expand_partial_fractions(config);
    double total = 0.0;
    for (const auto& t : ex.terms) {
        const double a1 = 1.0 + t.alpha;
        double apow = std::pow(t.alpha, -double(t.mult));
        double val = apow * asr_kernel(t.beta, 1.0, 1, quad);
        for (int j = 1; j <= t.mult; ++j) {
            val -= apow * asr_kernel(t.beta, a1, j, quad);
            apow *= t.alpha;
        }
        total += t.sigma * val;
    }
    return std::max(total, 0.0);
}

double outage_probability(const NetworkConfig& config, Strategy strategy, double target_rate) {
    if (!(target_rate >= 0.0))
        throw std::domain_error("outage_probability: target rate must be >= 0");
    return cdf_selection(std::exp(target_rate), config, strategy);
}

namespace {

double df_asr_by_quadrature(const NetworkConfig& config, const QuadratureSpec& quad) {
    const auto integrand = [&config](double x) {
        const double z = std::exp(x);
        double f = 1.0;
        for (const auto& r : config.relays) f *= cdf_z_df(z, r);
        return 1.0 - f;
    };
    return integrate_to_inf(integrand, 0.0, quad);
}

}  // namespace

double asr_quadrature_oracle(const NetworkConfig& config, Strategy strategy,
                             const QuadratureSpec& quad) {
    config.validate();
    if (strategy == Strategy::kDF) return df_asr_by_quadrature(config, quad);

    // Conditioned on the shared first-hop gain mu, the AF product model is the
    // DF problem with rates lambda/mu; tighten the inner tolerance so the
    // outer integral sees a clean integrand.
    QuadratureSpec inner = quad;
    inner.rel_tol *= 0.01;
    const auto conditional = [&config, &inner](double mu) {
        if (mu <= 0.0) return 0.0;
        const double w = std::exp(-mu);
        if (w == 0.0) return 0.0;
        NetworkConfig scaled = config;
        for (auto& r : scaled.relays) {
            r.lambda_m /= mu;
            r.lambda_e /= mu;
        }
        return w * df_asr_by_quadrature(scaled, inner);
    };
    return integrate(conditional, 0.0, 1.0, quad) + integrate_to_inf(conditional, 1.0, quad);
}

}  // namespace relaysec
