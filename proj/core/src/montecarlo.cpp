#include "relaysec/montecarlo.hpp"

#include <cmath>
#include <stdexcept>

#include "relaysec/rng.hpp"

namespace relaysec {
namespace {

void require_trials(const MonteCarloOptions& opts) {
    if (opts.trials == 0) throw std::invalid_argument("montecarlo: trials must be >= 1");
}

}  // namespace

SelectionOutcome select_af(const ChannelRealization& real, AfVariant variant,
                           const std::vector<double>& first_hop_means) {
    const std::size_t n = real.gamma_rd.size();
    int best = -1;
    double bestz = 0.0;
    if (variant == AfVariant::kApproxProduct) {
        const double mu = real.gamma_sr[0];
        for (std::size_t i = 0; i < n; ++i) {
            const double z =
                (1.0 + mu * real.gamma_rd[i]) / (1.0 + mu * real.gamma_re[i]);
            if (z > bestz) {
                bestz = z;
                best = int(i);
            }
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const double c = 1.0 + first_hop_means[i];
            const double gm = real.gamma_sr[i] * real.gamma_rd[i] / (real.gamma_rd[i] + c);
            const double ge = real.gamma_sr[i] * real.gamma_re[i] / (real.gamma_re[i] + c);
            const double z = (1.0 + gm) / (1.0 + ge);
            if (z > bestz) {
                bestz = z;
                best = int(i);
            }
        }
    }
    return {best, bestz, bestz > 1.0 ? std::log(bestz) : 0.0};
}

SelectionOutcome select_df(const ChannelRealization& real, double decode_threshold) {
    const std::size_t n = real.gamma_rd.size();
    int best = -1;
    double bestz = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (real.gamma_sr[i] < decode_threshold) continue;
        const double z = (1.0 + real.gamma_rd[i]) / (1.0 + real.gamma_re[i]);
        if (z > bestz) {
            bestz = z;
            best = int(i);
        }
    }
    if (best < 0) return {-1, 1.0, 0.0};
    return {best, bestz, bestz > 1.0 ? std::log(bestz) : 0.0};
}

SelectionOutcome select_af(const ChannelRealization& real, const AfModel& model,
                           const NetworkConfig& config) {
    return select_af(real, model.variant, af_first_hop_means(config, model));
}

std::vector<double> af_first_hop_means(const NetworkConfig& config, const AfModel& model) {
    std::vector<double> means(config.size(), 1.0);
    if (model.variant == AfVariant::kExactAps) {
        const double boost = std::pow(10.0, model.first_hop_boost_db / 10.0);
        for (std::size_t i = 0; i < config.size(); ++i)
            means[i] = boost * std::max(1.0 / config.relays[i].lambda_m,
                                        1.0 / config.relays[i].lambda_e);
    }
    return means;
}

namespace detail {

EstimateWithCI moments_to_estimate(double sum, double sumsq, std::uint64_t trials,
                                   std::uint64_t seed) {
    const double mean = sum / double(trials);
    double var = 0.0;
    if (trials > 1)
        var = std::max(0.0, (sumsq - double(trials) * mean * mean) / double(trials - 1));
    return {mean, std::sqrt(var / double(trials)), trials, seed};
}

}  // namespace detail

EstimateWithCI estimate_asr(const NetworkConfig& config, Strategy strategy,
                            const AfModel& model, const MonteCarloOptions& opts) {
    config.validate();
    require_trials(opts);
    const bool df = strategy == Strategy::kDF;
    const std::vector<double> means = df ? std::vector<double>(config.size(), 1.0)
                                         : af_first_hop_means(config, model);
    const auto totals = detail::accumulate_chunked<2>(opts.trials, opts.workers, [&] {
        return [&, scratch = ChannelRealization{}](std::uint64_t t,
                                                   std::array<double, 2>& acc) mutable {
            TrialRng rng(opts.seed, t);
            sample_realization_into(config, rng, means, scratch);
            const double v = df ? select_df(scratch, opts.decode_threshold).rate
                                : select_af(scratch, model.variant, means).rate;
            acc[0] += v;
            acc[1] += v * v;
        };
    });
    return detail::moments_to_estimate(totals[0], totals[1], opts.trials, opts.seed);
}

EstimateWithCI estimate_outage(const NetworkConfig& config, Strategy strategy,
                               double target_rate, const AfModel& model,
                               const MonteCarloOptions& opts) {
    config.validate();
    require_trials(opts);
    if (!(target_rate >= 0.0))
        throw std::domain_error("estimate_outage: target rate must be >= 0");
    const bool df = strategy == Strategy::kDF;
    const std::vector<double> means = df ? std::vector<double>(config.size(), 1.0)
                                         : af_first_hop_means(config, model);
    const auto totals = detail::accumulate_chunked<2>(opts.trials, opts.workers, [&] {
        return [&, scratch = ChannelRealization{}](std::uint64_t t,
                                                   std::array<double, 2>& acc) mutable {
            TrialRng rng(opts.seed, t);
            sample_realization_into(config, rng, means, scratch);
            const double rate = df ? select_df(scratch, opts.decode_threshold).rate
                                   : select_af(scratch, model.variant, means).rate;
            const double v = rate <= target_rate ? 1.0 : 0.0;
            acc[0] += v;
            acc[1] += v * v;
        };
    });
    return detail::moments_to_estimate(totals[0], totals[1], opts.trials, opts.seed);
}

}  // namespace relaysec
