#pragma once

// Trial-based estimation of the average secrecy rate and the secrecy outage
// probability for both relaying strategies. Trials are addressed by a
// counter-based RNG, pulled in fixed-size chunks by workers, and reduced
// serially in chunk order, so estimates are bit-identical for any worker
// count.

#include <array>
#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

#include "relaysec/analytic.hpp"
#include "relaysec/channel.hpp"

namespace relaysec {

enum class AfVariant {
    kApproxProduct,  // shared first-hop gain, product SNR (what the closed form models)
    kExactAps,       // per-relay first hops through a fixed average-power-scaling gain
};

struct AfModel {
    AfVariant variant = AfVariant::kApproxProduct;
    // Extra average SNR on the S->R links, relative to the stronger of the
    // two second-hop link averages. Only EXACT-APS uses it.
    double first_hop_boost_db = 0.0;
};

struct SelectionOutcome {
    int relay_index;  // -1 when no relay passes the decode threshold
    double z_value;
    double rate;
};

struct EstimateWithCI {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
};

struct MonteCarloOptions {
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 1;
    unsigned workers = 0;           // 0 = hardware concurrency
    double decode_threshold = 0.0;  // minimum S->R SNR for a DF relay to participate
};

// Z_n = (1 + gamma_rd)/(1 + gamma_re) over participating relays; ties go to
// the lowest index. With no participants: {-1, 1.0, 0.0}.
SelectionOutcome select_df(const ChannelRealization& real, double decode_threshold = 0.0);

// APPROX-PRODUCT: Z_n = (1 + mu g_rd)/(1 + mu g_re) with the shared first-hop
// gain mu = gamma_sr[0]. EXACT-APS: end-to-end SNR g_sr g_x / (g_x + C_n) per
// hop with C_n = 1 + E[gamma_sr,n]; the config supplies the averages.
SelectionOutcome select_af(const ChannelRealization& real, const AfModel& model,
                           const NetworkConfig& config);

// Same selection with the per-relay mean S->R SNRs already resolved (see
// af_first_hop_means); what the estimator loops call per trial.
SelectionOutcome select_af(const ChannelRealization& real, AfVariant variant,
                           const std::vector<double>& first_hop_means);

// Mean S->R SNR per relay used when sampling realizations for an AF model
// (all ones for APPROX-PRODUCT; boosted link averages for EXACT-APS).
std::vector<double> af_first_hop_means(const NetworkConfig& config, const AfModel& model);

EstimateWithCI estimate_asr(const NetworkConfig& config, Strategy strategy,
                            const AfModel& model = {}, const MonteCarloOptions& opts = {});
EstimateWithCI estimate_outage(const NetworkConfig& config, Strategy strategy,
                               double target_rate, const AfModel& model = {},
                               const MonteCarloOptions& opts = {});

namespace detail {

// Runs `trials` calls of per_trial = make_worker() over fixed 2^14-trial
// chunks handed out by an atomic counter; per-chunk accumulators are reduced
// serially in chunk order afterwards, making the totals independent of the
// worker count and of scheduling.
template <std::size_t K, typename WorkerFactory>
std::array<double, K> accumulate_chunked(std::uint64_t trials, unsigned workers,
                                         WorkerFactory&& make_worker) {
    constexpr std::uint64_t kChunkSize = std::uint64_t(1) << 14;
    const std::uint64_t chunks = (trials + kChunkSize - 1) / kChunkSize;
    std::vector<std::array<double, K>> partial(chunks);
    std::atomic<std::uint64_t> next{0};
    const auto body = [&] {
        auto per_trial = make_worker();
        for (;;) {
            const std::uint64_t c = next.fetch_add(1, std::memory_order_relaxed);
            if (c >= chunks) break;
            std::array<double, K> acc{};
            const std::uint64_t lo = c * kChunkSize;
            const std::uint64_t hi = std::min(trials, lo + kChunkSize);
            for (std::uint64_t t = lo; t < hi; ++t) per_trial(t, acc);
            partial[c] = acc;
        }
    };
    std::uint64_t n = workers ? workers : std::max(1u, std::thread::hardware_concurrency());
    n = std::min<std::uint64_t>(n, chunks);
    if (n <= 1) {
        body();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n);
        for (std::uint64_t i = 0; i < n; ++i) pool.emplace_back(body);
    }
    std::array<double, K> total{};
    for (const auto& acc : partial)
        for (std::size_t k = 0; k < K; ++k) total[k] += acc[k];
    return total;
}

// mean and standard error from accumulated (sum, sum of squares).
EstimateWithCI moments_to_estimate(double sum, double sumsq, std::uint64_t trials,
                                   std::uint64_t seed);

}  // namespace detail

}  // namespace relaysec
