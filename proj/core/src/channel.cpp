#include "relaysec/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace relaysec {

NetworkConfig NetworkConfig::iid_network(std::size_t n, double lambda_m, double lambda_e,
                                         double gamma_avg) {
    NetworkConfig config;
    config.relays.assign(n, RelayLinkParams{lambda_m, lambda_e, gamma_avg});
    return config;
}

NetworkConfig NetworkConfig::from_relays(std::vector<RelayLinkParams> relays) {
    NetworkConfig config;
    config.relays = std::move(relays);
    return config;
}

void NetworkConfig::validate() const {
    if (relays.empty()) throw std::invalid_argument("network: at least one relay required");
    for (std::size_t i = 0; i < relays.size(); ++i) {
        const auto& r = relays[i];
        const bool ok = r.lambda_m > 0.0 && r.lambda_e > 0.0 && r.gamma_avg > 0.0 &&
                        std::isfinite(r.lambda_m) && std::isfinite(r.lambda_e) &&
                        std::isfinite(r.gamma_avg);
        if (!ok)
            throw std::invalid_argument("network: relay " + std::to_string(i) +
                                        " has non-positive or non-finite parameters");
    }
}

double snr_db_to_rate(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

void sample_realization_into(const NetworkConfig& config, TrialRng& rng,
                             const std::vector<double>& first_hop_avg_snr,
                             ChannelRealization& out) {
    const std::size_t n = config.size();
    out.gamma_sr.resize(n);
    out.gamma_rd.resize(n);
    out.gamma_re.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.gamma_sr[i] = rng.exponential(1.0 / first_hop_avg_snr[i]);
        out.gamma_rd[i] = rng.exponential(config.relays[i].lambda_m);
        out.gamma_re[i] = rng.exponential(config.relays[i].lambda_e);
    }
}

ChannelRealization sample_realization(const NetworkConfig& config, TrialRng& rng,
                                      const std::vector<double>& first_hop_avg_snr) {
    ChannelRealization real;
    sample_realization_into(config, rng, first_hop_avg_snr, real);
    return real;
}

ChannelRealization sample_realization(const NetworkConfig& config, TrialRng& rng,
                                      double first_hop_avg_snr) {
    const std::vector<double> means(config.size(), first_hop_avg_snr);
    return sample_realization(config, rng, means);
}

ComplexRealization sample_complex_realization(const NetworkConfig& config, TrialRng& rng) {
    const std::size_t n = config.size();
    ComplexRealization real;
    real.h_rd.resize(n);
    real.h_re.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        // E|h|^2 = 1/(gamma_avg*lambda); each component is N(0, E|h|^2 / 2)
        const double sd = std::sqrt(0.5 / (config.relays[i].gamma_avg * config.relays[i].lambda_m));
        const auto xy = rng.normal_pair();
        real.h_rd[i] = {sd * xy[0], sd * xy[1]};
        const double se = std::sqrt(0.5 / (config.relays[i].gamma_avg * config.relays[i].lambda_e));
        const auto uv = rng.normal_pair();
        real.h_re[i] = {se * uv[0], se * uv[1]};
    }
    return real;
}

}  // namespace relaysec
