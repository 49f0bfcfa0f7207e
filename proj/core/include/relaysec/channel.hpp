#pragma once

// Network description and per-trial channel draws for a dual-hop relay
// network with an eavesdropper. Every link fades independently (Rayleigh),
// so link SNRs are exponential with the configured rate parameters.

#include <complex>
#include <cstddef>
#include <vector>

#include "relaysec/rng.hpp"

namespace relaysec {

// Rate parameters of the exponential SNR distributions seen through relay n:
// lambda_m for the relay->destination link, lambda_e for relay->eavesdropper.
// gamma_avg is the mean SNR of the relay->destination link in linear units;
// it only matters for the complex (beamforming) draws where absolute scale
// enters through the power budget.
struct RelayLinkParams {
    double lambda_m = 1.0;
    double lambda_e = 1.0;
    double gamma_avg = 1.0;
};

struct NetworkConfig {
    std::vector<RelayLinkParams> relays;

    std::size_t size() const { return relays.size(); }

    static NetworkConfig iid_network(std::size_t n, double lambda_m, double lambda_e,
                                     double gamma_avg = 1.0);
    static NetworkConfig from_relays(std::vector<RelayLinkParams> relays);

    // Throws std::invalid_argument on empty networks or non-positive rates.
    void validate() const;
};

// SNR draws for one trial. Index i addresses relay i.
struct ChannelRealization {
    std::vector<double> gamma_sr;  // source -> relay
    std::vector<double> gamma_rd;  // relay -> destination
    std::vector<double> gamma_re;  // relay -> eavesdropper
};

// Complex channel vectors across the relay set, as seen by the destination
// and the eavesdropper. Used by the beamforming baseline.
struct ComplexRealization {
    std::vector<std::complex<double>> h_rd;
    std::vector<std::complex<double>> h_re;
};

// 10^(-snr_db/10): maps an SNR operating point to an exponential rate
// parameter (mean SNR of 10^(snr_db/10) corresponds to rate 10^(-snr_db/10)).
double snr_db_to_rate(double snr_db);

// Draws one trial. First-hop SNRs are exponential with mean
// first_hop_avg_snr[n]; second-hop SNRs follow the relay's lambda_m/lambda_e.
ChannelRealization sample_realization(const NetworkConfig& config, TrialRng& rng,
                                      const std::vector<double>& first_hop_avg_snr);
ChannelRealization sample_realization(const NetworkConfig& config, TrialRng& rng,
                                      double first_hop_avg_snr = 1.0);

// In-place variant used by the estimator loops to avoid reallocation.
void sample_realization_into(const NetworkConfig& config, TrialRng& rng,
                             const std::vector<double>& first_hop_avg_snr,
                             ChannelRealization& out);

// Complex Gaussian draws with E|h|^2 matched to the exponential SNR model:
// |h_rd[n]|^2 has mean 1/(gamma_avg * lambda_m), so gamma_avg * |h|^2 is
// exponential(lambda_m), and likewise for the eavesdropper side.
ComplexRealization sample_complex_realization(const NetworkConfig& config, TrialRng& rng);

}  // namespace relaysec
