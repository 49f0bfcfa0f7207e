#pragma once

// Closed-form secrecy statistics for opportunistic relay selection: per-relay
// CDFs of the SNR ratio Z = (1+gamma_m)/(1+gamma_e), the selection (max) CDF,
// its partial-fraction expansion, and the resulting average-secrecy-rate and
// outage expressions. An independent quadrature oracle integrates the defining
// expressions directly and is what the closed forms are tested against.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "relaysec/channel.hpp"
#include "relaysec/quadrature.hpp"

namespace relaysec {

enum class Strategy { kDF, kAF };

// ln z for z > 1, else 0. Throws std::domain_error for z <= 0.
double secrecy_rate(double z);

// CDF of Z with exponential gamma_m ~ Exp(lambda_m), gamma_e ~ Exp(lambda_e).
// Defined on all z > 0; the z < 1 branch is derived by the same region
// integration as the upper branch.
double cdf_z_df(double z, const RelayLinkParams& p);

// Approximate CDF of Z under the product SNR model gamma = mu * gamma_link.
// Only defined for z >= 1 (throws std::domain_error below).
double cdf_z_af_approx(double z, const RelayLinkParams& p);

// CDF of max_n Z_n: product of the per-relay CDFs.
double cdf_selection(double z, const NetworkConfig& config, Strategy strategy);

// One term sigma * e^{-beta (z-1)} / (z + alpha)^mult of the expansion of the
// selection survival function 1 - F_max(z) for z >= 1.
struct PartialFractionTerm {
    double sigma;
    double beta;
    double alpha;
    int mult;
};

struct Expansion {
    std::vector<PartialFractionTerm> terms;

    // Sum of the terms; reproduces 1 - F_max(z) for z >= 1.
    double survival(double z) const;
};

// Pole locations closer than the merge tolerance (relative) collapse into one
// higher-multiplicity pole. Distinct poles inside the guard band would make
// the coefficients blow up like 1/gap, so they raise PoleClusteringError
// instead of returning a garbage expansion.
inline constexpr double kPoleMergeRelTol = 1e-9;
inline constexpr double kPoleGuardRelTol = 1e-6;
inline constexpr std::size_t kMaxClosedFormRelays = 20;

class PoleClusteringError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Expands 1 - F_max over all non-empty relay subsets and decomposes each
// subset's rational factor into partial fractions; terms with equal
// (beta, alpha, mult) are aggregated. Only the DF ratio CDF is expanded; the
// AF closed form reuses the same terms under its first-hop expectation.
Expansion expand_partial_fractions(const NetworkConfig& config,
                                   Strategy strategy = Strategy::kDF);

double asr_df_closed(const NetworkConfig& config);
double asr_af_closed(const NetworkConfig& config, const QuadratureSpec& quad = {});

// F_max(e^R) at a target secrecy rate R >= 0.
double outage_probability(const NetworkConfig& config, Strategy strategy, double target_rate);

// Direct numeric integration of the ASR definition (for AF, with the outer
// expectation over the shared first-hop gain done numerically as well).
double asr_quadrature_oracle(const NetworkConfig& config, Strategy strategy,
                             const QuadratureSpec& quad = {});

}  // namespace relaysec
