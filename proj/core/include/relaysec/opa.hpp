#pragma once

// Beamforming baseline: distributes the total transmit power gamma0 across
// all relays to maximize (1 + |h_m^H w|^2)/(1 + |h_e^H w|^2) under
// ||w||^2 = gamma0. The optimum lies in span{h_m, h_e}, so the problem
// reduces to a 2x2 generalized eigenproblem solved in closed form; when even
// the best in-span direction cannot beat ratio 1 and an orthogonal direction
// exists, the power is parked there for a ratio of exactly 1.

#include <complex>
#include <cstdint>
#include <vector>

#include "relaysec/channel.hpp"
#include "relaysec/montecarlo.hpp"

namespace relaysec {

struct OpaProblem {
    std::vector<std::complex<double>> h_m;  // relay -> destination gains
    std::vector<std::complex<double>> h_e;  // relay -> eavesdropper gains
    double gamma0 = 1.0;                    // total transmit power
};

struct OpaSolution {
    std::vector<std::complex<double>> w;  // ||w||^2 = gamma0
    double rate;                          // max(ln objective, 0)
    double objective;                     // achieved (1+|h_m^H w|^2)/(1+|h_e^H w|^2)
};

OpaSolution solve_opa(const OpaProblem& p);

// Paired per-realization comparison against single-relay selection, which
// spends the same power gamma0 on the best relay alone and is therefore a
// feasible point of the beamforming problem.
struct OpaComparison {
    EstimateWithCI opa;        // mean beamforming rate
    EstimateWithCI selection;  // mean selection rate on the same realizations
    EstimateWithCI gap;        // per-trial (opa - selection)
    std::uint64_t violations;  // trials where opa fell below selection beyond slack
};

// gamma0 <= 0 selects the default policy: the per-relay power of relay 0,
// so selection and beamforming spend identical total power.
OpaComparison compare_opa_vs_selection(const NetworkConfig& config,
                                       const MonteCarloOptions& opts = {},
                                       double gamma0 = 0.0);

EstimateWithCI estimate_opa_asr(const NetworkConfig& config, const MonteCarloOptions& opts = {},
                                double gamma0 = 0.0);
EstimateWithCI estimate_opa_outage(const NetworkConfig& config, double target_rate,
                                   const MonteCarloOptions& opts = {}, double gamma0 = 0.0);

}  // namespace relaysec
