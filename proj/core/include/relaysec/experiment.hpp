#pragma once

// Experiment orchestration: a JSON-configured sweep over main-channel SNR
// that emits analytic and Monte Carlo columns side by side as CSV.
//
// SNR parametrization (the project convention, stated here because nothing
// upstream fixes it): at a sweep point of s dB the main second-hop links use
// lambda_m = 10^(-s/10) (mean SNR 10^(s/10)) and the wiretap links use
// lambda_e = 10^(-gamma_e_db/10). An explicit relay list is treated as the
// 0 dB baseline and scaled the same way, with lambda_e left untouched.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "relaysec/channel.hpp"
#include "relaysec/montecarlo.hpp"

namespace relaysec {

enum class ExperimentStrategy {
    kSDF,    // opportunistic decode-and-forward selection
    kSAF,    // opportunistic amplify-and-forward selection
    kOpaDf,  // optimal power allocation across DF relays (simulation only)
};

enum class OutputSet { kAsr, kOutage, kBoth };

// Which columns of each row get filled in.
enum class RunMode { kAnalytic, kSimulate, kBoth };

struct SweepAxis {
    double start = 0.0;
    double stop = 20.0;
    double step = 5.0;

    // start, start+step, ... up to stop (inclusive, drift-tolerant).
    std::vector<double> points() const;
};

struct ExperimentSpec {
    std::size_t n_relays = 2;
    // When explicit_relays is set, `relays` holds the 0 dB baseline network
    // and gamma_e_db is ignored (the baseline already fixes lambda_e).
    bool explicit_relays = false;
    std::vector<RelayLinkParams> relays;

    ExperimentStrategy strategy = ExperimentStrategy::kSDF;
    AfModel af_model;
    SweepAxis sweep;
    double gamma_e_db = 10.0;
    double target_rate = 0.5;
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 1;
    OutputSet outputs = OutputSet::kBoth;
    bool normalize_awgn = false;  // divide ASR columns by ln(1 + 10^(s/10))
    double gamma0 = 0.0;          // OPA total power; <= 0 means the point's mean SNR
    double decode_threshold = 0.0;
    unsigned workers = 0;  // not a config key; estimator fan-out control

    // The network at one sweep point, per the parametrization above.
    NetworkConfig network_at(double snr_db) const;
};

// Carries every config validation error, not just the first; each message
// is prefixed with the offending field path ("$.sweep.step: ...").
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(std::vector<std::string> errors);
    const std::vector<std::string>& errors() const { return errors_; }

  private:
    std::vector<std::string> errors_;
};

struct ResultRow {
    double snr_db = 0.0;
    std::string strategy;
    std::string metric;  // "asr" or "outage"
    // NaN renders as an empty CSV cell: the analytic column for OPA-DF, the
    // MC columns in analytic-only mode.
    double analytic = 0.0;
    double mc_mean = 0.0;
    double mc_stderr = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
};

const char* to_string(ExperimentStrategy strategy);

// Parses a JSON experiment config. Unknown keys are rejected; all problems
// are collected into one ConfigError.
ExperimentSpec parse_config(const std::string& text);

// One row per (sweep point, metric), sweep points in order, ASR before
// outage. A failing point aborts with strategy and snr_db context.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec, RunMode mode = RunMode::kBoth);

// Stable CSV: pinned header, 17 significant digits, LF line endings.
std::string to_csv(const std::vector<ResultRow>& rows);

}  // namespace relaysec
