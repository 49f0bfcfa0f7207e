#include "relaysec/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string_view>
#include <utility>

#include <json.hpp>

#include "relaysec/analytic.hpp"
#include "relaysec/opa.hpp"

namespace relaysec {
namespace {

using nlohmann::json;

std::string fmt(const char* format, double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

std::string join_errors(const std::vector<std::string>& errors) {
    std::string msg = "invalid experiment config";
    for (const auto& e : errors) {
        msg += "\n  ";
        msg += e;
    }
    return msg;
}

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return char(std::toupper(c)); });
    return s;
}

// Accumulates "path: problem" messages while pulling typed values out of the
// parsed JSON; parse_config reports them all at once.
class Reader {
  public:
    std::vector<std::string> errors;

    void fail(const std::string& path, const std::string& what) {
        errors.push_back(path + ": " + what);
    }

    bool number(const json& j, const std::string& path, double& out) {
        if (!j.is_number()) {
            fail(path, "expected a number");
            return false;
        }
        out = j.get<double>();
        return true;
    }

    bool positive(const json& j, const std::string& path, double& out) {
        double v;
        if (!number(j, path, v)) return false;
        if (!(v > 0.0) || !std::isfinite(v)) {
            fail(path, "must be positive and finite");
            return false;
        }
        out = v;
        return true;
    }

    bool non_negative(const json& j, const std::string& path, double& out) {
        double v;
        if (!number(j, path, v)) return false;
        if (!(v >= 0.0) || !std::isfinite(v)) {
            fail(path, "must be non-negative and finite");
            return false;
        }
        out = v;
        return true;
    }

    bool count(const json& j, const std::string& path, std::uint64_t min,
               std::uint64_t& out) {
        if (j.is_number_unsigned()) {
            out = j.get<std::uint64_t>();
        } else if (j.is_number_integer()) {
            const auto v = j.get<std::int64_t>();
            if (v < 0) {
                fail(path, "must not be negative");
                return false;
            }
            out = std::uint64_t(v);
        } else {
            fail(path, "expected an integer");
            return false;
        }
        if (out < min) {
            fail(path, "must be at least " + std::to_string(min));
            return false;
        }
        return true;
    }

    bool boolean(const json& j, const std::string& path, bool& out) {
        if (!j.is_boolean()) {
            fail(path, "expected true or false");
            return false;
        }
        out = j.get<bool>();
        return true;
    }

    bool keyword(const json& j, const std::string& path,
                 std::initializer_list<std::string_view> allowed, std::string& out) {
        if (!j.is_string()) {
            fail(path, "expected a string");
            return false;
        }
        out = upper(j.get<std::string>());
        if (std::find(allowed.begin(), allowed.end(), out) == allowed.end()) {
            std::string what = "must be one of";
            for (const auto a : allowed) {
                what += ' ';
                what += a;
            }
            fail(path, what);
            return false;
        }
        return true;
    }

    void reject_unknown(const json& obj, const std::string& prefix,
                        std::initializer_list<std::string_view> known) {
        for (const auto& [key, value] : obj.items()) {
            (void)value;
            if (std::find(known.begin(), known.end(), key) == known.end())
                fail(prefix + "." + key, "unknown key");
        }
    }
};

void parse_relay_list(Reader& r, const json& j, ExperimentSpec& spec) {
    if (!j.is_array() || j.empty()) {
        r.fail("$.relay_list", "expected a non-empty array of relay objects");
        return;
    }
    if (j.size() > kMaxClosedFormRelays) {
        r.fail("$.relay_list",
               "at most " + std::to_string(kMaxClosedFormRelays) + " relays");
        return;
    }
    spec.explicit_relays = true;
    spec.n_relays = j.size();
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string at = "$.relay_list[" + std::to_string(i) + "]";
        const json& entry = j[i];
        if (!entry.is_object()) {
            r.fail(at, "expected an object");
            continue;
        }
        r.reject_unknown(entry, at, {"lambda_m", "lambda_e", "gamma_avg"});
        RelayLinkParams relay;
        if (entry.contains("lambda_m"))
            r.positive(entry["lambda_m"], at + ".lambda_m", relay.lambda_m);
        else
            r.fail(at + ".lambda_m", "required");
        if (entry.contains("lambda_e"))
            r.positive(entry["lambda_e"], at + ".lambda_e", relay.lambda_e);
        else
            r.fail(at + ".lambda_e", "required");
        if (entry.contains("gamma_avg"))
            r.positive(entry["gamma_avg"], at + ".gamma_avg", relay.gamma_avg);
        spec.relays.push_back(relay);
    }
}

void parse_af_model(Reader& r, const json& j, AfModel& model) {
    if (!j.is_object()) {
        r.fail("$.af_model", "expected an object");
        return;
    }
    r.reject_unknown(j, "$.af_model", {"variant", "first_hop_boost_db"});
    if (j.contains("variant")) {
        std::string kw;
        if (r.keyword(j["variant"], "$.af_model.variant", {"APPROX-PRODUCT", "EXACT-APS"},
                      kw))
            model.variant =
                kw == "EXACT-APS" ? AfVariant::kExactAps : AfVariant::kApproxProduct;
    }
    if (j.contains("first_hop_boost_db")) {
        double v;
        if (r.number(j["first_hop_boost_db"], "$.af_model.first_hop_boost_db", v)) {
            if (std::isfinite(v))
                model.first_hop_boost_db = v;
            else
                r.fail("$.af_model.first_hop_boost_db", "must be finite");
        }
    }
}

void parse_sweep(Reader& r, const json& j, SweepAxis& sweep) {
    if (!j.is_object()) {
        r.fail("$.sweep", "expected an object with start/stop/step");
        return;
    }
    r.reject_unknown(j, "$.sweep", {"start", "stop", "step"});
    if (j.contains("start")) r.number(j["start"], "$.sweep.start", sweep.start);
    if (j.contains("stop")) r.number(j["stop"], "$.sweep.stop", sweep.stop);
    if (j.contains("step")) r.number(j["step"], "$.sweep.step", sweep.step);
    if (!(sweep.step > 0.0) || !std::isfinite(sweep.step))
        r.fail("$.sweep.step", "must be > 0");
    else if (!(sweep.start <= sweep.stop))
        r.fail("$.sweep.start", "must not exceed sweep.stop");
}

}  // namespace

std::vector<double> SweepAxis::points() const {
    std::vector<double> pts;
    if (!(step > 0.0) || !(start <= stop)) return pts;
    // count the points up front instead of accumulating start += step, so a
    // stop value that lands on a grid point is kept despite rounding
    const auto count = std::uint64_t((stop - start) / step * (1.0 + 1e-12) + 1e-9) + 1;
    pts.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) pts.push_back(start + double(i) * step);
    return pts;
}

NetworkConfig ExperimentSpec::network_at(double snr_db) const {
    const double scale = std::pow(10.0, -snr_db / 10.0);
    if (explicit_relays) {
        NetworkConfig net;
        net.relays.reserve(relays.size());
        for (const auto& r : relays)
            net.relays.push_back({r.lambda_m * scale, r.lambda_e, r.gamma_avg / scale});
        return net;
    }
    return NetworkConfig::iid_network(n_relays, scale,
                                      std::pow(10.0, -gamma_e_db / 10.0), 1.0 / scale);
}

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error(join_errors(errors)), errors_(std::move(errors)) {}

const char* to_string(ExperimentStrategy strategy) {
    switch (strategy) {
        case ExperimentStrategy::kSDF: return "SDF";
        case ExperimentStrategy::kSAF: return "SAF";
        case ExperimentStrategy::kOpaDf: return "OPA-DF";
    }
    return "?";
}

ExperimentSpec parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError({std::string("$: not valid JSON (") + e.what() + ")"});
    }
    if (!root.is_object()) throw ConfigError({"$: top level must be an object"});

    Reader r;
    r.reject_unknown(root, "$",
                     {"relays", "relay_list", "strategy", "af_model", "sweep",
                      "gamma_e_db", "target_rate", "trials", "seed", "outputs",
                      "normalize_awgn", "gamma0", "decode_threshold"});

    ExperimentSpec spec;
    if (root.contains("relays")) {
        std::uint64_t n;
        if (r.count(root["relays"], "$.relays", 1, n)) {
            if (n > kMaxClosedFormRelays)
                r.fail("$.relays",
                       "at most " + std::to_string(kMaxClosedFormRelays) + " relays");
            else
                spec.n_relays = std::size_t(n);
        }
    }
    if (root.contains("relay_list")) {
        if (root.contains("relays"))
            r.fail("$.relays", "give either relays or relay_list, not both");
        if (root.contains("gamma_e_db"))
            r.fail("$.gamma_e_db",
                   "not applicable with relay_list (the list already fixes lambda_e)");
        parse_relay_list(r, root["relay_list"], spec);
    }
    if (root.contains("strategy")) {
        std::string kw;
        if (r.keyword(root["strategy"], "$.strategy", {"SDF", "SAF", "OPA-DF"}, kw))
            spec.strategy = kw == "SDF"   ? ExperimentStrategy::kSDF
                            : kw == "SAF" ? ExperimentStrategy::kSAF
                                          : ExperimentStrategy::kOpaDf;
    }
    if (root.contains("af_model")) parse_af_model(r, root["af_model"], spec.af_model);
    if (root.contains("sweep")) parse_sweep(r, root["sweep"], spec.sweep);
    if (root.contains("gamma_e_db"))
        r.number(root["gamma_e_db"], "$.gamma_e_db", spec.gamma_e_db);
    if (root.contains("target_rate"))
        r.non_negative(root["target_rate"], "$.target_rate", spec.target_rate);
    if (root.contains("trials")) r.count(root["trials"], "$.trials", 1, spec.trials);
    if (root.contains("seed")) r.count(root["seed"], "$.seed", 0, spec.seed);
    if (root.contains("outputs")) {
        std::string kw;
        if (r.keyword(root["outputs"], "$.outputs", {"ASR", "OUTAGE", "BOTH"}, kw))
            spec.outputs = kw == "ASR"      ? OutputSet::kAsr
                           : kw == "OUTAGE" ? OutputSet::kOutage
                                            : OutputSet::kBoth;
    }
    if (root.contains("normalize_awgn"))
        r.boolean(root["normalize_awgn"], "$.normalize_awgn", spec.normalize_awgn);
    if (root.contains("gamma0")) r.positive(root["gamma0"], "$.gamma0", spec.gamma0);
    if (root.contains("decode_threshold"))
        r.non_negative(root["decode_threshold"], "$.decode_threshold",
                       spec.decode_threshold);

    if (!r.errors.empty()) throw ConfigError(std::move(r.errors));
    return spec;
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec, RunMode mode) {
    if (spec.strategy == ExperimentStrategy::kOpaDf && mode == RunMode::kAnalytic)
        throw ConfigError(
            {"$.strategy: OPA-DF has no analytic column; run simulate or sweep"});

    const char* name = to_string(spec.strategy);
    const bool want_analytic =
        mode != RunMode::kSimulate && spec.strategy != ExperimentStrategy::kOpaDf;
    const bool want_mc = mode != RunMode::kAnalytic;
    const bool want_asr = spec.outputs != OutputSet::kOutage;
    const bool want_outage = spec.outputs != OutputSet::kAsr;
    const double nan = std::numeric_limits<double>::quiet_NaN();

    std::vector<ResultRow> rows;
    for (const double snr : spec.sweep.points()) {
        try {
            const NetworkConfig net = spec.network_at(snr);
            net.validate();
            const MonteCarloOptions mc{spec.trials, spec.seed, spec.workers,
                                       spec.decode_threshold};
            // optional normalization: rate as a fraction of the main
            // channel's AWGN capacity at this SNR
            const double norm =
                spec.normalize_awgn ? std::log1p(std::pow(10.0, snr / 10.0)) : 1.0;

            if (want_asr) {
                ResultRow row{snr, name, "asr", nan, nan, nan, spec.trials, spec.seed};
                if (want_analytic)
                    row.analytic = (spec.strategy == ExperimentStrategy::kSDF
                                        ? asr_df_closed(net)
                                        : asr_af_closed(net)) /
                                   norm;
                if (want_mc) {
                    EstimateWithCI est;
                    switch (spec.strategy) {
                        case ExperimentStrategy::kSDF:
                            est = estimate_asr(net, Strategy::kDF, {}, mc);
                            break;
                        case ExperimentStrategy::kSAF:
                            est = estimate_asr(net, Strategy::kAF, spec.af_model, mc);
                            break;
                        case ExperimentStrategy::kOpaDf:
                            est = estimate_opa_asr(net, mc, spec.gamma0);
                            break;
                    }
                    row.mc_mean = est.mean / norm;
                    row.mc_stderr = est.std_error / norm;
                }
                rows.push_back(std::move(row));
            }
            if (want_outage) {
                ResultRow row{snr, name, "outage", nan, nan, nan, spec.trials, spec.seed};
                if (want_analytic)
                    row.analytic = outage_probability(
                        net,
                        spec.strategy == ExperimentStrategy::kSDF ? Strategy::kDF
                                                                  : Strategy::kAF,
                        spec.target_rate);
                if (want_mc) {
                    EstimateWithCI est;
                    switch (spec.strategy) {
                        case ExperimentStrategy::kSDF:
                            est = estimate_outage(net, Strategy::kDF, spec.target_rate, {},
                                                  mc);
                            break;
                        case ExperimentStrategy::kSAF:
                            est = estimate_outage(net, Strategy::kAF, spec.target_rate,
                                                  spec.af_model, mc);
                            break;
                        case ExperimentStrategy::kOpaDf:
                            est = estimate_opa_outage(net, spec.target_rate, mc,
                                                      spec.gamma0);
                            break;
                    }
                    row.mc_mean = est.mean;
                    row.mc_stderr = est.std_error;
                }
                rows.push_back(std::move(row));
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw std::runtime_error("sweep point snr_db=" + fmt("%.6g", snr) +
                                     " strategy=" + name + ": " + e.what());
        }
    }
    return rows;
}

std::string to_csv(const std::vector<ResultRow>& rows) {
    std::string out = "snr_db,strategy,metric,analytic,mc_mean,mc_stderr,trials,seed\n";
    const auto cell = [](double v) { return std::isnan(v) ? std::string() : fmt("%.17g", v); };
    for (const auto& r : rows) {
        out += cell(r.snr_db);
        out += ',';
        out += r.strategy;
        out += ',';
        out += r.metric;
        out += ',';
        out += cell(r.analytic);
        out += ',';
        out += cell(r.mc_mean);
        out += ',';
        out += cell(r.mc_stderr);
        out += ',';
        out += std::to_string(r.trials);
        out += ',';
        out += std::to_string(r.seed);
        out += '\n';
    }
    return out;
}

}  // namespace relaysec
