// relaysec: secrecy-rate and secrecy-outage curves for opportunistic relay
// selection, as closed forms, Monte Carlo estimates, or both.
//
//   relaysec analytic --relays 4 --snr-db 0:20:5          closed forms only
//   relaysec simulate --strategy opa-df --trials 100000   Monte Carlo only
//   relaysec sweep --config exp.json --out curves.csv     both, plus a plot stub
//   relaysec validate                                     acceptance checks
//
// Exit codes: 0 success, 1 failed validation or runtime failure, 2 bad
// config/usage.

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "relaysec/analytic.hpp"
#include "relaysec/experiment.hpp"
#include "relaysec/validation.hpp"

namespace {

using namespace relaysec;

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return char(std::toupper(c)); });
    return s;
}

struct Flags {
    std::string config;
    std::size_t relays = 2;
    double gamma_e_db = 10.0;
    std::string snr_db;
    std::string strategy;
    std::string af_model;
    double boost_db = 0.0;
    double target_rate = 0.5;
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 1;
    std::string out;
    bool normalize = false;

    CLI::Option *o_config{}, *o_relays{}, *o_gamma_e{}, *o_snr{}, *o_strategy{},
        *o_af_model{}, *o_boost{}, *o_rate{}, *o_trials{}, *o_seed{}, *o_out{}, *o_norm{};
};

void add_experiment_flags(CLI::App* sub, Flags& f) {
    f.o_config = sub->add_option("--config", f.config,
                                 "JSON experiment config; other flags override it");
    f.o_relays = sub->add_option("--relays", f.relays, "number of IID relays");
    f.o_gamma_e =
        sub->add_option("--gamma-e-db", f.gamma_e_db, "average wiretap-link SNR in dB");
    f.o_snr = sub->add_option("--snr-db", f.snr_db,
                              "main-channel average SNR sweep as start:stop:step, in dB");
    f.o_strategy = sub->add_option("--strategy", f.strategy, "sdf | saf | opa-df");
    f.o_af_model =
        sub->add_option("--af-model", f.af_model, "approx-product | exact-aps");
    f.o_boost = sub->add_option("--first-hop-boost-db", f.boost_db,
                                "extra S->R average SNR for the exact-aps model");
    f.o_rate = sub->add_option("--target-rate", f.target_rate,
                               "target secrecy rate for the outage metric (nats)");
    f.o_trials = sub->add_option("--trials", f.trials, "Monte Carlo trials per point");
    f.o_seed = sub->add_option("--seed", f.seed, "base RNG seed");
    f.o_out = sub->add_option("--out", f.out, "CSV output path (default: stdout)");
    f.o_norm = sub->add_flag("--normalize-awgn", f.normalize,
                             "report ASR relative to the AWGN capacity ln(1+snr)");
}

bool parse_sweep_flag(const std::string& text, SweepAxis& axis) {
    double a = 0.0, b = 0.0, c = 0.0;
    int used = -1;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf%n", &a, &b, &c, &used) != 3 ||
        used < 0 || text[std::size_t(used)] != '\0')
        return false;
    axis = {a, b, c};
    return true;
}

ExperimentSpec build_spec(const Flags& f) {
    ExperimentSpec spec;
    if (f.o_config->count()) {
        std::ifstream in(f.config, std::ios::binary);
        if (!in) throw ConfigError({"--config: cannot read '" + f.config + "'"});
        std::ostringstream text;
        text << in.rdbuf();
        spec = parse_config(text.str());
    }

    std::vector<std::string> errors;
    if (f.o_relays->count()) {
        if (spec.explicit_relays)
            errors.push_back("--relays: conflicts with the config relay_list");
        else if (f.relays < 1 || f.relays > kMaxClosedFormRelays)
            errors.push_back("--relays: must be between 1 and " +
                             std::to_string(kMaxClosedFormRelays));
        else
            spec.n_relays = f.relays;
    }
    if (f.o_gamma_e->count()) {
        if (spec.explicit_relays)
            errors.push_back(
                "--gamma-e-db: not applicable with a relay_list (it fixes lambda_e)");
        else
            spec.gamma_e_db = f.gamma_e_db;
    }
    if (f.o_snr->count()) {
        SweepAxis axis;
        if (!parse_sweep_flag(f.snr_db, axis))
            errors.push_back("--snr-db: expected start:stop:step, got '" + f.snr_db + "'");
        else if (!(axis.step > 0.0))
            errors.push_back("--snr-db: step must be > 0");
        else if (!(axis.start <= axis.stop))
            errors.push_back("--snr-db: start must not exceed stop");
        else
            spec.sweep = axis;
    }
    if (f.o_strategy->count()) {
        const std::string kw = upper(f.strategy);
        if (kw == "SDF")
            spec.strategy = ExperimentStrategy::kSDF;
        else if (kw == "SAF")
            spec.strategy = ExperimentStrategy::kSAF;
        else if (kw == "OPA-DF")
            spec.strategy = ExperimentStrategy::kOpaDf;
        else
            errors.push_back("--strategy: expected sdf, saf, or opa-df");
    }
    if (f.o_af_model->count()) {
        const std::string kw = upper(f.af_model);
        if (kw == "APPROX-PRODUCT")
            spec.af_model.variant = AfVariant::kApproxProduct;
        else if (kw == "EXACT-APS")
            spec.af_model.variant = AfVariant::kExactAps;
        else
            errors.push_back("--af-model: expected approx-product or exact-aps");
    }
    if (f.o_boost->count()) spec.af_model.first_hop_boost_db = f.boost_db;
    if (f.o_rate->count()) {
        if (f.target_rate < 0.0)
            errors.push_back("--target-rate: must be non-negative");
        else
            spec.target_rate = f.target_rate;
    }
    if (f.o_trials->count()) {
        if (f.trials < 1)
            errors.push_back("--trials: must be at least 1");
        else
            spec.trials = f.trials;
    }
    if (f.o_seed->count()) spec.seed = f.seed;
    if (f.o_norm->count()) spec.normalize_awgn = true;

    if (!errors.empty()) throw ConfigError(std::move(errors));
    return spec;
}

void write_plot_stub(const std::string& csv_path) {
    const std::string stub_path = csv_path + ".plot.py";
    std::ofstream out(stub_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + stub_path + "'");
    out << "#!/usr/bin/env python3\n"
           "\"\"\"Draws the analytic curves and Monte Carlo error bars from\n"
        << csv_path
        << ".\nGenerated alongside the CSV; edit freely.\"\"\"\n"
           "import csv\n"
           "from collections import defaultdict\n"
           "\n"
           "import matplotlib.pyplot as plt\n"
           "\n"
           "CSV = \"" << csv_path << "\"\n"
           "\n"
           "series = defaultdict(lambda: {\"snr\": [], \"analytic\": [], \"mc\": [], \"err\": []})\n"
           "with open(CSV, newline=\"\") as f:\n"
           "    for row in csv.DictReader(f):\n"
           "        s = series[(row[\"strategy\"], row[\"metric\"])]\n"
           "        s[\"snr\"].append(float(row[\"snr_db\"]))\n"
           "        s[\"analytic\"].append(float(row[\"analytic\"]) if row[\"analytic\"] else None)\n"
           "        s[\"mc\"].append(float(row[\"mc_mean\"]) if row[\"mc_mean\"] else None)\n"
           "        s[\"err\"].append(3 * float(row[\"mc_stderr\"]) if row[\"mc_stderr\"] else 0.0)\n"
           "\n"
           "metrics = sorted({m for (_, m) in series})\n"
           "fig, axes = plt.subplots(1, len(metrics), figsize=(6 * len(metrics), 4.5), squeeze=False)\n"
           "for ax, metric in zip(axes[0], metrics):\n"
           "    for (strategy, m), s in sorted(series.items()):\n"
           "        if m != metric:\n"
           "            continue\n"
           "        if all(v is not None for v in s[\"analytic\"]):\n"
           "            ax.plot(s[\"snr\"], s[\"analytic\"], label=f\"{strategy} analytic\")\n"
           "        if all(v is not None for v in s[\"mc\"]):\n"
           "            ax.errorbar(s[\"snr\"], s[\"mc\"], yerr=s[\"err\"], fmt=\"o\", ms=4,\n"
           "                        capsize=3, label=f\"{strategy} mc (3 sigma)\")\n"
           "    ax.set_xlabel(\"main-channel average SNR (dB)\")\n"
           "    ax.set_ylabel(metric)\n"
           "    if metric == \"outage\":\n"
           "        ax.set_yscale(\"log\")\n"
           "    ax.grid(True, alpha=0.3)\n"
           "    ax.legend()\n"
           "fig.tight_layout()\n"
           "fig.savefig(CSV + \".png\", dpi=150)\n"
           "print(\"wrote\", CSV + \".png\")\n";
}

int run_experiment_command(const Flags& f, RunMode mode, bool emit_plot_stub) {
    const ExperimentSpec spec = build_spec(f);
    const std::vector<ResultRow> rows = run_experiment(spec, mode);
    const std::string csv = to_csv(rows);
    if (f.o_out->count()) {
        std::ofstream out(f.out, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write '" + f.out + "'");
        out << csv;
        if (emit_plot_stub) write_plot_stub(f.out);
    } else {
        std::fwrite(csv.data(), 1, csv.size(), stdout);
    }
    return 0;
}

int run_validate(std::uint64_t trials, std::uint64_t seed) {
    AcceptanceOptions opts;
    opts.trials = trials;
    opts.opa_trials = std::min<std::uint64_t>(trials, 100'000);
    opts.seed = seed;
    bool all_passed = true;
    for (const CheckResult& r : run_acceptance(opts)) {
        all_passed = all_passed && r.passed;
        std::printf("[%s] %s  margin=%.4g  %s\n", r.passed ? "PASS" : "FAIL",
                    r.name.c_str(), r.margin, r.detail.c_str());
    }
    std::printf("%s\n", all_passed ? "all checks passed" : "CHECKS FAILED");
    return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "secrecy-rate and secrecy-outage analysis of opportunistic relay selection"};
    app.require_subcommand(1);

    struct Command {
        CLI::App* sub;
        RunMode mode;
        bool plot_stub;
        Flags flags;
    };
    std::array<Command, 3> commands{{
        {app.add_subcommand("analytic", "emit closed-form columns only"),
         RunMode::kAnalytic, false, {}},
        {app.add_subcommand("simulate", "emit Monte Carlo columns only"),
         RunMode::kSimulate, false, {}},
        {app.add_subcommand("sweep",
                            "emit analytic and Monte Carlo columns side by side"),
         RunMode::kBoth, true, {}},
    }};
    for (auto& c : commands) add_experiment_flags(c.sub, c.flags);

    CLI::App* validate =
        app.add_subcommand("validate", "run the acceptance checks and report margins");
    std::uint64_t validate_trials = 1'000'000;
    std::uint64_t validate_seed = 1;
    validate->add_option("--trials", validate_trials, "Monte Carlo trials per grid point");
    validate->add_option("--seed", validate_seed, "base RNG seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        for (const auto& c : commands)
            if (c.sub->parsed()) return run_experiment_command(c.flags, c.mode, c.plot_stub);
        if (validate->parsed()) return run_validate(validate_trials, validate_seed);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
