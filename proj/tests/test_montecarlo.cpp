#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "relaysec/analytic.hpp"
#include "relaysec/montecarlo.hpp"

using namespace relaysec;

namespace {

template <typename Cdf>
double ks_scaled(std::vector<double> sample, Cdf cdf) {
    std::sort(sample.begin(), sample.end());
    const double n = double(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max(d, std::max(std::abs(f - double(i) / n),
                                 std::abs(f - double(i + 1) / n)));
    }
    return d * (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n));
}

}  // namespace

TEST_CASE("decode-and-forward selection picks the largest snr ratio") {
    ChannelRealization real{{5.0, 5.0}, {3.0, 0.5}, {1.0, 0.2}};
    const auto out = select_df(real);
    CHECK(out.relay_index == 0);
    CHECK(out.z_value == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(out.rate == doctest::Approx(std::log(2.0)).epsilon(1e-15));

    // ties resolve to the lowest index; z == 1 earns zero rate
    ChannelRealization tie{{1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}};
    CHECK(select_df(tie).relay_index == 0);
    CHECK(select_df(tie).rate == 0.0);

    // a zero first-hop snr still participates at the default threshold
    ChannelRealization zero_sr{{0.0}, {2.0}, {1.0}};
    CHECK(select_df(zero_sr).relay_index == 0);
}

TEST_CASE("decode threshold filters the participant set") {
    ChannelRealization real{{0.1, 5.0}, {9.0, 1.0}, {1.0, 0.5}};
    CHECK(select_df(real).relay_index == 0);         // relay 0 has the bigger ratio
    CHECK(select_df(real, 1.0).relay_index == 1);    // ...but cannot decode here

    const auto none = select_df(real, 50.0);
    CHECK(none.relay_index == -1);
    CHECK(none.z_value == 1.0);
    CHECK(none.rate == 0.0);
}

TEST_CASE("amplify-and-forward selection under both gain models") {
    // product model: the shared first-hop gain is gamma_sr[0]
    ChannelRealization real{{2.0, 99.0}, {1.0, 3.0}, {0.5, 4.0}};
    const std::vector<double> unit{1.0, 1.0};
    const auto approx = select_af(real, AfVariant::kApproxProduct, unit);
    CHECK(approx.relay_index == 0);  // (1+2)/(1+1) = 1.5 beats (1+6)/(1+8)
    CHECK(approx.z_value == doctest::Approx(1.5).epsilon(1e-15));

    // end-to-end model with per-relay first hops and fixed gain constants
    const std::vector<double> means{4.0, 4.0};
    const auto exact = select_af(real, AfVariant::kExactAps, means);
    const auto end_to_end = [&](std::size_t i) {
        const double c = 1.0 + means[i];
        const double gm = real.gamma_sr[i] * real.gamma_rd[i] / (real.gamma_rd[i] + c);
        const double ge = real.gamma_sr[i] * real.gamma_re[i] / (real.gamma_re[i] + c);
        return (1.0 + gm) / (1.0 + ge);
    };
    const double z0 = end_to_end(0), z1 = end_to_end(1);
    CHECK(exact.z_value == doctest::Approx(std::max(z0, z1)).epsilon(1e-15));
    CHECK(exact.relay_index == (z1 > z0 ? 1 : 0));

    // model-object overload resolves the means itself
    const auto config = NetworkConfig::iid_network(2, 1.0, 1.0);
    const AfModel model{AfVariant::kApproxProduct, 0.0};
    const auto via_model = select_af(real, model, config);
    CHECK(via_model.relay_index == approx.relay_index);
    CHECK(via_model.z_value == approx.z_value);
}

TEST_CASE("first-hop means per model") {
    const auto config = NetworkConfig::iid_network(2, 0.1, 1.0);
    const auto unit = af_first_hop_means(config, {AfVariant::kApproxProduct, 16.0});
    CHECK(unit == std::vector<double>{1.0, 1.0});  // boost only applies to exact-aps

    const auto boosted = af_first_hop_means(config, {AfVariant::kExactAps, 16.0});
    const double expected = std::pow(10.0, 1.6) * 10.0;  // stronger second-hop mean is 10
    CHECK(boosted[0] == doctest::Approx(expected).epsilon(1e-14));
    CHECK(boosted[1] == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("estimates agree with the closed forms within monte carlo error") {
    const MonteCarloOptions opts{200'000, 7, 0, 0.0};

    const auto df = estimate_asr(NetworkConfig::iid_network(2, 1.0, 1.0), Strategy::kDF,
                                 {}, opts);
    CHECK(std::abs(df.mean - 0.40236322408066456) < 4.0 * df.std_error);
    CHECK(df.trials == 200'000);
    CHECK(df.seed == 7);
    CHECK(df.std_error > 0.0);

    const auto af1 = estimate_asr(NetworkConfig::iid_network(1, 1.0, 1.0), Strategy::kAF,
                                  {}, opts);
    CHECK(std::abs(af1.mean - 0.19428223805986746) < 4.0 * af1.std_error);

    const auto af2 = estimate_asr(NetworkConfig::iid_network(2, 1.0, 1.0), Strategy::kAF,
                                  {}, opts);
    CHECK(std::abs(af2.mean - 0.33265178260706610) < 4.0 * af2.std_error);
}

TEST_CASE("outage estimates match the analytic cdf and binomial error") {
    const auto config = NetworkConfig::iid_network(2, 0.1, 0.1);
    const double rate = 0.5;
    const double analytic = outage_probability(config, Strategy::kDF, rate);
    const MonteCarloOptions opts{200'000, 3, 0, 0.0};
    const auto est = estimate_outage(config, Strategy::kDF, rate, {}, opts);
    CHECK(std::abs(est.mean - analytic) < 4.0 * est.std_error);
    // the indicator is bernoulli, so the sample error must track sqrt(p(1-p)/n)
    const double binom = std::sqrt(analytic * (1.0 - analytic) / double(opts.trials));
    CHECK(std::abs(est.std_error - binom) < 0.02 * binom);
}

TEST_CASE("worker count never changes the result") {
    const auto config = NetworkConfig::iid_network(3, 0.5, 0.2);
    MonteCarloOptions one{50'000, 1, 1, 0.0};
    MonteCarloOptions three = one;
    three.workers = 3;

    const auto a = estimate_asr(config, Strategy::kDF, {}, one);
    const auto b = estimate_asr(config, Strategy::kDF, {}, three);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);

    const AfModel exact{AfVariant::kExactAps, 16.0};
    const auto c = estimate_asr(config, Strategy::kAF, exact, one);
    const auto d = estimate_asr(config, Strategy::kAF, exact, three);
    CHECK(c.mean == d.mean);
    CHECK(c.std_error == d.std_error);

    const auto e = estimate_outage(config, Strategy::kDF, 0.5, {}, one);
    const auto f = estimate_outage(config, Strategy::kDF, 0.5, {}, three);
    CHECK(e.mean == f.mean);
    CHECK(e.std_error == f.std_error);
}

TEST_CASE("seeds reproduce and distinguish runs") {
    const auto config = NetworkConfig::iid_network(2, 1.0, 1.0);
    const MonteCarloOptions s1{10'000, 1, 0, 0.0};
    MonteCarloOptions s2 = s1;
    s2.seed = 2;
    const auto a = estimate_asr(config, Strategy::kDF, {}, s1);
    const auto b = estimate_asr(config, Strategy::kDF, {}, s1);
    const auto c = estimate_asr(config, Strategy::kDF, {}, s2);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
    CHECK(a.mean != c.mean);
}

TEST_CASE("per-trial pipeline layout is frozen") {
    const auto config = NetworkConfig::iid_network(2, 0.7, 1.3);
    const std::vector<double> unit(2, 1.0);

    TrialRng rng(9, 0);
    ChannelRealization real;
    sample_realization_into(config, rng, unit, real);
    const double manual_df = select_df(real).rate;
    const auto est_df = estimate_asr(config, Strategy::kDF, {}, {1, 9, 1, 0.0});
    CHECK(est_df.mean == manual_df);

    const AfModel exact{AfVariant::kExactAps, 16.0};
    const auto means = af_first_hop_means(config, exact);
    TrialRng rng2(9, 0);
    sample_realization_into(config, rng2, means, real);
    const double manual_af = select_af(real, AfVariant::kExactAps, means).rate;
    const auto est_af = estimate_asr(config, Strategy::kAF, exact, {1, 9, 1, 0.0});
    CHECK(est_af.mean == manual_af);
}

TEST_CASE("selected ratio follows the analytic selection cdf") {
    const auto config = NetworkConfig::iid_network(2, 1.0, 1.0);
    const std::vector<double> unit(2, 1.0);
    const int n = 30'000;
    std::vector<double> zs(n);
    ChannelRealization real;
    for (int t = 0; t < n; ++t) {
        TrialRng rng(21, std::uint64_t(t));
        sample_realization_into(config, rng, unit, real);
        zs[std::size_t(t)] = select_df(real).z_value;
    }
    // a quarter of the mass sits below z = 1, so this exercises both branches
    CHECK(ks_scaled(std::move(zs), [&](double z) {
              return cdf_selection(z, config, Strategy::kDF);
          }) < 1.628);
}

TEST_CASE("product-model ratio follows the bessel cdf above one") {
    const RelayLinkParams p{0.6, 1.1, 1.0};
    const auto config = NetworkConfig::from_relays({p});
    const std::vector<double> unit(1, 1.0);
    const int n = 30'000;
    std::vector<double> zs(n);
    ChannelRealization real;
    for (int t = 0; t < n; ++t) {
        TrialRng rng(22, std::uint64_t(t));
        sample_realization_into(config, rng, unit, real);
        zs[std::size_t(t)] = select_af(real, AfVariant::kApproxProduct, unit).z_value;
    }
    // evaluate the ks gap only where the approximate cdf is defined (z >= 1);
    // the sup over a subset is a valid, slightly conservative statistic
    std::sort(zs.begin(), zs.end());
    double d = 0.0;
    for (std::size_t i = 0; i < zs.size(); ++i) {
        if (zs[i] < 1.0) continue;
        const double f = cdf_z_af_approx(zs[i], p);
        d = std::max(d, std::max(std::abs(f - double(i) / n),
                                 std::abs(f - double(i + 1) / n)));
    }
    CHECK(d * (std::sqrt(double(n)) + 0.12 + 0.11 / std::sqrt(double(n))) < 1.628);
}

TEST_CASE("raising the decode threshold only removes rate") {
    const auto config = NetworkConfig::iid_network(3, 0.5, 0.5);
    MonteCarloOptions base{20'000, 5, 0, 0.0};
    MonteCarloOptions strict = base;
    strict.decode_threshold = 2.0;
    const auto loose = estimate_asr(config, Strategy::kDF, {}, base);
    const auto tight = estimate_asr(config, Strategy::kDF, {}, strict);
    CHECK(tight.mean <= loose.mean);  // paired seeds: holds exactly, not just in mean

    MonteCarloOptions impossible = base;
    impossible.decode_threshold = 1e12;
    const auto none = estimate_asr(config, Strategy::kDF, {}, impossible);
    CHECK(none.mean == 0.0);
    CHECK(none.std_error == 0.0);
}

TEST_CASE("input guards") {
    const auto config = NetworkConfig::iid_network(2, 1.0, 1.0);
    CHECK_THROWS_AS(estimate_asr(config, Strategy::kDF, {}, {0, 1, 0, 0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(estimate_outage(config, Strategy::kDF, -1.0, {}, {100, 1, 0, 0.0}),
                    std::domain_error);
    CHECK_THROWS_AS(estimate_asr(NetworkConfig{}, Strategy::kDF, {}, {100, 1, 0, 0.0}),
                    std::invalid_argument);
}
