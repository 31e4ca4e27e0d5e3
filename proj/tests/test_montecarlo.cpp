#include <doctest.h>

#include <cmath>

#include "ofdmici/analytic.hpp"
#include "ofdmici/montecarlo.hpp"
#include "ofdmici/rng.hpp"

using namespace ofdmici;

namespace {

OfdmConfig small_awgn_config(int order, double noise_density) {
    OfdmConfig cfg;
    cfg.used_subcarriers = {-4, -3, -2, -1, 1, 2, 3, 4};
    cfg.constellation_order = order;
    cfg.noise_density = noise_density;
    cfg.validate();
    return cfg;
}

ChannelRealization identity_channel() { return {{{0.0, 0.0, {1.0, 0.0}}}, "identity"}; }

SimSpec awgn_spec(int order, double ratio, std::int64_t iterations, std::uint64_t seed) {
    SimSpec spec;
    const double bits = order == 4 ? 2.0 : (order == 16 ? 4.0 : 6.0);
    spec.cfg = small_awgn_config(order, (1.0 / bits) / ratio);
    spec.targets = {{0, 1}};
    spec.iterations = iterations;
    spec.seed = seed;
    spec.min_error_bits = 0;
    spec.bootstrap_resamples = 0;
    return spec;
}

} // namespace

TEST_CASE("noiseless identity channel has zero errors") {
    SimSpec spec = awgn_spec(16, 1.0, 500, 7);
    spec.cfg.noise_density = 0.0;
    spec.bootstrap_resamples = 200;
    const auto results = run_ber(spec, identity_channel());
    REQUIRE(results.size() == 1);
    CHECK(results[0].ber == 0.0);
    CHECK(results[0].error_bits == 0);
    CHECK(results[0].total_bits == 500 * 4);
    CHECK(results[0].discarded == false); // min_error_bits = 0
    CHECK(*results[0].ci_low == 0.0);
    CHECK(*results[0].ci_high == 0.0);
}

TEST_CASE("rerun with the same spec is bit identical") {
    SimSpec spec = awgn_spec(4, 1.0, 4000, 99);
    spec.bootstrap_resamples = 200;
    spec.min_error_bits = 10;
    const auto a = run_ber(spec, identity_channel());
    const auto b = run_ber(spec, identity_channel());
    REQUIRE(a.size() == b.size());
    CHECK(a[0].ber == b[0].ber);
    CHECK(a[0].error_bits == b[0].error_bits);
    CHECK(*a[0].ci_low == *b[0].ci_low);
    CHECK(*a[0].ci_high == *b[0].ci_high);

    SimSpec other = spec;
    other.seed = 100;
    const auto c = run_ber(other, identity_channel());
    CHECK(a[0].error_bits != c[0].error_bits);
}

TEST_CASE("identity-channel BER matches the analytic AWGN BEP") {
    // r = 1 for 4-QAM: BEP = 0.5 erfc(1). 2e4 iterations, 5 sigma slack.
    SimSpec spec = awgn_spec(4, 1.0, 20000, 12345);
    const auto results = run_ber(spec, identity_channel());
    const double p = 0.078649603525142565;
    const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(results[0].total_bits));
    CHECK(std::abs(results[0].ber - p) < 5.0 * sigma);
}

TEST_CASE("binomial consistency over 100 seeded runs") {
    const double p = awgn_qam_bep(16, 1.0);
    int within = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        SimSpec spec = awgn_spec(16, 1.0, 10000, seed);
        const auto results = run_ber(spec, identity_channel());
        const double sigma =
            std::sqrt(p * (1 - p) / static_cast<double>(results[0].total_bits));
        if (std::abs(results[0].ber - p) < 4.0 * sigma) ++within;
    }
    CHECK(within >= 99);
}

TEST_CASE("zero channel coefficient is rejected") {
    SimSpec spec = awgn_spec(4, 1.0, 100, 1);
    const ChannelRealization dead{{{0.0, 0.0, {0.0, 0.0}}}, "dead"};
    CHECK_THROWS_AS((void)run_ber(spec, dead), Error);
}

TEST_CASE("spec validation") {
    SimSpec spec = awgn_spec(4, 1.0, 100, 1);
    spec.targets = {{0, 99}};
    CHECK_THROWS_AS(spec.validate(), Error);
    spec = awgn_spec(4, 1.0, 100, 1);
    spec.iterations = 0;
    CHECK_THROWS_AS(spec.validate(), Error);
    spec = awgn_spec(4, 1.0, 100, 1);
    spec.confidence = 1.0;
    CHECK_THROWS_AS(spec.validate(), Error);
    spec = awgn_spec(4, 1.0, 100, 1);
    spec.bootstrap_resamples = 50;
    CHECK_THROWS_AS(spec.validate(), Error);
    spec = awgn_spec(4, 1.0, 100, 1);
    spec.targets.clear();
    CHECK_THROWS_AS(spec.validate(), Error);
}

TEST_CASE("error factor arithmetic and error paths") {
    BerResult ber;
    ber.ber = 0.05;
    LinkMetrics metrics;
    metrics.bep = 0.05;
    CHECK(error_factor(ber, metrics) == doctest::Approx(1.0).epsilon(1e-14));
    ber.ber = 0.04;
    CHECK(error_factor(ber, metrics) == doctest::Approx(0.8).epsilon(1e-14));

    BerResult discarded = ber;
    discarded.discarded = true;
    CHECK_THROWS_AS((void)error_factor(discarded, metrics), Error);
    LinkMetrics zero = metrics;
    zero.bep = 0.0;
    CHECK_THROWS_AS((void)error_factor(ber, zero), Error);
}

TEST_CASE("bootstrap degenerate inputs") {
    const std::vector<std::int64_t> zeros(50, 0);
    const auto [lo0, hi0] = bootstrap_ci(zeros, 4, 500, 0.95, 1);
    CHECK(lo0 == 0.0);
    CHECK(hi0 == 0.0);

    const std::vector<std::int64_t> constant(50, 3);
    const auto [lo3, hi3] = bootstrap_ci(constant, 4, 500, 0.95, 1);
    CHECK(lo3 == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(hi3 == doctest::Approx(0.75).epsilon(1e-14));

    CHECK_THROWS_AS((void)bootstrap_ci({}, 4, 500, 0.95, 1), Error);
    CHECK_THROWS_AS((void)bootstrap_ci(constant, 4, 50, 0.95, 1), Error);
    CHECK_THROWS_AS((void)bootstrap_ci(constant, 0, 500, 0.95, 1), Error);
    CHECK_THROWS_AS((void)bootstrap_ci(constant, 4, 500, 1.5, 1), Error);
}

TEST_CASE("bootstrap coverage on synthetic binomial data") {
    // 500 trials of n=100 iterations with 2 bits each, p = 0.3; the 95%
    // percentile interval should cover p in roughly 95% of the trials.
    const double p = 0.3;
    const int trials = 500;
    const int iterations = 100;
    const int bits = 2;
    Rng rng(2024);
    int covered = 0;
    for (int t = 0; t < trials; ++t) {
        std::vector<std::int64_t> errors(iterations);
        for (auto& e : errors) {
            e = 0;
            for (int b = 0; b < bits; ++b) e += rng.uniform01() < p ? 1 : 0;
        }
        const auto [lo, hi] = bootstrap_ci(errors, bits, 300, 0.95, rng.next_u64());
        if (lo <= p && p <= hi) ++covered;
    }
    const double coverage = static_cast<double>(covered) / trials;
    CHECK(coverage > 0.88);
    CHECK(coverage <= 1.0);
}

TEST_CASE("instant study smoke") {
    SimSpec spec;
    spec.cfg = lte10_config(4, 1.0, (1.0 / 2.0) / 1e5); // EbTX/N0 = 50 dB
    spec.targets = {{0, 150}, {1, 150}};
    spec.iterations = 3000;
    spec.seed = 4;
    spec.min_error_bits = 10;
    spec.bootstrap_resamples = 200;
    const auto rows =
        instant_study(spec, builtin_profile("itu_vehicular"), {750.0, 8, 0}, 2, 2);
    REQUIRE(rows.size() == 4);
    for (const auto& row : rows) {
        CHECK(row.order == 4);
        CHECK(row.subcarrier == 150);
        CHECK(row.total_bits == 3000 * 2);
        CHECK(row.bep >= 0.0);
        // Noise at 50 dB is far below the ICI for this channel.
        CHECK(row.ici_variance > 10.0 * row.noise_density);
        if (row.rho) {
            CHECK(!row.discarded);
            CHECK(*row.rho == doctest::Approx(row.ber / row.bep).epsilon(1e-12));
        }
    }
    const auto rerun =
        instant_study(spec, builtin_profile("itu_vehicular"), {750.0, 8, 0}, 2, 1);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].ber == rerun[i].ber);
        CHECK(rows[i].bep == rerun[i].bep);
    }
}

TEST_CASE("sweep degenerates to AWGN for a single fixed path") {
    // One direct tap and zero Doppler: |H| = 1 exactly, no ICI, so the
    // simulated mean BER must sit on the analytic curve.
    TapProfile fixed{{{0.0, 0.0, DopplerSpectrum::direct}}, "fixed"};
    SimSpec spec;
    spec.cfg = small_awgn_config(4, 0.0);
    spec.targets = {{0, 1}};
    spec.iterations = 20000;
    spec.seed = 17;
    spec.min_error_bits = 0;
    spec.bootstrap_resamples = 200;
    SweepAxis axis;
    axis.kind = SweepAxis::Kind::ebno_db;
    axis.grid = {3.0};
    const auto rows = average_sweep(spec, fixed, {0.0, 8, 5}, 4, axis, 2);
    REQUIRE(rows.size() == 1);
    const double expected = awgn_qam_bep(4, std::pow(10.0, 0.3));
    CHECK(rows[0].mean_bep == doctest::Approx(expected).epsilon(1e-12));
    const double sigma =
        std::sqrt(expected * (1 - expected) / static_cast<double>(rows[0].total_bits));
    CHECK(std::abs(rows[0].mean_ber - expected) < 4.0 * sigma);
    CHECK(rows[0].ci_low <= rows[0].mean_ber);
    CHECK(rows[0].mean_ber <= rows[0].ci_high);
}

TEST_CASE("border subcarrier sees less ICI than the middle one") {
    SimSpec spec;
    spec.cfg = lte10_config(4, 1.0, 0.0);
    spec.targets = {{0, 150}, {0, 300}};
    spec.iterations = 2000;
    spec.seed = 21;
    spec.min_error_bits = 0;
    spec.bootstrap_resamples = 0;
    SweepAxis axis;
    axis.kind = SweepAxis::Kind::ebno_db;
    axis.grid = {20.0, 40.0};
    const auto rows = average_sweep(spec, builtin_profile("itu_vehicular"), {750.0, 8, 2}, 40,
                                    axis, 2);
    REQUIRE(rows.size() == 4);
    for (std::size_t g = 0; g < 2; ++g) {
        const auto& middle = rows[g * 2 + 0];
        const auto& border = rows[g * 2 + 1];
        CHECK(middle.subcarrier == 150);
        CHECK(border.subcarrier == 300);
        CHECK(border.mean_bep < middle.mean_bep);
    }
}

TEST_CASE("doppler axis sweep is well formed and deterministic") {
    SimSpec spec;
    spec.cfg = lte10_config(4, 1.0, (1.0 / 2.0) / 1e5);
    spec.targets = {{0, 150}};
    spec.iterations = 1000;
    spec.seed = 8;
    spec.min_error_bits = 0;
    spec.bootstrap_resamples = 150;
    SweepAxis axis;
    axis.kind = SweepAxis::Kind::normalized_doppler;
    axis.grid = {0.02, 0.05};
    const auto rows = average_sweep(spec, builtin_profile("itu_vehicular"), {0.0, 8, 0}, 10,
                                    axis, 2);
    REQUIRE(rows.size() == 2);
    for (const auto& row : rows) {
        CHECK(row.mean_bep > 0.0);
        CHECK(row.total_bits == 10 * 1000 * 2);
    }
    const auto rerun = average_sweep(spec, builtin_profile("itu_vehicular"), {0.0, 8, 0}, 10,
                                     axis, 1);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].mean_ber == rerun[i].mean_ber);
        CHECK(rows[i].mean_bep == rerun[i].mean_bep);
        CHECK(rows[i].ci_low == rerun[i].ci_low);
    }
}
