#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "ofdmici/channel.hpp"
#include "ofdmici/rng.hpp"

using namespace ofdmici;

TEST_CASE("builtin profiles match the standards' tap counts") {
    const auto itu = builtin_profile("itu_vehicular");
    CHECK(itu.taps.size() == 6);
    CHECK(itu.taps.front().avg_power_db == 0.0);
    CHECK(itu.taps.back().delay_s == doctest::Approx(2.51e-6));

    const auto tux = builtin_profile("tux");
    CHECK(tux.taps.size() == 20);

    const auto rax = builtin_profile("rax");
    CHECK(rax.taps.size() == 10);
    CHECK(rax.taps.front().spectrum == DopplerSpectrum::direct);
    for (std::size_t i = 1; i < rax.taps.size(); ++i) {
        CHECK(rax.taps[i].spectrum == DopplerSpectrum::jakes);
    }

    CHECK_THROWS_AS((void)builtin_profile("urban"), Error);
    CHECK(builtin_profile_names().size() == 3);
}

TEST_CASE("builtin profile delays fit under the LTE cyclic prefix") {
    const double cp = 72.0 / 15.36e6;
    for (const auto& name : builtin_profile_names()) {
        const auto profile = builtin_profile(name);
        double previous = -1.0;
        for (const auto& tap : profile.taps) {
            CHECK(tap.delay_s > previous);
            CHECK(tap.delay_s < cp);
            previous = tap.delay_s;
        }
    }
}

TEST_CASE("realize structure for jakes and direct taps") {
    TapProfile one_tap{{{0.0, 0.0, DopplerSpectrum::jakes}}, "one"};
    const auto chan = realize(one_tap, {200.0, 8, 1});
    REQUIRE(chan.paths.size() == 8);
    for (const auto& p : chan.paths) CHECK(p.delay_s == 0.0);

    const auto rax = realize(builtin_profile("rax"), {200.0, 8, 1});
    CHECK(rax.paths.size() == 1 + 9 * 8);

    const auto still = realize(one_tap, {0.0, 8, 1});
    for (const auto& p : still.paths) CHECK(p.doppler_hz == 0.0);
}

TEST_CASE("per-path doppler magnitude bounded by the maximum") {
    const auto profile = builtin_profile("itu_vehicular");
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto chan = realize(profile, {750.0, 8, seed});
        for (const auto& p : chan.paths) {
            CHECK(std::abs(p.doppler_hz) <= 750.0 + 1e-9);
        }
    }
}

TEST_CASE("realization determinism") {
    const auto profile = builtin_profile("tux");
    const DopplerConfig dop{500.0, 8, 42};
    const auto a = realize(profile, dop);
    const auto b = realize(profile, dop);
    REQUIRE(a.paths.size() == b.paths.size());
    for (std::size_t i = 0; i < a.paths.size(); ++i) {
        CHECK(a.paths[i].delay_s == b.paths[i].delay_s);
        CHECK(a.paths[i].doppler_hz == b.paths[i].doppler_hz);
        CHECK(a.paths[i].amplitude == b.paths[i].amplitude);
    }
    const auto c = realize(profile, {500.0, 8, 43});
    bool any_different = false;
    for (std::size_t i = 0; i < a.paths.size(); ++i) {
        if (a.paths[i].amplitude != c.paths[i].amplitude) any_different = true;
    }
    CHECK(any_different);
}

TEST_CASE("total path power is the normalized profile power") {
    // The sum of squared path amplitudes is deterministically 1; the
    // statistical-gain requirement follows a fortiori.
    for (const auto& name : builtin_profile_names()) {
        const auto profile = builtin_profile(name);
        double mean_gain = 0.0;
        const int realizations = 1000;
        for (int r = 0; r < realizations; ++r) {
            const auto chan = realize(profile, {321.0, 8, static_cast<std::uint64_t>(r)});
            double gain = 0.0;
            for (const auto& p : chan.paths) gain += std::norm(p.amplitude);
            CHECK(gain == doctest::Approx(1.0).epsilon(1e-12));
            mean_gain += gain;
        }
        CHECK(mean_gain / realizations == doctest::Approx(1.0).epsilon(0.02));
    }
}

TEST_CASE("tap autocorrelation approximates the Jakes bessel curve") {
    // Single unit-power Jakes tap; empirical complex autocorrelation at
    // lag dt against J0(2 pi numax dt), frozen J0 references.
    const TapProfile one_tap{{{0.0, 0.0, DopplerSpectrum::jakes}}, "one"};
    const double numax = 100.0;
    const struct {
        double x;
        double j0;
    } lags[] = {{1.0, 0.76519768655796655},
                {2.0, 0.22389077914123567},
                {4.0, -0.39714980986384735}};
    const int realizations = 4000;
    for (const auto& lag : lags) {
        const double dt = lag.x / (2.0 * std::numbers::pi * numax);
        cdouble acc{};
        for (int r = 0; r < realizations; ++r) {
            const auto chan = realize(one_tap, {numax, 8, static_cast<std::uint64_t>(r)});
            cdouble g0{}, g1{};
            for (const auto& p : chan.paths) {
                g0 += p.amplitude;
                g1 += p.amplitude *
                      std::polar(1.0, 2.0 * std::numbers::pi * p.doppler_hz * dt);
            }
            acc += g1 * std::conj(g0);
        }
        acc /= static_cast<double>(realizations);
        CHECK(std::abs(acc - cdouble{lag.j0, 0.0}) < 0.05);
    }
}

TEST_CASE("doppler config validation") {
    CHECK_THROWS_AS(realize(builtin_profile("rax"), {-1.0, 8, 0}), Error);
    CHECK_THROWS_AS(realize(builtin_profile("rax"), {100.0, 0, 0}), Error);
    TapProfile bad{{{1e-6, 0.0, DopplerSpectrum::jakes}, {0.5e-6, 0.0, DopplerSpectrum::jakes}},
                   "decreasing"};
    CHECK_THROWS_AS(realize(bad, {100.0, 8, 0}), Error);
}

TEST_CASE("realization file round trip is bit exact") {
    const auto chan = realize(builtin_profile("itu_vehicular"), {750.0, 8, 7});
    std::stringstream buffer;
    save_realization(buffer, chan);
    const auto loaded = load_realization(buffer);
    REQUIRE(loaded.paths.size() == chan.paths.size());
    for (std::size_t i = 0; i < chan.paths.size(); ++i) {
        CHECK(loaded.paths[i].delay_s == chan.paths[i].delay_s);
        CHECK(loaded.paths[i].doppler_hz == chan.paths[i].doppler_hz);
        CHECK(loaded.paths[i].amplitude == chan.paths[i].amplitude);
    }
    CHECK(loaded.label == chan.label);
}

TEST_CASE("load_realization parses a single identity record") {
    std::stringstream in("0 0 1 0\n");
    const auto chan = load_realization(in);
    REQUIRE(chan.paths.size() == 1);
    CHECK(chan.paths[0].delay_s == 0.0);
    CHECK(chan.paths[0].doppler_hz == 0.0);
    CHECK(chan.paths[0].amplitude == cdouble{1.0, 0.0});
}

TEST_CASE("load_realization error diagnostics") {
    {
        std::stringstream in("0 zzz 1 0\n");
        try {
            (void)load_realization(in);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("doppler_hz") != std::string::npos);
            CHECK(std::string(e.what()).find("line 1") != std::string::npos);
        }
    }
    {
        std::stringstream in("# comment\n0 0 1\n");
        try {
            (void)load_realization(in);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("expected 4 fields") != std::string::npos);
            CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        }
    }
    {
        std::stringstream in("-1e-6 0 1 0\n");
        CHECK_THROWS_AS((void)load_realization(in), ParseError);
    }
    {
        std::stringstream in("# only comments\n\n");
        CHECK_THROWS_AS((void)load_realization(in), Error);
    }
    CHECK_THROWS_AS((void)load_realization_file("/nonexistent/chan.txt"), Error);
}
