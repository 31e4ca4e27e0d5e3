#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "ofdmici/modem.hpp"
#include "ofdmici/rng.hpp"

using namespace ofdmici;

TEST_CASE("4-QAM geometry at unit energy") {
    const auto c = build_constellation(4, 1.0);
    REQUIRE(c.points.size() == 4);
    const double v = 1.0 / std::numbers::sqrt2;
    std::set<std::pair<double, double>> expected{{-v, -v}, {-v, v}, {v, -v}, {v, v}};
    for (const auto& p : c.points) {
        bool found = false;
        for (const auto& [re, im] : expected) {
            if (std::abs(p.real() - re) < 1e-15 && std::abs(p.imag() - im) < 1e-15) found = true;
        }
        CHECK(found);
    }
}

TEST_CASE("constellation invariants") {
    for (int order : {4, 16, 64}) {
        const double variance = order == 16 ? 2.5 : 1.0;
        const auto c = build_constellation(order, variance);
        CHECK(c.points.size() == static_cast<std::size_t>(order));

        std::set<std::uint32_t> labels(c.bit_labels.begin(), c.bit_labels.end());
        CHECK(labels.size() == static_cast<std::size_t>(order));

        double energy = 0.0;
        for (const auto& p : c.points) energy += std::norm(p);
        energy /= order;
        CHECK(std::abs(energy - variance) < 1e-12);
    }
}

TEST_CASE("gray property on axis-adjacent points") {
    for (int order : {4, 16, 64}) {
        const auto c = build_constellation(order, 1.0);
        const int levels = c.levels_per_axis();
        int adjacent_pairs = 0;
        for (int i = 0; i < levels; ++i) {
            for (int q = 0; q < levels; ++q) {
                const std::uint32_t label = c.bit_labels[i * levels + q];
                if (i + 1 < levels) {
                    CHECK(std::popcount(label ^ c.bit_labels[(i + 1) * levels + q]) == 1);
                    ++adjacent_pairs;
                }
                if (q + 1 < levels) {
                    CHECK(std::popcount(label ^ c.bit_labels[i * levels + q + 1]) == 1);
                    ++adjacent_pairs;
                }
            }
        }
        if (order == 16) CHECK(adjacent_pairs == 24);
    }
}

TEST_CASE("invalid orders are rejected") {
    CHECK_THROWS_AS((void)build_constellation(8, 1.0), Error);
    CHECK_THROWS_AS((void)build_constellation(32, 1.0), Error);
    CHECK_THROWS_AS((void)build_constellation(2, 1.0), Error);
    CHECK_THROWS_AS((void)build_constellation(0, 1.0), Error);
    CHECK_THROWS_AS((void)build_constellation(4, 0.0), Error);
}

TEST_CASE("map/demap round trip for every label") {
    for (int order : {4, 16, 64}) {
        const auto c = build_constellation(order, 1.0);
        for (std::uint32_t label = 0; label < static_cast<std::uint32_t>(order); ++label) {
            const auto bits = c.label_bits(label);
            const cdouble point = map_bits(c, bits);
            CHECK(demap_hard(c, point) == bits);
            CHECK(demap_hard_label(c, map_label(c, label)) == label);
        }
    }
}

TEST_CASE("map rejects wrong bit counts") {
    const auto c = build_constellation(16, 1.0);
    CHECK_THROWS_AS((void)map_bits(c, {0, 1}), Error);
    CHECK_THROWS_AS((void)map_bits(c, {0, 1, 0, 1, 1}), Error);
    CHECK_THROWS_AS((void)map_label(c, 16), Error);
}

TEST_CASE("equidistant tie resolves to the smallest point index") {
    const auto c = build_constellation(4, 1.0);
    // The origin is equidistant from all four points; index 0 wins.
    CHECK(demap_hard_label(c, {0.0, 0.0}) == c.bit_labels[0]);

    // Exactly on the axis boundary between two points.
    const double v = 1.0 / std::numbers::sqrt2;
    CHECK(demap_hard_label(c, {0.0, v}) == c.bit_labels[1]); // q level 1, i level 0
}

TEST_CASE("labels survive sub-half-distance perturbations") {
    for (int order : {4, 16, 64}) {
        const auto c = build_constellation(order, 1.0);
        // Minimum point distance is twice the level step.
        double min_dist = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < c.points.size(); ++i) {
            for (std::size_t j = i + 1; j < c.points.size(); ++j) {
                min_dist = std::min(min_dist, std::abs(c.points[i] - c.points[j]));
            }
        }
        const double radius = 0.49 * min_dist;
        for (std::size_t i = 0; i < c.points.size(); ++i) {
            for (int dir = 0; dir < 8; ++dir) {
                const double angle = dir * std::numbers::pi / 4.0;
                const cdouble y = c.points[i] + std::polar(radius, angle);
                CHECK(demap_hard_label(c, y) == c.bit_labels[i]);
            }
        }
    }
}

TEST_CASE("average mapped energy approaches the symbol variance") {
    const auto c = build_constellation(16, 1.0);
    Rng rng(99);
    const int draws = 100000;
    double energy = 0.0;
    for (int i = 0; i < draws; ++i) {
        std::vector<std::uint8_t> bits(4);
        for (auto& b : bits) b = static_cast<std::uint8_t>(rng.next_u64() & 1u);
        energy += std::norm(map_bits(c, bits));
    }
    energy /= draws;
    CHECK(energy == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("per-axis slicing equals 2D nearest point") {
    for (int order : {4, 16, 64}) {
        const auto c = build_constellation(order, 1.0);
        Rng rng(1234);
        for (int trial = 0; trial < 5000; ++trial) {
            const cdouble y{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
            std::size_t best = 0;
            double best_dist = std::numeric_limits<double>::infinity();
            bool tie = false;
            for (std::size_t i = 0; i < c.points.size(); ++i) {
                const double d = std::norm(y - c.points[i]);
                if (std::abs(d - best_dist) < 1e-12) tie = true;
                if (d < best_dist) {
                    best_dist = d;
                    best = i;
                    tie = false;
                }
            }
            if (tie) continue; // measure-zero boundary draws
            CHECK(demap_hard_label(c, y) == c.bit_labels[best]);
        }
    }
}
