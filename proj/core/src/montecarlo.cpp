#include "ofdmici/montecarlo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "ofdmici/modem.hpp"
#include "ofdmici/parallel.hpp"
#include "ofdmici/rng.hpp"

namespace ofdmici {

namespace {

int int_log2(int v) {
    int e = 0;
    while (v > 1) {
        v >>= 1;
        ++e;
    }
    return e;
}

double percentile_sorted(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

// Simulates one target over the prepared coefficient set. The stream
// feeds, per iteration: one word for the transmit label, one word per
// interfering subcarrier, one normal pair for the noise; the bootstrap
// seed is drawn once after the loop.
BerResult run_one_target(const OfdmConfig& cfg, const Constellation& constel,
                         const CoefficientSet& cs, std::int64_t iterations,
                         std::int64_t min_error_bits, int resamples, double confidence, Rng rng) {
    if (std::norm(cs.channel_coeff) == 0.0) {
        throw Error("channel coefficient is zero at (m=" + std::to_string(cs.symbol_index) +
                    ", l=" + std::to_string(cs.subcarrier) + "); zero forcing undefined");
    }
    const int bits_per_symbol = constel.bits_per_symbol();
    const std::uint64_t mask = static_cast<std::uint64_t>(constel.order - 1);
    const double noise_scale = std::sqrt(cfg.noise_density / 2.0);
    const cdouble h = cs.channel_coeff;
    const cdouble h_inv = 1.0 / h;
    const cdouble* ici = cs.ici_coeffs.data();
    const std::size_t n_ici = cs.ici_coeffs.size();
    const cdouble* points = constel.points.data();

    std::vector<std::int64_t> errors(static_cast<std::size_t>(iterations));
    std::int64_t total_errors = 0;
    for (std::int64_t it = 0; it < iterations; ++it) {
        const std::uint32_t tx_label = static_cast<std::uint32_t>(rng.next_u64() & mask);
        double ici_re = 0.0, ici_im = 0.0;
        for (std::size_t k = 0; k < n_ici; ++k) {
            const cdouble x = points[rng.next_u64() & mask];
            const cdouble& c = ici[k];
            ici_re += x.real() * c.real() - x.imag() * c.imag();
            ici_im += x.real() * c.imag() + x.imag() * c.real();
        }
        const auto [g1, g2] = rng.normal_pair();
        const cdouble y = constel.point_for_label(tx_label) * h +
                          cdouble{ici_re + noise_scale * g1, ici_im + noise_scale * g2};
        const std::uint32_t rx_label = demap_hard_label(constel, y * h_inv);
        const int bit_errors = std::popcount(tx_label ^ rx_label);
        errors[static_cast<std::size_t>(it)] = bit_errors;
        total_errors += bit_errors;
    }
    const std::uint64_t boot_seed = rng.next_u64();

    BerResult out;
    out.symbol_index = cs.symbol_index;
    out.subcarrier = cs.subcarrier;
    out.error_bits = total_errors;
    out.total_bits = iterations * bits_per_symbol;
    out.ber = static_cast<double>(total_errors) / static_cast<double>(out.total_bits);
    out.discarded = total_errors < min_error_bits;
    if (resamples > 0) {
        const auto [lo, hi] =
            bootstrap_ci(errors, bits_per_symbol, resamples, confidence, boot_seed);
        out.ci_low = lo;
        out.ci_high = hi;
    }
    return out;
}

double ebtx(const OfdmConfig& cfg) {
    return cfg.symbol_variance / int_log2(cfg.constellation_order);
}

} // namespace

void SimSpec::validate() const {
    cfg.validate();
    if (targets.empty()) throw Error("simulation needs at least one (m, l) target");
    for (const auto& [m, l] : targets) {
        (void)m;
        if (!cfg.contains(l)) {
            throw Error("target subcarrier " + std::to_string(l) +
                        " is not in the used-subcarrier set");
        }
    }
    if (iterations < 1) throw Error("iterations must be at least 1");
    if (min_error_bits < 0) throw Error("min_error_bits must be nonnegative");
    if (!(confidence > 0.0 && confidence < 1.0)) throw Error("confidence must be in (0, 1)");
    if (bootstrap_resamples != 0 && bootstrap_resamples < 100) {
        throw Error("bootstrap needs at least 100 resamples (or 0 to disable)");
    }
}

std::vector<BerResult> run_ber(const SimSpec& spec, const ChannelRealization& chan) {
    spec.validate();
    const Constellation constel =
        build_constellation(spec.cfg.constellation_order, spec.cfg.symbol_variance);
    std::vector<BerResult> results;
    results.reserve(spec.targets.size());
    for (std::size_t ti = 0; ti < spec.targets.size(); ++ti) {
        const auto& [m, l] = spec.targets[ti];
        const CoefficientSet cs = coefficient_set(spec.cfg, chan, m, l);
        results.push_back(run_one_target(spec.cfg, constel, cs, spec.iterations,
                                         spec.min_error_bits, spec.bootstrap_resamples,
                                         spec.confidence,
                                         Rng::derive(spec.seed, {stream::montecarlo, ti})));
    }
    return results;
}

double error_factor(const BerResult& ber, const LinkMetrics& metrics) {
    if (ber.discarded) throw Error("error factor of a discarded BER estimate");
    if (!(metrics.bep > 0.0)) throw Error("error factor with zero BEP");
    return ber.ber / metrics.bep;
}

std::pair<double, double> bootstrap_ci(std::span<const std::int64_t> per_iteration_errors,
                                       std::int64_t bits_per_iteration, int resamples,
                                       double confidence, std::uint64_t seed) {
    if (per_iteration_errors.empty()) throw Error("bootstrap needs a nonempty count list");
    if (resamples < 100) throw Error("bootstrap needs at least 100 resamples");
    if (!(confidence > 0.0 && confidence < 1.0)) throw Error("confidence must be in (0, 1)");
    if (bits_per_iteration < 1) throw Error("bits per iteration must be positive");

    const std::size_t n = per_iteration_errors.size();
    const double denom = static_cast<double>(n) * static_cast<double>(bits_per_iteration);
    Rng rng = Rng::derive(seed, {stream::bootstrap});
    std::vector<double> means(static_cast<std::size_t>(resamples));
    for (auto& mean : means) {
        std::int64_t sum = 0;
        for (std::size_t i = 0; i < n; ++i) {
            sum += per_iteration_errors[rng.uniform_below(n)];
        }
        mean = static_cast<double>(sum) / denom;
    }
    std::sort(means.begin(), means.end());
    const double alpha = 1.0 - confidence;
    return {percentile_sorted(means, alpha / 2.0), percentile_sorted(means, 1.0 - alpha / 2.0)};
}

std::vector<InstantRow> instant_study(const SimSpec& spec, const TapProfile& profile,
                                      const DopplerConfig& dop, int n_realizations, int threads) {
    spec.validate();
    if (n_realizations < 1) throw Error("instant study needs at least one realization");
    const Constellation constel =
        build_constellation(spec.cfg.constellation_order, spec.cfg.symbol_variance);
    const std::uint64_t name_hash = fnv1a64(profile.name);
    const std::size_t n_targets = spec.targets.size();

    std::vector<InstantRow> rows(static_cast<std::size_t>(n_realizations) * n_targets);
    parallel_for(static_cast<std::size_t>(n_realizations), threads, [&](std::size_t r) {
        DopplerConfig dop_r = dop;
        dop_r.seed = Rng::derive(spec.seed, {stream::channel, name_hash, r}).next_u64();
        const ChannelRealization chan = realize(profile, dop_r);
        for (std::size_t ti = 0; ti < n_targets; ++ti) {
            const auto& [m, l] = spec.targets[ti];
            const CoefficientSet cs = coefficient_set(spec.cfg, chan, m, l);
            const LinkMetrics metrics = symbol_bep(spec.cfg, cs);
            const BerResult ber = run_one_target(
                spec.cfg, constel, cs, spec.iterations, spec.min_error_bits,
                spec.bootstrap_resamples, spec.confidence,
                Rng::derive(spec.seed, {stream::montecarlo, r, ti}));

            InstantRow& row = rows[r * n_targets + ti];
            row.realization = static_cast<int>(r);
            row.symbol_index = m;
            row.subcarrier = l;
            row.order = spec.cfg.constellation_order;
            row.ratio = metrics.ratio;
            row.ici_variance = metrics.ici_variance;
            row.noise_density = spec.cfg.noise_density;
            row.bep = metrics.bep;
            row.ber = ber.ber;
            row.ci_low = ber.ci_low;
            row.ci_high = ber.ci_high;
            row.error_bits = ber.error_bits;
            row.total_bits = ber.total_bits;
            row.discarded = ber.discarded;
            if (!ber.discarded && metrics.bep > 0.0) {
                row.rho = ber.ber / metrics.bep;
            }
        }
    });
    return rows;
}

std::vector<SweepRow> average_sweep(const SimSpec& spec, const TapProfile& profile,
                                    const DopplerConfig& dop, int n_realizations,
                                    const SweepAxis& axis, int threads) {
    spec.validate();
    if (axis.grid.empty()) throw Error("sweep needs a nonempty grid");
    if (n_realizations < 1) throw Error("sweep needs at least one realization");
    const Constellation constel =
        build_constellation(spec.cfg.constellation_order, spec.cfg.symbol_variance);
    const std::uint64_t name_hash = fnv1a64(profile.name);
    const std::size_t n_targets = spec.targets.size();
    const std::size_t n_grid = axis.grid.size();

    struct Slot {
        double bep = 0.0;
        std::int64_t error_bits = 0;
        std::int64_t total_bits = 0;
        bool discarded = false;
    };
    std::vector<Slot> slots(static_cast<std::size_t>(n_realizations) * n_grid * n_targets);
    const auto slot_index = [&](std::size_t r, std::size_t g, std::size_t ti) {
        return (r * n_grid + g) * n_targets + ti;
    };

    parallel_for(static_cast<std::size_t>(n_realizations), threads, [&](std::size_t r) {
        DopplerConfig dop_r = dop;
        dop_r.seed = Rng::derive(spec.seed, {stream::channel, name_hash, r}).next_u64();

        if (axis.kind == SweepAxis::Kind::ebno_db) {
            const ChannelRealization chan = realize(profile, dop_r);
            for (std::size_t ti = 0; ti < n_targets; ++ti) {
                const auto& [m, l] = spec.targets[ti];
                const CoefficientSet cs = coefficient_set(spec.cfg, chan, m, l);
                for (std::size_t g = 0; g < n_grid; ++g) {
                    OfdmConfig cfg_g = spec.cfg;
                    cfg_g.noise_density = ebtx(spec.cfg) / std::pow(10.0, axis.grid[g] / 10.0);
                    const LinkMetrics metrics = symbol_bep(cfg_g, cs);
                    const BerResult ber = run_one_target(
                        cfg_g, constel, cs, spec.iterations, spec.min_error_bits, 0,
                        spec.confidence,
                        Rng::derive(spec.seed, {stream::montecarlo, r, ti, g}));
                    slots[slot_index(r, g, ti)] =
                        {metrics.bep, ber.error_bits, ber.total_bits, ber.discarded};
                }
            }
            return;
        }

        // Normalized-Doppler axis: one realization per grid point with a
        // shared seed (common random numbers across the grid).
        for (std::size_t g = 0; g < n_grid; ++g) {
            DopplerConfig dop_g = dop_r;
            dop_g.max_doppler_hz = axis.grid[g] * spec.cfg.subcarrier_spacing_hz;
            const ChannelRealization chan = realize(profile, dop_g);
            for (std::size_t ti = 0; ti < n_targets; ++ti) {
                const auto& [m, l] = spec.targets[ti];
                const CoefficientSet cs = coefficient_set(spec.cfg, chan, m, l);
                const LinkMetrics metrics = symbol_bep(spec.cfg, cs);
                const BerResult ber = run_one_target(
                    spec.cfg, constel, cs, spec.iterations, spec.min_error_bits, 0,
                    spec.confidence, Rng::derive(spec.seed, {stream::montecarlo, r, ti, g}));
                slots[slot_index(r, g, ti)] =
                    {metrics.bep, ber.error_bits, ber.total_bits, ber.discarded};
            }
        }
    });

    std::vector<SweepRow> rows;
    rows.reserve(n_grid * n_targets);
    for (std::size_t g = 0; g < n_grid; ++g) {
        for (std::size_t ti = 0; ti < n_targets; ++ti) {
            SweepRow row;
            row.axis_value = axis.grid[g];
            row.order = spec.cfg.constellation_order;
            row.symbol_index = spec.targets[ti].first;
            row.subcarrier = spec.targets[ti].second;
            row.realizations = n_realizations;
            std::vector<std::int64_t> realization_errors;
            realization_errors.reserve(static_cast<std::size_t>(n_realizations));
            std::int64_t bits_per_realization = 0;
            for (int r = 0; r < n_realizations; ++r) {
                const Slot& s = slots[slot_index(static_cast<std::size_t>(r), g, ti)];
                row.mean_bep += s.bep;
                row.error_bits += s.error_bits;
                row.total_bits += s.total_bits;
                row.discarded_runs += s.discarded ? 1 : 0;
                realization_errors.push_back(s.error_bits);
                bits_per_realization = s.total_bits;
            }
            row.mean_bep /= static_cast<double>(n_realizations);
            row.mean_ber = static_cast<double>(row.error_bits) /
                           static_cast<double>(row.total_bits);
            if (spec.bootstrap_resamples > 0) {
                const auto [lo, hi] = bootstrap_ci(
                    realization_errors, bits_per_realization, spec.bootstrap_resamples,
                    spec.confidence,
                    Rng::derive(spec.seed, {stream::bootstrap, g, ti}).next_u64());
                row.ci_low = lo;
                row.ci_high = hi;
            }
            rows.push_back(row);
        }
    }
    return rows;
}

} // namespace ofdmici
