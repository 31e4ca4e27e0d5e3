#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ofdmici/analytic.hpp"
#include "ofdmici/channel.hpp"
#include "ofdmici/ofdm.hpp"

namespace ofdmici {

/// Monte-Carlo BER run description.
struct SimSpec {
    OfdmConfig cfg;
    std::vector<std::pair<int, int>> targets; ///< (OFDM symbol m, subcarrier l)
    std::int64_t iterations = 10000;
    std::uint64_t seed = 0;
    std::int64_t min_error_bits = 10; ///< estimates below this are flagged discarded
    int bootstrap_resamples = 1000;   ///< 0 disables the confidence interval
    double confidence = 0.95;

    void validate() const;
};

/// Outcome of a BER run for one target.
struct BerResult {
    int symbol_index = 0;
    int subcarrier = 0;
    double ber = 0.0;
    std::int64_t error_bits = 0;
    std::int64_t total_bits = 0;
    std::optional<double> ci_low;
    std::optional<double> ci_high;
    bool discarded = false;
    std::optional<double> rho; ///< BER/BEP, filled by the studies
};

/// Simulates the frequency-domain link for every target: per iteration,
/// uniform bits on all subcarriers, Gray QAM mapping, Y = X H + ICI +
/// noise, zero-forcing, Gray demapping, bit-error count. Noise is drawn
/// as sqrt(N0/2) (g1 + j g2) with g1, g2 standard normals, so the total
/// complex noise variance is N0 and the analytic metrics agree with the
/// simulation by construction. Deterministic given spec.seed; throws on
/// a zero channel coefficient.
std::vector<BerResult> run_ber(const SimSpec& spec, const ChannelRealization& chan);

/// Error factor rho = BER / BEP. Throws when the result was discarded or
/// the BEP is zero.
double error_factor(const BerResult& ber, const LinkMetrics& metrics);

/// Percentile bootstrap over per-iteration error counts. Returns the
/// (low, high) BER interval at the given confidence. Deterministic given
/// seed; needs at least 100 resamples.
std::pair<double, double> bootstrap_ci(std::span<const std::int64_t> per_iteration_errors,
                                       std::int64_t bits_per_iteration, int resamples,
                                       double confidence, std::uint64_t seed);

/// One row of the instantaneous study: analytic metrics and simulated
/// BER for a single (realization, symbol) pair, Fig.-style long format.
struct InstantRow {
    int realization = 0;
    int symbol_index = 0;
    int subcarrier = 0;
    int order = 0;
    double ratio = 0.0;         ///< received Eb over noise-plus-ICI density
    double ici_variance = 0.0;
    double noise_density = 0.0;
    double bep = 0.0;
    double ber = 0.0;
    std::optional<double> ci_low;
    std::optional<double> ci_high;
    std::int64_t error_bits = 0;
    std::int64_t total_bits = 0;
    bool discarded = false;
    std::optional<double> rho;
};

/// Runs spec.targets over n_realizations seeded realizations of the
/// profile, computing BEP, BER and the error factor per (realization,
/// target). Scheduling-independent; realization seeds derive from
/// spec.seed.
std::vector<InstantRow> instant_study(const SimSpec& spec, const TapProfile& profile,
                                      const DopplerConfig& dop, int n_realizations, int threads);

/// Sweep axis for average_sweep().
struct SweepAxis {
    enum class Kind { ebno_db, normalized_doppler };
    Kind kind = Kind::ebno_db;
    std::vector<double> grid;
};

/// One row of the averaged study: mean analytic BEP and mean simulated
/// BER over realizations at one grid point, per target.
struct SweepRow {
    double axis_value = 0.0;
    int order = 0;
    int symbol_index = 0;
    int subcarrier = 0;
    int realizations = 0;
    double mean_bep = 0.0;
    double mean_ber = 0.0;
    double ci_low = 0.0;  ///< bootstrap CI of the mean BER over realizations
    double ci_high = 0.0;
    std::int64_t error_bits = 0;
    std::int64_t total_bits = 0;
    int discarded_runs = 0; ///< runs under min_error_bits (still included in the mean)
};

/// Averages BEP (analytic) and BER (simulated) over channel realizations
/// for each grid point and target.
///
/// ebno_db axis: noise density per point is (sigma_x^2/log2 M) / 10^(dB/10);
/// realizations are shared across the grid. normalized_doppler axis: the
/// max Doppler is grid * subcarrier spacing and spec.cfg.noise_density is
/// used as-is; realization seeds are shared across the grid (common
/// random numbers). Deterministic and scheduling-independent.
std::vector<SweepRow> average_sweep(const SimSpec& spec, const TapProfile& profile,
                                    const DopplerConfig& dop, int n_realizations,
                                    const SweepAxis& axis, int threads);

} // namespace ofdmici
