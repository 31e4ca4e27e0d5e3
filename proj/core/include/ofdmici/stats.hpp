#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ofdmici/channel.hpp"
#include "ofdmici/ofdm.hpp"

namespace ofdmici {

/// Bivariate samples (Re ICI, Im ICI) for one coefficient set.
struct SampleSet {
    std::vector<std::array<double, 2>> samples;
    std::string channel_label;
    int symbol_index = 0;
    int subcarrier = 0;
    int order = 0;

    std::size_t n() const { return samples.size(); }
};

/// Draws n independent ICI samples by giving uniform constellation
/// values to the interfering symbols. Deterministic given seed.
SampleSet sample_ici(const OfdmConfig& cfg, const CoefficientSet& cs, std::size_t n,
                     std::uint64_t seed);

/// Mardia multivariate skewness b_{1,2}: the normalized double sum of
/// cubed standardized cross products. O(n^2), computed exactly.
/// Throws Error when the sample covariance is singular.
double mardia_skewness(const SampleSet& s);

/// Mardia multivariate kurtosis b_{2,2}: mean of squared standardized
/// squared norms. Throws Error when the sample covariance is singular.
double mardia_kurtosis(const SampleSet& s);

/// Writes samples as structured text (re im per line) for external
/// cross-checks.
void write_samples(std::ostream& out, const SampleSet& s);

/// One row of the normality study: moments of the Mardia statistics over
/// channel realizations for a (profile, order, subcarrier) combination.
struct NormalityRow {
    std::string profile;
    int order = 0;
    int subcarrier = 0;
    int realizations = 0;
    std::size_t samples = 0;
    double mean_skewness = 0.0;
    double var_skewness = 0.0;
    double mean_kurtosis = 0.0;
    double var_kurtosis = 0.0;
};

/// Runs the normality study: for each (profile, order, subcarrier),
/// draws n_samples ICI samples per realization, computes both Mardia
/// statistics, and aggregates mean and variance over realizations.
/// Realization seeds derive from `seed`; symbol draws use independent
/// derived streams. Deterministic and scheduling-independent.
std::vector<NormalityRow> normality_table(const OfdmConfig& cfg,
                                          const std::vector<TapProfile>& profiles,
                                          const DopplerConfig& dop,
                                          const std::vector<int>& subcarriers,
                                          const std::vector<int>& orders, std::size_t n_samples,
                                          int n_realizations, std::uint64_t seed, int threads);

/// Axis for kurtosis_profile(): either a subcarrier sweep or a
/// normalized-Doppler sweep at a fixed subcarrier.
struct KurtosisAxis {
    enum class Kind { subcarrier, normalized_doppler };
    Kind kind = Kind::subcarrier;
    std::vector<double> grid;
    int fixed_subcarrier = 0; ///< used by the normalized_doppler axis
};

struct KurtosisProfileRow {
    double axis_value = 0.0;
    int order = 0;
    double mean_kurtosis = 0.0;
    double p05_kurtosis = 0.0;
    double p95_kurtosis = 0.0;
};

/// Mean and 5%/95% percentiles of the kurtosis across realizations, per
/// axis point and constellation order.
std::vector<KurtosisProfileRow> kurtosis_profile(const OfdmConfig& cfg, const TapProfile& profile,
                                                 const DopplerConfig& dop, const KurtosisAxis& axis,
                                                 const std::vector<int>& orders,
                                                 std::size_t n_samples, int n_realizations,
                                                 std::uint64_t seed, int threads);

} // namespace ofdmici
