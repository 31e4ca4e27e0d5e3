#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ofdmici/ofdm.hpp"

namespace ofdmici::cli {

/// Channel source: exactly one of a builtin profile or an external
/// realization file.
struct ChannelSource {
    std::string profile = "itu_vehicular";
    std::string realization_file; ///< non-empty selects file mode
    double normalized_doppler = 0.05;
    int n_sinusoids = 8;
};

struct CoefficientsParams {
    std::vector<int> symbols{0};
    std::vector<int> subcarriers{150};
    bool emit_metrics = true;
    bool dump_realization = true;
};

struct NormalityParams {
    std::vector<std::string> profiles; ///< default: the channel profile
    std::vector<int> subcarriers{150, 300};
    std::size_t samples = 1000;
    std::optional<int> realizations;
    bool dump_samples = false;
    // Optional kurtosis-profile axis (figure-style sweep).
    std::optional<std::string> axis_kind; ///< subcarrier | normalized_doppler
    std::vector<double> axis_grid;
    int axis_fixed_subcarrier = 150;
};

struct InstantParams {
    std::vector<int> subcarriers{150};
    std::vector<int> symbols{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    std::optional<int> realizations;
    std::optional<std::int64_t> iterations;
    std::int64_t min_error_bits = 10;
    int bootstrap_resamples = 1000;
    double confidence = 0.95;
};

struct SweepParams {
    std::string axis = "ebno_db"; ///< ebno_db | normalized_doppler
    std::vector<double> grid{10, 20, 30, 40, 50};
    std::vector<int> subcarriers{150, 300};
    int symbol = 0;
    std::optional<int> realizations;
    std::optional<std::int64_t> iterations;
    int bootstrap_resamples = 1000;
    double confidence = 0.95;
};

struct OutputParams {
    std::string dir = ".";
    bool csv = true;
    bool json_mirror = false;
};

/// A fully validated scenario document.
struct Scenario {
    std::string name = "scenario";
    OfdmConfig ofdm;              ///< noise_density resolved from ebno when given
    std::optional<double> ebno_db; ///< per-order noise derivation when set
    ChannelSource channel;
    std::string study; ///< coefficients | normality | instantaneous | average_sweep
    std::uint64_t seed = 0;
    std::vector<int> orders; ///< default {ofdm.constellation_order}
    CoefficientsParams coefficients;
    NormalityParams normality;
    InstantParams instant;
    SweepParams sweep;
    OutputParams output;

    /// Noise density for a given order: explicit noise_density wins,
    /// otherwise derived from ebno_db (default 50 dB) at sigma_x^2.
    double noise_density_for(int order) const;

    /// Realization/iteration counts after applying desk or paper scale.
    int normality_realizations(bool paper_scale) const;
    int instant_realizations(bool paper_scale) const;
    std::int64_t instant_iterations(bool paper_scale) const;
    int sweep_realizations(bool paper_scale) const;
    std::int64_t sweep_iterations(bool paper_scale) const;

    nlohmann::json to_json() const;
};

/// Parses a scenario document (strict: unknown and duplicate keys are
/// rejected) or a run manifest (unwrapped via its "scenario" member).
/// expected_study, when non-empty, must match the document's study.
Scenario parse_scenario(const std::string& text, const std::string& expected_study);

Scenario parse_scenario_file(const std::string& path, const std::string& expected_study);

} // namespace ofdmici::cli
