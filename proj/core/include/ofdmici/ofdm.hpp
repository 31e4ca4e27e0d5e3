#pragma once

#include <complex>
#include <string>
#include <vector>

#include "ofdmici/error.hpp"

namespace ofdmici {

using cdouble = std::complex<double>;

/// OFDM numerology and link-level constants: subcarrier spacing 1/T,
/// cyclic prefix length, the set S of used subcarrier indices, the QAM
/// order M, the symbol variance and the noise power spectral density.
struct OfdmConfig {
    double subcarrier_spacing_hz = 15e3;
    double cp_length_s = 72.0 / 15.36e6;
    std::vector<int> used_subcarriers; ///< sorted, unique, nonempty
    int constellation_order = 4;
    double symbol_variance = 1.0;
    double noise_density = 0.0;

    double symbol_duration_s() const { return 1.0 / subcarrier_spacing_hz; }

    /// Spacing between consecutive OFDM symbol starts, T + T_cp.
    double symbol_spacing_s() const { return symbol_duration_s() + cp_length_s; }

    bool contains(int subcarrier) const;

    /// Throws Error on any violated invariant.
    void validate() const;
};

/// True when m = 4^k for integer k >= 1 (4, 16, 64, 256, ...).
bool is_square_qam_order(int m);

/// LTE 10 MHz downlink-like numerology: 15 kHz spacing, 72/15.36e6 s CP,
/// subcarriers {-300..-1, 1..300} (DC excluded).
OfdmConfig lte10_config(int constellation_order, double symbol_variance, double noise_density);

/// One propagation path of a tapped-delay-line channel.
struct PathParams {
    double delay_s = 0.0;
    double doppler_hz = 0.0;
    cdouble amplitude{1.0, 0.0};
};

/// A deterministic channel: a finite list of paths. Evaluating it
/// against an OfdmConfig requires every delay to be below the CP length.
struct ChannelRealization {
    std::vector<PathParams> paths;
    std::string label;
};

/// Channel coefficient plus all ICI contributions for one
/// (OFDM symbol index, subcarrier) pair.
struct CoefficientSet {
    int symbol_index = 0;
    int subcarrier = 0;
    cdouble channel_coeff{};
    std::vector<int> ici_subcarriers; ///< S \ {subcarrier}, in S order
    std::vector<cdouble> ici_coeffs;  ///< aligned with ici_subcarriers
    double symbol_start_time_s = 0.0;

    /// ICI contribution of subcarrier k. Throws Error if k is not a key.
    cdouble ici_at(int k) const;
};

/// D(f) evaluated at the dimensionless product fT: 1 at zero, otherwise
/// (e^{j2pi fT} - 1) / (j2pi fT). Stable near zero (series expansion for
/// |2pi fT| < 1e-8) and exactly |D| = |sinc(pi fT)| elsewhere.
cdouble dirichlet_kernel(double f_times_t);

/// Channel coefficient H for OFDM symbol m and subcarrier l, with symbol
/// start time t_m = m (T + T_cp). Requires l in S and all path delays
/// strictly below the CP length.
cdouble channel_coefficient(const OfdmConfig& cfg, const ChannelRealization& chan, int m, int l);

/// ICI contribution of subcarrier k onto subcarrier l during OFDM
/// symbol m. Requires l, k in S and k != l.
cdouble ici_coefficient(const OfdmConfig& cfg, const ChannelRealization& chan, int m, int l, int k);

/// Batch evaluation: H plus the full ICI vector over S \ {l}. Values are
/// identical to the elementwise calls.
CoefficientSet coefficient_set(const OfdmConfig& cfg, const ChannelRealization& chan, int m, int l);

} // namespace ofdmici
