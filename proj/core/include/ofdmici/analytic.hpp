#pragma once

#include "ofdmici/ofdm.hpp"

namespace ofdmici {

/// Closed-form per-symbol link metrics for one (m, l) pair.
struct LinkMetrics {
    int symbol_index = 0;
    int subcarrier = 0;
    double ici_variance = 0.0;            ///< Var(ICI)
    double noise_plus_ici_variance = 0.0; ///< Var(ICI) + N0
    double ebrx = 0.0;                    ///< received energy per bit
    double ratio = 0.0;                   ///< r = ebrx / (Var(ICI) + N0)
    double bep = 0.0;
    double capacity_lower_bound = 0.0;    ///< bits/s/Hz
};

/// Var(ICI) = sigma_x^2 * sum over k != l of |H^ICI|^2.
double ici_variance(const CoefficientSet& cs, double symbol_variance);

/// Ratio of received energy per bit to the noise-plus-ICI density,
/// r = sigma_x^2 |H|^2 / ((Var(ICI) + N0) log2 M). Throws Error when the
/// denominator is degenerate (Var(ICI) + N0 = 0).
double sinr_ratio(const OfdmConfig& cfg, const CoefficientSet& cs);

/// Shannon-Hartley lower bound with CP overhead:
/// T/(T + T_cp) * log2(1 + r log2 M).
double capacity_lower_bound(const OfdmConfig& cfg, double ratio);

/// Exact bit error probability of Gray-labeled square M-QAM over AWGN at
/// energy-per-bit-to-noise-density ratio r.
///
/// erfc source: std::erfc (libm), validated in the test suite against
/// high-precision reference values over [0, 15].
double awgn_qam_bep(int order, double ratio);

/// All closed-form metrics for one coefficient set: variances, received
/// energy per bit, SINR ratio, BEP and capacity lower bound.
LinkMetrics symbol_bep(const OfdmConfig& cfg, const CoefficientSet& cs);

} // namespace ofdmici
