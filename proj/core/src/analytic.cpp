#include "ofdmici/analytic.hpp"

#include <cmath>

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

} // namespace

double ici_variance(const CoefficientSet& cs, double symbol_variance) {
    double sum = 0.0;
    for (const cdouble& h : cs.ici_coeffs) sum += std::norm(h);
    return symbol_variance * sum;
}

double sinr_ratio(const OfdmConfig& cfg, const CoefficientSet& cs) {
    const double denom = ici_variance(cs, cfg.symbol_variance) + cfg.noise_density;
    if (!(denom > 0.0)) {
        throw Error("noise-plus-ICI variance is zero; SINR ratio undefined");
    }
    const double bits = int_log2(cfg.constellation_order);
    return cfg.symbol_variance * std::norm(cs.channel_coeff) / (denom * bits);
}

double capacity_lower_bound(const OfdmConfig& cfg, double ratio) {
    const double bits = int_log2(cfg.constellation_order);
    const double t = cfg.symbol_duration_s();
    return t / (t + cfg.cp_length_s) * std::log2(1.0 + ratio * bits);
}

double awgn_qam_bep(int order, double ratio) {
    if (!is_square_qam_order(order)) {
        throw Error("constellation order " + std::to_string(order) +
                    " is not a square power of two");
    }
    const int sqrt_m = static_cast<int>(std::lround(std::sqrt(static_cast<double>(order))));
    const int axis_bits = int_log2(sqrt_m);
    const double log2_m = 2.0 * axis_bits;
    const double arg_scale = std::sqrt(1.5 * log2_m * ratio / (order - 1));

    double total = 0.0;
    for (int j = 1; j <= axis_bits; ++j) {
        // The limit (1 - 2^-j) sqrt(M) - 1 is an exact integer for valid
        // orders; keep the whole index arithmetic integral.
        const int k_max = sqrt_m - sqrt_m / (1 << j) - 1;
        double partial = 0.0;
        for (int k = 0; k <= k_max; ++k) {
            const int scaled = k << (j - 1);
            const int flip = scaled / sqrt_m;                          // floor(k 2^{j-1} / sqrt(M))
            const int weight = (1 << (j - 1)) - (2 * scaled + sqrt_m) / (2 * sqrt_m);
            const double term = weight * std::erfc((2 * k + 1) * arg_scale);
            partial += (flip % 2 == 0) ? term : -term;
        }
        total += partial / sqrt_m;
    }
    return total / axis_bits;
}

LinkMetrics symbol_bep(const OfdmConfig& cfg, const CoefficientSet& cs) {
    LinkMetrics out;
    out.symbol_index = cs.symbol_index;
    out.subcarrier = cs.subcarrier;
    out.ici_variance = ici_variance(cs, cfg.symbol_variance);
    out.noise_plus_ici_variance = out.ici_variance + cfg.noise_density;
    const double bits = int_log2(cfg.constellation_order);
    out.ebrx = cfg.symbol_variance / bits * std::norm(cs.channel_coeff);
    out.ratio = sinr_ratio(cfg, cs);
    out.bep = awgn_qam_bep(cfg.constellation_order, out.ratio);
    out.capacity_lower_bound = capacity_lower_bound(cfg, out.ratio);
    return out;
}

} // namespace ofdmici
