#include "ofdmici/ofdm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ofdmici {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_delays(const OfdmConfig& cfg, const ChannelRealization& chan) {
    if (chan.paths.empty()) throw Error("channel realization has no paths");
    for (const auto& p : chan.paths) {
        if (!(p.delay_s < cfg.cp_length_s)) {
            throw Error("path delay " + std::to_string(p.delay_s) +
                        " s reaches the cyclic prefix length " +
                        std::to_string(cfg.cp_length_s) + " s; no-ISI assumption violated");
        }
    }
}

void check_in_band(const OfdmConfig& cfg, int l, const char* role) {
    if (!cfg.contains(l)) {
        throw Error(std::string(role) + " subcarrier " + std::to_string(l) +
                    " is not in the used-subcarrier set");
    }
}

// Contribution of one path to H_{m,l}.
cdouble path_channel_term(const PathParams& p, double t_symbol, double t_m, int l) {
    const cdouble phase =
        std::polar(1.0, -kTwoPi * l * p.delay_s / t_symbol + kTwoPi * p.doppler_hz * t_m);
    return p.amplitude * phase * dirichlet_kernel(p.doppler_hz * t_symbol);
}

// Contribution of one path to H^ICI_{m,l,k}.
cdouble path_ici_term(const PathParams& p, double t_symbol, double t_m, int l, int k) {
    const cdouble phase =
        std::polar(1.0, -kTwoPi * k * p.delay_s / t_symbol + kTwoPi * p.doppler_hz * t_m);
    return p.amplitude * phase * dirichlet_kernel((k - l) + p.doppler_hz * t_symbol);
}

} // namespace

bool OfdmConfig::contains(int subcarrier) const {
    return std::binary_search(used_subcarriers.begin(), used_subcarriers.end(), subcarrier);
}

void OfdmConfig::validate() const {
    if (!(subcarrier_spacing_hz > 0.0)) throw Error("subcarrier spacing must be positive");
    if (!(cp_length_s >= 0.0)) throw Error("CP length must be nonnegative");
    if (used_subcarriers.empty()) throw Error("used-subcarrier set is empty");
    if (!std::is_sorted(used_subcarriers.begin(), used_subcarriers.end()))
        throw Error("used-subcarrier set must be sorted");
    if (std::adjacent_find(used_subcarriers.begin(), used_subcarriers.end()) !=
        used_subcarriers.end())
        throw Error("used-subcarrier set contains duplicates");
    if (!is_square_qam_order(constellation_order))
        throw Error("constellation order " + std::to_string(constellation_order) +
                    " is not a square power of two");
    if (!(symbol_variance > 0.0)) throw Error("symbol variance must be positive");
    if (!(noise_density >= 0.0)) throw Error("noise density must be nonnegative");
}

bool is_square_qam_order(int m) {
    if (m < 4) return false;
    // m must be a power of two with an even exponent.
    if ((m & (m - 1)) != 0) return false;
    int exponent = 0;
    for (int v = m; v > 1; v >>= 1) ++exponent;
    return exponent % 2 == 0;
}

OfdmConfig lte10_config(int constellation_order, double symbol_variance, double noise_density) {
    OfdmConfig cfg;
    cfg.subcarrier_spacing_hz = 15e3;
    cfg.cp_length_s = 72.0 / 15.36e6;
    cfg.used_subcarriers.reserve(600);
    for (int k = -300; k <= 300; ++k) {
        if (k != 0) cfg.used_subcarriers.push_back(k);
    }
    cfg.constellation_order = constellation_order;
    cfg.symbol_variance = symbol_variance;
    cfg.noise_density = noise_density;
    cfg.validate();
    return cfg;
}

cdouble CoefficientSet::ici_at(int k) const {
    const auto it = std::lower_bound(ici_subcarriers.begin(), ici_subcarriers.end(), k);
    if (it == ici_subcarriers.end() || *it != k) {
        throw Error("subcarrier " + std::to_string(k) + " has no ICI entry");
    }
    return ici_coeffs[static_cast<std::size_t>(it - ici_subcarriers.begin())];
}

cdouble dirichlet_kernel(double f_times_t) {
    if (f_times_t == 0.0) return {1.0, 0.0};
    const double x = kTwoPi * f_times_t;
    if (std::abs(x) < 1e-8) {
        // e^{jx} - 1 ~ jx (1 + jx/2); the jx cancels against the denominator.
        return {1.0, 0.5 * x};
    }
    // (e^{jx} - 1)/(jx) = sin(x)/x + j (1 - cos x)/x, with
    // 1 - cos x = 2 sin^2(x/2) to keep the imaginary part stable.
    const double half = 0.5 * x;
    const double s_half = std::sin(half);
    return {std::sin(x) / x, 2.0 * s_half * s_half / x};
}

cdouble channel_coefficient(const OfdmConfig& cfg, const ChannelRealization& chan, int m, int l) {
    check_in_band(cfg, l, "target");
    check_delays(cfg, chan);
    const double t_symbol = cfg.symbol_duration_s();
    const double t_m = m * cfg.symbol_spacing_s();
    cdouble sum{};
    for (const auto& p : chan.paths) sum += path_channel_term(p, t_symbol, t_m, l);
    return sum;
}

cdouble ici_coefficient(const OfdmConfig& cfg, const ChannelRealization& chan, int m, int l,
                        int k) {
    if (k == l) throw Error("ICI coefficient requested for k == l");
    check_in_band(cfg, l, "target");
    check_in_band(cfg, k, "interfering");
    check_delays(cfg, chan);
    const double t_symbol = cfg.symbol_duration_s();
    const double t_m = m * cfg.symbol_spacing_s();
    cdouble sum{};
    for (const auto& p : chan.paths) sum += path_ici_term(p, t_symbol, t_m, l, k);
    return sum;
}

CoefficientSet coefficient_set(const OfdmConfig& cfg, const ChannelRealization& chan, int m,
                               int l) {
    check_in_band(cfg, l, "target");
    check_delays(cfg, chan);
    const double t_symbol = cfg.symbol_duration_s();
    const double t_m = m * cfg.symbol_spacing_s();

    CoefficientSet cs;
    cs.symbol_index = m;
    cs.subcarrier = l;
    cs.symbol_start_time_s = t_m;
    cs.ici_subcarriers.reserve(cfg.used_subcarriers.size() - 1);
    cs.ici_coeffs.reserve(cfg.used_subcarriers.size() - 1);

    for (const auto& p : chan.paths) cs.channel_coeff += path_channel_term(p, t_symbol, t_m, l);
    for (int k : cfg.used_subcarriers) {
        if (k == l) continue;
        cdouble sum{};
        for (const auto& p : chan.paths) sum += path_ici_term(p, t_symbol, t_m, l, k);
        cs.ici_subcarriers.push_back(k);
        cs.ici_coeffs.push_back(sum);
    }
    return cs;
}

} // namespace ofdmici
