#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ofdmici/ofdm.hpp"

namespace ofdmici {

enum class DopplerSpectrum { jakes, direct };

/// One tap of a power-delay profile.
struct Tap {
    double delay_s = 0.0;
    double avg_power_db = 0.0;
    DopplerSpectrum spectrum = DopplerSpectrum::jakes;
};

/// A standardized power-delay profile. Delays are strictly increasing.
struct TapProfile {
    std::vector<Tap> taps;
    std::string name;

    void validate() const;
};

/// Doppler process parameters for realize().
struct DopplerConfig {
    double max_doppler_hz = 0.0;
    int n_sinusoids = 8; ///< sinusoids per Jakes tap; direct taps always use one
    std::uint64_t seed = 0;

    void validate() const;
};

/// Built-in profiles transcribed from the standards; tap tables live in
/// core/data/profiles/ and are embedded at build time.
///   tux           3GPP TR 25.943 typical urban, 20 taps, all Jakes
///   rax           3GPP TR 25.943 rural area, 10 taps, direct first tap
///   itu_vehicular ITU-R M.1225 vehicular A (high antenna), 6 taps, all Jakes
TapProfile builtin_profile(std::string_view name);

/// Names accepted by builtin_profile().
const std::vector<std::string>& builtin_profile_names();

/// Expands a profile into a deterministic path list.
///
/// Jakes taps become n_sinusoids paths sharing the tap delay: arrival
/// angles stratify the first quadrant ((2 pi p - pi + psi)/(4n), psi
/// common per tap) and are mirrored quadrant-by-quadrant so Dopplers
/// cover +-max_doppler; each path gets amplitude sqrt(P/n) e^{j phi_p}
/// with an independent uniform phase. Direct taps become a single path
/// with Doppler max_doppler*cos(theta), theta uniform, and a
/// deterministic magnitude sqrt(P).
///
/// Tap powers are normalized at the profile level so the total average
/// gain is 1. Sinusoid phases are baked at t_eval_s; evolution across
/// OFDM symbols is carried exactly by the Doppler factor in the
/// coefficient formulas. Deterministic given dop.seed.
ChannelRealization realize(const TapProfile& profile, const DopplerConfig& dop,
                           double t_eval_s = 0.0);

/// Reads a channel realization from structured text: one path per line,
/// "delay_s doppler_hz amp_re amp_im", '#' comments. Throws ParseError
/// with line/field context, or Error when no paths remain.
ChannelRealization load_realization(std::istream& in);
ChannelRealization load_realization_file(const std::string& path);

/// Writes the same format, round-tripping every double bit-exactly.
void save_realization(std::ostream& out, const ChannelRealization& chan);
void save_realization_file(const std::string& path, const ChannelRealization& chan);

} // namespace ofdmici
