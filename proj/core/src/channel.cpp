#include "ofdmici/channel.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "ofdmici/rng.hpp"

namespace ofdmici {

namespace detail {
extern const char* const kProfileTextTux;
extern const char* const kProfileTextRax;
extern const char* const kProfileTextItuVehicular;
} // namespace detail

namespace {

constexpr double kPi = std::numbers::pi;

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double parse_double_field(std::string_view token, int line, const char* field) {
    token = trim(token);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(value)) {
        throw ParseError("line " + std::to_string(line) + ": field '" + field +
                         "': not a finite number: '" + std::string(token) + "'");
    }
    return value;
}

std::string format_double(double value) {
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

TapProfile parse_profile_text(const char* text, std::string name) {
    TapProfile profile;
    profile.name = std::move(name);
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (const auto hash = view.find('#'); hash != std::string_view::npos)
            view = view.substr(0, hash);
        view = trim(view);
        if (view.empty()) continue;

        Tap tap;
        const auto c1 = view.find(',');
        const auto c2 = view.find(',', c1 == std::string_view::npos ? c1 : c1 + 1);
        if (c1 == std::string_view::npos || c2 == std::string_view::npos) {
            throw ParseError("profile '" + profile.name + "' line " + std::to_string(line_no) +
                             ": expected 'delay_s, avg_power_db, spectrum'");
        }
        tap.delay_s = parse_double_field(view.substr(0, c1), line_no, "delay_s");
        tap.avg_power_db = parse_double_field(view.substr(c1 + 1, c2 - c1 - 1), line_no,
                                              "avg_power_db");
        const std::string_view spec = trim(view.substr(c2 + 1));
        if (spec == "jakes") {
            tap.spectrum = DopplerSpectrum::jakes;
        } else if (spec == "direct") {
            tap.spectrum = DopplerSpectrum::direct;
        } else {
            throw ParseError("profile '" + profile.name + "' line " + std::to_string(line_no) +
                             ": field 'spectrum': expected jakes or direct, got '" +
                             std::string(spec) + "'");
        }
        profile.taps.push_back(tap);
    }
    profile.validate();
    return profile;
}

} // namespace

void TapProfile::validate() const {
    if (taps.empty()) throw Error("tap profile '" + name + "' has no taps");
    for (std::size_t i = 1; i < taps.size(); ++i) {
        if (!(taps[i].delay_s > taps[i - 1].delay_s)) {
            throw Error("tap profile '" + name + "': delays must be strictly increasing");
        }
    }
}

void DopplerConfig::validate() const {
    if (!(max_doppler_hz >= 0.0)) throw Error("max Doppler must be nonnegative");
    if (n_sinusoids < 1) throw Error("number of sinusoids must be at least 1");
}

TapProfile builtin_profile(std::string_view name) {
    if (name == "tux") return parse_profile_text(detail::kProfileTextTux, "tux");
    if (name == "rax") return parse_profile_text(detail::kProfileTextRax, "rax");
    if (name == "itu_vehicular")
        return parse_profile_text(detail::kProfileTextItuVehicular, "itu_vehicular");
    throw Error("unknown channel profile '" + std::string(name) +
                "' (expected tux, rax or itu_vehicular)");
}

const std::vector<std::string>& builtin_profile_names() {
    static const std::vector<std::string> names{"tux", "rax", "itu_vehicular"};
    return names;
}

ChannelRealization realize(const TapProfile& profile, const DopplerConfig& dop, double t_eval_s) {
    profile.validate();
    dop.validate();

    // Profile-level power normalization: total average gain 1.
    double total_power = 0.0;
    for (const Tap& tap : profile.taps) total_power += std::pow(10.0, tap.avg_power_db / 10.0);

    Rng rng = Rng::derive(dop.seed, {stream::channel});
    ChannelRealization chan;
    chan.label = profile.name + " numax=" + format_double(dop.max_doppler_hz) +
                 "Hz n=" + std::to_string(dop.n_sinusoids) + " seed=" + std::to_string(dop.seed);

    for (const Tap& tap : profile.taps) {
        const double tap_power = std::pow(10.0, tap.avg_power_db / 10.0) / total_power;
        if (tap.spectrum == DopplerSpectrum::direct) {
            const double theta = rng.uniform(-kPi, kPi);
            const double doppler = dop.max_doppler_hz * std::cos(theta);
            const double phase = rng.uniform(-kPi, kPi);
            chan.paths.push_back({tap.delay_s, doppler,
                                  std::polar(std::sqrt(tap_power),
                                             phase + 2.0 * kPi * doppler * t_eval_s)});
            continue;
        }
        const int n = dop.n_sinusoids;
        const int n_base = (n + 1) / 2;
        const double psi = rng.uniform(-kPi, kPi);
        const double amp = std::sqrt(tap_power / n);
        int emitted = 0;
        for (int p = 1; p <= n_base; ++p) {
            // Base angles stratify the first quadrant; each is mirrored to
            // pi - beta so positive and negative Dopplers balance exactly
            // within every realization (angles in the lower half plane are
            // Doppler-equivalent by cosine symmetry).
            const double beta = (2.0 * kPi * p - kPi + psi) / (4.0 * n_base);
            for (const double angle : {beta, kPi - beta}) {
                if (emitted == n) break;
                ++emitted;
                const double doppler = dop.max_doppler_hz * std::cos(angle);
                const double phase = rng.uniform(-kPi, kPi);
                chan.paths.push_back({tap.delay_s, doppler,
                                      std::polar(amp, phase + 2.0 * kPi * doppler * t_eval_s)});
            }
        }
    }
    return chan;
}

ChannelRealization load_realization(std::istream& in) {
    ChannelRealization chan;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (view.starts_with("# label:")) {
            chan.label = std::string(trim(view.substr(8)));
            continue;
        }
        if (const auto hash = view.find('#'); hash != std::string_view::npos)
            view = view.substr(0, hash);
        view = trim(view);
        if (view.empty()) continue;

        static constexpr std::array<const char*, 4> kFields{"delay_s", "doppler_hz", "amp_re",
                                                            "amp_im"};
        std::array<double, 4> values{};
        std::istringstream fields{std::string(view)};
        std::string token;
        std::size_t count = 0;
        while (fields >> token) {
            if (count < values.size()) {
                values[count] = parse_double_field(token, line_no, kFields[count]);
            }
            ++count;
        }
        if (count != values.size()) {
            throw ParseError("line " + std::to_string(line_no) +
                             ": expected 4 fields (delay_s doppler_hz amp_re amp_im), got " +
                             std::to_string(count));
        }
        if (values[0] < 0.0) {
            throw ParseError("line " + std::to_string(line_no) +
                             ": field 'delay_s': must be nonnegative");
        }
        chan.paths.push_back({values[0], values[1], cdouble{values[2], values[3]}});
    }
    if (chan.paths.empty()) throw Error("channel realization document contains no paths");
    return chan;
}

ChannelRealization load_realization_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open channel realization file '" + path + "'");
    return load_realization(in);
}

void save_realization(std::ostream& out, const ChannelRealization& chan) {
    out << "# channel realization, one path per line\n";
    if (!chan.label.empty()) out << "# label: " << chan.label << "\n";
    out << "# delay_s doppler_hz amp_re amp_im\n";
    for (const PathParams& p : chan.paths) {
        out << format_double(p.delay_s) << ' ' << format_double(p.doppler_hz) << ' '
            << format_double(p.amplitude.real()) << ' ' << format_double(p.amplitude.imag())
            << '\n';
    }
}

void save_realization_file(const std::string& path, const ChannelRealization& chan) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    save_realization(out, chan);
    if (!out) throw Error("failed writing '" + path + "'");
}

} // namespace ofdmici
