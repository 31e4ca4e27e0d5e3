#include "scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "ofdmici/error.hpp"

namespace ofdmici::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw ParseError("scenario: " + path + ": " + message);
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        bool known = false;
        for (const char* a : allowed) {
            if (key == a) known = true;
        }
        if (!known) fail(path.empty() ? key : path + "." + key, "unknown key");
    }
}

template <typename T>
T get_number(const json& obj, const std::string& path, const char* key, T fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) fail(path + "." + key, "expected a number");
    return v.get<T>();
}

bool get_bool(const json& obj, const std::string& path, const char* key, bool fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_boolean()) fail(path + "." + key, "expected a boolean");
    return v.get<bool>();
}

std::string get_string(const json& obj, const std::string& path, const char* key,
                       const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_string()) fail(path + "." + key, "expected a string");
    return v.get<std::string>();
}

std::vector<int> get_int_list(const json& obj, const std::string& path, const char* key,
                              std::vector<int> fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_array() || v.empty()) fail(path + "." + key, "expected a nonempty array");
    std::vector<int> out;
    for (const auto& e : v) {
        if (!e.is_number_integer()) fail(path + "." + key, "expected integers");
        out.push_back(e.get<int>());
    }
    return out;
}

std::vector<double> get_double_list(const json& obj, const std::string& path, const char* key,
                                    std::vector<double> fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_array() || v.empty()) fail(path + "." + key, "expected a nonempty array");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) fail(path + "." + key, "expected numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

std::vector<int> parse_subcarrier_set(const json& ofdm, const std::string& path) {
    if (!ofdm.contains("used_subcarriers")) {
        std::vector<int> s;
        for (int k = -300; k <= 300; ++k) {
            if (k != 0) s.push_back(k);
        }
        return s;
    }
    const json& v = ofdm.at("used_subcarriers");
    if (v.is_array()) {
        std::vector<int> s;
        for (const auto& e : v) {
            if (!e.is_number_integer()) fail(path + ".used_subcarriers", "expected integers");
            s.push_back(e.get<int>());
        }
        return s;
    }
    if (v.is_object()) {
        check_keys(v, path + ".used_subcarriers", {"first", "last", "exclude_dc"});
        if (!v.contains("first") || !v.contains("last")) {
            fail(path + ".used_subcarriers", "needs 'first' and 'last'");
        }
        const int first = v.at("first").get<int>();
        const int last = v.at("last").get<int>();
        const bool exclude_dc = get_bool(v, path + ".used_subcarriers", "exclude_dc", true);
        if (last < first) fail(path + ".used_subcarriers", "'last' must be >= 'first'");
        std::vector<int> s;
        for (int k = first; k <= last; ++k) {
            if (exclude_dc && k == 0) continue;
            s.push_back(k);
        }
        return s;
    }
    fail(path + ".used_subcarriers", "expected an array or {first, last, exclude_dc}");
}

void require_targets_in_band(const OfdmConfig& cfg, const std::vector<int>& subcarriers,
                             const std::string& path) {
    for (int l : subcarriers) {
        if (!cfg.contains(l)) {
            fail(path, "subcarrier " + std::to_string(l) + " is not in the used-subcarrier set");
        }
    }
}

// Strict JSON parse that rejects duplicate object keys.
json parse_strict_json(const std::string& text) {
    std::vector<std::set<std::string>> key_stack;
    json::parser_callback_t cb = [&key_stack](int /*depth*/, json::parse_event_t event,
                                              json& parsed) {
        if (event == json::parse_event_t::object_start) {
            key_stack.emplace_back();
        } else if (event == json::parse_event_t::object_end) {
            key_stack.pop_back();
        } else if (event == json::parse_event_t::key) {
            const auto key = parsed.get<std::string>();
            if (!key_stack.back().insert(key).second) {
                throw ParseError("scenario: duplicate key '" + key + "'");
            }
        }
        return true;
    };
    try {
        return json::parse(text, cb);
    } catch (const json::exception& e) {
        throw ParseError(std::string("scenario: ") + e.what());
    }
}

} // namespace

double Scenario::noise_density_for(int order) const {
    if (!ebno_db) return ofdm.noise_density;
    int bits = 0;
    for (int v = order; v > 1; v >>= 1) ++bits;
    return (ofdm.symbol_variance / bits) / std::pow(10.0, *ebno_db / 10.0);
}

int Scenario::normality_realizations(bool paper_scale) const {
    if (normality.realizations) return *normality.realizations;
    return paper_scale ? 1000 : 100;
}

int Scenario::instant_realizations(bool paper_scale) const {
    (void)paper_scale; // 100 realizations at both scales
    if (instant.realizations) return *instant.realizations;
    return 100;
}

std::int64_t Scenario::instant_iterations(bool paper_scale) const {
    if (instant.iterations) return *instant.iterations;
    return paper_scale ? 1000000 : 10000;
}

int Scenario::sweep_realizations(bool paper_scale) const {
    if (sweep.realizations) return *sweep.realizations;
    return paper_scale ? 10000 : 100;
}

std::int64_t Scenario::sweep_iterations(bool paper_scale) const {
    (void)paper_scale; // averaged studies use 1e4 iterations at both scales
    if (sweep.iterations) return *sweep.iterations;
    return 10000;
}

Scenario parse_scenario(const std::string& text, const std::string& expected_study) {
    json doc = parse_strict_json(text);
    if (!doc.is_object()) throw ParseError("scenario: top level must be an object");

    // A run manifest embeds the resolved scenario; unwrap it.
    if (doc.contains("tool") && doc.contains("scenario")) {
        doc = doc.at("scenario");
        if (!doc.is_object()) throw ParseError("scenario: manifest 'scenario' must be an object");
    }

    check_keys(doc, "", {"name", "ofdm", "channel", "study", "seed", "orders", "coefficients",
                         "normality", "instantaneous", "average_sweep", "output"});

    Scenario s;
    s.name = get_string(doc, "", "name", "scenario");
    if (doc.contains("seed")) {
        const json& v = doc.at("seed");
        if (!v.is_number_unsigned() && !v.is_number_integer()) fail("seed", "expected an integer");
        s.seed = v.get<std::uint64_t>();
    }

    // --- ofdm ---
    const json ofdm = doc.value("ofdm", json::object());
    if (!ofdm.is_object()) fail("ofdm", "expected an object");
    check_keys(ofdm, "ofdm",
               {"subcarrier_spacing_hz", "cp_length_s", "used_subcarriers", "constellation_order",
                "symbol_variance", "noise_density", "ebno_db"});
    s.ofdm.subcarrier_spacing_hz = get_number(ofdm, "ofdm", "subcarrier_spacing_hz", 15e3);
    s.ofdm.cp_length_s = get_number(ofdm, "ofdm", "cp_length_s", 72.0 / 15.36e6);
    s.ofdm.used_subcarriers = parse_subcarrier_set(ofdm, "ofdm");
    s.ofdm.constellation_order = get_number(ofdm, "ofdm", "constellation_order", 4);
    s.ofdm.symbol_variance = get_number(ofdm, "ofdm", "symbol_variance", 1.0);
    if (ofdm.contains("noise_density") && ofdm.contains("ebno_db")) {
        fail("ofdm", "'noise_density' and 'ebno_db' are mutually exclusive");
    }
    if (ofdm.contains("noise_density")) {
        s.ofdm.noise_density = get_number(ofdm, "ofdm", "noise_density", 0.0);
    } else {
        s.ebno_db = get_number(ofdm, "ofdm", "ebno_db", 50.0);
    }
    try {
        s.ofdm.validate();
    } catch (const Error& e) {
        fail("ofdm", e.what());
    }

    // --- orders ---
    s.orders = get_int_list(doc, "", "orders", {s.ofdm.constellation_order});
    for (int order : s.orders) {
        if (!is_square_qam_order(order)) {
            fail("orders", std::to_string(order) + " is not a square power of two");
        }
    }

    // --- channel ---
    const json channel = doc.value("channel", json::object());
    if (!channel.is_object()) fail("channel", "expected an object");
    check_keys(channel, "channel",
               {"profile", "realization_file", "normalized_doppler", "max_doppler_hz",
                "n_sinusoids"});
    if (channel.contains("profile") && channel.contains("realization_file")) {
        fail("channel", "'profile' and 'realization_file' are mutually exclusive");
    }
    if (channel.contains("normalized_doppler") && channel.contains("max_doppler_hz")) {
        fail("channel", "'normalized_doppler' and 'max_doppler_hz' are mutually exclusive");
    }
    s.channel.realization_file = get_string(channel, "channel", "realization_file", "");
    if (s.channel.realization_file.empty()) {
        s.channel.profile = get_string(channel, "channel", "profile", "itu_vehicular");
    } else {
        s.channel.profile.clear();
    }
    if (channel.contains("max_doppler_hz")) {
        s.channel.normalized_doppler =
            get_number(channel, "channel", "max_doppler_hz", 0.0) / s.ofdm.subcarrier_spacing_hz;
    } else {
        s.channel.normalized_doppler = get_number(channel, "channel", "normalized_doppler", 0.05);
    }
    s.channel.n_sinusoids = get_number(channel, "channel", "n_sinusoids", 8);
    if (s.channel.n_sinusoids < 1) fail("channel.n_sinusoids", "must be at least 1");

    // --- study ---
    s.study = get_string(doc, "", "study", expected_study);
    if (s.study.empty()) fail("study", "missing study (and no subcommand default)");
    const std::set<std::string> known_studies{"coefficients", "normality", "instantaneous",
                                              "average_sweep"};
    if (!known_studies.contains(s.study)) fail("study", "unknown study '" + s.study + "'");
    if (!expected_study.empty() && s.study != expected_study) {
        fail("study", "scenario study '" + s.study + "' does not match the subcommand ('" +
                          expected_study + "')");
    }

    // --- study parameters ---
    if (doc.contains("coefficients")) {
        const json& p = doc.at("coefficients");
        check_keys(p, "coefficients", {"symbols", "subcarriers", "emit_metrics",
                                       "dump_realization"});
        s.coefficients.symbols = get_int_list(p, "coefficients", "symbols", {0});
        s.coefficients.subcarriers = get_int_list(p, "coefficients", "subcarriers", {150});
        s.coefficients.emit_metrics = get_bool(p, "coefficients", "emit_metrics", true);
        s.coefficients.dump_realization = get_bool(p, "coefficients", "dump_realization", true);
    }
    require_targets_in_band(s.ofdm, s.coefficients.subcarriers, "coefficients.subcarriers");

    if (doc.contains("normality")) {
        const json& p = doc.at("normality");
        check_keys(p, "normality", {"profiles", "subcarriers", "samples", "realizations",
                                    "dump_samples", "axis"});
        if (p.contains("profiles")) {
            const json& v = p.at("profiles");
            if (!v.is_array() || v.empty()) fail("normality.profiles", "expected a nonempty array");
            s.normality.profiles.clear();
            for (const auto& e : v) {
                if (!e.is_string()) fail("normality.profiles", "expected strings");
                s.normality.profiles.push_back(e.get<std::string>());
            }
        }
        s.normality.subcarriers = get_int_list(p, "normality", "subcarriers", {150, 300});
        s.normality.samples =
            static_cast<std::size_t>(get_number<std::int64_t>(p, "normality", "samples", 1000));
        if (p.contains("realizations")) {
            s.normality.realizations = get_number(p, "normality", "realizations", 100);
        }
        s.normality.dump_samples = get_bool(p, "normality", "dump_samples", false);
        if (p.contains("axis")) {
            const json& axis = p.at("axis");
            check_keys(axis, "normality.axis", {"kind", "grid", "fixed_subcarrier"});
            s.normality.axis_kind = get_string(axis, "normality.axis", "kind", "subcarrier");
            if (*s.normality.axis_kind != "subcarrier" &&
                *s.normality.axis_kind != "normalized_doppler") {
                fail("normality.axis.kind", "expected subcarrier or normalized_doppler");
            }
            s.normality.axis_grid = get_double_list(axis, "normality.axis", "grid", {});
            if (s.normality.axis_grid.empty()) fail("normality.axis.grid", "expected a grid");
            s.normality.axis_fixed_subcarrier =
                get_number(axis, "normality.axis", "fixed_subcarrier", 150);
            if (*s.normality.axis_kind == "subcarrier") {
                for (double g : s.normality.axis_grid) {
                    if (!s.ofdm.contains(static_cast<int>(g))) {
                        fail("normality.axis.grid", "subcarrier " +
                                                        std::to_string(static_cast<int>(g)) +
                                                        " is not in the used-subcarrier set");
                    }
                }
            } else if (!s.ofdm.contains(s.normality.axis_fixed_subcarrier)) {
                fail("normality.axis.fixed_subcarrier", "not in the used-subcarrier set");
            }
        }
    }
    if (s.normality.profiles.empty() && !s.channel.profile.empty()) {
        s.normality.profiles = {s.channel.profile};
    }
    require_targets_in_band(s.ofdm, s.normality.subcarriers, "normality.subcarriers");

    if (doc.contains("instantaneous")) {
        const json& p = doc.at("instantaneous");
        check_keys(p, "instantaneous",
                   {"subcarriers", "symbols", "realizations", "iterations", "min_error_bits",
                    "bootstrap_resamples", "confidence"});
        s.instant.subcarriers = get_int_list(p, "instantaneous", "subcarriers", {150});
        s.instant.symbols = get_int_list(p, "instantaneous", "symbols", s.instant.symbols);
        if (p.contains("realizations")) {
            s.instant.realizations = get_number(p, "instantaneous", "realizations", 100);
        }
        if (p.contains("iterations")) {
            s.instant.iterations =
                get_number<std::int64_t>(p, "instantaneous", "iterations", 10000);
        }
        s.instant.min_error_bits =
            get_number<std::int64_t>(p, "instantaneous", "min_error_bits", 10);
        s.instant.bootstrap_resamples =
            get_number(p, "instantaneous", "bootstrap_resamples", 1000);
        s.instant.confidence = get_number(p, "instantaneous", "confidence", 0.95);
    }
    require_targets_in_band(s.ofdm, s.instant.subcarriers, "instantaneous.subcarriers");

    if (doc.contains("average_sweep")) {
        const json& p = doc.at("average_sweep");
        check_keys(p, "average_sweep", {"axis", "grid", "subcarriers", "symbol", "realizations",
                                        "iterations", "bootstrap_resamples", "confidence"});
        s.sweep.axis = get_string(p, "average_sweep", "axis", "ebno_db");
        if (s.sweep.axis != "ebno_db" && s.sweep.axis != "normalized_doppler") {
            fail("average_sweep.axis", "expected ebno_db or normalized_doppler");
        }
        s.sweep.grid = get_double_list(p, "average_sweep", "grid", s.sweep.grid);
        s.sweep.subcarriers = get_int_list(p, "average_sweep", "subcarriers", {150, 300});
        s.sweep.symbol = get_number(p, "average_sweep", "symbol", 0);
        if (p.contains("realizations")) {
            s.sweep.realizations = get_number(p, "average_sweep", "realizations", 100);
        }
        if (p.contains("iterations")) {
            s.sweep.iterations = get_number<std::int64_t>(p, "average_sweep", "iterations", 10000);
        }
        s.sweep.bootstrap_resamples = get_number(p, "average_sweep", "bootstrap_resamples", 1000);
        s.sweep.confidence = get_number(p, "average_sweep", "confidence", 0.95);
    }
    require_targets_in_band(s.ofdm, s.sweep.subcarriers, "average_sweep.subcarriers");

    // --- output ---
    if (doc.contains("output")) {
        const json& p = doc.at("output");
        check_keys(p, "output", {"dir", "formats"});
        s.output.dir = get_string(p, "output", "dir", ".");
        if (p.contains("formats")) {
            const json& v = p.at("formats");
            if (!v.is_array() || v.empty()) fail("output.formats", "expected a nonempty array");
            s.output.csv = false;
            s.output.json_mirror = false;
            for (const auto& e : v) {
                const auto f = e.get<std::string>();
                if (f == "csv") {
                    s.output.csv = true;
                } else if (f == "json") {
                    s.output.json_mirror = true;
                } else {
                    fail("output.formats", "unknown format '" + f + "'");
                }
            }
            s.output.csv = true; // CSV is canonical and always written
        }
    }

    return s;
}

Scenario parse_scenario_file(const std::string& path, const std::string& expected_study) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open scenario file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str(), expected_study);
}

json Scenario::to_json() const {
    json ofdm_j{{"subcarrier_spacing_hz", ofdm.subcarrier_spacing_hz},
                {"cp_length_s", ofdm.cp_length_s},
                {"used_subcarriers", ofdm.used_subcarriers},
                {"constellation_order", ofdm.constellation_order},
                {"symbol_variance", ofdm.symbol_variance}};
    if (ebno_db) {
        ofdm_j["ebno_db"] = *ebno_db;
    } else {
        ofdm_j["noise_density"] = ofdm.noise_density;
    }

    json channel_j;
    if (!channel.realization_file.empty()) {
        channel_j["realization_file"] = channel.realization_file;
    } else {
        channel_j["profile"] = channel.profile;
    }
    channel_j["normalized_doppler"] = channel.normalized_doppler;
    channel_j["n_sinusoids"] = channel.n_sinusoids;

    json doc{{"name", name}, {"ofdm", ofdm_j}, {"channel", channel_j}, {"study", study},
             {"seed", seed},  {"orders", orders}};

    if (study == "coefficients") {
        doc["coefficients"] = {{"symbols", coefficients.symbols},
                               {"subcarriers", coefficients.subcarriers},
                               {"emit_metrics", coefficients.emit_metrics},
                               {"dump_realization", coefficients.dump_realization}};
    } else if (study == "normality") {
        json p{{"profiles", normality.profiles},
               {"subcarriers", normality.subcarriers},
               {"samples", normality.samples},
               {"dump_samples", normality.dump_samples}};
        if (normality.realizations) p["realizations"] = *normality.realizations;
        if (normality.axis_kind) {
            p["axis"] = {{"kind", *normality.axis_kind},
                         {"grid", normality.axis_grid},
                         {"fixed_subcarrier", normality.axis_fixed_subcarrier}};
        }
        doc["normality"] = p;
    } else if (study == "instantaneous") {
        json p{{"subcarriers", instant.subcarriers},
               {"symbols", instant.symbols},
               {"min_error_bits", instant.min_error_bits},
               {"bootstrap_resamples", instant.bootstrap_resamples},
               {"confidence", instant.confidence}};
        if (instant.realizations) p["realizations"] = *instant.realizations;
        if (instant.iterations) p["iterations"] = *instant.iterations;
        doc["instantaneous"] = p;
    } else if (study == "average_sweep") {
        json p{{"axis", sweep.axis},
               {"grid", sweep.grid},
               {"subcarriers", sweep.subcarriers},
               {"symbol", sweep.symbol},
               {"bootstrap_resamples", sweep.bootstrap_resamples},
               {"confidence", sweep.confidence}};
        if (sweep.realizations) p["realizations"] = *sweep.realizations;
        if (sweep.iterations) p["iterations"] = *sweep.iterations;
        doc["average_sweep"] = p;
    }

    json formats = json::array();
    formats.push_back("csv");
    if (output.json_mirror) formats.push_back("json");
    doc["output"] = {{"dir", output.dir}, {"formats", formats}};
    return doc;
}

} // namespace ofdmici::cli
