#include "studies.hpp"

#include <filesystem>
#include <sstream>

#include "ofdmici/analytic.hpp"
#include "ofdmici/montecarlo.hpp"
#include "ofdmici/parallel.hpp"
#include "ofdmici/rng.hpp"
#include "ofdmici/stats.hpp"
#include "ofdmici/version.hpp"
#include "tables.hpp"

namespace ofdmici::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Emitter {
    std::string dir;
    bool json_mirror = false;
    std::vector<std::string> written;

    void emit(const std::string& basename, const Table& table) {
        const std::string csv_path = (fs::path(dir) / (basename + ".csv")).string();
        write_file(csv_path, table.to_csv());
        written.push_back(csv_path);
        if (json_mirror) {
            const std::string json_path = (fs::path(dir) / (basename + ".json")).string();
            write_file(json_path, table.to_json().dump(2) + "\n");
            written.push_back(json_path);
        }
    }
};

DopplerConfig doppler_for(const Scenario& s) {
    DopplerConfig dop;
    dop.max_doppler_hz = s.channel.normalized_doppler * s.ofdm.subcarrier_spacing_hz;
    dop.n_sinusoids = s.channel.n_sinusoids;
    dop.seed = 0; // per-realization seeds derive from the scenario seed
    return dop;
}

ChannelRealization fixed_channel(const Scenario& s) {
    return load_realization_file(s.channel.realization_file);
}

void run_coefficients(const Scenario& s, const RunOptions& opt, Emitter& out) {
    (void)opt;
    ChannelRealization chan;
    if (!s.channel.realization_file.empty()) {
        chan = fixed_channel(s);
    } else {
        DopplerConfig dop = doppler_for(s);
        dop.seed = Rng::derive(s.seed, {stream::channel, fnv1a64(s.channel.profile), 0})
                       .next_u64();
        chan = realize(builtin_profile(s.channel.profile), dop);
    }

    Table coeffs({"symbol", "subcarrier", "k", "re", "im", "abs2"});
    Table metrics({"symbol", "subcarrier", "order", "ici_variance", "noise_plus_ici_variance",
                   "ebrx", "ratio", "bep", "capacity_lower_bound"});
    for (int m : s.coefficients.symbols) {
        for (int l : s.coefficients.subcarriers) {
            const CoefficientSet cs = coefficient_set(s.ofdm, chan, m, l);
            // The k == subcarrier row carries the channel coefficient H.
            auto h_row = coeffs.row();
            h_row.integer(m).integer(l).integer(l).num(cs.channel_coeff.real())
                .num(cs.channel_coeff.imag()).num(std::norm(cs.channel_coeff));
            coeffs.commit(h_row);
            for (std::size_t i = 0; i < cs.ici_subcarriers.size(); ++i) {
                auto row = coeffs.row();
                row.integer(m).integer(l).integer(cs.ici_subcarriers[i])
                    .num(cs.ici_coeffs[i].real()).num(cs.ici_coeffs[i].imag())
                    .num(std::norm(cs.ici_coeffs[i]));
                coeffs.commit(row);
            }
            if (s.coefficients.emit_metrics) {
                for (int order : s.orders) {
                    OfdmConfig cfg = s.ofdm;
                    cfg.constellation_order = order;
                    cfg.noise_density = s.noise_density_for(order);
                    const LinkMetrics lm = symbol_bep(cfg, cs);
                    auto row = metrics.row();
                    row.integer(m).integer(l).integer(order).num(lm.ici_variance)
                        .num(lm.noise_plus_ici_variance).num(lm.ebrx).num(lm.ratio).num(lm.bep)
                        .num(lm.capacity_lower_bound);
                    metrics.commit(row);
                }
            }
        }
    }
    out.emit("coefficients", coeffs);
    if (s.coefficients.emit_metrics) out.emit("metrics", metrics);
    if (s.coefficients.dump_realization) {
        const std::string path = (fs::path(out.dir) / "realization.txt").string();
        save_realization_file(path, chan);
        out.written.push_back(path);
    }
}

void run_normality(const Scenario& s, const RunOptions& opt, Emitter& out) {
    if (!s.channel.realization_file.empty()) {
        throw Error("the normality study needs a builtin profile channel, not a fixed "
                    "realization file");
    }
    const int realizations = s.normality_realizations(opt.paper_scale);
    std::vector<TapProfile> profiles;
    for (const auto& name : s.normality.profiles) profiles.push_back(builtin_profile(name));
    const DopplerConfig dop = doppler_for(s);

    const auto rows = normality_table(s.ofdm, profiles, dop, s.normality.subcarriers, s.orders,
                                      s.normality.samples, realizations, s.seed, opt.threads);
    Table table({"profile", "order", "subcarrier", "realizations", "samples", "mean_skewness",
                 "var_skewness", "mean_kurtosis", "var_kurtosis"});
    for (const auto& r : rows) {
        auto row = table.row();
        row.text(r.profile).integer(r.order).integer(r.subcarrier).integer(r.realizations)
            .integer(static_cast<std::int64_t>(r.samples)).num(r.mean_skewness)
            .num(r.var_skewness).num(r.mean_kurtosis).num(r.var_kurtosis);
        table.commit(row);
    }
    out.emit("normality", table);

    if (s.normality.axis_kind) {
        KurtosisAxis axis;
        axis.kind = *s.normality.axis_kind == "subcarrier"
                        ? KurtosisAxis::Kind::subcarrier
                        : KurtosisAxis::Kind::normalized_doppler;
        axis.grid = s.normality.axis_grid;
        axis.fixed_subcarrier = s.normality.axis_fixed_subcarrier;
        const auto profile_rows =
            kurtosis_profile(s.ofdm, profiles.front(), dop, axis, s.orders, s.normality.samples,
                             realizations, s.seed, opt.threads);
        Table ktable({"axis", "axis_value", "order", "mean_kurtosis", "p05_kurtosis",
                      "p95_kurtosis"});
        for (const auto& r : profile_rows) {
            auto row = ktable.row();
            row.text(*s.normality.axis_kind).num(r.axis_value).integer(r.order)
                .num(r.mean_kurtosis).num(r.p05_kurtosis).num(r.p95_kurtosis);
            ktable.commit(row);
        }
        out.emit("kurtosis_profile", ktable);
    }

    if (s.normality.dump_samples) {
        // Raw sample dumps for realization 0 of each combination, using
        // the same derived streams as the table itself.
        for (const auto& profile : profiles) {
            const std::uint64_t name_hash = fnv1a64(profile.name);
            DopplerConfig dop_r = dop;
            dop_r.seed = Rng::derive(s.seed, {stream::channel, name_hash, 0}).next_u64();
            const ChannelRealization chan = realize(profile, dop_r);
            for (int l : s.normality.subcarriers) {
                const CoefficientSet cs = coefficient_set(s.ofdm, chan, 0, l);
                for (int order : s.orders) {
                    OfdmConfig cfg = s.ofdm;
                    cfg.constellation_order = order;
                    const std::uint64_t sample_seed =
                        Rng::derive(s.seed, {stream::symbols, name_hash, 0,
                                             static_cast<std::uint64_t>(l),
                                             static_cast<std::uint64_t>(order)})
                            .next_u64();
                    SampleSet samples = sample_ici(cfg, cs, s.normality.samples, sample_seed);
                    samples.channel_label = chan.label;
                    std::ostringstream text;
                    write_samples(text, samples);
                    const std::string path =
                        (fs::path(out.dir) / ("samples_" + profile.name + "_M" +
                                              std::to_string(order) + "_l" + std::to_string(l) +
                                              ".txt"))
                            .string();
                    write_file(path, text.str());
                    out.written.push_back(path);
                }
            }
        }
    }
}

void run_instant(const Scenario& s, const RunOptions& opt, Emitter& out) {
    Table table({"realization", "symbol", "subcarrier", "order", "ratio", "ici_variance",
                 "noise_density", "bep", "ber", "ci_low", "ci_high", "error_bits", "total_bits",
                 "discarded", "rho"});

    for (int order : s.orders) {
        SimSpec spec;
        spec.cfg = s.ofdm;
        spec.cfg.constellation_order = order;
        spec.cfg.noise_density = s.noise_density_for(order);
        for (int m : s.instant.symbols) {
            for (int l : s.instant.subcarriers) spec.targets.emplace_back(m, l);
        }
        spec.iterations = s.instant_iterations(opt.paper_scale);
        spec.seed = s.seed;
        spec.min_error_bits = s.instant.min_error_bits;
        spec.bootstrap_resamples = s.instant.bootstrap_resamples;
        spec.confidence = s.instant.confidence;

        std::vector<InstantRow> rows;
        if (!s.channel.realization_file.empty()) {
            // Fixed external realization: a single "realization 0".
            const ChannelRealization chan = fixed_channel(s);
            const auto results = run_ber(spec, chan);
            for (std::size_t i = 0; i < results.size(); ++i) {
                const auto& [m, l] = spec.targets[i];
                const LinkMetrics lm = symbol_bep(spec.cfg, coefficient_set(spec.cfg, chan, m, l));
                InstantRow row;
                row.realization = 0;
                row.symbol_index = m;
                row.subcarrier = l;
                row.order = order;
                row.ratio = lm.ratio;
                row.ici_variance = lm.ici_variance;
                row.noise_density = spec.cfg.noise_density;
                row.bep = lm.bep;
                row.ber = results[i].ber;
                row.ci_low = results[i].ci_low;
                row.ci_high = results[i].ci_high;
                row.error_bits = results[i].error_bits;
                row.total_bits = results[i].total_bits;
                row.discarded = results[i].discarded;
                if (!row.discarded && lm.bep > 0.0) row.rho = results[i].ber / lm.bep;
                rows.push_back(row);
            }
        } else {
            rows = instant_study(spec, builtin_profile(s.channel.profile), doppler_for(s),
                                 s.instant_realizations(opt.paper_scale), opt.threads);
        }

        for (const auto& r : rows) {
            auto row = table.row();
            row.integer(r.realization).integer(r.symbol_index).integer(r.subcarrier)
                .integer(r.order).num(r.ratio).num(r.ici_variance).num(r.noise_density)
                .num(r.bep).num(r.ber);
            if (r.ci_low) {
                row.num(*r.ci_low).num(*r.ci_high);
            } else {
                row.discarded().discarded();
            }
            row.integer(r.error_bits).integer(r.total_bits).boolean(r.discarded);
            if (r.rho) {
                row.num(*r.rho);
            } else {
                row.discarded();
            }
            table.commit(row);
        }
    }
    out.emit("instant", table);
}

void run_sweep(const Scenario& s, const RunOptions& opt, Emitter& out) {
    if (!s.channel.realization_file.empty()) {
        throw Error("the average_sweep study needs a builtin profile channel, not a fixed "
                    "realization file");
    }
    Table table({"axis", "axis_value", "order", "symbol", "subcarrier", "realizations",
                 "mean_bep", "mean_ber", "ci_low", "ci_high", "error_bits", "total_bits",
                 "discarded_runs"});

    SweepAxis axis;
    axis.kind = s.sweep.axis == "ebno_db" ? SweepAxis::Kind::ebno_db
                                          : SweepAxis::Kind::normalized_doppler;
    axis.grid = s.sweep.grid;

    for (int order : s.orders) {
        SimSpec spec;
        spec.cfg = s.ofdm;
        spec.cfg.constellation_order = order;
        spec.cfg.noise_density = s.noise_density_for(order);
        for (int l : s.sweep.subcarriers) spec.targets.emplace_back(s.sweep.symbol, l);
        spec.iterations = s.sweep_iterations(opt.paper_scale);
        spec.seed = s.seed;
        spec.min_error_bits = s.instant.min_error_bits;
        spec.bootstrap_resamples = s.sweep.bootstrap_resamples;
        spec.confidence = s.sweep.confidence;

        const auto rows = average_sweep(spec, builtin_profile(s.channel.profile), doppler_for(s),
                                        s.sweep_realizations(opt.paper_scale), axis, opt.threads);
        for (const auto& r : rows) {
            auto row = table.row();
            row.text(s.sweep.axis).num(r.axis_value).integer(r.order).integer(r.symbol_index)
                .integer(r.subcarrier).integer(r.realizations).num(r.mean_bep).num(r.mean_ber)
                .num(r.ci_low).num(r.ci_high).integer(r.error_bits).integer(r.total_bits)
                .integer(r.discarded_runs);
            table.commit(row);
        }
    }
    out.emit("sweep", table);
}

} // namespace

std::vector<std::string> run_scenario(const Scenario& scenario, const RunOptions& options) {
    RunOptions opt = options;
    if (opt.threads <= 0) opt.threads = default_thread_count();
    if (opt.out_dir.empty()) opt.out_dir = scenario.output.dir;
    fs::create_directories(opt.out_dir);

    Emitter out;
    out.dir = opt.out_dir;
    out.json_mirror = scenario.output.json_mirror;

    if (scenario.study == "coefficients") {
        run_coefficients(scenario, opt, out);
    } else if (scenario.study == "normality") {
        run_normality(scenario, opt, out);
    } else if (scenario.study == "instantaneous") {
        run_instant(scenario, opt, out);
    } else if (scenario.study == "average_sweep") {
        run_sweep(scenario, opt, out);
    } else {
        throw Error("unknown study '" + scenario.study + "'");
    }

    // Manifest with the fully resolved scenario: a rerun from this file
    // reproduces the tables byte for byte.
    Scenario resolved = scenario;
    resolved.output.dir = opt.out_dir;
    resolved.normality.realizations = scenario.normality_realizations(opt.paper_scale);
    resolved.instant.realizations = scenario.instant_realizations(opt.paper_scale);
    resolved.instant.iterations = scenario.instant_iterations(opt.paper_scale);
    resolved.sweep.realizations = scenario.sweep_realizations(opt.paper_scale);
    resolved.sweep.iterations = scenario.sweep_iterations(opt.paper_scale);

    json manifest{{"tool", {{"name", "ofdmici"}, {"version", kVersion},
                            {"schema_version", kSchemaVersion}}},
                  {"study", scenario.study},
                  {"scenario", resolved.to_json()},
                  {"outputs", out.written}};
    const std::string manifest_path = (fs::path(opt.out_dir) / "manifest.json").string();
    write_file(manifest_path, manifest.dump(2) + "\n");
    out.written.push_back(manifest_path);
    return out.written;
}

} // namespace ofdmici::cli
