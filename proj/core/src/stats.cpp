#include "ofdmici/stats.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "ofdmici/modem.hpp"
#include "ofdmici/parallel.hpp"
#include "ofdmici/rng.hpp"

namespace ofdmici {

namespace {

struct Standardized {
    // Samples whitened with the inverse Cholesky factor of the MLE
    // covariance, so that y_i . y_j equals the Mahalanobis cross product.
    std::vector<std::array<double, 2>> y;
};

Standardized standardize(const SampleSet& s) {
    const std::size_t n = s.n();
    if (n < 3) throw Error("Mardia statistics need at least 3 samples");

    double mean0 = 0.0, mean1 = 0.0;
    for (const auto& z : s.samples) {
        mean0 += z[0];
        mean1 += z[1];
    }
    mean0 /= static_cast<double>(n);
    mean1 /= static_cast<double>(n);

    double a = 0.0, b = 0.0, c = 0.0; // covariance entries (MLE, divide by n)
    for (const auto& z : s.samples) {
        const double u0 = z[0] - mean0;
        const double u1 = z[1] - mean1;
        a += u0 * u0;
        b += u0 * u1;
        c += u1 * u1;
    }
    a /= static_cast<double>(n);
    b /= static_cast<double>(n);
    c /= static_cast<double>(n);

    // Condition number of the symmetric 2x2; reject degenerate spreads.
    const double half_trace = 0.5 * (a + c);
    const double radius = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
    const double eig_min = half_trace - radius;
    const double eig_max = half_trace + radius;
    if (!(eig_min > 0.0) || eig_max / eig_min > 1e12) {
        throw Error("sample covariance is singular or near singular");
    }

    const double l11 = std::sqrt(a);
    const double l21 = b / l11;
    const double l22 = std::sqrt(c - l21 * l21);

    Standardized out;
    out.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u0 = s.samples[i][0] - mean0;
        const double u1 = s.samples[i][1] - mean1;
        const double y0 = u0 / l11;
        out.y[i] = {y0, (u1 - l21 * y0) / l22};
    }
    return out;
}

double percentile(std::vector<double> values, double q) {
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= values.size()) return values.back();
    const double frac = pos - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[lo + 1] * frac;
}

} // namespace

SampleSet sample_ici(const OfdmConfig& cfg, const CoefficientSet& cs, std::size_t n,
                     std::uint64_t seed) {
    if (n < 3) throw Error("need at least 3 ICI samples");
    const Constellation constel = build_constellation(cfg.constellation_order,
                                                      cfg.symbol_variance);
    const std::uint64_t mask = static_cast<std::uint64_t>(constel.order - 1);

    SampleSet out;
    out.symbol_index = cs.symbol_index;
    out.subcarrier = cs.subcarrier;
    out.order = cfg.constellation_order;
    out.samples.resize(n);

    Rng rng = Rng::derive(seed, {stream::symbols});
    for (std::size_t i = 0; i < n; ++i) {
        cdouble sum{};
        for (const cdouble& h : cs.ici_coeffs) {
            sum += constel.points[rng.next_u64() & mask] * h;
        }
        out.samples[i] = {sum.real(), sum.imag()};
    }
    return out;
}

double mardia_skewness(const SampleSet& s) {
    const Standardized std_samples = standardize(s);
    const auto& y = std_samples.y;
    const std::size_t n = y.size();

    // Exact O(n^2) double sum; the diagonal plus twice the upper triangle.
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double yi0 = y[i][0];
        const double yi1 = y[i][1];
        const double dii = yi0 * yi0 + yi1 * yi1;
        total += dii * dii * dii;
        double row = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = yi0 * y[j][0] + yi1 * y[j][1];
            row += d * d * d;
        }
        total += 2.0 * row;
    }
    return total / (static_cast<double>(n) * static_cast<double>(n));
}

double mardia_kurtosis(const SampleSet& s) {
    const Standardized std_samples = standardize(s);
    double total = 0.0;
    for (const auto& v : std_samples.y) {
        const double d = v[0] * v[0] + v[1] * v[1];
        total += d * d;
    }
    return total / static_cast<double>(std_samples.y.size());
}

void write_samples(std::ostream& out, const SampleSet& s) {
    out << "# ICI samples (re im), n=" << s.n() << ", m=" << s.symbol_index
        << ", l=" << s.subcarrier << ", M=" << s.order << "\n";
    if (!s.channel_label.empty()) out << "# channel: " << s.channel_label << "\n";
    out.precision(17);
    for (const auto& z : s.samples) out << z[0] << ' ' << z[1] << '\n';
}

std::vector<NormalityRow> normality_table(const OfdmConfig& cfg,
                                          const std::vector<TapProfile>& profiles,
                                          const DopplerConfig& dop,
                                          const std::vector<int>& subcarriers,
                                          const std::vector<int>& orders, std::size_t n_samples,
                                          int n_realizations, std::uint64_t seed, int threads) {
    if (profiles.empty() || subcarriers.empty() || orders.empty() || n_realizations < 1) {
        throw Error("normality study needs profiles, subcarriers, orders and realizations");
    }
    cfg.validate();

    struct Cell {
        double skewness = 0.0;
        double kurtosis = 0.0;
    };
    // slot[profile][realization][subcarrier][order]
    const std::size_t n_prof = profiles.size();
    const std::size_t n_sub = subcarriers.size();
    const std::size_t n_ord = orders.size();
    std::vector<Cell> cells(n_prof * static_cast<std::size_t>(n_realizations) * n_sub * n_ord);
    const auto cell_index = [&](std::size_t p, std::size_t r, std::size_t s, std::size_t o) {
        return ((p * static_cast<std::size_t>(n_realizations) + r) * n_sub + s) * n_ord + o;
    };

    parallel_for(n_prof * static_cast<std::size_t>(n_realizations), threads, [&](std::size_t job) {
        const std::size_t p = job / static_cast<std::size_t>(n_realizations);
        const std::size_t r = job % static_cast<std::size_t>(n_realizations);
        const std::uint64_t name_hash = fnv1a64(profiles[p].name);

        DopplerConfig dop_r = dop;
        dop_r.seed = Rng::derive(seed, {stream::channel, name_hash, r}).next_u64();
        const ChannelRealization chan = realize(profiles[p], dop_r);

        for (std::size_t s = 0; s < n_sub; ++s) {
            const CoefficientSet cs = coefficient_set(cfg, chan, 0, subcarriers[s]);
            for (std::size_t o = 0; o < n_ord; ++o) {
                OfdmConfig cfg_o = cfg;
                cfg_o.constellation_order = orders[o];
                const std::uint64_t sample_seed =
                    Rng::derive(seed, {stream::symbols, name_hash, r,
                                       static_cast<std::uint64_t>(subcarriers[s]),
                                       static_cast<std::uint64_t>(orders[o])})
                        .next_u64();
                const SampleSet samples = sample_ici(cfg_o, cs, n_samples, sample_seed);
                Cell& cell = cells[cell_index(p, r, s, o)];
                cell.skewness = mardia_skewness(samples);
                cell.kurtosis = mardia_kurtosis(samples);
            }
        }
    });

    std::vector<NormalityRow> rows;
    rows.reserve(n_prof * n_ord * n_sub);
    for (std::size_t p = 0; p < n_prof; ++p) {
        for (std::size_t o = 0; o < n_ord; ++o) {
            for (std::size_t s = 0; s < n_sub; ++s) {
                NormalityRow row;
                row.profile = profiles[p].name;
                row.order = orders[o];
                row.subcarrier = subcarriers[s];
                row.realizations = n_realizations;
                row.samples = n_samples;
                double sum_s = 0.0, sum_k = 0.0;
                for (int r = 0; r < n_realizations; ++r) {
                    const Cell& cell = cells[cell_index(p, static_cast<std::size_t>(r), s, o)];
                    sum_s += cell.skewness;
                    sum_k += cell.kurtosis;
                }
                row.mean_skewness = sum_s / n_realizations;
                row.mean_kurtosis = sum_k / n_realizations;
                double var_s = 0.0, var_k = 0.0;
                for (int r = 0; r < n_realizations; ++r) {
                    const Cell& cell = cells[cell_index(p, static_cast<std::size_t>(r), s, o)];
                    var_s += (cell.skewness - row.mean_skewness) *
                             (cell.skewness - row.mean_skewness);
                    var_k += (cell.kurtosis - row.mean_kurtosis) *
                             (cell.kurtosis - row.mean_kurtosis);
                }
                row.var_skewness = var_s / n_realizations;
                row.var_kurtosis = var_k / n_realizations;
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

std::vector<KurtosisProfileRow> kurtosis_profile(const OfdmConfig& cfg, const TapProfile& profile,
                                                 const DopplerConfig& dop, const KurtosisAxis& axis,
                                                 const std::vector<int>& orders,
                                                 std::size_t n_samples, int n_realizations,
                                                 std::uint64_t seed, int threads) {
    if (axis.grid.empty() || orders.empty() || n_realizations < 1) {
        throw Error("kurtosis profile needs a grid, orders and realizations");
    }
    cfg.validate();
    const std::uint64_t name_hash = fnv1a64(profile.name);
    const std::size_t n_axis = axis.grid.size();
    const std::size_t n_ord = orders.size();

    std::vector<double> kurt(static_cast<std::size_t>(n_realizations) * n_axis * n_ord);
    const auto slot = [&](std::size_t r, std::size_t g, std::size_t o) {
        return (r * n_axis + g) * n_ord + o;
    };

    parallel_for(static_cast<std::size_t>(n_realizations), threads, [&](std::size_t r) {
        DopplerConfig dop_r = dop;
        dop_r.seed = Rng::derive(seed, {stream::channel, name_hash, r}).next_u64();

        if (axis.kind == KurtosisAxis::Kind::subcarrier) {
            const ChannelRealization chan = realize(profile, dop_r);
            for (std::size_t g = 0; g < n_axis; ++g) {
                const int l = static_cast<int>(axis.grid[g]);
                const CoefficientSet cs = coefficient_set(cfg, chan, 0, l);
                for (std::size_t o = 0; o < n_ord; ++o) {
                    OfdmConfig cfg_o = cfg;
                    cfg_o.constellation_order = orders[o];
                    const std::uint64_t sample_seed =
                        Rng::derive(seed, {stream::symbols, name_hash, r,
                                           static_cast<std::uint64_t>(l),
                                           static_cast<std::uint64_t>(orders[o])})
                            .next_u64();
                    kurt[slot(r, g, o)] =
                        mardia_kurtosis(sample_ici(cfg_o, cs, n_samples, sample_seed));
                }
            }
            return;
        }

        // Normalized-Doppler axis: same base seed per realization across
        // the grid (common random numbers), scaled max Doppler.
        for (std::size_t g = 0; g < n_axis; ++g) {
            DopplerConfig dop_g = dop_r;
            dop_g.max_doppler_hz = axis.grid[g] * cfg.subcarrier_spacing_hz;
            const ChannelRealization chan = realize(profile, dop_g);
            const CoefficientSet cs = coefficient_set(cfg, chan, 0, axis.fixed_subcarrier);
            for (std::size_t o = 0; o < n_ord; ++o) {
                OfdmConfig cfg_o = cfg;
                cfg_o.constellation_order = orders[o];
                const std::uint64_t sample_seed =
                    Rng::derive(seed, {stream::symbols, name_hash, r, g,
                                       static_cast<std::uint64_t>(orders[o])})
                        .next_u64();
                kurt[slot(r, g, o)] =
                    mardia_kurtosis(sample_ici(cfg_o, cs, n_samples, sample_seed));
            }
        }
    });

    std::vector<KurtosisProfileRow> rows;
    rows.reserve(n_axis * n_ord);
    for (std::size_t g = 0; g < n_axis; ++g) {
        for (std::size_t o = 0; o < n_ord; ++o) {
            std::vector<double> values;
            values.reserve(static_cast<std::size_t>(n_realizations));
            for (int r = 0; r < n_realizations; ++r) {
                values.push_back(kurt[slot(static_cast<std::size_t>(r), g, o)]);
            }
            KurtosisProfileRow row;
            row.axis_value = axis.grid[g];
            row.order = orders[o];
            row.mean_kurtosis = 0.0;
            for (double v : values) row.mean_kurtosis += v;
            row.mean_kurtosis /= static_cast<double>(values.size());
            row.p05_kurtosis = percentile(values, 0.05);
            row.p95_kurtosis = percentile(std::move(values), 0.95);
            rows.push_back(row);
        }
    }
    return rows;
}

} // namespace ofdmici
