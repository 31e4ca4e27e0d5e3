#include "ofdmici/modem.hpp"

#include <cmath>

namespace ofdmici {

namespace {

std::uint32_t gray_encode(std::uint32_t v) { return v ^ (v >> 1); }

int int_log2(int v) {
    int e = 0;
    while (v > 1) {
        v >>= 1;
        ++e;
    }
    return e;
}

// Slices one axis value to a level index in [0, levels). Ties between two
// levels fall to the smaller index.
int slice_axis(double value, double step, int levels) {
    const double u = std::ceil((value / step + levels) * 0.5) - 1.0;
    if (u < 0.0) return 0;
    if (u >= levels) return levels - 1;
    return static_cast<int>(u);
}

} // namespace

int Constellation::bits_per_symbol() const { return int_log2(order); }

int Constellation::levels_per_axis() const {
    return static_cast<int>(std::lround(std::sqrt(static_cast<double>(order))));
}

std::vector<std::uint8_t> Constellation::label_bits(std::uint32_t label) const {
    const int nbits = bits_per_symbol();
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(nbits));
    for (int b = 0; b < nbits; ++b) {
        bits[static_cast<std::size_t>(b)] =
            static_cast<std::uint8_t>((label >> (nbits - 1 - b)) & 1u);
    }
    return bits;
}

Constellation build_constellation(int order, double symbol_variance) {
    if (!is_square_qam_order(order)) {
        throw Error("constellation order " + std::to_string(order) +
                    " is not a square power of two");
    }
    if (!(symbol_variance > 0.0)) throw Error("symbol variance must be positive");

    Constellation c;
    c.order = order;
    c.symbol_variance = symbol_variance;
    const int levels = c.levels_per_axis();
    const int axis_bits = int_log2(levels);
    // Average energy of the unscaled lattice is 2 (M - 1) / 3.
    const double step = std::sqrt(3.0 * symbol_variance / (2.0 * (order - 1)));
    c.level_step_ = step;

    c.points.resize(static_cast<std::size_t>(order));
    c.bit_labels.resize(static_cast<std::size_t>(order));
    c.by_label_.resize(static_cast<std::size_t>(order));
    for (int i = 0; i < levels; ++i) {
        for (int q = 0; q < levels; ++q) {
            const std::size_t index = static_cast<std::size_t>(i * levels + q);
            const cdouble point{(2 * i - levels + 1) * step, (2 * q - levels + 1) * step};
            const std::uint32_t label =
                (gray_encode(static_cast<std::uint32_t>(i)) << axis_bits) |
                gray_encode(static_cast<std::uint32_t>(q));
            c.points[index] = point;
            c.bit_labels[index] = label;
            c.by_label_[label] = point;
        }
    }
    return c;
}

cdouble map_bits(const Constellation& c, const std::vector<std::uint8_t>& bits) {
    const int nbits = c.bits_per_symbol();
    if (bits.size() != static_cast<std::size_t>(nbits)) {
        throw Error("bit vector length " + std::to_string(bits.size()) + " does not match log2(" +
                    std::to_string(c.order) + ") = " + std::to_string(nbits));
    }
    std::uint32_t label = 0;
    for (std::uint8_t b : bits) label = (label << 1) | (b & 1u);
    return c.point_for_label(label);
}

cdouble map_label(const Constellation& c, std::uint32_t label) {
    if (label >= static_cast<std::uint32_t>(c.order)) {
        throw Error("label out of range for order " + std::to_string(c.order));
    }
    return c.point_for_label(label);
}

std::uint32_t demap_hard_label(const Constellation& c, cdouble y) {
    const int levels = c.levels_per_axis();
    const int i = slice_axis(y.real(), c.level_step_, levels);
    const int q = slice_axis(y.imag(), c.level_step_, levels);
    return c.bit_labels[static_cast<std::size_t>(i * levels + q)];
}

std::vector<std::uint8_t> demap_hard(const Constellation& c, cdouble y) {
    return c.label_bits(demap_hard_label(c, y));
}

} // namespace ofdmici
