#pragma once

#include <cstdint>
#include <vector>

#include "ofdmici/ofdm.hpp"

namespace ofdmici {

/// Square M-QAM constellation with per-axis binary-reflected Gray
/// labels, I bits first, then Q bits, MSB first within each axis.
///
/// Point index is i_level * L + q_level with L = sqrt(M); ties in hard
/// demapping resolve toward the smaller index.
struct Constellation {
    int order = 0;
    std::vector<cdouble> points;            ///< index-aligned with bit_labels
    std::vector<std::uint32_t> bit_labels;  ///< Gray label of each point
    double symbol_variance = 0.0;

    int bits_per_symbol() const;
    int levels_per_axis() const;

    /// Point carrying the given label (fast path used by the simulator).
    cdouble point_for_label(std::uint32_t label) const { return by_label_[label]; }

    /// Expands a label into a bit vector, MSB first.
    std::vector<std::uint8_t> label_bits(std::uint32_t label) const;

private:
    friend Constellation build_constellation(int, double);
    std::vector<cdouble> by_label_;
    double level_step_ = 0.0; ///< half distance between adjacent levels

    friend std::uint32_t demap_hard_label(const Constellation&, cdouble);
};

/// Builds the constellation for a square order M (4, 16, 64, ...) scaled
/// so the average point energy equals symbol_variance. Throws Error for
/// invalid orders.
Constellation build_constellation(int order, double symbol_variance);

/// Maps a bit vector of length log2(M) to its constellation point.
cdouble map_bits(const Constellation& c, const std::vector<std::uint8_t>& bits);

/// Integer-label variant of map_bits.
cdouble map_label(const Constellation& c, std::uint32_t label);

/// Hard decision: label of the minimum-distance point, via independent
/// per-axis slicing (equivalent for square QAM).
std::vector<std::uint8_t> demap_hard(const Constellation& c, cdouble y);

/// Integer-label variant of demap_hard.
std::uint32_t demap_hard_label(const Constellation& c, cdouble y);

} // namespace ofdmici
