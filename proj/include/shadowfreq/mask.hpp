#pragma once

#include <optional>
#include <vector>

#include "shadowfreq/image.hpp"

namespace shadowfreq {

/// Continuous shadow indicator. m1 is a single-channel map in [-1,1];
/// m replicates it to 3 channels. threshold_value records the 5th-percentile
/// cut applied to the raw difference map.
struct SoftMask {
    Image m1;
    Image m;
    double threshold_value = 0.0;

    /// Builds a mask from raw m1 values (validated to lie in [-1,1]) and
    /// replicates them to 3 channels.
    static SoftMask from_m1(Image m1_values);
};

/// Per-channel mean/stddev of the masked (m1 > cut) and unmasked regions.
/// A region's statistics are absent when it contains no pixels.
struct RegionStats {
    struct Channels {
        std::vector<double> mean;
        std::vector<double> stddev;  // population
    };
    std::optional<Channels> masked;
    std::optional<Channels> unmasked;
    std::int64_t count_masked = 0;
    std::int64_t count_unmasked = 0;
};

/// Soft mask from a shadow / shadow-free pair: the channel-mean difference
/// d = mean(free - shadow) is cut at its 5th percentile (values strictly
/// below go to zero) and affinely normalized to [-1,1]. A constant
/// difference map yields m1 = -1 everywhere.
SoftMask compute_soft_mask(const Image& shadow, const Image& free);

RegionStats region_stats(const Image& img, const SoftMask& mask, double cut = 0.0);

/// Affinely remaps the masked pixels of `img` per channel so their
/// mean/stddev match the target's unmasked-region statistics. Falls back to
/// a bias-only shift when the masked region has zero spread. Returns the
/// adjusted image and its new masked-region statistics.
std::pair<Image, RegionStats> adjust_region(const Image& img, const SoftMask& mask,
                                            const RegionStats& target);

/// Linear-interpolation percentile (inclusive method) of unsorted values.
/// p in [0,100].
double percentile(std::vector<double> values, double p);

}  // namespace shadowfreq
