#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shadowfreq/image.hpp"

namespace shadowfreq {

/// Per-pixel shadow indicator (1 = shadow).
struct BinaryMask {
    int height = 0;
    int width = 0;
    std::vector<std::uint8_t> data;

    bool at(int r, int c) const { return data[static_cast<std::size_t>(r) * width + c] != 0; }
};

enum class RmseSpace { Rgb, Lab };

/// PSNR/RMSE over shadow (S), non-shadow (NS) and whole-image regions plus
/// whole-image SSIM. RMSE is reported on the 0-255 scale (RGB) or in native
/// LAB units; PSNR on the 0-255 scale, capped at 99 dB. Metrics over empty
/// regions are absent. SSIM is absent when the image is smaller than the
/// 11x11 window.
struct RegionMetrics {
    std::optional<double> psnr_s, psnr_ns;
    double psnr_all = 0.0;
    std::optional<double> rmse_s, rmse_ns;
    double rmse_all = 0.0;
    std::optional<double> ssim_all;
    std::int64_t count_s = 0;
    std::int64_t count_ns = 0;
};

/// Threshold segmentation: a pixel is shadow iff the channel-mean absolute
/// difference, on the 0-255 scale, strictly exceeds t.
BinaryMask mask_from_threshold(const Image& shadow, const Image& free, double t = 30.0);

/// Converts a loaded mask image to binary (channel mean >= 0.5).
BinaryMask binarize_mask_image(const Image& mask);

RegionMetrics evaluate_pair(const Image& result, const Image& truth,
                            const BinaryMask& mask, RmseSpace space = RmseSpace::Rgb);

struct ManifestEntry {
    std::string name;
    std::string shadow_path;
    std::string free_path;
    std::string mask_path;  // empty -> threshold mode for this entry
};

struct Manifest {
    std::string dataset;
    std::vector<ManifestEntry> entries;
};

struct PairOutcome {
    std::string name;
    std::optional<RegionMetrics> metrics;
    std::string mask_source;  // "provided" or "threshold(t)"
    std::string error;        // non-empty when the entry failed
};

/// Dataset means are per-image arithmetic means over the entries where the
/// metric is present.
struct DatasetReport {
    std::vector<PairOutcome> per_image;
    RegionMetrics aggregate;
    std::int64_t evaluated = 0;
    std::int64_t failed = 0;
};

/// Evaluates every manifest entry (sorted by name), using provided masks
/// where available and threshold segmentation otherwise. Per-entry failures
/// are recorded and evaluation continues.
DatasetReport evaluate_dataset(const Manifest& manifest, double threshold = 30.0,
                               RmseSpace space = RmseSpace::Rgb);

}  // namespace shadowfreq
