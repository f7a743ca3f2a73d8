#pragma once

#include <cstdint>
#include <vector>

#include "shadowfreq/errors.hpp"

namespace shadowfreq {

/// Value semantics of the pixel data.
///  - SRGB:   display-referred values in [0,1], clamped on construction.
///  - LAB:    CIE L*a*b*, L in [0,100], a/b in native signed ranges.
///  - LINEAR: unconstrained linear-scale values (wavelet coefficients,
///            masks, intermediate maps). Never clamped.
enum class ColorSpace { SRGB, LAB, LINEAR };

const char* to_string(ColorSpace cs);

/// Planar floating-point raster, row-major with interleaved channels.
/// data.size() == height * width * channels always holds.
class Image {
public:
    Image() = default;
    Image(int height, int width, int channels, ColorSpace colorspace);
    Image(int height, int width, int channels, ColorSpace colorspace,
          std::vector<double> data);

    static Image zeros(int height, int width, int channels, ColorSpace cs) {
        return Image(height, width, channels, cs);
    }
    static Image constant(int height, int width, int channels, ColorSpace cs,
                          double value);

    int height() const { return height_; }
    int width() const { return width_; }
    int channels() const { return channels_; }
    ColorSpace colorspace() const { return colorspace_; }
    std::int64_t pixel_count() const {
        return static_cast<std::int64_t>(height_) * width_;
    }

    double at(int row, int col, int channel = 0) const {
        return data_[index(row, col, channel)];
    }
    double& at(int row, int col, int channel = 0) {
        return data_[index(row, col, channel)];
    }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool same_shape(const Image& other) const {
        return height_ == other.height_ && width_ == other.width_ &&
               channels_ == other.channels_;
    }

    /// Retag without touching values. SRGB target re-applies the [0,1] clamp.
    Image with_colorspace(ColorSpace cs) const;

    /// Mean of one channel over the full raster.
    double channel_mean(int channel) const;

private:
    std::int64_t index(int row, int col, int channel) const {
        return (static_cast<std::int64_t>(row) * width_ + col) * channels_ + channel;
    }
    void clamp_srgb();

    int height_ = 0;
    int width_ = 0;
    int channels_ = 0;
    ColorSpace colorspace_ = ColorSpace::LINEAR;
    std::vector<double> data_;
};

/// Non-empty subset of channel indices of a target image.
class ChannelSet {
public:
    explicit ChannelSet(std::vector<int> selected);

    const std::vector<int>& selected() const { return selected_; }

    /// Throws ValidationError if any index is out of range for `channels`.
    void validate_against(int channels) const;

private:
    std::vector<int> selected_;
};

/// Per-pixel 3x3 mean-filter brightness normalization on the selected
/// channels: v <- v - patch_mean + channel_mean, replicate-padded at the
/// borders. Non-selected channels pass through unchanged.
Image mean_filter_normalize(const Image& img, const ChannelSet& chans);

}  // namespace shadowfreq
