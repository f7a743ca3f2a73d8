#include "shadowfreq/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace shadowfreq {

const char* to_string(ColorSpace cs) {
    switch (cs) {
        case ColorSpace::SRGB: return "srgb";
        case ColorSpace::LAB: return "lab";
        case ColorSpace::LINEAR: return "linear";
    }
    return "unknown";
}

namespace {

void check_shape(int height, int width, int channels) {
    if (height < 1 || width < 1) {
        throw ValidationError("image dimensions must be positive, got " +
                              std::to_string(height) + "x" + std::to_string(width));
    }
    if (channels != 1 && channels != 3) {
        throw ValidationError("channel count must be 1 or 3, got " +
                              std::to_string(channels));
    }
}

}  // namespace

Image::Image(int height, int width, int channels, ColorSpace colorspace)
    : height_(height), width_(width), channels_(channels), colorspace_(colorspace) {
    check_shape(height, width, channels);
    data_.assign(static_cast<std::size_t>(height) * width * channels, 0.0);
}

Image::Image(int height, int width, int channels, ColorSpace colorspace,
             std::vector<double> data)
    : height_(height),
      width_(width),
      channels_(channels),
      colorspace_(colorspace),
      data_(std::move(data)) {
    check_shape(height, width, channels);
    if (data_.size() != static_cast<std::size_t>(height) * width * channels) {
        throw ValidationError("image data length " + std::to_string(data_.size()) +
                              " does not match " + std::to_string(height) + "x" +
                              std::to_string(width) + "x" + std::to_string(channels));
    }
    if (colorspace_ == ColorSpace::SRGB) {
        clamp_srgb();
    }
}

Image Image::constant(int height, int width, int channels, ColorSpace cs,
                      double value) {
    Image img(height, width, channels, cs);
    std::fill(img.data_.begin(), img.data_.end(),
              cs == ColorSpace::SRGB ? std::clamp(value, 0.0, 1.0) : value);
    return img;
}

Image Image::with_colorspace(ColorSpace cs) const {
    Image out = *this;
    out.colorspace_ = cs;
    if (cs == ColorSpace::SRGB) {
        out.clamp_srgb();
    }
    return out;
}

void Image::clamp_srgb() {
    for (double& v : data_) {
        v = std::clamp(v, 0.0, 1.0);
    }
}

double Image::channel_mean(int channel) const {
    double sum = 0.0;
    for (int r = 0; r < height_; ++r) {
        for (int c = 0; c < width_; ++c) {
            sum += at(r, c, channel);
        }
    }
    return sum / static_cast<double>(pixel_count());
}

ChannelSet::ChannelSet(std::vector<int> selected) : selected_(std::move(selected)) {
    if (selected_.empty()) {
        throw ValidationError("channel set must not be empty");
    }
    for (int idx : selected_) {
        if (idx < 0) {
            throw ValidationError("channel index must be non-negative");
        }
    }
}

void ChannelSet::validate_against(int channels) const {
    for (int idx : selected_) {
        if (idx >= channels) {
            throw ValidationError("channel index " + std::to_string(idx) +
                                  " out of range for " + std::to_string(channels) +
                                  "-channel image");
        }
    }
}

Image mean_filter_normalize(const Image& img, const ChannelSet& chans) {
    chans.validate_against(img.channels());
    if (img.height() < 3 || img.width() < 3) {
        throw ValidationError("mean filter requires at least a 3x3 image, got " +
                              std::to_string(img.height()) + "x" +
                              std::to_string(img.width()));
    }

    Image out = img;
    const int h = img.height();
    const int w = img.width();
    for (int ch : chans.selected()) {
        const double global_mean = img.channel_mean(ch);
        for (int r = 0; r < h; ++r) {
            for (int c = 0; c < w; ++c) {
                double patch_sum = 0.0;
                for (int dr = -1; dr <= 1; ++dr) {
                    for (int dc = -1; dc <= 1; ++dc) {
                        const int rr = std::clamp(r + dr, 0, h - 1);
                        const int cc = std::clamp(c + dc, 0, w - 1);
                        patch_sum += img.at(rr, cc, ch);
                    }
                }
                out.at(r, c, ch) = img.at(r, c, ch) - patch_sum / 9.0 + global_mean;
            }
        }
    }
    return out;
}

}  // namespace shadowfreq
