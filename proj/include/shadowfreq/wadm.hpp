#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shadowfreq/errors.hpp"

namespace shadowfreq {

class Image;

/// Dense B x C x H x W tensor, NCHW layout.
struct FeatureMap {
    int batch = 0;
    int channels = 0;
    int height = 0;
    int width = 0;
    std::vector<double> data;

    FeatureMap() = default;
    FeatureMap(int b, int c, int h, int w);

    double at(int b, int c, int i, int j) const { return data[index(b, c, i, j)]; }
    double& at(int b, int c, int i, int j) { return data[index(b, c, i, j)]; }

    std::size_t index(int b, int c, int i, int j) const {
        return ((static_cast<std::size_t>(b) * channels + c) * height + i) * width + j;
    }

    static FeatureMap from_image(const Image& img);
};

/// Convolution weights, [out][in][kh][kw], plus per-output bias. Odd kernel
/// extents only (same-padding convention).
struct ConvKernel {
    int out_channels = 0;
    int in_channels = 0;
    int kh = 0;
    int kw = 0;
    std::vector<double> weights;
    std::vector<double> bias;

    ConvKernel() = default;
    ConvKernel(int out, int in, int kh_, int kw_);

    double w(int o, int c, int m, int n) const {
        return weights[((static_cast<std::size_t>(o) * in_channels + c) * kh + m) * kw + n];
    }
    double& w(int o, int c, int m, int n) {
        return weights[((static_cast<std::size_t>(o) * in_channels + c) * kh + m) * kw + n];
    }
};

/// Per-location fractional displacements for each kernel tap, in pixel
/// units. Channel layout is fixed: channel 2t is dy and 2t+1 is dx for tap
/// t = m*kw + n (row-major taps).
struct OffsetField {
    int batch = 0;
    int taps = 0;
    int height = 0;
    int width = 0;
    std::vector<double> data;  // B x (2*taps) x H x W

    double dy(int b, int t, int i, int j) const { return data[index(b, 2 * t, i, j)]; }
    double dx(int b, int t, int i, int j) const { return data[index(b, 2 * t + 1, i, j)]; }
    double& dy(int b, int t, int i, int j) { return data[index(b, 2 * t, i, j)]; }
    double& dx(int b, int t, int i, int j) { return data[index(b, 2 * t + 1, i, j)]; }

    std::size_t index(int b, int c, int i, int j) const {
        return ((static_cast<std::size_t>(b) * (2 * taps) + c) * height + i) * width + j;
    }
};

/// Channel compression to [max, mean]: output channel 0 is the per-pixel
/// maximum over input channels, channel 1 the per-pixel mean.
FeatureMap z_pool(const FeatureMap& x);

/// Same-padded (zero padding) centered cross-correlation, stride 1.
FeatureMap conv2d(const FeatureMap& x, const ConvKernel& k);

/// conv2d whose output channels are reinterpreted as an OffsetField.
/// k.out_channels must be even (2 channels per deform-kernel tap).
OffsetField offset_conv(const FeatureMap& z, const ConvKernel& k);

/// Convolution sampling each tap at (i + m - kh/2 + dy, j + n - kw/2 + dx)
/// with bilinear interpolation, zero outside the image.
FeatureMap deformable_conv(const FeatureMap& x, const OffsetField& offsets,
                           const ConvKernel& k);

/// z * sigmoid(d), with d broadcast over channels when single-channel.
FeatureMap attention_gate(const FeatureMap& z, const FeatureMap& d);

/// Parameters of one wavelet-attention downsampling block.
struct WadmParams {
    ConvKernel offset_kernel;  // 2 -> 2*taps, 3x3
    ConvKernel deform_kernel;  // 2 -> 2, 3x3
    ConvKernel projection;     // 4C -> C_out, 1x1

    /// Deterministic seeded uniform values in [-0.1, 0.1].
    static WadmParams seeded(int in_channels, int out_channels, std::uint64_t seed);

    static WadmParams load_json(const std::string& path, int in_channels,
                                int out_channels);
    void save_json(const std::string& path) const;
};

/// Intermediates of a forward pass, for invariant checks.
struct WadmTrace {
    FeatureMap wavelet;    // 4C x H/2 x W/2 stacked subbands
    FeatureMap pooled;     // 2-channel z-pool
    OffsetField offsets;
    FeatureMap deform_out; // 2-channel deformable attention map
    FeatureMap scale_src;  // single-channel mean of deform_out
    FeatureMap gated;      // wavelet features after sigmoid gating
    FeatureMap output;     // C_out x H/2 x W/2
};

/// Haar subband stacking (channels C -> 4C, spatial halving), z-pool,
/// offset convolution, deformable attention, sigmoid gating of the wavelet
/// features, and a 1x1 projection to out_channels.
FeatureMap wadm_forward(const FeatureMap& x, const WadmParams& params);
WadmTrace wadm_forward_trace(const FeatureMap& x, const WadmParams& params);

/// Seeded uniform helper shared by parameter synthesis and demos; the
/// mapping from the raw generator is explicit for reproducibility.
class SeededUniform {
public:
    explicit SeededUniform(std::uint64_t seed) : state_(seed ^ 0x9e3779b97f4a7c15ULL) {}

    /// Uniform in [lo, hi).
    double next(double lo, double hi);

private:
    std::uint64_t next_raw();
    std::uint64_t state_;
};

}  // namespace shadowfreq
