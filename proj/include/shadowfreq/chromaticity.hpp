#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "shadowfreq/image.hpp"
#include "shadowfreq/mask.hpp"

namespace shadowfreq {

/// Log-chromaticity samples of an image. Each included pixel carries its
/// zero-sum log-ratio 3-vector and its 2D coordinates in a basis of the
/// plane orthogonal to (1,1,1). Pixels with any channel <= 1/510 are
/// excluded; pixel_index maps each point back to row*width+col.
struct LogChromaPoints {
    std::vector<std::array<double, 2>> coords;
    std::vector<std::array<double, 3>> vectors;
    std::vector<std::int64_t> pixel_index;
    std::int64_t total_pixels = 0;

    std::int64_t count() const { return static_cast<std::int64_t>(coords.size()); }
    std::int64_t excluded() const { return total_pixels - count(); }
};

/// Mean and top-2 principal axes of 3D samples, descending eigenvalue
/// order. Axes are orthonormal with the first nonzero component positive.
struct PcaBasis {
    std::array<double, 3> mean{};
    std::array<std::array<double, 3>, 2> axes{};
    std::array<double, 2> eigenvalues{};
};

struct EntropyScan {
    double theta_star = 0.0;           // radians, in [0, pi)
    std::vector<double> curve;         // one entropy per 1-degree step
};

/// Per-pixel invariant chromaticity rendering plus the projection state
/// that produced it. `basis` and `theta_star` are retained so that other
/// images can be projected into the same invariant frame.
struct ChromaticityMap {
    Image image;                       // 3-channel SRGB sigma map
    double theta_star = 0.0;
    std::vector<double> entropy_curve;
    PcaBasis basis;
    std::int64_t excluded_pixels = 0;
};

struct ChromaticityOptions {
    bool brightness_normalize = true;  // 3x3 mean-filter pass on L/B first
};

/// Geometric-mean log-chromaticity of an SRGB image.
LogChromaPoints log_chromaticity(const Image& img);

/// Mean-centered covariance eigendecomposition keeping the top two axes.
/// Requires at least two samples that are not all identical.
PcaBasis pca_project(std::span<const std::array<double, 3>> samples);

/// 2D coordinates of samples in the given basis (mean-centered).
std::vector<std::array<double, 2>> project_points(
    const PcaBasis& basis, std::span<const std::array<double, 3>> samples);

/// Shannon entropy (nats) of the 1D distribution obtained by projecting the
/// coords onto (cos theta, sin theta): middle-90% outlier rejection, then a
/// Scott-rule histogram (width 3.5 * sigma * n^(-1/3)).
double projection_entropy(const LogChromaPoints& points, double theta);

/// Sweeps theta over {0,1,...,179} degrees and returns the entropy-minimal
/// angle (ties broken toward smaller theta) plus the full curve.
EntropyScan minimize_entropy(const LogChromaPoints& points);

/// The brightness-normalized perception image: LAB conversion, 3x3
/// mean-filter normalization of the L and B channels, back to SRGB.
Image brightness_normalized(const Image& srgb);

/// Full pipeline: brightness normalization (optional), log-chromaticity,
/// PCA to 2D, entropy minimization, and rendering of the invariant
/// chromaticity image.
ChromaticityMap shadowfree_chromaticity(const Image& srgb,
                                        const ChromaticityOptions& opts = {});

/// Renders the invariant chromaticity of an image inside an existing
/// projection frame (basis + theta) instead of estimating its own.
ChromaticityMap render_chromaticity(const Image& srgb, const PcaBasis& basis,
                                    double theta,
                                    const ChromaticityOptions& opts = {});

struct CompensationResult {
    ChromaticityMap map;               // sigma with per-channel gain/bias applied
    std::array<double, 3> gain{};
    std::array<double, 3> bias{};
};

/// Per-channel affine moment matching of the sigma map against the
/// reference image over the non-shadow region. The region is the mask
/// complement (m1 <= 0) when a mask is given, otherwise the brightest 50%
/// of reference pixels by LAB L.
CompensationResult illumination_compensate(const ChromaticityMap& map,
                                           const Image& reference,
                                           const SoftMask* mask = nullptr);

}  // namespace shadowfreq
