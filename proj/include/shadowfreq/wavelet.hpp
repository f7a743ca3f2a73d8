#pragma once

#include <span>

#include "shadowfreq/image.hpp"

namespace shadowfreq {

/// The four half-resolution components of a single-level 2D Haar
/// decomposition. All share the same dimensions and channel count.
struct Subbands {
    Image a;  // approximate
    Image h;  // horizontal detail (top-minus-bottom row differences)
    Image v;  // vertical detail (left-minus-right column differences)
    Image d;  // diagonal detail
};

/// Per-subband PSNR between the decompositions of two images.
/// An entry is +infinity when the corresponding subbands are identical.
struct SubbandSimilarity {
    double psnr_a = 0.0;
    double psnr_h = 0.0;
    double psnr_v = 0.0;
    double psnr_d = 0.0;
};

/// Orthonormal single-level 2D Haar analysis. For each 2x2 block
/// [[p00,p01],[p10,p11]]:
///   A = (p00+p01+p10+p11)/2    H = (p00+p01-p10-p11)/2
///   V = (p00-p01+p10-p11)/2    D = (p00-p01-p10+p11)/2
/// Requires even height and width, both >= 2.
Subbands haar_dwt2(const Image& img);

/// Exact inverse of haar_dwt2.
Image haar_idwt2(const Subbands& sb);

/// Plane-level Haar analysis on contiguous row-major data; shared by the
/// image path and the feature-map path. Output spans hold (h/2)*(w/2) each.
void haar_dwt2_plane(std::span<const double> plane, int h, int w,
                     std::span<double> a, std::span<double> hh,
                     std::span<double> v, std::span<double> d);

SubbandSimilarity subband_similarity(const Image& x, const Image& y);

}  // namespace shadowfreq
