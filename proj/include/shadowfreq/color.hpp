#pragma once

#include "shadowfreq/image.hpp"

namespace shadowfreq {

/// sRGB -> CIE L*a*b* under the D65 white point (exact sRGB transfer
/// function, linear -> XYZ -> LAB). Input must be 3-channel SRGB.
Image rgb_to_lab(const Image& img);

/// Inverse of rgb_to_lab, clamped to [0,1]. Input must be LAB.
Image lab_to_rgb(const Image& img);

}  // namespace shadowfreq
