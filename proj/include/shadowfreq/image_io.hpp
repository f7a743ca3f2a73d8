#pragma once

#include <string>

#include "shadowfreq/image.hpp"

namespace shadowfreq {

/// Reads an 8-bit PNG or binary PPM (P6) / PGM (P5) file into an SRGB image,
/// scaling sample values by 1/255. Palette PNGs are expanded and alpha is
/// dropped; 16-bit files are rejected.
Image load_image(const std::string& path);

/// Writes an SRGB image as an 8-bit PNG, encoding round(clamp(v,0,1)*255).
void save_image(const Image& img, const std::string& path);

}  // namespace shadowfreq
