#include "shadowfreq/color.hpp"

#include <algorithm>
#include <cmath>

namespace shadowfreq {

namespace {

// sRGB (Rec. 709 primaries) to XYZ, D65.
constexpr double RGB_TO_XYZ[3][3] = {
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041}};

constexpr double XYZ_TO_RGB[3][3] = {
    {3.2404542, -1.5371385, -0.4985314},
    {-0.9692660, 1.8760108, 0.0415560},
    {0.0556434, -0.2040259, 1.0572252}};

// White point taken as the matrix row sums so that (1,1,1) maps to exactly
// L=100, a=b=0 and the round trip closes.
constexpr double WHITE_X = RGB_TO_XYZ[0][0] + RGB_TO_XYZ[0][1] + RGB_TO_XYZ[0][2];
constexpr double WHITE_Y = RGB_TO_XYZ[1][0] + RGB_TO_XYZ[1][1] + RGB_TO_XYZ[1][2];
constexpr double WHITE_Z = RGB_TO_XYZ[2][0] + RGB_TO_XYZ[2][1] + RGB_TO_XYZ[2][2];

constexpr double LAB_EPSILON = 0.008856451679035631;  // (6/29)^3
constexpr double LAB_KAPPA = 903.2962962962963;       // (29/3)^3

double srgb_to_linear(double v) {
    return v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
}

double linear_to_srgb(double v) {
    return v <= 0.0031308 ? v * 12.92 : 1.055 * std::pow(v, 1.0 / 2.4) - 0.055;
}

double lab_f(double t) {
    return t > LAB_EPSILON ? std::cbrt(t) : (LAB_KAPPA * t + 16.0) / 116.0;
}

double lab_f_inv(double u) {
    const double u3 = u * u * u;
    return u3 > LAB_EPSILON ? u3 : (116.0 * u - 16.0) / LAB_KAPPA;
}

}  // namespace

Image rgb_to_lab(const Image& img) {
    if (img.colorspace() != ColorSpace::SRGB) {
        throw ValidationError("rgb_to_lab requires an SRGB image");
    }
    if (img.channels() != 3) {
        throw ValidationError("rgb_to_lab requires 3 channels");
    }

    Image out(img.height(), img.width(), 3, ColorSpace::LAB);
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            const double rl = srgb_to_linear(img.at(r, c, 0));
            const double gl = srgb_to_linear(img.at(r, c, 1));
            const double bl = srgb_to_linear(img.at(r, c, 2));

            const double x = RGB_TO_XYZ[0][0] * rl + RGB_TO_XYZ[0][1] * gl + RGB_TO_XYZ[0][2] * bl;
            const double y = RGB_TO_XYZ[1][0] * rl + RGB_TO_XYZ[1][1] * gl + RGB_TO_XYZ[1][2] * bl;
            const double z = RGB_TO_XYZ[2][0] * rl + RGB_TO_XYZ[2][1] * gl + RGB_TO_XYZ[2][2] * bl;

            const double fx = lab_f(x / WHITE_X);
            const double fy = lab_f(y / WHITE_Y);
            const double fz = lab_f(z / WHITE_Z);

            out.at(r, c, 0) = 116.0 * fy - 16.0;
            out.at(r, c, 1) = 500.0 * (fx - fy);
            out.at(r, c, 2) = 200.0 * (fy - fz);
        }
    }
    return out;
}

Image lab_to_rgb(const Image& img) {
    if (img.colorspace() != ColorSpace::LAB) {
        throw ValidationError("lab_to_rgb requires a LAB image");
    }
    if (img.channels() != 3) {
        throw ValidationError("lab_to_rgb requires 3 channels");
    }

    Image out(img.height(), img.width(), 3, ColorSpace::SRGB);
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            const double l = img.at(r, c, 0);
            const double a = img.at(r, c, 1);
            const double b = img.at(r, c, 2);

            const double fy = (l + 16.0) / 116.0;
            const double fx = fy + a / 500.0;
            const double fz = fy - b / 200.0;

            const double x = WHITE_X * lab_f_inv(fx);
            const double y = WHITE_Y * lab_f_inv(fy);
            const double z = WHITE_Z * lab_f_inv(fz);

            const double rl = XYZ_TO_RGB[0][0] * x + XYZ_TO_RGB[0][1] * y + XYZ_TO_RGB[0][2] * z;
            const double gl = XYZ_TO_RGB[1][0] * x + XYZ_TO_RGB[1][1] * y + XYZ_TO_RGB[1][2] * z;
            const double bl = XYZ_TO_RGB[2][0] * x + XYZ_TO_RGB[2][1] * y + XYZ_TO_RGB[2][2] * z;

            out.at(r, c, 0) = std::clamp(linear_to_srgb(rl), 0.0, 1.0);
            out.at(r, c, 1) = std::clamp(linear_to_srgb(gl), 0.0, 1.0);
            out.at(r, c, 2) = std::clamp(linear_to_srgb(bl), 0.0, 1.0);
        }
    }
    return out;
}

}  // namespace shadowfreq
