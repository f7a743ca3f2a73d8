#pragma once

#include <complex>
#include <vector>

#include "shadowfreq/image.hpp"

namespace shadowfreq {

/// Complex frequency grid of a 2D DFT. values[u*cols + v] = F(u,v), with
/// (0,0) the DC bin (no fftshift anywhere).
struct Spectrum {
    int rows = 0;
    int cols = 0;
    std::vector<std::complex<double>> values;

    std::complex<double> at(int u, int v) const {
        return values[static_cast<std::size_t>(u) * cols + v];
    }
};

/// Non-negative per-bin weights w(u,v) = |F_r - F_f|^alpha.
struct WeightMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> values;

    double at(int u, int v) const {
        return values[static_cast<std::size_t>(u) * cols + v];
    }
};

/// Unnormalized forward DFT of a single-channel image:
///   F(u,v) = sum_x sum_y f(x,y) * exp(-2*pi*i*(u*x/M + v*y/N))
/// Power-of-two extents go through a radix-2 recursion; other extents use
/// the direct summation. Both agree with the definition to 1e-9 relative.
Spectrum dft2(const Image& channel);

/// 1/(MN)-normalized inverse; returns the real part as a LINEAR image.
Image idft2(const Spectrum& spec);

/// Elementwise |sr - sf|^alpha with the 0^0 = 1 convention, so alpha = 0
/// degrades to unit weights.
WeightMatrix spectral_weight(const Spectrum& sr, const Spectrum& sf, double alpha);

}  // namespace shadowfreq
