#include "shadowfreq/spectrum.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace shadowfreq {

namespace {

using cd = std::complex<double>;

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// In-place radix-2 Cooley-Tukey, decimation in time. sign = -1 forward.
void fft_pow2(std::vector<cd>& a, double sign) {
    const int n = static_cast<int>(a.size());
    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (int len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * std::numbers::pi / len;
        for (int i = 0; i < n; i += len) {
            for (int k = 0; k < len / 2; ++k) {
                const cd w = std::polar(1.0, ang * k);
                const cd u = a[i + k];
                const cd v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }
}

void dft_naive_1d(std::vector<cd>& a, double sign) {
    const int n = static_cast<int>(a.size());
    std::vector<cd> out(n);
    for (int k = 0; k < n; ++k) {
        cd acc(0.0, 0.0);
        for (int x = 0; x < n; ++x) {
            acc += a[x] * std::polar(1.0, sign * 2.0 * std::numbers::pi * k * x / n);
        }
        out[k] = acc;
    }
    a = std::move(out);
}

void transform_1d(std::vector<cd>& a, double sign) {
    if (a.size() <= 1) return;
    if (is_pow2(static_cast<int>(a.size()))) {
        fft_pow2(a, sign);
    } else {
        dft_naive_1d(a, sign);
    }
}

// Row-column decomposition of the 2D transform.
void transform_2d(std::vector<cd>& grid, int rows, int cols, double sign) {
    std::vector<cd> line;
    line.reserve(std::max(rows, cols));
    for (int r = 0; r < rows; ++r) {
        line.assign(grid.begin() + static_cast<std::size_t>(r) * cols,
                    grid.begin() + static_cast<std::size_t>(r + 1) * cols);
        transform_1d(line, sign);
        std::copy(line.begin(), line.end(), grid.begin() + static_cast<std::size_t>(r) * cols);
    }
    line.resize(rows);
    for (int c = 0; c < cols; ++c) {
        for (int r = 0; r < rows; ++r) line[r] = grid[static_cast<std::size_t>(r) * cols + c];
        transform_1d(line, sign);
        for (int r = 0; r < rows; ++r) grid[static_cast<std::size_t>(r) * cols + c] = line[r];
    }
}

}  // namespace

Spectrum dft2(const Image& channel) {
    if (channel.channels() != 1) {
        throw ValidationError("dft2 requires a single-channel image, got " +
                              std::to_string(channel.channels()) + " channels");
    }
    const int m = channel.height();
    const int n = channel.width();
    Spectrum spec{m, n, std::vector<cd>(static_cast<std::size_t>(m) * n)};
    for (int r = 0; r < m; ++r) {
        for (int c = 0; c < n; ++c) {
            spec.values[static_cast<std::size_t>(r) * n + c] = cd(channel.at(r, c, 0), 0.0);
        }
    }
    transform_2d(spec.values, m, n, -1.0);
    return spec;
}

Image idft2(const Spectrum& spec) {
    if (spec.rows < 1 || spec.cols < 1 ||
        spec.values.size() != static_cast<std::size_t>(spec.rows) * spec.cols) {
        throw ValidationError("idft2: spectrum shape does not match its values");
    }
    std::vector<cd> grid = spec.values;
    transform_2d(grid, spec.rows, spec.cols, 1.0);

    const double scale = 1.0 / (static_cast<double>(spec.rows) * spec.cols);
    Image out(spec.rows, spec.cols, 1, ColorSpace::LINEAR);
    for (int r = 0; r < spec.rows; ++r) {
        for (int c = 0; c < spec.cols; ++c) {
            out.at(r, c, 0) = grid[static_cast<std::size_t>(r) * spec.cols + c].real() * scale;
        }
    }
    return out;
}

WeightMatrix spectral_weight(const Spectrum& sr, const Spectrum& sf, double alpha) {
    if (sr.rows != sf.rows || sr.cols != sf.cols) {
        throw ValidationError("spectral_weight requires spectra of equal shape");
    }
    if (!(alpha >= 0.0)) {
        throw ValidationError("spectral_weight requires alpha >= 0");
    }
    WeightMatrix w{sr.rows, sr.cols, std::vector<double>(sr.values.size())};
    for (std::size_t i = 0; i < sr.values.size(); ++i) {
        if (alpha == 0.0) {
            w.values[i] = 1.0;
        } else {
            w.values[i] = std::pow(std::abs(sr.values[i] - sf.values[i]), alpha);
        }
    }
    return w;
}

}  // namespace shadowfreq
