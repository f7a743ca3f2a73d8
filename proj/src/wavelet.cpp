#include "shadowfreq/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace shadowfreq {

namespace {

void check_even(const Image& img, const char* op) {
    if (img.height() < 2 || img.width() < 2 || img.height() % 2 != 0 ||
        img.width() % 2 != 0) {
        throw ValidationError(std::string(op) +
                              " requires even dimensions >= 2, got " +
                              std::to_string(img.height()) + "x" +
                              std::to_string(img.width()));
    }
}

// PSNR with peak set to the dynamic range of the reference values.
// Identical inputs map to +infinity; the result is floored at 0.
double range_psnr(const std::vector<double>& ref, const std::vector<double>& other) {
    double mse = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        const double d = ref[i] - other[i];
        mse += d * d;
    }
    mse /= static_cast<double>(ref.size());
    if (mse == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    const auto [lo, hi] = std::minmax_element(ref.begin(), ref.end());
    const double peak = *hi - *lo;
    if (peak <= 0.0) {
        return 0.0;
    }
    return std::max(0.0, 10.0 * std::log10(peak * peak / mse));
}

}  // namespace

void haar_dwt2_plane(std::span<const double> plane, int h, int w,
                     std::span<double> a, std::span<double> hh,
                     std::span<double> v, std::span<double> d) {
    const int h2 = h / 2;
    const int w2 = w / 2;
    for (int r = 0; r < h2; ++r) {
        for (int c = 0; c < w2; ++c) {
            const double p00 = plane[static_cast<std::size_t>(2 * r) * w + 2 * c];
            const double p01 = plane[static_cast<std::size_t>(2 * r) * w + 2 * c + 1];
            const double p10 = plane[static_cast<std::size_t>(2 * r + 1) * w + 2 * c];
            const double p11 = plane[static_cast<std::size_t>(2 * r + 1) * w + 2 * c + 1];
            const std::size_t o = static_cast<std::size_t>(r) * w2 + c;
            a[o] = (p00 + p01 + p10 + p11) / 2.0;
            hh[o] = (p00 + p01 - p10 - p11) / 2.0;
            v[o] = (p00 - p01 + p10 - p11) / 2.0;
            d[o] = (p00 - p01 - p10 + p11) / 2.0;
        }
    }
}

Subbands haar_dwt2(const Image& img) {
    check_even(img, "haar_dwt2");
    const int h2 = img.height() / 2;
    const int w2 = img.width() / 2;
    const int ch = img.channels();

    Subbands sb{Image(h2, w2, ch, ColorSpace::LINEAR), Image(h2, w2, ch, ColorSpace::LINEAR),
                Image(h2, w2, ch, ColorSpace::LINEAR), Image(h2, w2, ch, ColorSpace::LINEAR)};

    std::vector<double> plane(static_cast<std::size_t>(img.height()) * img.width());
    std::vector<double> pa(static_cast<std::size_t>(h2) * w2), ph(pa.size()),
        pv(pa.size()), pd(pa.size());
    for (int k = 0; k < ch; ++k) {
        for (int r = 0; r < img.height(); ++r) {
            for (int c = 0; c < img.width(); ++c) {
                plane[static_cast<std::size_t>(r) * img.width() + c] = img.at(r, c, k);
            }
        }
        haar_dwt2_plane(plane, img.height(), img.width(), pa, ph, pv, pd);
        for (int r = 0; r < h2; ++r) {
            for (int c = 0; c < w2; ++c) {
                const std::size_t o = static_cast<std::size_t>(r) * w2 + c;
                sb.a.at(r, c, k) = pa[o];
                sb.h.at(r, c, k) = ph[o];
                sb.v.at(r, c, k) = pv[o];
                sb.d.at(r, c, k) = pd[o];
            }
        }
    }
    return sb;
}

Image haar_idwt2(const Subbands& sb) {
    if (!sb.a.same_shape(sb.h) || !sb.a.same_shape(sb.v) || !sb.a.same_shape(sb.d)) {
        throw ValidationError("haar_idwt2 requires four components of equal shape");
    }
    const int h2 = sb.a.height();
    const int w2 = sb.a.width();
    const int ch = sb.a.channels();

    Image out(2 * h2, 2 * w2, ch, ColorSpace::LINEAR);
    for (int k = 0; k < ch; ++k) {
        for (int r = 0; r < h2; ++r) {
            for (int c = 0; c < w2; ++c) {
                const double a = sb.a.at(r, c, k);
                const double h = sb.h.at(r, c, k);
                const double v = sb.v.at(r, c, k);
                const double d = sb.d.at(r, c, k);
                out.at(2 * r, 2 * c, k) = (a + h + v + d) / 2.0;
                out.at(2 * r, 2 * c + 1, k) = (a + h - v - d) / 2.0;
                out.at(2 * r + 1, 2 * c, k) = (a - h + v - d) / 2.0;
                out.at(2 * r + 1, 2 * c + 1, k) = (a - h - v + d) / 2.0;
            }
        }
    }
    return out;
}

SubbandSimilarity subband_similarity(const Image& x, const Image& y) {
    if (!x.same_shape(y)) {
        throw ValidationError("subband_similarity requires images of equal shape");
    }
    check_even(x, "subband_similarity");

    const Subbands sx = haar_dwt2(x);
    const Subbands sy = haar_dwt2(y);
    SubbandSimilarity sim;
    sim.psnr_a = range_psnr(sx.a.data(), sy.a.data());
    sim.psnr_h = range_psnr(sx.h.data(), sy.h.data());
    sim.psnr_v = range_psnr(sx.v.data(), sy.v.data());
    sim.psnr_d = range_psnr(sx.d.data(), sy.d.data());
    return sim;
}

}  // namespace shadowfreq
