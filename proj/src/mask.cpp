#include "shadowfreq/mask.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace shadowfreq {

double percentile(std::vector<double> values, double p) {
    if (values.empty()) {
        throw ValidationError("percentile of an empty set");
    }
    std::sort(values.begin(), values.end());
    const double rank = p / 100.0 * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(rank));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = rank - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

SoftMask SoftMask::from_m1(Image m1_values) {
    if (m1_values.channels() != 1) {
        throw ValidationError("soft mask m1 must be single-channel");
    }
    for (double v : m1_values.data()) {
        if (!(v >= -1.0 && v <= 1.0)) {
            throw ValidationError("soft mask values must lie in [-1,1]");
        }
    }
    SoftMask mask;
    mask.m = Image(m1_values.height(), m1_values.width(), 3, ColorSpace::LINEAR);
    for (int r = 0; r < m1_values.height(); ++r) {
        for (int c = 0; c < m1_values.width(); ++c) {
            for (int ch = 0; ch < 3; ++ch) {
                mask.m.at(r, c, ch) = m1_values.at(r, c, 0);
            }
        }
    }
    mask.m1 = std::move(m1_values);
    return mask;
}

SoftMask compute_soft_mask(const Image& shadow, const Image& free) {
    if (!shadow.same_shape(free)) {
        throw ValidationError("compute_soft_mask requires images of equal shape");
    }
    if (shadow.channels() != 3 || shadow.colorspace() != ColorSpace::SRGB ||
        free.colorspace() != ColorSpace::SRGB) {
        throw ValidationError("compute_soft_mask requires 3-channel SRGB images");
    }

    const int h = shadow.height();
    const int w = shadow.width();
    std::vector<double> diff(static_cast<std::size_t>(h) * w);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            double d = 0.0;
            for (int ch = 0; ch < 3; ++ch) {
                d += free.at(r, c, ch) - shadow.at(r, c, ch);
            }
            diff[static_cast<std::size_t>(r) * w + c] = d / 3.0;
        }
    }

    const double cut = percentile(diff, 5.0);
    for (double& d : diff) {
        if (d < cut) d = 0.0;
    }

    const auto [lo_it, hi_it] = std::minmax_element(diff.begin(), diff.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    Image m1(h, w, 1, ColorSpace::LINEAR);
    if (hi - lo <= 0.0) {
        std::fill(m1.data().begin(), m1.data().end(), -1.0);
    } else {
        for (std::size_t i = 0; i < diff.size(); ++i) {
            m1.data()[i] = std::clamp((diff[i] - lo) / (hi - lo) * 2.0 - 1.0, -1.0, 1.0);
        }
    }

    SoftMask mask = SoftMask::from_m1(std::move(m1));
    mask.threshold_value = cut;
    return mask;
}

namespace {

RegionStats::Channels stats_over(const Image& img, const std::vector<bool>& sel,
                                 std::int64_t count) {
    RegionStats::Channels out;
    out.mean.assign(img.channels(), 0.0);
    out.stddev.assign(img.channels(), 0.0);
    for (int ch = 0; ch < img.channels(); ++ch) {
        double sum = 0.0;
        for (int r = 0; r < img.height(); ++r) {
            for (int c = 0; c < img.width(); ++c) {
                if (sel[static_cast<std::size_t>(r) * img.width() + c]) sum += img.at(r, c, ch);
            }
        }
        const double mean = sum / static_cast<double>(count);
        double var = 0.0;
        for (int r = 0; r < img.height(); ++r) {
            for (int c = 0; c < img.width(); ++c) {
                if (sel[static_cast<std::size_t>(r) * img.width() + c]) {
                    const double d = img.at(r, c, ch) - mean;
                    var += d * d;
                }
            }
        }
        out.mean[ch] = mean;
        out.stddev[ch] = std::sqrt(var / static_cast<double>(count));
    }
    return out;
}

}  // namespace

RegionStats region_stats(const Image& img, const SoftMask& mask, double cut) {
    if (img.height() != mask.m1.height() || img.width() != mask.m1.width()) {
        throw ValidationError("region_stats requires matching image and mask shapes");
    }

    const int h = img.height();
    const int w = img.width();
    std::vector<bool> masked(static_cast<std::size_t>(h) * w);
    RegionStats stats;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const bool in = mask.m1.at(r, c, 0) > cut;
            masked[static_cast<std::size_t>(r) * w + c] = in;
            (in ? stats.count_masked : stats.count_unmasked) += 1;
        }
    }

    if (stats.count_masked > 0) {
        stats.masked = stats_over(img, masked, stats.count_masked);
    }
    if (stats.count_unmasked > 0) {
        std::vector<bool> unmasked(masked.size());
        for (std::size_t i = 0; i < masked.size(); ++i) unmasked[i] = !masked[i];
        stats.unmasked = stats_over(img, unmasked, stats.count_unmasked);
    }
    return stats;
}

std::pair<Image, RegionStats> adjust_region(const Image& img, const SoftMask& mask,
                                            const RegionStats& target) {
    if (!target.unmasked.has_value()) {
        throw ValidationError("adjust_region target lacks unmasked statistics");
    }
    if (static_cast<int>(target.unmasked->mean.size()) != img.channels()) {
        throw ValidationError("adjust_region target channel count mismatch");
    }

    const RegionStats current = region_stats(img, mask);
    // The adjusted map is a statistical intermediate; it may leave [0,1], so
    // it is tagged LINEAR to avoid the SRGB clamp.
    Image out = img.with_colorspace(ColorSpace::LINEAR);
    if (!current.masked.has_value()) {
        return {std::move(out), region_stats(out, mask)};
    }

    for (int ch = 0; ch < img.channels(); ++ch) {
        const double mu_src = current.masked->mean[ch];
        const double sd_src = current.masked->stddev[ch];
        const double mu_dst = target.unmasked->mean[ch];
        const double sd_dst = target.unmasked->stddev[ch];
        const double gain = sd_src > 0.0 ? sd_dst / sd_src : 1.0;
        for (int r = 0; r < img.height(); ++r) {
            for (int c = 0; c < img.width(); ++c) {
                if (mask.m1.at(r, c, 0) > 0.0) {
                    out.at(r, c, ch) = (img.at(r, c, ch) - mu_src) * gain + mu_dst;
                }
            }
        }
    }
    return {out, region_stats(out, mask)};
}

}  // namespace shadowfreq
