#include "shadowfreq/chromaticity.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "shadowfreq/color.hpp"

namespace shadowfreq {

namespace {

constexpr double CHROMA_EPSILON = 1.0 / 510.0;  // half a quantization step

// Fixed orthonormal basis of the plane orthogonal to (1,1,1).
constexpr double INV_SQRT2 = 0.7071067811865476;
constexpr double INV_SQRT6 = 0.4082482904638630;
constexpr std::array<double, 3> PLANE_U = {INV_SQRT2, -INV_SQRT2, 0.0};
constexpr std::array<double, 3> PLANE_V = {INV_SQRT6, INV_SQRT6, -2.0 * INV_SQRT6};

double dot3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

// Renders one invariant log-chroma 3-vector as an L1-normalized color.
std::array<double, 3> render_point(const PcaBasis& basis, double theta, double s) {
    const double ex = std::cos(theta);
    const double ey = std::sin(theta);
    std::array<double, 3> v3;
    for (int i = 0; i < 3; ++i) {
        v3[i] = basis.mean[i] + s * (ex * basis.axes[0][i] + ey * basis.axes[1][i]);
    }
    std::array<double, 3> c = {std::exp(v3[0]), std::exp(v3[1]), std::exp(v3[2])};
    const double sum = c[0] + c[1] + c[2];
    return {c[0] / sum, c[1] / sum, c[2] / sum};
}

ChromaticityMap project_and_render(const Image& srgb, const PcaBasis& basis,
                                   double theta, bool brightness_normalize,
                                   bool estimate_theta) {
    const Image perception =
        brightness_normalize ? brightness_normalized(srgb) : srgb;
    LogChromaPoints points = log_chromaticity(perception);
    if (points.count() < 2) {
        throw ValidationError(
            "degenerate chromaticity input: fewer than 2 usable pixels");
    }

    ChromaticityMap map;
    map.basis = basis;
    map.excluded_pixels = points.excluded();
    points.coords = project_points(basis, points.vectors);

    if (estimate_theta) {
        const EntropyScan scan = minimize_entropy(points);
        map.theta_star = scan.theta_star;
        map.entropy_curve = scan.curve;
    } else {
        map.theta_star = theta;
    }

    const double ex = std::cos(map.theta_star);
    const double ey = std::sin(map.theta_star);
    const std::array<double, 3> fill = render_point(map.basis, map.theta_star, 0.0);

    Image out(srgb.height(), srgb.width(), 3, ColorSpace::SRGB);
    for (int r = 0; r < out.height(); ++r) {
        for (int c = 0; c < out.width(); ++c) {
            out.at(r, c, 0) = fill[0];
            out.at(r, c, 1) = fill[1];
            out.at(r, c, 2) = fill[2];
        }
    }
    for (std::size_t i = 0; i < points.coords.size(); ++i) {
        const double s = points.coords[i][0] * ex + points.coords[i][1] * ey;
        const std::array<double, 3> rgb = render_point(map.basis, map.theta_star, s);
        const std::int64_t idx = points.pixel_index[i];
        const int r = static_cast<int>(idx / out.width());
        const int c = static_cast<int>(idx % out.width());
        out.at(r, c, 0) = rgb[0];
        out.at(r, c, 1) = rgb[1];
        out.at(r, c, 2) = rgb[2];
    }
    map.image = std::move(out);
    return map;
}

}  // namespace

LogChromaPoints log_chromaticity(const Image& img) {
    if (img.colorspace() != ColorSpace::SRGB || img.channels() != 3) {
        throw ValidationError("log_chromaticity requires a 3-channel SRGB image");
    }

    LogChromaPoints points;
    points.total_pixels = img.pixel_count();
    points.coords.reserve(points.total_pixels);
    points.vectors.reserve(points.total_pixels);
    points.pixel_index.reserve(points.total_pixels);

    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            const double red = img.at(r, c, 0);
            const double green = img.at(r, c, 1);
            const double blue = img.at(r, c, 2);
            if (red <= CHROMA_EPSILON || green <= CHROMA_EPSILON ||
                blue <= CHROMA_EPSILON) {
                continue;
            }
            // log against the geometric mean; components sum to zero
            const double log_rho = (std::log(red) + std::log(green) + std::log(blue)) / 3.0;
            const std::array<double, 3> v = {std::log(red) - log_rho,
                                             std::log(green) - log_rho,
                                             std::log(blue) - log_rho};
            points.vectors.push_back(v);
            points.coords.push_back({dot3(v, PLANE_U), dot3(v, PLANE_V)});
            points.pixel_index.push_back(static_cast<std::int64_t>(r) * img.width() + c);
        }
    }
    return points;
}

PcaBasis pca_project(std::span<const std::array<double, 3>> samples) {
    const std::size_t n = samples.size();
    if (n < 2) {
        throw ValidationError("pca_project requires at least 2 samples");
    }

    std::array<double, 3> mean = {0.0, 0.0, 0.0};
    for (const auto& s : samples) {
        for (int i = 0; i < 3; ++i) mean[i] += s[i];
    }
    for (int i = 0; i < 3; ++i) mean[i] /= static_cast<double>(n);

    double max_dev = 0.0;
    for (const auto& s : samples) {
        for (int i = 0; i < 3; ++i) max_dev = std::max(max_dev, std::abs(s[i] - mean[i]));
    }
    if (max_dev < 1e-12) {
        throw ValidationError("pca_project: degenerate input, all samples identical");
    }

    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (const auto& s : samples) {
        Eigen::Vector3d d(s[0] - mean[0], s[1] - mean[1], s[2] - mean[2]);
        cov += d * d.transpose();
    }
    cov /= static_cast<double>(n - 1);

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(cov);
    if (solver.info() != Eigen::Success) {
        throw InternalError("pca_project: eigendecomposition failed");
    }

    PcaBasis basis;
    basis.mean = mean;
    // Eigen sorts ascending; take the two largest.
    for (int k = 0; k < 2; ++k) {
        const int col = 2 - k;
        Eigen::Vector3d axis = solver.eigenvectors().col(col);
        for (int i = 0; i < 3; ++i) {
            if (std::abs(axis[i]) > 1e-12) {
                if (axis[i] < 0.0) axis = -axis;
                break;
            }
        }
        basis.axes[k] = {axis[0], axis[1], axis[2]};
        basis.eigenvalues[k] = std::max(0.0, solver.eigenvalues()[col]);
    }
    return basis;
}

std::vector<std::array<double, 2>> project_points(
    const PcaBasis& basis, std::span<const std::array<double, 3>> samples) {
    std::vector<std::array<double, 2>> coords(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        std::array<double, 3> d;
        for (int k = 0; k < 3; ++k) d[k] = samples[i][k] - basis.mean[k];
        coords[i] = {dot3(d, basis.axes[0]), dot3(d, basis.axes[1])};
    }
    return coords;
}

double projection_entropy(const LogChromaPoints& points, double theta) {
    if (points.count() < 2) {
        throw ValidationError("projection_entropy requires at least 2 points");
    }
    const double ex = std::cos(theta);
    const double ey = std::sin(theta);
    std::vector<double> s(points.coords.size());
    for (std::size_t i = 0; i < points.coords.size(); ++i) {
        s[i] = points.coords[i][0] * ex + points.coords[i][1] * ey;
    }

    const double lo_cut = percentile(s, 5.0);
    const double hi_cut = percentile(s, 95.0);
    std::vector<double> kept;
    kept.reserve(s.size());
    for (double v : s) {
        if (v >= lo_cut && v <= hi_cut) kept.push_back(v);
    }
    if (kept.size() < 2) {
        throw ValidationError("projection_entropy: fewer than 2 points survive outlier rejection");
    }

    const auto [lo_it, hi_it] = std::minmax_element(kept.begin(), kept.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    if (hi - lo <= 0.0) {
        return 0.0;
    }

    double mean = 0.0;
    for (double v : kept) mean += v;
    mean /= static_cast<double>(kept.size());
    double var = 0.0;
    for (double v : kept) var += (v - mean) * (v - mean);
    var /= static_cast<double>(kept.size() - 1);
    const double sigma = std::sqrt(var);

    const double width = 3.5 * sigma * std::pow(static_cast<double>(kept.size()), -1.0 / 3.0);
    if (!(width > 0.0)) {
        return 0.0;
    }
    const int nbins = std::max(1, static_cast<int>(std::ceil((hi - lo) / width)));
    std::vector<std::int64_t> counts(nbins, 0);
    for (double v : kept) {
        int idx = static_cast<int>((v - lo) / width);
        idx = std::clamp(idx, 0, nbins - 1);
        counts[idx] += 1;
    }

    double entropy = 0.0;
    const double total = static_cast<double>(kept.size());
    for (std::int64_t cnt : counts) {
        if (cnt > 0) {
            const double p = static_cast<double>(cnt) / total;
            entropy -= p * std::log(p);
        }
    }
    return entropy;
}

EntropyScan minimize_entropy(const LogChromaPoints& points) {
    EntropyScan scan;
    scan.curve.resize(180);
    int best = 0;
    for (int deg = 0; deg < 180; ++deg) {
        const double theta = deg * std::numbers::pi / 180.0;
        scan.curve[deg] = projection_entropy(points, theta);
        if (scan.curve[deg] < scan.curve[best]) {
            best = deg;
        }
    }
    scan.theta_star = best * std::numbers::pi / 180.0;
    return scan;
}

Image brightness_normalized(const Image& srgb) {
    const Image lab = rgb_to_lab(srgb);
    const Image filtered = mean_filter_normalize(lab, ChannelSet({0, 2}));
    return lab_to_rgb(filtered);
}

ChromaticityMap shadowfree_chromaticity(const Image& srgb,
                                        const ChromaticityOptions& opts) {
    const Image perception =
        opts.brightness_normalize ? brightness_normalized(srgb) : srgb;
    const LogChromaPoints points = log_chromaticity(perception);
    if (points.count() < 3) {
        throw ValidationError(
            "degenerate chromaticity input: fewer than 3 usable pixels");
    }
    const PcaBasis basis = pca_project(points.vectors);
    return project_and_render(srgb, basis, 0.0, opts.brightness_normalize,
                              /*estimate_theta=*/true);
}

ChromaticityMap render_chromaticity(const Image& srgb, const PcaBasis& basis,
                                    double theta,
                                    const ChromaticityOptions& opts) {
    return project_and_render(srgb, basis, theta, opts.brightness_normalize,
                              /*estimate_theta=*/false);
}

CompensationResult illumination_compensate(const ChromaticityMap& map,
                                           const Image& reference,
                                           const SoftMask* mask) {
    if (map.image.height() != reference.height() ||
        map.image.width() != reference.width() || reference.channels() != 3) {
        throw ValidationError(
            "illumination_compensate requires a 3-channel reference matching the map");
    }

    const int h = reference.height();
    const int w = reference.width();
    std::vector<bool> region(static_cast<std::size_t>(h) * w, false);
    std::int64_t region_count = 0;

    if (mask != nullptr) {
        if (mask->m1.height() != h || mask->m1.width() != w) {
            throw ValidationError("illumination_compensate mask shape mismatch");
        }
        for (int r = 0; r < h; ++r) {
            for (int c = 0; c < w; ++c) {
                if (mask->m1.at(r, c, 0) <= 0.0) {
                    region[static_cast<std::size_t>(r) * w + c] = true;
                    ++region_count;
                }
            }
        }
    } else {
        // Mask-free proxy: the brightest half of the reference by LAB L.
        const Image lab = rgb_to_lab(reference);
        std::vector<double> lvals(static_cast<std::size_t>(h) * w);
        for (int r = 0; r < h; ++r) {
            for (int c = 0; c < w; ++c) {
                lvals[static_cast<std::size_t>(r) * w + c] = lab.at(r, c, 0);
            }
        }
        const double median = percentile(lvals, 50.0);
        for (std::size_t i = 0; i < lvals.size(); ++i) {
            if (lvals[i] >= median) {
                region[i] = true;
                ++region_count;
            }
        }
    }
    if (region_count == 0) {
        throw ValidationError("illumination_compensate: empty non-shadow region");
    }

    CompensationResult result;
    result.map.theta_star = map.theta_star;
    result.map.entropy_curve = map.entropy_curve;
    result.map.basis = map.basis;
    result.map.excluded_pixels = map.excluded_pixels;

    Image corrected(h, w, 3, ColorSpace::SRGB);
    for (int ch = 0; ch < 3; ++ch) {
        double mean_map = 0.0, mean_ref = 0.0;
        for (int r = 0; r < h; ++r) {
            for (int c = 0; c < w; ++c) {
                if (!region[static_cast<std::size_t>(r) * w + c]) continue;
                mean_map += map.image.at(r, c, ch);
                mean_ref += reference.at(r, c, ch);
            }
        }
        mean_map /= static_cast<double>(region_count);
        mean_ref /= static_cast<double>(region_count);

        double var_map = 0.0, var_ref = 0.0;
        for (int r = 0; r < h; ++r) {
            for (int c = 0; c < w; ++c) {
                if (!region[static_cast<std::size_t>(r) * w + c]) continue;
                const double dm = map.image.at(r, c, ch) - mean_map;
                const double dr = reference.at(r, c, ch) - mean_ref;
                var_map += dm * dm;
                var_ref += dr * dr;
            }
        }
        const double sd_map = std::sqrt(var_map / static_cast<double>(region_count));
        const double sd_ref = std::sqrt(var_ref / static_cast<double>(region_count));

        const double gain = sd_map > 0.0 ? sd_ref / sd_map : 1.0;
        const double bias = mean_ref - gain * mean_map;
        result.gain[ch] = gain;
        result.bias[ch] = bias;
        for (int r = 0; r < h; ++r) {
            for (int c = 0; c < w; ++c) {
                corrected.at(r, c, ch) =
                    std::clamp(gain * map.image.at(r, c, ch) + bias, 0.0, 1.0);
            }
        }
    }
    result.map.image = std::move(corrected);
    return result;
}

}  // namespace shadowfreq
