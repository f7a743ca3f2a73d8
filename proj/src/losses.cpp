#include "shadowfreq/losses.hpp"

#include <algorithm>
#include <cmath>

#include "shadowfreq/spectrum.hpp"

namespace shadowfreq {

namespace {

double lookup(const std::vector<std::pair<std::string, double>>& kv,
              const std::string& key, const char* what) {
    for (const auto& [k, v] : kv) {
        if (k == key) return v;
    }
    throw ValidationError(std::string("unknown ") + what + " '" + key + "'");
}

// Mean squared difference between two equally shaped value vectors, scaled
// elementwise by c before differencing.
double scaled_msd(const std::vector<double>& fake, const std::vector<double>& real,
                  double c) {
    double acc = 0.0;
    for (std::size_t i = 0; i < fake.size(); ++i) {
        const double d = c * fake[i] - c * real[i];
        acc += d * d;
    }
    return acc / static_cast<double>(fake.size());
}

Image extract_channel(const Image& img, int ch) {
    Image out(img.height(), img.width(), 1, ColorSpace::LINEAR);
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            out.at(r, c, 0) = img.at(r, c, ch);
        }
    }
    return out;
}

// 2x2 block mean downsample, truncating odd extents.
std::vector<double> half_downsample(const std::vector<double>& plane, int h, int w,
                                    int& oh, int& ow) {
    oh = h / 2;
    ow = w / 2;
    std::vector<double> out(static_cast<std::size_t>(std::max(oh, 0)) * std::max(ow, 0));
    for (int r = 0; r < oh; ++r) {
        for (int c = 0; c < ow; ++c) {
            const double sum = plane[static_cast<std::size_t>(2 * r) * w + 2 * c] +
                               plane[static_cast<std::size_t>(2 * r) * w + 2 * c + 1] +
                               plane[static_cast<std::size_t>(2 * r + 1) * w + 2 * c] +
                               plane[static_cast<std::size_t>(2 * r + 1) * w + 2 * c + 1];
            out[static_cast<std::size_t>(r) * ow + c] = sum / 4.0;
        }
    }
    return out;
}

}  // namespace

double LossReport::component(const std::string& key) const {
    return lookup(components, key, "component");
}

double LossReport::parameter(const std::string& key) const {
    return lookup(parameters, key, "parameter");
}

std::pair<std::int64_t, std::int64_t> PyramidGradientExtractor::feature_counts(
    int height, int width, int channels) {
    std::int64_t pyramid = 0;
    int h = height, w = width;
    for (int level = 0; level < 3; ++level) {
        pyramid += static_cast<std::int64_t>(h) * w;
        h /= 2;
        w /= 2;
    }
    const std::int64_t gradients = 2LL * height * width;
    return {pyramid * channels, gradients * channels};
}

std::vector<double> PyramidGradientExtractor::extract(const Image& img) const {
    std::vector<double> features;
    const auto [pyr, grad] = feature_counts(img.height(), img.width(), img.channels());
    features.reserve(pyr + grad);

    std::vector<double> plane(static_cast<std::size_t>(img.height()) * img.width());
    for (int ch = 0; ch < img.channels(); ++ch) {
        for (int r = 0; r < img.height(); ++r) {
            for (int c = 0; c < img.width(); ++c) {
                plane[static_cast<std::size_t>(r) * img.width() + c] = img.at(r, c, ch);
            }
        }
        std::vector<double> level = plane;
        int h = img.height(), w = img.width();
        for (int l = 0; l < 3; ++l) {
            features.insert(features.end(), level.begin(), level.end());
            if (l < 2) {
                int oh = 0, ow = 0;
                level = half_downsample(level, h, w, oh, ow);
                h = oh;
                w = ow;
            }
        }
        // forward-difference gradients of the full-resolution channel
        for (int r = 0; r < img.height(); ++r) {
            for (int c = 0; c < img.width(); ++c) {
                const double gx = c + 1 < img.width() ? img.at(r, c + 1, ch) - img.at(r, c, ch) : 0.0;
                features.push_back(gx);
            }
        }
        for (int r = 0; r < img.height(); ++r) {
            for (int c = 0; c < img.width(); ++c) {
                const double gy = r + 1 < img.height() ? img.at(r + 1, c, ch) - img.at(r, c, ch) : 0.0;
                features.push_back(gy);
            }
        }
    }
    return features;
}

LossReport loss_vd(const Subbands& fake, const Subbands& real, double c) {
    if (!fake.v.same_shape(real.v) || !fake.d.same_shape(real.d)) {
        throw ValidationError("loss_vd requires subbands of equal shape");
    }
    if (!(c > 0.0)) {
        throw ValidationError("loss_vd requires c > 0");
    }
    const double term_v = scaled_msd(fake.v.data(), real.v.data(), c);
    const double term_d = scaled_msd(fake.d.data(), real.d.data(), c);

    LossReport report;
    report.name = "vd";
    report.value = term_v + term_d;
    report.components = {{"v", term_v}, {"d", term_d}};
    report.parameters = {{"c", c}, {"n", static_cast<double>(fake.v.data().size())}};
    return report;
}

LossReport loss_ff(const Image& real, const Image& fake, double alpha) {
    if (!real.same_shape(fake)) {
        throw ValidationError("loss_ff requires images of equal shape");
    }

    LossReport report;
    report.name = "ff";
    report.parameters = {{"alpha", alpha}};

    const double mn = static_cast<double>(real.pixel_count());
    double total = 0.0;
    for (int ch = 0; ch < real.channels(); ++ch) {
        const Spectrum fr = dft2(extract_channel(real, ch));
        const Spectrum ff = dft2(extract_channel(fake, ch));
        const WeightMatrix w = spectral_weight(fr, ff, alpha);
        double acc = 0.0;
        for (std::size_t i = 0; i < fr.values.size(); ++i) {
            const double dist = std::norm(fr.values[i] - ff.values[i]);
            acc += w.values[i] * dist;
        }
        const double channel_loss = acc / mn;
        total += channel_loss;
        if (real.channels() > 1) {
            report.components.emplace_back("channel_" + std::to_string(ch), channel_loss);
        }
    }
    report.value = total / static_cast<double>(real.channels());
    return report;
}

LossReport loss_frequency(const Image& fake, const Image& real, double lambda1,
                          double lambda2, double c, double alpha) {
    const LossReport vd = loss_vd(haar_dwt2(fake), haar_dwt2(real), c);
    const LossReport ff = loss_ff(real, fake, alpha);

    LossReport report;
    report.name = "frequency";
    report.value = lambda1 * vd.value + lambda2 * ff.value;
    report.components = {{"vd", vd.value}, {"ff", ff.value}};
    report.parameters = {{"lambda1", lambda1}, {"lambda2", lambda2}, {"c", c}, {"alpha", alpha}};
    return report;
}

LossReport loss_brightness_ch(const ChromaticityMap& output_map,
                              const ChromaticityMap& reference) {
    if (!output_map.image.same_shape(reference.image)) {
        throw ValidationError("loss_brightness_ch requires maps of equal shape");
    }
    double acc = 0.0;
    const auto& a = output_map.image.data();
    const auto& b = reference.image.data();
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += std::abs(a[i] - b[i]);
    }

    LossReport report;
    report.name = "brightness-ch";
    report.value = acc / static_cast<double>(a.size());
    report.parameters = {{"theta_star", reference.theta_star}};
    return report;
}

LossReport loss_brightness_ch(const Image& output, const ChromaticityMap& reference,
                              bool compensate_output) {
    ChromaticityMap sigma_o =
        render_chromaticity(output, reference.basis, reference.theta_star);
    if (compensate_output) {
        sigma_o = illumination_compensate(sigma_o, brightness_normalized(output)).map;
    }
    LossReport report = loss_brightness_ch(sigma_o, reference);
    report.parameters.emplace_back("compensate", compensate_output ? 1.0 : 0.0);
    return report;
}

LossReport loss_perceptual(const Image& pred, const Image& target,
                           const FeatureExtractor& fx) {
    const std::vector<double> fp = fx.extract(pred);
    const std::vector<double> ft = fx.extract(target);
    if (fp.size() != ft.size() || fp.empty()) {
        throw ValidationError("feature extractor produced mismatched feature vectors");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < fp.size(); ++i) {
        const double d = fp[i] - ft[i];
        acc += d * d;
    }

    LossReport report;
    report.name = "perceptual";
    report.value = acc / static_cast<double>(fp.size());
    report.parameters = {{"features", static_cast<double>(fp.size())}};
    return report;
}

LossReport loss_mse_weighted(const SoftMask& pred_mask, const SoftMask& true_mask) {
    if (!pred_mask.m1.same_shape(true_mask.m1)) {
        throw ValidationError("loss_mse_weighted requires masks of equal shape");
    }
    const auto& mp = pred_mask.m1.data();
    const auto& mt = true_mask.m1.data();
    double acc = 0.0;
    for (std::size_t i = 0; i < mp.size(); ++i) {
        const double weight = mp[i] > 0.5 ? 2.0 : 1.0;
        const double d = mp[i] - mt[i];
        acc += weight * d * d;
    }

    LossReport report;
    report.name = "mse-w";
    report.value = acc / static_cast<double>(mp.size());
    report.parameters = {{"shadow_weight", 2.0}, {"threshold", 0.5}};
    return report;
}

LossReport loss_smooth(const SoftMask& mask, const Image& sf) {
    if (!mask.m.same_shape(sf)) {
        throw ValidationError("loss_smooth requires a mask matching the image shape");
    }
    const int h = sf.height();
    const int w = sf.width();
    const int ch = sf.channels();
    double acc = 0.0;
    for (int k = 0; k < ch; ++k) {
        for (int r = 0; r < h; ++r) {
            for (int c = 0; c < w; ++c) {
                const double p = mask.m.at(r, c, k) * sf.at(r, c, k);
                const double gx =
                    c + 1 < w ? mask.m.at(r, c + 1, k) * sf.at(r, c + 1, k) - p : 0.0;
                const double gy =
                    r + 1 < h ? mask.m.at(r + 1, c, k) * sf.at(r + 1, c, k) - p : 0.0;
                acc += std::abs(gx) + std::abs(gy);
            }
        }
    }

    LossReport report;
    report.name = "smooth";
    // per-pixel, per-channel mean of |grad|_1
    report.value = acc / (static_cast<double>(h) * w * ch);
    return report;
}

LossReport loss_recon(const SoftMask& pred_mask, const SoftMask& true_mask,
                      const Image& sf, const FeatureExtractor& fx) {
    const LossReport smooth = loss_smooth(pred_mask, sf);
    const LossReport perceptual = loss_perceptual(pred_mask.m, true_mask.m, fx);
    const LossReport mse_w = loss_mse_weighted(pred_mask, true_mask);

    double norm_acc = 0.0;
    for (double v : pred_mask.m.data()) {
        norm_acc += v * v;
    }
    const double mask_norm =
        0.01 * norm_acc / static_cast<double>(pred_mask.m.data().size());

    LossReport report;
    report.name = "recon";
    report.value = smooth.value + perceptual.value + mse_w.value + mask_norm;
    report.components = {{"smooth", smooth.value},
                         {"perceptual", perceptual.value},
                         {"mse_w", mse_w.value},
                         {"mask_norm", mask_norm}};
    report.parameters = {{"mask_norm_weight", 0.01}};
    return report;
}

LossReport loss_align(const RegionStats& adjusted, const RegionStats& reference) {
    if (!adjusted.masked.has_value() || !reference.masked.has_value()) {
        throw ValidationError("loss_align requires masked statistics on both sides");
    }
    const auto& mu_os = adjusted.masked->mean;
    const auto& mu_ws = reference.masked->mean;
    if (mu_os.size() != mu_ws.size() || mu_os.empty()) {
        throw ValidationError("loss_align channel count mismatch");
    }

    double acc = 0.0;
    for (std::size_t l = 0; l < mu_os.size(); ++l) {
        acc += std::log(std::cosh(mu_os[l] - mu_ws[l]));
    }

    LossReport report;
    report.name = "align";
    report.value = acc / static_cast<double>(mu_os.size());
    report.parameters = {{"channels", static_cast<double>(mu_os.size())}};
    return report;
}

LossReport overall_loss(const std::vector<std::pair<std::string, double>>& components,
                        const std::vector<std::pair<std::string, double>>& weights) {
    static const std::vector<std::pair<std::string, double>> kDefaults = {
        {"brightness-ch", 1.1}, {"frequency", 0.3}, {"align", 0.01}};

    auto is_known = [&](const std::string& name) {
        for (const auto& [k, _] : kDefaults) {
            if (k == name) return true;
        }
        for (const auto& [k, _] : components) {
            if (k == name) return true;
        }
        return false;
    };
    for (const auto& [name, _] : weights) {
        if (!is_known(name)) {
            throw ValidationError("weight for unknown component '" + name + "'");
        }
    }

    auto weight_of = [&](const std::string& name) -> double {
        for (const auto& [k, v] : weights) {
            if (k == name) return v;
        }
        for (const auto& [k, v] : kDefaults) {
            if (k == name) return v;
        }
        throw ValidationError("component '" + name + "' has no weight");
    };
    auto component_of = [&](const std::string& name) -> const double* {
        for (const auto& [k, v] : components) {
            if (k == name) return &v;
        }
        return nullptr;
    };

    LossReport report;
    report.name = "overall";

    // canonical components first, in fixed order; absent ones contribute 0
    double value = 0.0;
    for (const auto& [name, _] : kDefaults) {
        const double* comp = component_of(name);
        const double lambda = weight_of(name);
        const double v = comp != nullptr ? *comp : 0.0;
        value += lambda * v;
        report.components.emplace_back(name, v);
        report.parameters.emplace_back("lambda_" + name, lambda);
        report.parameters.emplace_back("supplied_" + name, comp != nullptr ? 1.0 : 0.0);
    }
    // any additional supplied components, in supplied order
    for (const auto& [name, v] : components) {
        bool canonical = false;
        for (const auto& [k, _] : kDefaults) {
            if (k == name) canonical = true;
        }
        if (canonical) continue;
        const double lambda = weight_of(name);
        value += lambda * v;
        report.components.emplace_back(name, v);
        report.parameters.emplace_back("lambda_" + name, lambda);
        report.parameters.emplace_back("supplied_" + name, 1.0);
    }
    report.value = value;
    return report;
}

}  // namespace shadowfreq
