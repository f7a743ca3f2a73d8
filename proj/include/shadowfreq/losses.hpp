#pragma once

#include <string>
#include <utility>
#include <vector>

#include "shadowfreq/chromaticity.hpp"
#include "shadowfreq/image.hpp"
#include "shadowfreq/mask.hpp"
#include "shadowfreq/wavelet.hpp"

namespace shadowfreq {

/// One evaluated loss: a non-negative scalar plus the named sub-values and
/// coefficients that produced it. Components recombine to `value` under
/// each loss's declared formula.
struct LossReport {
    std::string name;
    double value = 0.0;
    std::vector<std::pair<std::string, double>> components;
    std::vector<std::pair<std::string, double>> parameters;

    double component(const std::string& key) const;
    double parameter(const std::string& key) const;
};

/// Deterministic map from an image to a flat feature vector.
class FeatureExtractor {
public:
    virtual ~FeatureExtractor() = default;
    virtual std::string id() const = 0;
    virtual std::vector<double> extract(const Image& img) const = 0;
};

/// Weight-free default: a 3-level mean pyramid of each channel (full, half,
/// quarter resolution) concatenated with forward-difference horizontal and
/// vertical gradient maps of the full-resolution channel.
class PyramidGradientExtractor final : public FeatureExtractor {
public:
    std::string id() const override { return "pyramid3+grad"; }
    std::vector<double> extract(const Image& img) const override;

    /// Feature counts for an image shape; used by closed-form tests.
    static std::pair<std::int64_t, std::int64_t> feature_counts(int height, int width,
                                                                int channels);
};

/// Mean squared difference of the scaled V and D detail subbands:
/// (1/n) sum (c*V_f - c*V_r)^2 + (1/n) sum (c*D_f - c*D_r)^2.
LossReport loss_vd(const Subbands& fake, const Subbands& real, double c = 1.0);

/// Focal frequency loss: per channel (1/MN) sum w(u,v) |F_r - F_f|^2 with
/// w = |F_r - F_f|^alpha, averaged over channels.
LossReport loss_ff(const Image& real, const Image& fake, double alpha = 1.0);

/// lambda1 * loss_vd + lambda2 * loss_ff.
LossReport loss_frequency(const Image& fake, const Image& real, double lambda1 = 0.5,
                          double lambda2 = 0.5, double c = 1.0, double alpha = 1.0);

/// Mean absolute difference between two invariant chromaticity maps.
LossReport loss_brightness_ch(const ChromaticityMap& output_map,
                              const ChromaticityMap& reference);

/// Renders the output's chromaticity in the reference frame first. When
/// `compensate_output` is set the rendering is illumination-compensated
/// against the output's own perception image, mirroring the reference
/// construction.
LossReport loss_brightness_ch(const Image& output, const ChromaticityMap& reference,
                              bool compensate_output = true);

LossReport loss_perceptual(const Image& pred, const Image& target,
                           const FeatureExtractor& fx);

/// Weighted mask MSE: weight 2 where the predicted m1 exceeds 0.5, else 1.
LossReport loss_mse_weighted(const SoftMask& pred_mask, const SoftMask& true_mask);

/// Mean L1 gradient magnitude of the mask/image product (forward
/// differences, zero at the trailing border).
LossReport loss_smooth(const SoftMask& mask, const Image& sf);

/// loss_smooth + loss_perceptual + loss_mse_weighted + 0.01 * mean(m^2).
LossReport loss_recon(const SoftMask& pred_mask, const SoftMask& true_mask,
                      const Image& sf, const FeatureExtractor& fx);

/// Channel-mean log-cosh distance between masked-region means.
LossReport loss_align(const RegionStats& adjusted, const RegionStats& reference);

/// Weighted sum of named component losses. Default weights: brightness-ch
/// 1.1, frequency 0.3, align 0.01. Components absent from the supplied set
/// contribute zero and are flagged in the report.
LossReport overall_loss(const std::vector<std::pair<std::string, double>>& components,
                        const std::vector<std::pair<std::string, double>>& weights = {});

}  // namespace shadowfreq
