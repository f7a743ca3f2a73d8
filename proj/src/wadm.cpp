#include "shadowfreq/wadm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "shadowfreq/image.hpp"
#include "shadowfreq/wavelet.hpp"

namespace shadowfreq {

namespace {

void check_positive_shape(int b, int c, int h, int w) {
    if (b < 1 || c < 1 || h < 1 || w < 1) {
        throw ValidationError("feature map dimensions must be positive");
    }
}

double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

// Bilinear sample with zero padding outside the image.
double bilinear(const FeatureMap& x, int b, int c, double py, double px) {
    const int y0 = static_cast<int>(std::floor(py));
    const int x0 = static_cast<int>(std::floor(px));
    const double wy = py - y0;
    const double wx = px - x0;

    auto value = [&](int yy, int xx) -> double {
        if (yy < 0 || yy >= x.height || xx < 0 || xx >= x.width) return 0.0;
        return x.at(b, c, yy, xx);
    };
    return (1.0 - wy) * (1.0 - wx) * value(y0, x0) +
           (1.0 - wy) * wx * value(y0, x0 + 1) +
           wy * (1.0 - wx) * value(y0 + 1, x0) +
           wy * wx * value(y0 + 1, x0 + 1);
}

}  // namespace

FeatureMap::FeatureMap(int b, int c, int h, int w)
    : batch(b), channels(c), height(h), width(w) {
    check_positive_shape(b, c, h, w);
    data.assign(static_cast<std::size_t>(b) * c * h * w, 0.0);
}

FeatureMap FeatureMap::from_image(const Image& img) {
    FeatureMap fm(1, img.channels(), img.height(), img.width());
    for (int c = 0; c < img.channels(); ++c) {
        for (int i = 0; i < img.height(); ++i) {
            for (int j = 0; j < img.width(); ++j) {
                fm.at(0, c, i, j) = img.at(i, j, c);
            }
        }
    }
    return fm;
}

ConvKernel::ConvKernel(int out, int in, int kh_, int kw_)
    : out_channels(out), in_channels(in), kh(kh_), kw(kw_) {
    if (out < 1 || in < 1 || kh < 1 || kw < 1) {
        throw ValidationError("kernel dimensions must be positive");
    }
    if (kh % 2 == 0 || kw % 2 == 0) {
        throw ValidationError("kernel extents must be odd (same-padding convention)");
    }
    weights.assign(static_cast<std::size_t>(out) * in * kh * kw, 0.0);
    bias.assign(out, 0.0);
}

FeatureMap z_pool(const FeatureMap& x) {
    check_positive_shape(x.batch, x.channels, x.height, x.width);
    FeatureMap out(x.batch, 2, x.height, x.width);
    for (int b = 0; b < x.batch; ++b) {
        for (int i = 0; i < x.height; ++i) {
            for (int j = 0; j < x.width; ++j) {
                double mx = x.at(b, 0, i, j);
                double sum = 0.0;
                for (int c = 0; c < x.channels; ++c) {
                    const double v = x.at(b, c, i, j);
                    mx = std::max(mx, v);
                    sum += v;
                }
                out.at(b, 0, i, j) = mx;
                out.at(b, 1, i, j) = sum / static_cast<double>(x.channels);
            }
        }
    }
    return out;
}

FeatureMap conv2d(const FeatureMap& x, const ConvKernel& k) {
    if (k.in_channels != x.channels) {
        throw ValidationError("conv2d: kernel expects " + std::to_string(k.in_channels) +
                              " input channels, feature map has " +
                              std::to_string(x.channels));
    }
    const int oy = k.kh / 2;
    const int ox = k.kw / 2;
    FeatureMap out(x.batch, k.out_channels, x.height, x.width);
    for (int b = 0; b < x.batch; ++b) {
        for (int o = 0; o < k.out_channels; ++o) {
            for (int i = 0; i < x.height; ++i) {
                for (int j = 0; j < x.width; ++j) {
                    double acc = k.bias[o];
                    for (int c = 0; c < x.channels; ++c) {
                        for (int m = 0; m < k.kh; ++m) {
                            const int yy = i + m - oy;
                            if (yy < 0 || yy >= x.height) continue;
                            for (int n = 0; n < k.kw; ++n) {
                                const int xx = j + n - ox;
                                if (xx < 0 || xx >= x.width) continue;
                                acc += k.w(o, c, m, n) * x.at(b, c, yy, xx);
                            }
                        }
                    }
                    out.at(b, o, i, j) = acc;
                }
            }
        }
    }
    return out;
}

OffsetField offset_conv(const FeatureMap& z, const ConvKernel& k) {
    if (k.out_channels % 2 != 0) {
        throw ValidationError("offset_conv kernel must have an even output channel count");
    }
    const FeatureMap raw = conv2d(z, k);
    OffsetField field;
    field.batch = raw.batch;
    field.taps = k.out_channels / 2;
    field.height = raw.height;
    field.width = raw.width;
    field.data = raw.data;  // same B x (2*taps) x H x W layout
    return field;
}

FeatureMap deformable_conv(const FeatureMap& x, const OffsetField& offsets,
                           const ConvKernel& k) {
    if (k.in_channels != x.channels) {
        throw ValidationError("deformable_conv: kernel/input channel mismatch");
    }
    if (offsets.taps != k.kh * k.kw) {
        throw ValidationError("deformable_conv: offset field has " +
                              std::to_string(offsets.taps) + " taps, kernel has " +
                              std::to_string(k.kh * k.kw));
    }
    if (offsets.batch != x.batch || offsets.height != x.height ||
        offsets.width != x.width) {
        throw ValidationError("deformable_conv: offset field shape mismatch");
    }

    const int oy = k.kh / 2;
    const int ox = k.kw / 2;
    FeatureMap out(x.batch, k.out_channels, x.height, x.width);
    for (int b = 0; b < x.batch; ++b) {
        for (int o = 0; o < k.out_channels; ++o) {
            for (int i = 0; i < x.height; ++i) {
                for (int j = 0; j < x.width; ++j) {
                    double acc = k.bias[o];
                    for (int m = 0; m < k.kh; ++m) {
                        for (int n = 0; n < k.kw; ++n) {
                            const int t = m * k.kw + n;
                            const double py = i + m - oy + offsets.dy(b, t, i, j);
                            const double px = j + n - ox + offsets.dx(b, t, i, j);
                            for (int c = 0; c < x.channels; ++c) {
                                acc += k.w(o, c, m, n) * bilinear(x, b, c, py, px);
                            }
                        }
                    }
                    out.at(b, o, i, j) = acc;
                }
            }
        }
    }
    return out;
}

FeatureMap attention_gate(const FeatureMap& z, const FeatureMap& d) {
    const bool broadcast = d.channels == 1;
    if (!broadcast && d.channels != z.channels) {
        throw ValidationError("attention_gate: scale source must have 1 or " +
                              std::to_string(z.channels) + " channels");
    }
    if (d.batch != z.batch || d.height != z.height || d.width != z.width) {
        throw ValidationError("attention_gate: shape mismatch");
    }

    FeatureMap out(z.batch, z.channels, z.height, z.width);
    for (int b = 0; b < z.batch; ++b) {
        for (int c = 0; c < z.channels; ++c) {
            for (int i = 0; i < z.height; ++i) {
                for (int j = 0; j < z.width; ++j) {
                    const double gate = sigmoid(d.at(b, broadcast ? 0 : c, i, j));
                    out.at(b, c, i, j) = z.at(b, c, i, j) * gate;
                }
            }
        }
    }
    return out;
}

double SeededUniform::next(double lo, double hi) {
    // top 53 bits -> [0,1)
    const double u = static_cast<double>(next_raw() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
}

std::uint64_t SeededUniform::next_raw() {
    // splitmix64
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

WadmParams WadmParams::seeded(int in_channels, int out_channels, std::uint64_t seed) {
    WadmParams params;
    params.offset_kernel = ConvKernel(18, 2, 3, 3);
    params.deform_kernel = ConvKernel(2, 2, 3, 3);
    params.projection = ConvKernel(out_channels, 4 * in_channels, 1, 1);

    SeededUniform rng(seed);
    for (ConvKernel* k : {&params.offset_kernel, &params.deform_kernel, &params.projection}) {
        for (double& w : k->weights) w = rng.next(-0.1, 0.1);
        for (double& b : k->bias) b = rng.next(-0.1, 0.1);
    }
    return params;
}

namespace {

ConvKernel kernel_from_json(const nlohmann::json& j, const std::string& name) {
    if (!j.contains(name)) {
        throw ValidationError("parameter file missing tensor '" + name + "'");
    }
    const auto& t = j.at(name);
    try {
        const auto shape = t.at("shape").get<std::vector<int>>();
        if (shape.size() != 4) {
            throw ValidationError("tensor '" + name + "' must have a 4-entry shape");
        }
        ConvKernel k(shape[0], shape[1], shape[2], shape[3]);
        const auto weights = t.at("weights").get<std::vector<double>>();
        const auto bias = t.at("bias").get<std::vector<double>>();
        if (weights.size() != k.weights.size() || bias.size() != k.bias.size()) {
            throw ValidationError("tensor '" + name + "' data does not match its shape");
        }
        k.weights = weights;
        k.bias = bias;
        return k;
    } catch (const nlohmann::json::exception&) {
        throw ValidationError("tensor '" + name + "' is malformed");
    }
}

nlohmann::json kernel_to_json(const ConvKernel& k) {
    return nlohmann::json{{"shape", {k.out_channels, k.in_channels, k.kh, k.kw}},
                          {"weights", k.weights},
                          {"bias", k.bias}};
}

}  // namespace

WadmParams WadmParams::load_json(const std::string& path, int in_channels,
                                 int out_channels) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open parameter file " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("parameter file " + path + " is not valid JSON: " + e.what());
    }

    WadmParams params;
    params.offset_kernel = kernel_from_json(j, "offset_kernel");
    params.deform_kernel = kernel_from_json(j, "deform_kernel");
    params.projection = kernel_from_json(j, "projection");

    if (params.offset_kernel.out_channels != 2 * params.deform_kernel.kh * params.deform_kernel.kw ||
        params.offset_kernel.in_channels != 2) {
        throw ValidationError("tensor 'offset_kernel' has incompatible shape");
    }
    if (params.deform_kernel.in_channels != 2 || params.deform_kernel.out_channels != 2) {
        throw ValidationError("tensor 'deform_kernel' has incompatible shape");
    }
    if (params.projection.kh != 1 || params.projection.kw != 1) {
        throw ValidationError("tensor 'projection' must be a 1x1 kernel");
    }
    if (params.projection.in_channels != 4 * in_channels) {
        throw ValidationError("tensor 'projection' declares " +
                              std::to_string(params.projection.in_channels) +
                              " input channels, expected " +
                              std::to_string(4 * in_channels));
    }
    if (out_channels > 0 && params.projection.out_channels != out_channels) {
        throw ValidationError("tensor 'projection' produces " +
                              std::to_string(params.projection.out_channels) +
                              " channels, requested " + std::to_string(out_channels));
    }
    return params;
}

void WadmParams::save_json(const std::string& path) const {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write parameter file " + path);
    }
    nlohmann::json j{{"offset_kernel", kernel_to_json(offset_kernel)},
                     {"deform_kernel", kernel_to_json(deform_kernel)},
                     {"projection", kernel_to_json(projection)}};
    out << j.dump(2) << "\n";
}

WadmTrace wadm_forward_trace(const FeatureMap& x, const WadmParams& params) {
    check_positive_shape(x.batch, x.channels, x.height, x.width);
    if (x.height % 2 != 0 || x.width % 2 != 0) {
        throw ValidationError("wadm_forward requires even spatial dimensions, got " +
                              std::to_string(x.height) + "x" + std::to_string(x.width));
    }
    if (params.projection.in_channels != 4 * x.channels) {
        throw ValidationError("projection kernel expects " +
                              std::to_string(params.projection.in_channels) +
                              " channels, wavelet features have " +
                              std::to_string(4 * x.channels));
    }

    WadmTrace trace;
    const int h2 = x.height / 2;
    const int w2 = x.width / 2;

    // subband-major stacking: [A_0..A_{C-1}, H_0.., V_0.., D_0..]
    trace.wavelet = FeatureMap(x.batch, 4 * x.channels, h2, w2);
    const std::size_t plane = static_cast<std::size_t>(h2) * w2;
    std::vector<double> a(plane), hh(plane), v(plane), d(plane);
    for (int b = 0; b < x.batch; ++b) {
        for (int c = 0; c < x.channels; ++c) {
            const std::span<const double> src(x.data.data() + x.index(b, c, 0, 0),
                                              static_cast<std::size_t>(x.height) * x.width);
            haar_dwt2_plane(src, x.height, x.width, a, hh, v, d);
            const std::vector<double>* bands[4] = {&a, &hh, &v, &d};
            for (int s = 0; s < 4; ++s) {
                std::copy(bands[s]->begin(), bands[s]->end(),
                          trace.wavelet.data.begin() +
                              trace.wavelet.index(b, s * x.channels + c, 0, 0));
            }
        }
    }

    trace.pooled = z_pool(trace.wavelet);
    trace.offsets = offset_conv(trace.pooled, params.offset_kernel);
    trace.deform_out = deformable_conv(trace.pooled, trace.offsets, params.deform_kernel);

    trace.scale_src = FeatureMap(x.batch, 1, h2, w2);
    for (int b = 0; b < x.batch; ++b) {
        for (int i = 0; i < h2; ++i) {
            for (int j = 0; j < w2; ++j) {
                double sum = 0.0;
                for (int c = 0; c < trace.deform_out.channels; ++c) {
                    sum += trace.deform_out.at(b, c, i, j);
                }
                trace.scale_src.at(b, 0, i, j) =
                    sum / static_cast<double>(trace.deform_out.channels);
            }
        }
    }

    trace.gated = attention_gate(trace.wavelet, trace.scale_src);
    trace.output = conv2d(trace.gated, params.projection);
    return trace;
}

FeatureMap wadm_forward(const FeatureMap& x, const WadmParams& params) {
    return wadm_forward_trace(x, params).output;
}

}  // namespace shadowfreq
