#include "shadowfreq/image_io.hpp"

#include <png.h>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>
#include <vector>

namespace shadowfreq {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

bool has_png_signature(std::FILE* f) {
    unsigned char sig[8];
    const std::size_t n = std::fread(sig, 1, 8, f);
    std::rewind(f);
    return n == 8 && png_sig_cmp(sig, 0, 8) == 0;
}

Image load_png(std::FILE* f, const std::string& path) {
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("failed to initialize PNG reader for " + path);
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("failed to initialize PNG reader for " + path);
    }

    std::vector<png_bytep> row_ptrs;
    std::vector<unsigned char> pixels;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("corrupt or truncated PNG: " + path);
    }

    png_init_io(png, f);
    png_read_info(png, info);

    const int bit_depth = png_get_bit_depth(png, info);
    const int color_type = png_get_color_type(png, info);
    if (bit_depth == 16) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("unsupported bit depth 16 in " + path + " (8-bit only)");
    }

    // Normalize everything to 8-bit gray or RGB, dropping alpha.
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_strip_alpha(png);
    png_read_update_info(png, info);

    const png_uint_32 width = png_get_image_width(png, info);
    const png_uint_32 height = png_get_image_height(png, info);
    const int channels = png_get_channels(png, info);
    if (channels != 1 && channels != 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("unsupported PNG color type in " + path);
    }

    const std::size_t stride = static_cast<std::size_t>(width) * channels;
    pixels.resize(stride * height);
    row_ptrs.resize(height);
    for (png_uint_32 r = 0; r < height; ++r) {
        row_ptrs[r] = pixels.data() + r * stride;
    }
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    std::vector<double> data(pixels.size());
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        data[i] = pixels[i] / 255.0;
    }
    return Image(static_cast<int>(height), static_cast<int>(width), channels,
                 ColorSpace::SRGB, std::move(data));
}

// Reads one PNM header token, skipping whitespace and '#' comments.
std::string pnm_token(std::FILE* f, const std::string& path) {
    std::string tok;
    int c = std::fgetc(f);
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = std::fgetc(f);
        } else if (!std::isspace(c)) {
            break;
        }
        c = std::fgetc(f);
    }
    while (c != EOF && !std::isspace(c)) {
        tok.push_back(static_cast<char>(c));
        c = std::fgetc(f);
    }
    if (tok.empty()) throw IoError("unexpected end of file in " + path);
    return tok;
}

long pnm_int(std::FILE* f, const std::string& path) {
    const std::string tok = pnm_token(f, path);
    try {
        return std::stol(tok);
    } catch (const std::exception&) {
        throw IoError("malformed PNM header in " + path);
    }
}

Image load_pnm(std::FILE* f, const std::string& path) {
    char magic[3] = {0, 0, 0};
    if (std::fread(magic, 1, 2, f) != 2) {
        throw IoError("unexpected end of file in " + path);
    }
    int channels = 0;
    if (magic[0] == 'P' && magic[1] == '5') channels = 1;
    else if (magic[0] == 'P' && magic[1] == '6') channels = 3;
    else throw IoError("unsupported image format in " + path + " (expected PNG, PPM P6 or PGM P5)");

    const long width = pnm_int(f, path);
    const long height = pnm_int(f, path);
    const long maxval = pnm_int(f, path);
    if (width < 1 || height < 1) throw IoError("invalid PNM dimensions in " + path);
    if (maxval != 255) {
        throw IoError("unsupported bit depth in " + path + " (maxval must be 255)");
    }

    const std::size_t count = static_cast<std::size_t>(width) * height * channels;
    std::vector<unsigned char> raw(count);
    if (std::fread(raw.data(), 1, count, f) != count) {
        throw IoError("unexpected end of file in " + path);
    }
    std::vector<double> data(count);
    for (std::size_t i = 0; i < count; ++i) {
        data[i] = raw[i] / 255.0;
    }
    return Image(static_cast<int>(height), static_cast<int>(width), channels,
                 ColorSpace::SRGB, std::move(data));
}

}  // namespace

Image load_image(const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "rb"));
    if (!f) throw IoError("cannot open " + path);
    if (has_png_signature(f.get())) {
        return load_png(f.get(), path);
    }
    return load_pnm(f.get(), path);
}

void save_image(const Image& img, const std::string& path) {
    if (img.colorspace() != ColorSpace::SRGB) {
        throw ValidationError("convert to SRGB before saving (got " +
                              std::string(to_string(img.colorspace())) + ")");
    }

    FilePtr f(std::fopen(path.c_str(), "wb"));
    if (!f) throw IoError("cannot write " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("failed to initialize PNG writer for " + path);
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("failed to initialize PNG writer for " + path);
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("PNG write failed for " + path);
    }

    png_init_io(png, f.get());
    const int color_type = img.channels() == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB;
    png_set_IHDR(png, info, img.width(), img.height(), 8, color_type,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    const std::size_t stride = static_cast<std::size_t>(img.width()) * img.channels();
    std::vector<unsigned char> row(stride);
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            for (int ch = 0; ch < img.channels(); ++ch) {
                const double v = std::clamp(img.at(r, c, ch), 0.0, 1.0);
                row[static_cast<std::size_t>(c) * img.channels() + ch] =
                    static_cast<unsigned char>(std::lround(v * 255.0));
            }
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace shadowfreq
