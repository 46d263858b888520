#include "crosseai/io/overlay.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>

#include "crosseai/errors.hpp"
#include "crosseai/map_core.hpp"

namespace crosseai::io {
namespace {

void set_pixel(RgbImage& img, int x, int y, Rgb c) {
    auto* p = img.pixels.data() + (static_cast<std::size_t>(y) * img.width + x) * 3;
    p[0] = c.r;
    p[1] = c.g;
    p[2] = c.b;
}

void draw_outline(RgbImage& img, const BoundingBox& box, Rgb color, int thickness) {
    const BoundingBox b{std::clamp(box.x1, 0, img.width), std::clamp(box.y1, 0, img.height),
                        std::clamp(box.x2, 0, img.width), std::clamp(box.y2, 0, img.height)};
    for (int y = b.y1; y < b.y2; ++y) {
        for (int x = b.x1; x < b.x2; ++x) {
            const bool edge = x - b.x1 < thickness || b.x2 - 1 - x < thickness || y - b.y1 < thickness ||
                              b.y2 - 1 - y < thickness;
            if (edge) set_pixel(img, x, y, color);
        }
    }
}

}  // namespace

Rgb RgbImage::at(int x, int y) const {
    const auto* p = pixels.data() + (static_cast<std::size_t>(y) * width + x) * 3;
    return Rgb{p[0], p[1], p[2]};
}

RgbImage render_overlay(const SaliencyMap& background, const BoundingBox& generated,
                        const std::optional<BoundingBox>& truth, int thickness) {
    const SaliencyMap gray = scale_to_255(background);
    RgbImage img{gray.width(), gray.height(), std::vector<std::uint8_t>(gray.size() * 3)};
    for (int y = 0; y < gray.height(); ++y) {
        for (int x = 0; x < gray.width(); ++x) {
            const auto v = static_cast<std::uint8_t>(std::lround(gray.at(x, y)));
            set_pixel(img, x, y, Rgb{v, v, v});
        }
    }
    if (truth) draw_outline(img, *truth, kGroundTruthColor, thickness);
    draw_outline(img, generated, kGeneratedColor, thickness);
    return img;
}

void write_png(const RgbImage& image, const std::filesystem::path& path) {
    std::unique_ptr<FILE, int (*)(FILE*)> fp(std::fopen(path.c_str(), "wb"), &std::fclose);
    if (!fp) throw IoError("cannot open '" + path.string() + "' for writing");

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (png == nullptr) throw IoError("libpng initialization failed");
    png_infop info = png_create_info_struct(png);
    if (info == nullptr) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("libpng initialization failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("PNG encoding failed for '" + path.string() + "'");
    }

    png_init_io(png, fp.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(image.width), static_cast<png_uint_32>(image.height), 8,
                 PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < image.height; ++y) {
        auto* row = const_cast<png_bytep>(image.pixels.data() + static_cast<std::size_t>(y) * image.width * 3);
        png_write_row(png, row);
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace crosseai::io
