#include <png.h>

#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "colobench/errors.hpp"
#include "colobench/io.hpp"

namespace colobench {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// libpng reports errors through longjmp; the handler stashes the message
// so we can rethrow it as a typed exception once the stack is safe.
void png_error_handler(png_structp png, png_const_charp msg) {
    auto* err = static_cast<std::string*>(png_get_error_ptr(png));
    if (err) *err = msg;
    longjmp(png_jmpbuf(png), 1);
}

void png_warn_handler(png_structp, png_const_charp) {}

}  // namespace

DepthMap load_depth_png(const std::filesystem::path& path,
                        double full_scale_cm) {
    FilePtr file(std::fopen(path.string().c_str(), "rb"));
    if (!file) {
        throw IoError("cannot open depth PNG: " + path.string());
    }

    unsigned char sig[8];
    if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8)) {
        throw FormatError("not a PNG file: " + path.string());
    }

    std::string png_msg;
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &png_msg,
                                             png_error_handler,
                                             png_warn_handler);
    if (!png) throw IoError("png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("png_create_info_struct failed");
    }

    std::vector<std::vector<png_byte>> rows;
    png_uint_32 width = 0, height = 0;
    int bit_depth = 0, color_type = 0;

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw FormatError("corrupt PNG " + path.string() + ": " + png_msg);
    }

    png_init_io(png, file.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);
    png_get_IHDR(png, info, &width, &height, &bit_depth, &color_type, nullptr,
                 nullptr, nullptr);

    if (color_type != PNG_COLOR_TYPE_GRAY || bit_depth != 16) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw FormatError("depth PNG must be single-channel 16-bit, got " +
                          std::to_string(bit_depth) + "-bit color type " +
                          std::to_string(color_type) + ": " + path.string());
    }

    rows.assign(height, std::vector<png_byte>(width * 2));
    for (png_uint_32 r = 0; r < height; ++r) {
        png_read_row(png, rows[r].data(), nullptr);
    }
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    DepthMap map(static_cast<int>(width), static_cast<int>(height));
    const double scale = full_scale_cm / 65535.0;
    for (png_uint_32 r = 0; r < height; ++r) {
        const png_byte* row = rows[r].data();
        for (png_uint_32 c = 0; c < width; ++c) {
            // PNG stores 16-bit samples big-endian.
            const uint16_t raw = static_cast<uint16_t>(row[2 * c] << 8) |
                                 static_cast<uint16_t>(row[2 * c + 1]);
            map.at(static_cast<int>(r), static_cast<int>(c)) =
                static_cast<float>(raw * scale);
        }
    }
    return map;
}

void save_depth_png(const DepthMap& map, const std::filesystem::path& path,
                    double full_scale_cm) {
    for (size_t i = 0; i < map.data.size(); ++i) {
        const float v = map.data[i];
        if (!(v >= 0.0f && v <= full_scale_cm)) {
            throw RangeError("depth value " + std::to_string(v) +
                             " outside [0, " + std::to_string(full_scale_cm) +
                             "] cm at pixel " + std::to_string(i));
        }
    }

    FilePtr file(std::fopen(path.string().c_str(), "wb"));
    if (!file) {
        throw IoError("cannot open for writing: " + path.string());
    }

    std::string png_msg;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &png_msg,
                                              png_error_handler,
                                              png_warn_handler);
    if (!png) throw IoError("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("png_create_info_struct failed");
    }

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("PNG write failed for " + path.string() + ": " +
                      png_msg);
    }

    png_init_io(png, file.get());
    png_set_IHDR(png, info, map.width, map.height, 16, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    std::vector<png_byte> row(static_cast<size_t>(map.width) * 2);
    const double quant = 65535.0 / full_scale_cm;
    for (int r = 0; r < map.height; ++r) {
        for (int c = 0; c < map.width; ++c) {
            const auto raw = static_cast<uint16_t>(
                std::lround(static_cast<double>(map.at(r, c)) * quant));
            row[2 * c] = static_cast<png_byte>(raw >> 8);
            row[2 * c + 1] = static_cast<png_byte>(raw & 0xff);
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace colobench
