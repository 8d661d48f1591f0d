#include "deblur/image_io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include <png.h>

#include "deblur/errors.hpp"

namespace deblur {

namespace {

using FilePtr = std::unique_ptr<std::FILE, decltype(&std::fclose)>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode), &std::fclose);
    if (!f) throw IoError("cannot open '" + path.string() + "'");
    return f;
}

ImageGrid read_png(const std::filesystem::path& path) {
    FilePtr file = open_file(path, "rb");
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("libpng: cannot create read struct");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("libpng: cannot create info struct");
    }
    std::vector<png_bytep> rows;
    std::vector<unsigned char> buffer;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("'" + path.string() + "' is not a readable PNG");
    }
    png_init_io(png, file.get());
    png_read_info(png, info);
    const auto width = png_get_image_width(png, info);
    const auto height = png_get_image_height(png, info);
    const int color = png_get_color_type(png, info);
    int depth = png_get_bit_depth(png, info);
    if (color != PNG_COLOR_TYPE_GRAY) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("'" + path.string() + "': only grayscale PNG is supported");
    }
    if (depth < 8) {
        png_set_expand_gray_1_2_4_to_8(png);
        depth = 8;
    }
    if (depth == 16) png_set_swap(png);  // host order on little-endian
    png_read_update_info(png, info);
    const std::size_t stride = png_get_rowbytes(png, info);
    buffer.resize(stride * height);
    rows.resize(height);
    for (std::size_t r = 0; r < height; ++r) rows[r] = buffer.data() + r * stride;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    ImageGrid img(height, width);
    const double maxval = depth == 16 ? 65535.0 : 255.0;
    for (std::size_t r = 0; r < height; ++r) {
        for (std::size_t c = 0; c < width; ++c) {
            double v;
            if (depth == 16) {
                std::uint16_t s;
                std::memcpy(&s, rows[r] + 2 * c, 2);
                v = s;
            } else {
                v = rows[r][c];
            }
            img(r, c) = std::clamp(v / maxval, 0.0, 1.0);
        }
    }
    return img;
}

// Skips whitespace and '#' comments in a PNM header.
std::size_t read_pnm_number(std::istream& in) {
    int ch;
    while ((ch = in.peek()) != EOF) {
        if (ch == '#') {
            std::string line;
            std::getline(in, line);
        } else if (std::isspace(ch)) {
            in.get();
        } else {
            break;
        }
    }
    std::size_t v = 0;
    if (!(in >> v)) throw IoError("malformed PGM header");
    return v;
}

ImageGrid read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::string magic(2, '\0');
    in.read(magic.data(), 2);
    if (magic != "P5") throw IoError("'" + path.string() + "' is not a binary PGM");
    const std::size_t width = read_pnm_number(in);
    const std::size_t height = read_pnm_number(in);
    const std::size_t maxval = read_pnm_number(in);
    in.get();  // single whitespace before raster
    if (width == 0 || height == 0 || maxval == 0 || maxval > 65535) throw IoError("unsupported PGM header");
    const std::size_t bytes = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> raster(width * height * bytes);
    in.read(reinterpret_cast<char*>(raster.data()), static_cast<std::streamsize>(raster.size()));
    if (in.gcount() != static_cast<std::streamsize>(raster.size())) throw IoError("truncated PGM raster");
    ImageGrid img(height, width);
    for (std::size_t i = 0; i < width * height; ++i) {
        const double v = bytes == 2 ? (raster[2 * i] << 8 | raster[2 * i + 1]) : raster[i];
        img[i] = std::clamp(v / static_cast<double>(maxval), 0.0, 1.0);
    }
    return img;
}

} // namespace

ImageGrid read_image(const std::filesystem::path& path) {
    std::array<unsigned char, 8> sig{};
    {
        FilePtr f = open_file(path, "rb");
        if (std::fread(sig.data(), 1, sig.size(), f.get()) < 2) throw IoError("'" + path.string() + "' is too short");
    }
    if (png_sig_cmp(sig.data(), 0, sig.size()) == 0) return read_png(path);
    if (sig[0] == 'P' && sig[1] == '5') return read_pgm(path);
    throw IoError("'" + path.string() + "': unrecognized image format (expected PNG or binary PGM)");
}

void write_png(const std::filesystem::path& path, const ImageGrid& img) {
    FilePtr file = open_file(path, "wb");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("libpng: cannot create write struct");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("libpng: cannot create info struct");
    }
    std::vector<unsigned char> buffer(img.size());
    for (std::size_t i = 0; i < img.size(); ++i) {
        buffer[i] = static_cast<unsigned char>(std::lround(std::clamp(img[i], 0.0, 1.0) * 255.0));
    }
    std::vector<png_bytep> rows(img.height());
    for (std::size_t r = 0; r < img.height(); ++r) rows[r] = buffer.data() + r * img.width();
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("failed writing '" + path.string() + "'");
    }
    png_init_io(png, file.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.width()), static_cast<png_uint_32>(img.height()), 8,
                 PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

void write_pgm(const std::filesystem::path& path, const ImageGrid& img, bool sixteen_bit) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    const unsigned maxval = sixteen_bit ? 65535u : 255u;
    out << "P5\n" << img.width() << ' ' << img.height() << '\n' << maxval << '\n';
    for (double v : img.values()) {
        const auto q = static_cast<unsigned>(std::lround(std::clamp(v, 0.0, 1.0) * maxval));
        if (sixteen_bit) out.put(static_cast<char>(q >> 8));
        out.put(static_cast<char>(q & 0xff));
    }
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

} // namespace deblur
