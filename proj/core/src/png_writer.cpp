#include "efm/png_writer.hpp"

#include "efm/errors.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>

namespace efm {

namespace {

std::uint32_t crc_of(const std::uint8_t* data, std::size_t len) {
    return static_cast<std::uint32_t>(
        crc32(0L, reinterpret_cast<const Bytef*>(data), static_cast<uInt>(len)));
}

void put_u32_be(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void write_chunk(std::ofstream& os, const char type[4],
                 const std::vector<std::uint8_t>& payload) {
    std::vector<std::uint8_t> buf;
    put_u32_be(buf, static_cast<std::uint32_t>(payload.size()));
    buf.insert(buf.end(), type, type + 4);
    buf.insert(buf.end(), payload.begin(), payload.end());
    const std::uint32_t crc = crc_of(buf.data() + 4, buf.size() - 4);
    put_u32_be(buf, crc);
    os.write(reinterpret_cast<const char*>(buf.data()),
             static_cast<std::streamsize>(buf.size()));
}

} // namespace

void write_png_rgb(const std::filesystem::path& path, std::size_t width,
                   std::size_t height, const std::vector<std::uint8_t>& rgb) {
    if (rgb.size() != width * height * 3)
        throw ValidationError("write_png_rgb: pixel buffer size mismatch");

    // Filter type 0 per scanline.
    std::vector<std::uint8_t> raw;
    raw.reserve(height * (1 + width * 3));
    for (std::size_t y = 0; y < height; ++y) {
        raw.push_back(0);
        raw.insert(raw.end(), rgb.begin() + static_cast<std::ptrdiff_t>(y * width * 3),
                   rgb.begin() + static_cast<std::ptrdiff_t>((y + 1) * width * 3));
    }

    uLongf zlen = compressBound(static_cast<uLong>(raw.size()));
    std::vector<std::uint8_t> zdata(zlen);
    // Fixed compression level keeps the output byte-stable across runs.
    if (compress2(zdata.data(), &zlen, raw.data(), static_cast<uLong>(raw.size()),
                  6) != Z_OK)
        throw NumericalError("write_png_rgb: deflate failed");
    zdata.resize(zlen);

    std::ofstream os(path, std::ios::binary);
    if (!os) throw ValidationError("write_png_rgb: cannot open " + path.string());
    static constexpr std::uint8_t sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    os.write(reinterpret_cast<const char*>(sig), 8);

    std::vector<std::uint8_t> ihdr;
    put_u32_be(ihdr, static_cast<std::uint32_t>(width));
    put_u32_be(ihdr, static_cast<std::uint32_t>(height));
    ihdr.push_back(8); // bit depth
    ihdr.push_back(2); // color type RGB
    ihdr.push_back(0);
    ihdr.push_back(0);
    ihdr.push_back(0);
    write_chunk(os, "IHDR", ihdr);
    write_chunk(os, "IDAT", zdata);
    write_chunk(os, "IEND", {});
    if (!os) throw ValidationError("write_png_rgb: write failed");
}

Rgb sequential_color(double x) {
    x = std::clamp(x, 0.0, 1.0);
    // Piecewise-linear ramp through fixed anchors.
    static constexpr std::array<std::array<double, 3>, 5> anchors = {{
        {0.05, 0.03, 0.35},
        {0.23, 0.30, 0.75},
        {0.13, 0.62, 0.55},
        {0.60, 0.85, 0.25},
        {0.99, 0.95, 0.15},
    }};
    const double pos = x * (anchors.size() - 1);
    const std::size_t k = std::min(static_cast<std::size_t>(pos), anchors.size() - 2);
    const double f = pos - static_cast<double>(k);
    auto mix = [&](int c) {
        return static_cast<std::uint8_t>(std::lround(
            255.0 * ((1.0 - f) * anchors[k][static_cast<std::size_t>(c)] +
                     f * anchors[k + 1][static_cast<std::size_t>(c)])));
    };
    return {mix(0), mix(1), mix(2)};
}

Rgb diverging_color(double x) {
    x = std::clamp(x, -1.0, 1.0);
    if (x < 0.0) {
        const double f = 1.0 + x; // 0 at -1, 1 at 0
        return {static_cast<std::uint8_t>(std::lround(255.0 * (0.2 + 0.8 * f))),
                static_cast<std::uint8_t>(std::lround(255.0 * (0.35 + 0.65 * f))),
                255};
    }
    const double f = 1.0 - x; // 1 at 0, 0 at +1
    return {255,
            static_cast<std::uint8_t>(std::lround(255.0 * (0.35 + 0.65 * f))),
            static_cast<std::uint8_t>(std::lround(255.0 * (0.2 + 0.8 * f)))};
}

} // namespace efm
