#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace efm {

// Minimal reproducible PNG output: fixed zlib settings, 8-bit RGB.
void write_png_rgb(const std::filesystem::path& path, std::size_t width,
                   std::size_t height, const std::vector<std::uint8_t>& rgb);

struct Rgb {
    std::uint8_t r, g, b;
};

/// Sequential colormap (dark blue to yellow) for x in [0, 1].
Rgb sequential_color(double x);
/// Diverging colormap (blue-white-red) for x in [-1, 1].
Rgb diverging_color(double x);

} // namespace efm
