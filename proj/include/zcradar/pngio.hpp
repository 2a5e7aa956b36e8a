// Minimal PNG output (zlib-compressed, 8-bit RGB) for map images and
// rate-vs-SNR line plots.

#pragma once

#include <string>
#include <vector>

namespace zcradar {

// rgb is row-major, 3 bytes per pixel, top row first.
void write_png_rgb(const std::string& path, int width, int height,
                   const std::vector<unsigned char>& rgb);

// Log-magnitude heat map; values row-major [rows x cols], rendered with
// one pixel per cell scaled up to a minimum size.
void write_magnitude_png(const std::string& path, int rows, int cols,
                         const std::vector<double>& values);

// One polyline per curve over the shared x grid; y values expected in [0, 1].
void write_rate_plot(const std::string& path, const std::vector<double>& x,
                     const std::vector<std::vector<double>>& curves);

} // namespace zcradar
