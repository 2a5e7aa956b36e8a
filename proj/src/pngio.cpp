#include "zcradar/pngio.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace zcradar {

namespace {

void put_u32(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>((v >> 24) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>(v & 0xff));
}

void put_chunk(std::string& out, const char type[4], const std::string& payload) {
    put_u32(out, static_cast<std::uint32_t>(payload.size()));
    std::string body(type, 4);
    body += payload;
    out += body;
    std::uint32_t crc = static_cast<std::uint32_t>(
        crc32(0L, reinterpret_cast<const Bytef*>(body.data()), static_cast<uInt>(body.size())));
    put_u32(out, crc);
}

} // namespace

void write_png_rgb(const std::string& path, int width, int height,
                   const std::vector<unsigned char>& rgb) {
    if (width <= 0 || height <= 0 ||
        rgb.size() != static_cast<std::size_t>(width) * height * 3)
        throw std::invalid_argument("write_png_rgb: bad dimensions");

    // filter byte 0 prepended to each scanline
    std::vector<unsigned char> raw(static_cast<std::size_t>(height) * (1 + 3 * width));
    for (int y = 0; y < height; ++y) {
        unsigned char* row = raw.data() + static_cast<std::size_t>(y) * (1 + 3 * width);
        row[0] = 0;
        std::memcpy(row + 1, rgb.data() + static_cast<std::size_t>(y) * width * 3,
                    static_cast<std::size_t>(width) * 3);
    }

    uLongf bound = compressBound(static_cast<uLong>(raw.size()));
    std::vector<unsigned char> compressed(bound);
    if (compress2(compressed.data(), &bound, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK)
        throw std::runtime_error("write_png_rgb: deflate failed");
    compressed.resize(bound);

    std::string out("\x89PNG\r\n\x1a\n", 8);
    std::string ihdr;
    put_u32(ihdr, static_cast<std::uint32_t>(width));
    put_u32(ihdr, static_cast<std::uint32_t>(height));
    ihdr.push_back(8);   // bit depth
    ihdr.push_back(2);   // color type: truecolor
    ihdr.push_back(0);   // compression
    ihdr.push_back(0);   // filter
    ihdr.push_back(0);   // interlace
    put_chunk(out, "IHDR", ihdr);
    put_chunk(out, "IDAT", std::string(compressed.begin(), compressed.end()));
    put_chunk(out, "IEND", "");

    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot write " + path);
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
}

namespace {

// dark blue -> cyan -> yellow ramp
void colorize(double t, unsigned char* px) {
    t = std::clamp(t, 0.0, 1.0);
    double r = std::clamp(2.2 * t - 1.0, 0.0, 1.0);
    double g = std::clamp(1.6 * t, 0.0, 1.0) * 0.9;
    double b = std::clamp(1.0 - 1.4 * std::max(0.0, t - 0.35), 0.15, 1.0);
    px[0] = static_cast<unsigned char>(255 * r);
    px[1] = static_cast<unsigned char>(255 * g);
    px[2] = static_cast<unsigned char>(255 * b);
}

} // namespace

void write_magnitude_png(const std::string& path, int rows, int cols,
                         const std::vector<double>& values) {
    if (rows <= 0 || cols <= 0 || values.size() != static_cast<std::size_t>(rows) * cols)
        throw std::invalid_argument("write_magnitude_png: bad dimensions");
    double vmax = 0.0;
    for (double v : values) vmax = std::max(vmax, v);
    if (vmax <= 0.0) vmax = 1.0;
    const double floor_db = -60.0;

    int sx = std::max(1, 512 / cols);
    int sy = std::max(1, 512 / rows);
    int w = cols * sx, h = rows * sy;
    std::vector<unsigned char> rgb(static_cast<std::size_t>(w) * h * 3);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            double v = values[static_cast<std::size_t>(r) * cols + c] / vmax;
            double db = v > 0.0 ? 20.0 * std::log10(v) : floor_db;
            double t = (std::max(db, floor_db) - floor_db) / (-floor_db);
            unsigned char px[3];
            colorize(t, px);
            for (int yy = 0; yy < sy; ++yy)
                for (int xx = 0; xx < sx; ++xx) {
                    std::size_t o = (static_cast<std::size_t>(r * sy + yy) * w + c * sx + xx) * 3;
                    rgb[o] = px[0]; rgb[o + 1] = px[1]; rgb[o + 2] = px[2];
                }
        }
    }
    write_png_rgb(path, w, h, rgb);
}

void write_rate_plot(const std::string& path, const std::vector<double>& x,
                     const std::vector<std::vector<double>>& curves) {
    const int w = 640, h = 480, margin = 40;
    std::vector<unsigned char> rgb(static_cast<std::size_t>(w) * h * 3, 255);

    auto set_px = [&](int px, int py, unsigned char r, unsigned char g, unsigned char b) {
        if (px < 0 || px >= w || py < 0 || py >= h) return;
        std::size_t o = (static_cast<std::size_t>(py) * w + px) * 3;
        rgb[o] = r; rgb[o + 1] = g; rgb[o + 2] = b;
    };

    // axes
    for (int px = margin; px < w - margin; ++px) set_px(px, h - margin, 0, 0, 0);
    for (int py = margin; py < h - margin; ++py) set_px(margin, py, 0, 0, 0);
    // gridlines at rate 0.25/0.5/0.75/1.0
    for (double gy : {0.25, 0.5, 0.75, 1.0}) {
        int py = static_cast<int>((h - margin) - gy * (h - 2 * margin));
        for (int px = margin; px < w - margin; px += 4) set_px(px, py, 200, 200, 200);
    }

    if (x.size() >= 2) {
        double x0 = x.front(), x1 = x.back();
        if (x1 <= x0) x1 = x0 + 1.0;
        const unsigned char palette[][3] = {{200, 30, 30},  {30, 90, 200}, {30, 150, 60},
                                            {180, 120, 20}, {120, 40, 160}, {20, 140, 150}};
        for (std::size_t c = 0; c < curves.size(); ++c) {
            const auto& col = palette[c % 6];
            for (std::size_t i = 0; i + 1 < x.size() && i + 1 < curves[c].size(); ++i) {
                double ax = margin + (x[i] - x0) / (x1 - x0) * (w - 2 * margin);
                double ay = (h - margin) - std::clamp(curves[c][i], 0.0, 1.0) * (h - 2 * margin);
                double bx = margin + (x[i + 1] - x0) / (x1 - x0) * (w - 2 * margin);
                double by = (h - margin) - std::clamp(curves[c][i + 1], 0.0, 1.0) * (h - 2 * margin);
                int steps = static_cast<int>(std::max(std::abs(bx - ax), std::abs(by - ay))) + 1;
                for (int st = 0; st <= steps; ++st) {
                    double t = static_cast<double>(st) / steps;
                    int px = static_cast<int>(ax + t * (bx - ax));
                    int py = static_cast<int>(ay + t * (by - ay));
                    set_px(px, py, col[0], col[1], col[2]);
                    set_px(px, py + 1, col[0], col[1], col[2]);
                }
            }
        }
    }
    write_png_rgb(path, w, h, rgb);
}

} // namespace zcradar
