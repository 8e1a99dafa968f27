#pragma once

#include <string>
#include <vector>

#include "eagle/image.hpp"

namespace eagle {

/// Sidecar metadata stored next to each raw image payload.
struct ImageFileHeader {
    int width = 0;
    int height = 0;
    std::string dtype = "f32le";
    std::string description;
};

/// Write row-major 32-bit little-endian floats to `path` and the JSON sidecar
/// to `path + ".json"`. Round-trips bit-exactly for float-valued samples.
void write_image(const std::string& path, const Image& img, const std::string& description = "");

Image read_image(const std::string& path);

ImageFileHeader read_image_header(const std::string& path);

/// Binary 8-bit PGM with linear windowing: window_min maps to 0, window_max to
/// 255, values clamped; the in-window map is floor((v-min)/(max-min) * 255).
void export_pgm(const std::string& path, const Image& img, double window_min, double window_max);

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

/// One RFC-4180 CSV line (fields quoted only when needed), without newline.
std::string csv_line(const std::vector<std::string>& fields);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

} // namespace eagle
