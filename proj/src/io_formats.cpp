#include "eagle/io_formats.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace eagle {

namespace {

static_assert(sizeof(float) == 4, "requires 32-bit float");

std::string sidecar_path(const std::string& path) { return path + ".json"; }

void byteswap_if_big_endian(std::vector<std::uint32_t>& words) {
    if constexpr (std::endian::native == std::endian::big) {
        for (auto& w : words) {
            w = ((w & 0xff000000u) >> 24) | ((w & 0x00ff0000u) >> 8) | ((w & 0x0000ff00u) << 8) |
                ((w & 0x000000ffu) << 24);
        }
    }
}

} // namespace

void write_image(const std::string& path, const Image& img, const std::string& description) {
    require_valid(img, "write_image");
    if (!all_finite(img)) throw IoError("write_image: image contains non-finite samples");

    std::vector<std::uint32_t> words(img.size());
    for (std::size_t i = 0; i < img.size(); ++i) {
        const float f = static_cast<float>(img.samples[i]);
        std::uint32_t w;
        std::memcpy(&w, &f, 4);
        words[i] = w;
    }
    byteswap_if_big_endian(words);

    std::ofstream payload(path, std::ios::binary | std::ios::trunc);
    if (!payload) throw IoError("write_image: cannot open '" + path + "' for writing");
    payload.write(reinterpret_cast<const char*>(words.data()),
                  static_cast<std::streamsize>(words.size() * 4));
    if (!payload) throw IoError("write_image: short write to '" + path + "'");
    payload.close();

    nlohmann::json meta;
    meta["width"] = img.width;
    meta["height"] = img.height;
    meta["dtype"] = "f32le";
    meta["description"] = description;
    std::ofstream side(sidecar_path(path), std::ios::trunc);
    if (!side) throw IoError("write_image: cannot open '" + sidecar_path(path) + "' for writing");
    side << meta.dump(2) << "\n";
    if (!side) throw IoError("write_image: short write to '" + sidecar_path(path) + "'");
}

ImageFileHeader read_image_header(const std::string& path) {
    std::ifstream side(sidecar_path(path));
    if (!side) throw IoError("read_image: missing header '" + sidecar_path(path) + "'");
    nlohmann::json meta;
    try {
        side >> meta;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("read_image: corrupt header '" + sidecar_path(path) + "': " + e.what());
    }
    ImageFileHeader header;
    try {
        header.width = meta.at("width").get<int>();
        header.height = meta.at("height").get<int>();
        header.dtype = meta.at("dtype").get<std::string>();
        header.description = meta.value("description", std::string{});
    } catch (const nlohmann::json::exception& e) {
        throw IoError("read_image: corrupt header '" + sidecar_path(path) + "': " + e.what());
    }
    if (header.width < 1 || header.height < 1) {
        throw IoError("read_image: corrupt header: nonpositive dimensions");
    }
    if (header.dtype != "f32le") {
        throw IoError("read_image: unsupported dtype '" + header.dtype + "', expected f32le");
    }
    return header;
}

Image read_image(const std::string& path) {
    const ImageFileHeader header = read_image_header(path);
    std::ifstream payload(path, std::ios::binary);
    if (!payload) throw IoError("read_image: cannot open '" + path + "'");
    payload.seekg(0, std::ios::end);
    const std::uint64_t actual = static_cast<std::uint64_t>(payload.tellg());
    payload.seekg(0, std::ios::beg);
    const std::uint64_t expected =
        static_cast<std::uint64_t>(header.width) * header.height * 4ull;
    if (actual != expected) {
        throw IoError("read_image: '" + path + "' payload size mismatch, expected " +
                      std::to_string(expected) + " bytes, got " + std::to_string(actual));
    }
    std::vector<std::uint32_t> words(static_cast<std::size_t>(header.width) * header.height);
    payload.read(reinterpret_cast<char*>(words.data()), static_cast<std::streamsize>(expected));
    if (!payload) throw IoError("read_image: short read from '" + path + "'");
    byteswap_if_big_endian(words);

    Image img(header.width, header.height);
    for (std::size_t i = 0; i < words.size(); ++i) {
        float f;
        std::memcpy(&f, &words[i], 4);
        img.samples[i] = static_cast<double>(f);
        if (!std::isfinite(img.samples[i])) {
            throw IoError("read_image: non-finite sample at index " + std::to_string(i));
        }
    }
    return img;
}

void export_pgm(const std::string& path, const Image& img, double window_min, double window_max) {
    require_valid(img, "export_pgm");
    if (!(window_max > window_min)) {
        throw ParameterError("export_pgm: window_max must exceed window_min");
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("export_pgm: cannot open '" + path + "' for writing");
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    const double scale = 255.0 / (window_max - window_min);
    std::vector<unsigned char> row(static_cast<std::size_t>(img.width));
    for (int r = 0; r < img.height; ++r) {
        for (int c = 0; c < img.width; ++c) {
            const double t = (img.at(r, c) - window_min) * scale;
            const double clamped = std::clamp(std::floor(t), 0.0, 255.0);
            row[static_cast<std::size_t>(c)] = static_cast<unsigned char>(clamped);
        }
        out.write(reinterpret_cast<const char*>(row.data()), img.width);
    }
    if (!out) throw IoError("export_pgm: short write to '" + path + "'");
}

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::string csv_line(const std::vector<std::string>& fields) {
    std::ostringstream out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) out << ",";
        const std::string& f = fields[i];
        if (f.find_first_of(",\"\n\r") != std::string::npos) {
            out << '"';
            for (char ch : f) {
                if (ch == '"') out << '"';
                out << ch;
            }
            out << '"';
        } else {
            out << f;
        }
    }
    return out.str();
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("write_csv: cannot open '" + path + "' for writing");
    out << csv_line(header) << "\n";
    for (const auto& row : rows) out << csv_line(row) << "\n";
    if (!out) throw IoError("write_csv: short write to '" + path + "'");
}

} // namespace eagle
