#include "partva/png_io.hpp"

#include <zlib.h>

#include <fstream>
#include <stdexcept>
#include <vector>

namespace partva {

const std::array<Rgb, kNumAggregateParts + 1>& label_palette() {
    static const std::array<Rgb, kNumAggregateParts + 1> palette = {{
        {240, 240, 240},  // background
        {31, 119, 180},   // door
        {174, 199, 232},  // window
        {152, 223, 138},  // windshield
        {44, 160, 44},    // hood
        {148, 103, 189},  // trunk
        {255, 127, 14},   // roof
        {255, 187, 120},  // mirror
        {140, 86, 75},    // bumper
        {64, 64, 64},     // wheel
        {255, 221, 51},   // headlight
        {214, 39, 40},    // taillight
        {197, 176, 213},  // plate
        {158, 218, 229},  // body
    }};
    return palette;
}

namespace {

void put_u32(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v >> 24));
    out.push_back(static_cast<char>(v >> 16));
    out.push_back(static_cast<char>(v >> 8));
    out.push_back(static_cast<char>(v));
}

void put_chunk(std::string& out, const char type[4], const std::string& data) {
    put_u32(out, static_cast<std::uint32_t>(data.size()));
    const std::size_t crc_start = out.size();
    out.append(type, 4);
    out += data;
    const auto* bytes = reinterpret_cast<const Bytef*>(out.data() + crc_start);
    const uLong crc =
        crc32(0L, bytes, static_cast<uInt>(out.size() - crc_start));
    put_u32(out, static_cast<std::uint32_t>(crc));
}

std::string deflate_bytes(const std::string& raw) {
    uLongf bound = compressBound(static_cast<uLong>(raw.size()));
    std::vector<Bytef> buf(bound);
    const int rc =
        compress2(buf.data(), &bound, reinterpret_cast<const Bytef*>(raw.data()),
                  static_cast<uLong>(raw.size()), Z_BEST_COMPRESSION);
    if (rc != Z_OK) throw std::runtime_error("png: deflate failed");
    return std::string(reinterpret_cast<const char*>(buf.data()), bound);
}

}  // namespace

std::string png_bytes(const LabelMap& map, int scale) {
    if (scale < 1) throw std::invalid_argument("png: scale must be >= 1");
    const LabelMap view =
        map.space() == LabelSpace::fine ? aggregated(map) : map;
    const int w = view.width() * scale;
    const int h = view.height() * scale;

    std::string out("\x89PNG\r\n\x1a\n", 8);

    std::string ihdr;
    put_u32(ihdr, static_cast<std::uint32_t>(w));
    put_u32(ihdr, static_cast<std::uint32_t>(h));
    ihdr.push_back(8);  // bit depth
    ihdr.push_back(3);  // palette color
    ihdr.push_back(0);  // deflate
    ihdr.push_back(0);  // adaptive filtering
    ihdr.push_back(0);  // no interlace
    put_chunk(out, "IHDR", ihdr);

    std::string plte;
    for (const Rgb& c : label_palette()) {
        plte.push_back(static_cast<char>(c.r));
        plte.push_back(static_cast<char>(c.g));
        plte.push_back(static_cast<char>(c.b));
    }
    put_chunk(out, "PLTE", plte);

    std::string raw;
    raw.reserve(static_cast<std::size_t>(h) * (static_cast<std::size_t>(w) + 1));
    for (int y = 0; y < h; ++y) {
        raw.push_back(0);  // filter: none
        for (int x = 0; x < w; ++x)
            raw.push_back(static_cast<char>(view.at(x / scale, y / scale)));
    }
    put_chunk(out, "IDAT", deflate_bytes(raw));
    put_chunk(out, "IEND", "");
    return out;
}

void save_png(const LabelMap& map, const std::filesystem::path& path, int scale) {
    const std::string bytes = png_bytes(map, scale);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace partva
