#include "partva/label_map.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace partva {

LabelMap::LabelMap(int width, int height, LabelSpace space)
    : width_(width), height_(height), space_(space) {
    if (width < 1 || height < 1)
        throw std::invalid_argument("label map dimensions must be >= 1");
    cells_.assign(static_cast<std::size_t>(width) * height, kBackground);
}

void LabelMap::fill_rect(int x0, int y0, int x1, int y1, std::uint8_t label) {
    x0 = std::max(x0, 0);
    y0 = std::max(y0, 0);
    x1 = std::min(x1, width_);
    y1 = std::min(y1, height_);
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) cells_[idx(x, y)] = label;
}

LabelMap LabelMap::crop(int x0, int y0, int x1, int y1) const {
    if (x0 < 0 || y0 < 0 || x1 > width_ || y1 > height_ || x0 >= x1 || y0 >= y1)
        throw std::invalid_argument("crop window out of bounds");
    LabelMap out(x1 - x0, y1 - y0, space_);
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) out.set(x - x0, y - y0, at(x, y));
    return out;
}

std::size_t LabelMap::foreground_count() const {
    return cells_.size() - static_cast<std::size_t>(
        std::count(cells_.begin(), cells_.end(), kBackground));
}

std::size_t LabelMap::count(std::uint8_t label) const {
    return static_cast<std::size_t>(
        std::count(cells_.begin(), cells_.end(), label));
}

LabelMap mirrored(const LabelMap& map) {
    LabelMap out(map.width(), map.height(), map.space());
    const bool swap_labels = map.space() == LabelSpace::fine;
    for (int y = 0; y < map.height(); ++y) {
        for (int x = 0; x < map.width(); ++x) {
            std::uint8_t v = map.at(map.width() - 1 - x, y);
            out.set(x, y, swap_labels ? mirror_fine(v) : v);
        }
    }
    return out;
}

LabelMap aggregated(const LabelMap& map) {
    if (map.space() == LabelSpace::aggregate)
        throw std::invalid_argument("map is already aggregate-labeled");
    LabelMap out(map.width(), map.height(), LabelSpace::aggregate);
    for (std::size_t i = 0; i < map.cells().size(); ++i)
        out.cells()[i] = aggregate_of(map.cells()[i]);
    return out;
}

std::string to_valm(const LabelMap& map) {
    std::string out;
    out.reserve(static_cast<std::size_t>(map.width()) * map.height() * 3 + 32);
    out += "VALM1 ";
    out += std::to_string(map.width());
    out += ' ';
    out += std::to_string(map.height());
    out += '\n';
    for (int y = 0; y < map.height(); ++y) {
        for (int x = 0; x < map.width(); ++x) {
            if (x) out += ' ';
            out += std::to_string(static_cast<int>(map.at(x, y)));
        }
        out += '\n';
    }
    return out;
}

LabelMap from_valm(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string magic;
    int width = 0, height = 0;
    if (!(in >> magic >> width >> height) || magic != "VALM1")
        throw std::runtime_error("malformed VALM1 header");
    if (width < 1 || height < 1)
        throw std::runtime_error("malformed VALM1 dimensions");
    LabelMap map(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            int v = -1;
            if (!(in >> v)) throw std::runtime_error("truncated VALM1 payload");
            if (v < 0 || v > kNumFineParts)
                throw std::runtime_error("VALM1 cell value out of range");
            map.set(x, y, static_cast<std::uint8_t>(v));
        }
    }
    int extra;
    if (in >> extra) throw std::runtime_error("trailing data in VALM1 payload");
    return map;
}

void save_valm(const LabelMap& map, const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + file.string());
    const std::string text = to_valm(map);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw std::runtime_error("write failed: " + file.string());
}

LabelMap load_valm(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_valm(buf.str());
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

std::string to_hex(std::uint64_t value) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[value & 0xF];
        value >>= 4;
    }
    return out;
}

}  // namespace partva
