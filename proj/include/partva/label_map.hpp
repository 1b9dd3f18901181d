#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "partva/taxonomy.hpp"

namespace partva {

enum class LabelSpace : std::uint8_t { fine, aggregate };

// Rectangular grid of part labels, row-major, 0 = background. Immutable in
// spirit: the mutating members exist for construction; every pipeline
// operation returns a fresh map.
class LabelMap {
  public:
    LabelMap() = default;
    LabelMap(int width, int height, LabelSpace space = LabelSpace::fine);

    int width() const { return width_; }
    int height() const { return height_; }
    LabelSpace space() const { return space_; }

    std::uint8_t at(int x, int y) const { return cells_[idx(x, y)]; }
    void set(int x, int y, std::uint8_t label) { cells_[idx(x, y)] = label; }

    const std::vector<std::uint8_t>& cells() const { return cells_; }
    std::vector<std::uint8_t>& cells() { return cells_; }

    // Paints [x0,x1) x [y0,y1), clipped to the map.
    void fill_rect(int x0, int y0, int x1, int y1, std::uint8_t label);

    LabelMap crop(int x0, int y0, int x1, int y1) const;

    std::size_t foreground_count() const;
    std::size_t count(std::uint8_t label) const;
    bool in_bounds(int x, int y) const {
        return x >= 0 && x < width_ && y >= 0 && y < height_;
    }

    bool operator==(const LabelMap&) const = default;

  private:
    std::size_t idx(int x, int y) const {
        return static_cast<std::size_t>(y) * width_ + x;
    }

    int width_ = 0;
    int height_ = 0;
    LabelSpace space_ = LabelSpace::fine;
    std::vector<std::uint8_t> cells_;
};

// Horizontal flip. Fine maps additionally swap every left/right label pair;
// aggregate labels are side-agnostic.
LabelMap mirrored(const LabelMap& map);

// Replaces each fine label with its aggregate label; background is preserved.
LabelMap aggregated(const LabelMap& map);

// VALM1 text format: header "VALM1 <width> <height>", then height lines of
// width space-separated decimal label ids. UTF-8, LF line endings.
std::string to_valm(const LabelMap& map);
LabelMap from_valm(std::string_view text);
void save_valm(const LabelMap& map, const std::filesystem::path& file);
LabelMap load_valm(const std::filesystem::path& file);

// FNV-1a 64-bit, used for content addressing and manifest hashes.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xCBF29CE484222325ull);
std::string to_hex(std::uint64_t value);

}  // namespace partva
