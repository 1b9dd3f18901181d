#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>

#include "partva/label_map.hpp"
#include "partva/taxonomy.hpp"

namespace partva {

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    bool operator==(const Rgb&) const = default;
};

// Fixed 14-color palette indexed by aggregate label (0 = background).
const std::array<Rgb, kNumAggregateParts + 1>& label_palette();

// Paletted (color type 3) PNG of the map; fine maps are aggregated first.
// `scale` >= 1 blows each cell up to scale x scale pixels.
std::string png_bytes(const LabelMap& map, int scale = 1);
void save_png(const LabelMap& map, const std::filesystem::path& path,
              int scale = 1);

}  // namespace partva
