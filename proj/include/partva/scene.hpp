#pragma once

#include <optional>

#include "partva/label_map.hpp"
#include "partva/taxonomy.hpp"

namespace partva {

inline constexpr int kSceneWidth = 256;
inline constexpr int kSceneHeight = 128;

struct SceneSpec {
    CarType car_type = CarType::sedan;
    Orientation orientation = Orientation::left;
    std::optional<ComponentId> occluded_component;
};

struct SubregionSpec {
    ComponentId component = ComponentId::door_window;
    Granularity granularity = Granularity::part;
};

// Deterministic side-view layout of the requested car on a 256x128 grid.
// Every fine label on the near side or center of the car is present unless
// it belongs to the occluded component, in which case those pixels carry
// the near-side body panel label instead.
LabelMap render_whole_car(const SceneSpec& spec);

// Part crops are the tight bounding box of the component's member-part
// pixels plus a 4-pixel context margin. Piece crops cover 40-60% of the
// component's pixels (full bounding-box height, roughly half its width,
// shifted toward the car's front). Context labels inside the window are
// preserved. The input must be an unoccluded render.
LabelMap extract_subregion(const LabelMap& whole, const SubregionSpec& spec);

// Facing direction recovered from headlight vs taillight centroids.
Orientation infer_facing(const LabelMap& whole);

inline constexpr int kPartCropMargin = 4;

}  // namespace partva
