#include "partva/scene.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace partva {

namespace {

// Side-view layout parameters, designed facing left (nose toward x = 0).
// y grows downward. All rectangles are half-open.
struct CarDims {
    int nose, tail;            // body x extent
    int belt;                  // top of the door row
    int body_bot;              // bottom of body slab / top of sill
    int sill_bot;              // bottom of chassis band
    int roof_top, roof_bot;    // roof band
    int roof_x0, roof_x1;
    int cabin_x0, cabin_x1;    // pillar filler behind the glass
    int ws_x0, ws_x1;          // windshield
    int rw_x0, rw_x1;          // rear window
    int glass_top;             // top of the side windows
    int hood_x0, hood_x1, hood_top;
    int trunk_x0, trunk_x1, trunk_top;
    int fdoor_x0, fdoor_x1, bdoor_x0, bdoor_x1, door_bot;
    int fwin_x0, fwin_x1, bwin_x0, bwin_x1;
    int fwheel_cx, bwheel_cx, wheel_half, wheel_top, wheel_bot;
    int bump_w, bump_back_w, bump_top, bump_bot;
    int grille_top, grille_bot;
    int light_w, light_top, light_bot;
    int plate_w, plate_top, plate_bot;
    int mirror_x0, mirror_x1, mirror_top, mirror_bot;
};

// One hand-designed silhouette per car type; proportions are what tell the
// types apart downstream, so each profile is deliberately distinct (three-box
// sedan, tall SUV, long-roof wagon, cab-plus-bed truck, one-box minivan).
const CarDims& dims_for(CarType type) {
    static const CarDims sedan = {
        /*nose*/ 24, /*tail*/ 232, /*belt*/ 66, /*body_bot*/ 106, /*sill_bot*/ 116,
        /*roof*/ 34, 42, /*roof_x*/ 114, 172,
        /*cabin*/ 92, 192,
        /*ws*/ 92, 112, /*rw*/ 176, 192, /*glass_top*/ 44,
        /*hood*/ 34, 92, 56,
        /*trunk*/ 194, 218, 54,
        /*doors*/ 100, 146, 148, 182, 104,
        /*wins*/ 114, 126, 160, 174,
        /*wheels*/ 66, 192, 14, 94, 122,
        /*bump*/ 28, 12, 74, 94,
        /*grille*/ 64, 74,
        /*light*/ 16, 94, 112,
        /*plate*/ 10, 100, 108,
        /*mirror*/ 86, 94, 56, 62,
    };
    static const CarDims suv = {
        /*nose*/ 28, /*tail*/ 230, /*belt*/ 58, /*body_bot*/ 106, /*sill_bot*/ 118,
        /*roof*/ 20, 30, /*roof_x*/ 96, 210,
        /*cabin*/ 84, 214,
        /*ws*/ 84, 106, /*rw*/ 196, 214, /*glass_top*/ 32,
        /*hood*/ 36, 84, 48,
        /*trunk*/ 212, 228, 42,
        /*doors*/ 90, 142, 144, 186, 104,
        /*wins*/ 110, 126, 172, 186,
        /*wheels*/ 70, 190, 14, 94, 122,
        /*bump*/ 28, 12, 74, 94,
        /*grille*/ 64, 74,
        /*light*/ 16, 94, 112,
        /*plate*/ 10, 100, 108,
        /*mirror*/ 76, 84, 50, 56,
    };
    static const CarDims wagon = {
        /*nose*/ 24, /*tail*/ 234, /*belt*/ 64, /*body_bot*/ 106, /*sill_bot*/ 116,
        /*roof*/ 32, 40, /*roof_x*/ 112, 206,
        /*cabin*/ 90, 210,
        /*ws*/ 90, 112, /*rw*/ 192, 210, /*glass_top*/ 42,
        /*hood*/ 34, 90, 54,
        /*trunk*/ 210, 228, 52,
        /*doors*/ 98, 146, 148, 186, 104,
        /*wins*/ 116, 132, 172, 184,
        /*wheels*/ 66, 194, 14, 94, 122,
        /*bump*/ 28, 12, 74, 94,
        /*grille*/ 64, 74,
        /*light*/ 16, 94, 112,
        /*plate*/ 10, 100, 108,
        /*mirror*/ 82, 90, 54, 60,
    };
    static const CarDims truck = {
        /*nose*/ 22, /*tail*/ 236, /*belt*/ 60, /*body_bot*/ 106, /*sill_bot*/ 118,
        /*roof*/ 26, 34, /*roof_x*/ 96, 148,
        /*cabin*/ 78, 156,
        /*ws*/ 78, 94, /*rw*/ 144, 156, /*glass_top*/ 36,
        /*hood*/ 32, 78, 50,
        /*trunk*/ 180, 224, 52,
        /*doors*/ 84, 128, 130, 152, 102,
        /*wins*/ 96, 106, 130, 142,
        /*wheels*/ 64, 192, 14, 94, 122,
        /*bump*/ 28, 12, 74, 94,
        /*grille*/ 64, 74,
        /*light*/ 16, 94, 112,
        /*plate*/ 10, 100, 108,
        /*mirror*/ 70, 78, 52, 58,
    };
    static const CarDims minivan = {
        /*nose*/ 26, /*tail*/ 232, /*belt*/ 62, /*body_bot*/ 106, /*sill_bot*/ 118,
        /*roof*/ 18, 28, /*roof_x*/ 84, 214,
        /*cabin*/ 70, 218,
        /*ws*/ 84, 104, /*rw*/ 200, 214, /*glass_top*/ 30,
        /*hood*/ 26, 82, 50,
        /*trunk*/ 216, 230, 44,
        /*doors*/ 86, 134, 136, 188, 104,
        /*wins*/ 106, 118, 172, 184,
        /*wheels*/ 68, 192, 14, 94, 122,
        /*bump*/ 28, 12, 74, 94,
        /*grille*/ 64, 74,
        /*light*/ 16, 94, 112,
        /*plate*/ 10, 100, 108,
        /*mirror*/ 76, 84, 44, 50,
    };
    switch (type) {
        case CarType::sedan: return sedan;
        case CarType::suv: return suv;
        case CarType::wagon: return wagon;
        case CarType::truck: return truck;
        case CarType::minivan: return minivan;
    }
    throw std::invalid_argument("unknown car type");
}

LabelMap render_facing_left(CarType type) {
    const CarDims& d = dims_for(type);
    LabelMap m(kSceneWidth, kSceneHeight);

    // Painter's order: large slabs first, details over them.
    m.fill_rect(d.nose, d.belt, d.tail, d.body_bot, fine::left_body_panel);
    m.fill_rect(d.cabin_x0, d.roof_bot, d.cabin_x1, d.belt, fine::left_body_panel);
    m.fill_rect(d.nose + 4, d.body_bot, d.tail - 4, d.sill_bot, fine::chassis);
    m.fill_rect(d.hood_x0, d.hood_top, d.hood_x1, d.belt, fine::hood);
    m.fill_rect(d.trunk_x0, d.trunk_top, d.trunk_x1, d.belt, fine::trunk);
    m.fill_rect(d.roof_x0, d.roof_top, d.roof_x1, d.roof_bot, fine::roof);
    m.fill_rect(d.ws_x0, d.roof_bot, d.ws_x1, d.belt, fine::windshield);
    m.fill_rect(d.rw_x0, d.glass_top, d.rw_x1, d.belt, fine::rear_window);
    m.fill_rect(d.fdoor_x0, d.belt, d.fdoor_x1, d.door_bot, fine::front_left_door);
    m.fill_rect(d.bdoor_x0, d.belt, d.bdoor_x1, d.door_bot, fine::back_left_door);
    m.fill_rect(d.fwin_x0, d.glass_top, d.fwin_x1, d.belt, fine::front_left_window);
    m.fill_rect(d.bwin_x0, d.glass_top, d.bwin_x1, d.belt, fine::back_left_window);
    m.fill_rect(d.nose, d.bump_top, d.nose + d.bump_w, d.bump_bot, fine::front_bumper);
    m.fill_rect(d.tail - d.bump_back_w, d.bump_top, d.tail, d.bump_bot,
                fine::back_bumper);
    m.fill_rect(d.nose, d.grille_top, d.nose + d.bump_w, d.grille_bot, fine::grille);
    m.fill_rect(d.nose, d.light_top, d.nose + d.light_w, d.light_bot,
                fine::left_headlight);
    m.fill_rect(d.tail - d.light_w, d.light_top, d.tail, d.light_bot,
                fine::left_taillight);
    m.fill_rect(d.nose, d.plate_top, d.nose + d.plate_w, d.plate_bot,
                fine::front_plate);
    m.fill_rect(d.tail - d.plate_w, d.plate_top, d.tail, d.plate_bot,
                fine::back_plate);
    m.fill_rect(d.fwheel_cx - d.wheel_half, d.wheel_top, d.fwheel_cx + d.wheel_half,
                d.wheel_bot, fine::front_left_wheel);
    m.fill_rect(d.bwheel_cx - d.wheel_half, d.wheel_top, d.bwheel_cx + d.wheel_half,
                d.wheel_bot, fine::back_left_wheel);
    m.fill_rect(d.mirror_x0, d.mirror_top, d.mirror_x1, d.mirror_bot,
                fine::left_mirror);
    return m;
}

struct Box {
    int x0, y0, x1, y1;  // half-open
    bool empty() const { return x0 >= x1 || y0 >= y1; }
};

Box member_bbox(const LabelMap& map, ComponentId component) {
    Box b{map.width(), map.height(), 0, 0};
    for (int y = 0; y < map.height(); ++y) {
        for (int x = 0; x < map.width(); ++x) {
            if (component_contains(component, aggregate_of(map.at(x, y)))) {
                b.x0 = std::min(b.x0, x);
                b.y0 = std::min(b.y0, y);
                b.x1 = std::max(b.x1, x + 1);
                b.y1 = std::max(b.y1, y + 1);
            }
        }
    }
    return b;
}

std::size_t member_pixels_in(const LabelMap& map, ComponentId component,
                             const Box& window) {
    std::size_t n = 0;
    for (int y = window.y0; y < window.y1; ++y)
        for (int x = window.x0; x < window.x1; ++x)
            if (component_contains(component, aggregate_of(map.at(x, y)))) ++n;
    return n;
}

}  // namespace

LabelMap render_whole_car(const SceneSpec& spec) {
    LabelMap m = render_facing_left(spec.car_type);
    if (spec.orientation == Orientation::right) m = mirrored(m);
    if (spec.occluded_component) {
        const FineId panel = spec.orientation == Orientation::left
                                 ? fine::left_body_panel
                                 : fine::right_body_panel;
        for (auto& cell : m.cells())
            if (component_contains(*spec.occluded_component, aggregate_of(cell)))
                cell = panel;
    }
    return m;
}

Orientation infer_facing(const LabelMap& whole) {
    long hx = 0, hn = 0, tx = 0, tn = 0;
    for (int y = 0; y < whole.height(); ++y) {
        for (int x = 0; x < whole.width(); ++x) {
            const AggregateId a = aggregate_of(whole.at(x, y));
            if (a == agg::headlight) {
                hx += x;
                ++hn;
            } else if (a == agg::taillight) {
                tx += x;
                ++tn;
            }
        }
    }
    if (hn == 0 || tn == 0)
        throw std::runtime_error("cannot infer facing: lights missing from map");
    return (hx * tn < tx * hn) ? Orientation::left : Orientation::right;
}

LabelMap extract_subregion(const LabelMap& whole, const SubregionSpec& spec) {
    const Box bbox = member_bbox(whole, spec.component);
    if (bbox.empty())
        throw std::runtime_error(std::string("component absent from map: ") +
                                 std::string(to_string(spec.component)));

    if (spec.granularity == Granularity::part) {
        Box w{std::max(bbox.x0 - kPartCropMargin, 0),
              std::max(bbox.y0 - kPartCropMargin, 0),
              std::min(bbox.x1 + kPartCropMargin, whole.width()),
              std::min(bbox.y1 + kPartCropMargin, whole.height())};
        return whole.crop(w.x0, w.y0, w.x1, w.y1);
    }

    // Piece crop: full bounding-box height, about half its width, anchored at
    // the box center and shifted toward the car's front by 10% of the width,
    // then the width is adjusted until the window holds 40-60% of the
    // component's pixels.  Right-facing maps are handled by reflection so the
    // window lands on the same physical region regardless of orientation.
    if (infer_facing(whole) == Orientation::right)
        return mirrored(extract_subregion(mirrored(whole), spec));
    const std::size_t total = member_pixels_in(whole, spec.component, bbox);
    const int box_w = bbox.x1 - bbox.x0;
    const int shift = std::max(box_w / 10, 1);
    int cx = bbox.x0 + box_w / 2 - shift;

    auto window_for = [&](int w) {
        Box win{cx - w / 2, bbox.y0, cx - w / 2 + w, bbox.y1};
        win.x0 = std::max(win.x0, 0);
        win.x1 = std::min(win.x1, whole.width());
        return win;
    };
    auto coverage = [&](int w) {
        return static_cast<double>(member_pixels_in(whole, spec.component,
                                                    window_for(w))) /
               static_cast<double>(total);
    };

    int w = std::max(box_w / 2, 1);
    double c = coverage(w);
    if (c < 0.40 || c > 0.60) {
        // Coverage is monotone in the window width; binary search for a
        // width whose coverage lands inside the band.
        int lo = 0, hi = box_w + 2 * shift + 2;
        while (hi - lo > 1) {
            const int mid = (lo + hi) / 2;
            if (coverage(mid) < 0.50)
                lo = mid;
            else
                hi = mid;
        }
        for (int cand : {hi, lo}) {
            if (cand < 1) continue;
            c = coverage(cand);
            if (c >= 0.40 && c <= 0.60) {
                w = cand;
                break;
            }
        }
        c = coverage(w);
        if (c < 0.40 || c > 0.60)
            throw std::runtime_error(
                std::string("piece coverage band unreachable for ") +
                std::string(to_string(spec.component)));
    }
    const Box win = window_for(w);
    return whole.crop(win.x0, win.y0, win.x1, win.y1);
}

}  // namespace partva
