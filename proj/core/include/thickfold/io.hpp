#pragma once

#include <string>

#include "thickfold/solid.hpp"
#include "thickfold/thicken.hpp"

namespace thickfold {

// Fixed formatting used by every exporter: 12 significant digits, so repeated
// runs are byte identical across platforms.
std::string fmt_real(double v);

// Thickened-pattern document: the input schema keys plus scale, widths,
// reduced_faces, strips and holes. parse_pattern reads it back (unknown keys
// are ignored), which gives the round-trip property.
std::string write_thickened_json(const ParsedDocument& doc, const ThickenedPattern& tp);

// Layered SVG of the 2D layout; 1 pattern unit = 100 user units. Reduced
// faces blue, widened creases gray, holes outlined, offset creases dashed
// (mountain) or dash-dotted (valley). Degenerate holes are omitted.
std::string export_svg(const CreasePattern& cp, const ThickenedPattern& tp);

// Wavefront OBJ of the folded state: one object per region, walls merged per
// crease ("face_<i>", "crease_<j>"); falls back to "crease_<j>_side_<k>" when
// the two sides cannot be merged into one simple polygon.
std::string export_obj_fold(const FoldedState3D& fs, const Tolerance& tol = {});

// OBJ of the solid panels: closed prisms with outward orientation, one object
// per panel.
std::string export_obj_solid(const SolidModel& sm);

}  // namespace thickfold
