#pragma once

#include <array>
#include <string>
#include <vector>

#include "thickfold/thicken.hpp"

namespace thickfold {

struct SolidError : std::runtime_error {
    explicit SolidError(const std::string& msg) : std::runtime_error(msg) {}
};

using Point3 = std::array<double, 3>;

// Convex polyhedron stored as planar boundary polygons with outward
// orientation; supports halfspace clipping and volume, which is all the
// interference checks need.
struct ConvexSolid {
    std::vector<std::vector<Point3>> faces;

    bool empty() const { return faces.size() < 3; }
    double volume() const;

    // Keep the side with dot(x, normal) <= offset.
    ConvexSolid clipped(const Point3& normal, double offset, double eps = 1e-12) const;

    static ConvexSolid vertical_prism(const Polygon2& footprint, double z0, double z1);
    // Planar CCW polygon translated along +/- its plane normal.
    static ConvexSolid slab(const std::vector<Point3>& polygon, const Point3& normal,
                            double h0, double h1);
};

// Volume of A intersected with B (clips A by B's face planes).
double intersection_volume(const ConvexSolid& a, const ConvexSolid& b);

struct ThicknessConfig {
    double t = 0.0;           // panel thickness, pattern units
    double split = 0.5;       // fraction of thickness above the midsurface
    bool suppress_relief = false;  // test hook: skip relief strips
};

// t_max = s' * min crease width (folded-geometry units).
double max_thickness(const CreaseWidths& widths, double scale);

struct ReliefCut {
    int face = -1;
    int crease = -1;
    double area = 0.0;   // plan area removed
    double depth = 0.0;  // thickness removed
};

struct SolidPanel {
    std::string name;
    int face = -1;    // face panels
    int crease = -1;  // wall panels
    int face_a = -1, face_b = -1;  // adjacency for wall panels
    std::vector<ConvexSolid> pieces;

    double volume() const;
};

struct SolidModel {
    double thickness = 0.0;
    double t_max = 0.0;
    double split = 0.5;
    std::vector<SolidPanel> panels;
    std::vector<ReliefCut> reliefs;

    double total_volume() const;
};

// Extrudes every folded region by cfg.t and removes the relief strips of
// in-plane width t/2 on the inside surface of reduced faces at each crease;
// widened-crease walls keep full thickness.
SolidModel apply_thickness(const CreasePattern& cp, const ThickenedPattern& tp,
                           const FoldedState3D& fs, const LayerGraph& g,
                           const ThicknessConfig& cfg, const Tolerance& tol = {});

// Per-crease local interference test of the three panels meeting there.
ValidationReport check_solid_local(const SolidModel& sm, const Tolerance& tol = {});

}  // namespace thickfold
