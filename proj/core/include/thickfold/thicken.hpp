#pragma once

#include <array>
#include <map>
#include <optional>
#include <vector>

#include "thickfold/flat_state.hpp"
#include "thickfold/pattern.hpp"

namespace thickfold {

struct ThickenError : std::runtime_error {
    explicit ThickenError(const std::string& msg) : std::runtime_error(msg) {}
};

// Solution of the offset-point relation for one face sector: the point at
// distance a from the first bounding crease and b from the second, expressed
// by the ray length h and the angles alpha, beta it makes with the creases.
struct PolygonVertexSolution {
    double a = 0.0;
    double b = 0.0;
    double theta = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double h = 0.0;
};

// alpha from atan2(sin theta, b/a + cos theta) so obtuse solutions stay in
// (0, pi); theta == pi is only solvable for a == b (parallel offsets).
PolygonVertexSolution polygon_vertex(double a, double b, double theta,
                                     const Tolerance& tol = {});

enum class VertexPointKind { FaceSector, BoundaryIntersection, OriginalVertex };

// Vertex-polygon corner: position = vertex + s * dir for polygon scale s.
struct VertexPolygonPoint {
    Vec2 dir;
    VertexPointKind kind = VertexPointKind::OriginalVertex;
    int face = -1;    // sector face for the two non-original kinds
    int edge = -1;    // source boundary edge for BoundaryIntersection
    int sector = -1;  // sector index in the vertex's sorted edge order
};

// Scalable polygon of material removed around one crease-pattern vertex.
// All corners are linear in s about the vertex, so the shape (and its hull)
// is scale invariant.
struct VertexPolygon {
    int vertex = -1;
    Point2 center;
    std::vector<VertexPolygonPoint> points;  // cyclic order
    bool degenerate = false;                 // collinear for every s
    bool boundary_overshoot = false;         // an offset line met its boundary edge
                                             // beyond the edge extent; rechecked at layout
    bool clipped = false;                    // replaced by hull of marked points
    std::vector<int> hull;                   // indices into points, CCW, when clipped

    // (crease, side face) -> corner on that crease's offset line.
    std::map<std::pair<int, int>, int> offset_point;

    // Effective outline at scale s (hull outline when clipped).
    Polygon2 at(double s) const;
    bool trivial() const { return points.size() < 2; }
};

VertexPolygon build_vertex_polygon(const CreasePattern& cp, const VertexClass& vc,
                                   const CreaseWidths& widths, int vertex,
                                   const Tolerance& tol = {});

std::vector<VertexPolygon> build_all_vertex_polygons(const CreasePattern& cp,
                                                     const VertexClass& vc,
                                                     const CreaseWidths& widths,
                                                     const Tolerance& tol = {});

// Halfplane whose boundary translates linearly with s:
// keep points p with keep * cross(dir, p - anchor)/|dir| >= s * rate.
struct ScaledHalfplane {
    Point2 anchor;
    Vec2 dir;
    double rate = 0.0;
    int keep = 1;

    Line2 boundary_at(double s) const;
    double slack(const Point2& p, double s) const;  // >= 0 when kept
};

// Per-face clip sets defining the reduced faces; starts with one offset clip
// per incident crease, grows by hull and refinement trims.
struct ReducedFaceClips {
    std::vector<std::vector<ScaledHalfplane>> clips;  // per face

    Polygon2 reduced_face_at(const CreasePattern& cp, int face, double s,
                             const Tolerance& tol = {}) const;
};

ReducedFaceClips base_face_clips(const CreasePattern& cp, const CreaseWidths& widths);

struct TrimRecord {
    int face = -1;
    int crease = -1;  // strip whose boundary forced the trim, -1 for hull trims
    int vertex = -1;  // vertex whose polygon forced a hull trim, -1 otherwise
};

// Resolves self-crossing vertex polygons by replacing them with the convex
// hull of the marked corners and trimming crossing reduced faces against it.
std::vector<TrimRecord> clip_vertex_polygon(const CreasePattern& cp, const VertexClass& vc,
                                            const CreaseWidths& widths, VertexPolygon& poly,
                                            ReducedFaceClips& clips,
                                            const Tolerance& tol = {});

// One side of a widened crease: the material between the crease line and the
// offset line inside face `face`, with per-unit-s exits at both crease ends.
struct StripSide {
    int crease = -1;
    int face = -1;
    int side = 0;                      // 0/1 within the crease
    std::array<Vec2, 2> offset_exit;   // dir-space exits on the offset line
    std::array<Vec2, 2> crease_exit;   // dir-space exits on the crease line
    double length = 0.0;               // original crease length d
    double rate = 0.0;                 // shrink per unit s (Eq. 2 coefficient)
    double half_width = 0.0;           // w/2, layer units

    // Quad [inner_u, inner_w, outer_w, outer_u] at scale s, CCW.
    Polygon2 quad_at(const CreasePattern& cp, double s) const;
    std::array<Point2, 2> offset_segment_at(const CreasePattern& cp, double s) const;
    std::array<Point2, 2> inner_segment_at(const CreasePattern& cp, double s) const;
    double remaining_length(double s) const { return length - s * rate; }
};

std::vector<StripSide> build_strip_sides(const CreasePattern& cp,
                                         const std::vector<VertexPolygon>& polys,
                                         const CreaseWidths& widths,
                                         const Tolerance& tol = {});

struct ScaleConstraint {
    int crease = -1;
    int face = -1;
    double length = 0.0;   // d
    double rate = 0.0;     // c = h_a cos(alpha) + h_b cos(beta)
    double s_limit = 0.0;  // d / c when c > 0, +inf otherwise
};

struct ScaleBound {
    double s_star = 0.0;
    double s_eq2 = 0.0;          // min over rate-positive sides
    double positivity_cap = 0.0; // largest s keeping every reduced face positive
    std::vector<ScaleConstraint> constraints;
    std::vector<std::size_t> binding;  // indices into constraints achieving s_eq2
};

ScaleBound scale_upper_bound(const CreasePattern& cp, const std::vector<StripSide>& sides,
                             const ReducedFaceClips& clips, const Tolerance& tol = {});

// Trims strip/reduced-face overlaps over scales in (0, s_hi]; terminates since
// a trim never creates a new overlap pair.
std::vector<TrimRecord> refine(const CreasePattern& cp, const std::vector<StripSide>& sides,
                               ReducedFaceClips& clips, double s_hi,
                               const Tolerance& tol = {});

struct Region3 {
    enum class Kind { Face, Wall };
    Kind kind = Kind::Face;
    int face = -1;
    int crease = -1;
    int side = -1;
    bool inverted = false;  // strip length went negative: vertex polygons collide
    std::vector<std::array<double, 3>> pts;
};

struct FoldedState3D {
    double scale = 0.0;
    std::vector<Region3> regions;
};

FoldedState3D build_folded_state(const CreasePattern& cp, const FlatMap& fm,
                                 const LayerGraph& g, const CreaseWidths& widths,
                                 const std::vector<StripSide>& sides,
                                 const ReducedFaceClips& clips, double s,
                                 const Tolerance& tol = {});

// Pairwise strict-interpenetration test; touching contact passes.
ValidationReport check_folded_intersections(const FoldedState3D& fs,
                                            const Tolerance& tol = {});

struct GlobalScaleResult {
    double scale = 0.0;
    int probes = 0;
    ValidationReport certificate;
};

// Starts from the requested scale and halves until the folded-state check
// passes; clearance varies weakly monotonically with s, so this terminates
// for valid inputs well before the probe cap.
GlobalScaleResult find_global_scale(const CreasePattern& cp, const FlatMap& fm,
                                    const LayerGraph& g, const CreaseWidths& widths,
                                    const std::vector<StripSide>& sides,
                                    const ReducedFaceClips& clips, double s_star,
                                    double requested, const Tolerance& tol = {},
                                    int max_probes = 40);

struct StripGeometry {
    int crease = -1;
    int face = -1;
    int side = 0;
    Polygon2 polygon;
    std::array<Point2, 2> offset_segment;
    std::array<Point2, 2> inner_segment;
};

struct HoleGeometry {
    int vertex = -1;
    Polygon2 polygon;
    bool degenerate = false;
};

struct ThickenedPattern {
    double scale = 0.0;
    std::vector<Polygon2> reduced_faces;        // per face
    std::vector<StripGeometry> strips;          // two per crease
    std::vector<HoleGeometry> holes;            // nontrivial vertex polygons
    std::vector<CreaseAssignment> assignments;  // per crease
    std::vector<double> widths;                 // per crease, layer units
    std::vector<TrimRecord> trims;
};

// Evaluates all scale-parameterized geometry at s and verifies the layout
// invariants (positive areas, parallel offsets, pairwise disjoint interiors,
// containment); violations are construction bugs and throw.
ThickenedPattern layout_pattern(const CreasePattern& cp,
                                const std::vector<VertexPolygon>& polys,
                                const std::vector<StripSide>& sides,
                                const ReducedFaceClips& clips,
                                const std::vector<CreaseAssignment>& assignments,
                                const CreaseWidths& widths,
                                const std::vector<TrimRecord>& trims, double s,
                                const Tolerance& tol = {});

}  // namespace thickfold
