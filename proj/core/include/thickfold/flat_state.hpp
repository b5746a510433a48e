#pragma once

#include <vector>

#include "thickfold/pattern.hpp"

namespace thickfold {

// Planar isometry x -> M x + t with M orthogonal; reflects() flips orientation.
struct Isometry2 {
    double m00 = 1.0, m01 = 0.0;
    double m10 = 0.0, m11 = 1.0;
    double tx = 0.0, ty = 0.0;

    static Isometry2 identity() { return {}; }
    static Isometry2 reflection(const Line2& axis);

    Point2 apply(const Point2& p) const {
        return {m00 * p.x + m01 * p.y + tx, m10 * p.x + m11 * p.y + ty};
    }
    Vec2 apply_vector(const Vec2& v) const {
        return {m00 * v.x + m01 * v.y, m10 * v.x + m11 * v.y};
    }
    Isometry2 compose_after(const Isometry2& inner) const;  // this ∘ inner
    double det() const { return m00 * m11 - m01 * m10; }
    bool reflects() const { return det() < 0.0; }
};

// Per-face isometries realizing the flat folding; adjacent faces differ by a
// reflection across the shared crease image, so parities alternate.
struct FlatMap {
    std::vector<Isometry2> face_maps;
    int seed_face = 0;

    Polygon2 face_image(const CreasePattern& cp, int face) const;
    // Image of crease endpoints (identical through either incident face).
    std::pair<Point2, Point2> crease_image(const CreasePattern& cp, int crease) const;
};

struct FlatStateError : std::runtime_error {
    explicit FlatStateError(const std::string& msg) : std::runtime_error(msg) {}
};

FlatMap compute_flat_map(const CreasePattern& cp, const Tolerance& tol = {},
                         int seed_face = 0);

// Layer ordering graph Lambda and its transitive reduction Gamma over faces,
// plus the height potential realizing the weight assignment.
struct LayerGraph {
    int face_count = 0;
    std::vector<int> order;                        // bottom to top
    std::vector<std::pair<int, int>> lambda;       // overlap edges, lower -> upper
    std::vector<std::pair<int, int>> gamma;        // transitive reduction of lambda
    std::vector<double> heights;                   // per face, layer units
    std::vector<double> gamma_weights;             // parallel to gamma, = height difference

    bool has_lambda_edge(int a, int b) const;
    double height(int face) const { return heights[face]; }
};

LayerGraph build_layer_graph(const CreasePattern& cp, const FlatMap& fm,
                             const std::vector<int>& order, const Tolerance& tol = {});

// Generic DAG transitive reduction on vertices 0..n-1. Throws on cycles.
std::vector<std::pair<int, int>> transitive_reduction(
    int n, const std::vector<std::pair<int, int>>& edges);

ValidationReport check_self_intersection(const CreasePattern& cp, const FlatMap& fm,
                                         const LayerGraph& g, const Tolerance& tol = {});

ValidationReport check_non_wrapping(const CreasePattern& cp, const FlatMap& fm,
                                    const LayerGraph& g, const Tolerance& tol = {});

enum class CreaseAssignment { Mountain, Valley };

// Valley iff the crease's inside (convex side of the folded surface) faces up,
// with "up" fixed by the seed face's folded normal.
std::vector<CreaseAssignment> derive_crease_assignment(const CreasePattern& cp,
                                                       const FlatMap& fm,
                                                       const LayerGraph& g);

// Per-crease positive widths in layer units: |height(A) - height(B)|.
struct CreaseWidths {
    std::vector<double> width;  // indexed by crease

    double min_width() const;
};

// Finalizes heights and Gamma weights. Auto keeps order-index heights; explicit
// overrides must cover every Gamma edge and admit a consistent potential.
struct WeightResult {
    LayerGraph graph;
    CreaseWidths widths;
};

WeightResult assign_weights(const CreasePattern& cp, LayerGraph g, const WeightSpec& spec,
                            const Tolerance& tol = {});

}  // namespace thickfold
