#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "thickfold/geometry.hpp"

namespace thickfold {

enum class EdgeKind { Crease, Boundary };

struct PatternEdge {
    int v0 = -1;
    int v1 = -1;
    EdgeKind kind = EdgeKind::Boundary;
};

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

struct PatternError : std::runtime_error {
    explicit PatternError(const std::string& msg) : std::runtime_error(msg) {}
};

// Straight-line planar graph embedding with convex interior faces. Immutable
// after indexing; everything downstream reads it concurrently without locks.
class CreasePattern {
public:
    CreasePattern(std::vector<Point2> vertices, std::vector<PatternEdge> edges,
                  std::vector<std::vector<int>> faces, const Tolerance& tol = {});

    const std::vector<Point2>& vertices() const { return vertices_; }
    const std::vector<PatternEdge>& edges() const { return edges_; }
    const std::vector<std::vector<int>>& faces() const { return faces_; }

    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    int face_count() const { return static_cast<int>(faces_.size()); }

    // Creases as indices into edges().
    const std::vector<int>& creases() const { return crease_edges_; }
    int crease_count() const { return static_cast<int>(crease_edges_.size()); }

    // Faces bordering an edge: creases have two, boundary edges one (other = -1).
    std::pair<int, int> edge_faces(int edge) const { return edge_faces_[edge]; }
    std::pair<int, int> crease_faces(int crease) const {
        return edge_faces_[crease_edges_[crease]];
    }
    // Crease index of an edge, -1 for boundary edges.
    int crease_index(int edge) const { return crease_index_[edge]; }

    Polygon2 face_polygon(int face) const;
    double face_area(int face) const { return face_polygon(face).area(); }
    const std::vector<int>& vertex_edges(int vertex) const { return vertex_edges_[vertex]; }
    // Edge index for an unordered vertex pair, -1 if absent.
    int find_edge(int a, int b) const;

    Point2 edge_point(int edge, int end) const {
        const PatternEdge& e = edges_[edge];
        return vertices_[end == 0 ? e.v0 : e.v1];
    }

private:
    std::vector<Point2> vertices_;
    std::vector<PatternEdge> edges_;
    std::vector<std::vector<int>> faces_;
    std::vector<int> crease_edges_;
    std::vector<int> crease_index_;
    std::vector<std::pair<int, int>> edge_faces_;
    std::vector<std::vector<int>> vertex_edges_;
    std::map<std::pair<int, int>, int> edge_lookup_;
};

// Explicit per-edge weight override: faces (a, b) must be a reduced-layer-graph
// edge, w its positive weight.
struct WeightOverride {
    int face_a = -1;
    int face_b = -1;
    double w = 0.0;
};

struct WeightSpec {
    bool automatic = true;
    std::vector<WeightOverride> overrides;
};

struct ParsedDocument {
    CreasePattern pattern;
    std::vector<int> layer_order;  // bottom to top, every face exactly once
    WeightSpec weights;
};

// Parses the JSON input document (native schema or FOLD-style field names).
ParsedDocument parse_pattern(const std::string& json_text, const Tolerance& tol = {});

enum class VertexKind { Interior, Exterior };

struct VertexClass {
    std::vector<VertexKind> kind;
    // For interior vertices: sector angles in radians, cyclic order matching
    // sector_faces; empty for exterior vertices.
    std::vector<std::vector<double>> sector_angles;
    std::vector<std::vector<int>> sector_faces;
    // Incident edges sorted by direction angle (all vertices).
    std::vector<std::vector<int>> sorted_edges;
};

VertexClass classify_vertices(const CreasePattern& cp, const Tolerance& tol = {});

struct ValidationIssue {
    std::string what;
};

struct ValidationReport {
    std::string check;
    std::vector<ValidationIssue> issues;

    bool passed() const { return issues.empty(); }
    void fail(std::string why) { issues.push_back({std::move(why)}); }
    std::string summary() const;
};

ValidationReport check_convex_faces(const CreasePattern& cp, const Tolerance& tol = {});

// Kawasaki: alternating sector-angle sum vanishes at every interior vertex.
// Odd-degree interior vertices are reported as their own failure kind.
ValidationReport check_kawasaki(const CreasePattern& cp, const VertexClass& vc,
                                const Tolerance& tol = {});
// Same check on a raw angle list (radians), used directly by tests.
bool kawasaki_holds(const std::vector<double>& angles, double* alternating_sum,
                    const Tolerance& tol = {});

// Area enclosed by the boundary-edge cycle; used by the tiling consistency check.
double boundary_enclosed_area(const CreasePattern& cp, const Tolerance& tol = {});

}  // namespace thickfold
