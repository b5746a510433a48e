#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace thickfold {

// Absolute/relative comparison thresholds threaded through every predicate.
// eps_abs is used on areas and distances of unit-scaled inputs.
struct Tolerance {
    double eps_abs = 1e-9;
    double eps_rel = 1e-12;

    bool near_zero(double x) const { return std::abs(x) <= eps_abs; }
    bool near(double a, double b) const {
        return std::abs(a - b) <= eps_abs + eps_rel * std::max(std::abs(a), std::abs(b));
    }
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    double norm2() const { return x * x + y * y; }
    Vec2 normalized() const;
    Vec2 perp() const { return {-y, x}; }  // rotated +90 degrees
    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

using Point2 = Vec2;

// Infinite oriented line through `point` with direction `dir` (not necessarily unit).
struct Line2 {
    Point2 point;
    Vec2 dir;

    // Signed distance times |dir|; positive on the left of dir.
    double side_value(const Point2& p) const { return dir.cross(p - point); }
    double signed_distance(const Point2& p) const { return side_value(p) / dir.norm(); }
};

struct GeometryError : std::runtime_error {
    explicit GeometryError(const std::string& msg) : std::runtime_error(msg) {}
};

// Simple polygon, counterclockwise for positive area. `degenerate` marks
// collinear/low-dimension results (segment hulls, collapsed vertex polygons)
// that are kept around instead of being rejected.
struct Polygon2 {
    std::vector<Point2> vertices;
    bool degenerate = false;

    Polygon2() = default;
    explicit Polygon2(std::vector<Point2> v, bool degen = false)
        : vertices(std::move(v)), degenerate(degen) {}

    std::size_t size() const { return vertices.size(); }
    bool empty() const { return vertices.empty(); }
    const Point2& operator[](std::size_t i) const { return vertices[i]; }

    double signed_area() const;
    double area() const { return std::abs(signed_area()); }
    Point2 centroid() const;
    void make_ccw();
    bool is_convex(const Tolerance& tol = {}) const;
    bool is_simple(const Tolerance& tol = {}) const;
    // Drops consecutive duplicates (within tol) and, optionally, collinear vertices.
    Polygon2 simplified(const Tolerance& tol = {}, bool drop_collinear = false) const;
};

// Sign of twice the signed area of triangle (p, q, r); |area| <= eps_abs collapses to 0.
int orient(const Point2& p, const Point2& q, const Point2& r, const Tolerance& tol = {});

// Counterclockwise hull of the extreme points; collinear interior points are
// excluded. All input collinear -> two-point polygon flagged degenerate
// (single point for a one-point input).
Polygon2 convex_hull(std::vector<Point2> points, const Tolerance& tol = {});

enum class RegionRelation { Disjoint, Touching, Overlapping };

struct RegionIntersection {
    RegionRelation relation = RegionRelation::Disjoint;
    double area = 0.0;  // interior overlap, meaningful when Overlapping
};

// Classifies the interaction of two simple polygons, at least one of which
// must be convex (all clip regions in this pipeline are). Interior overlap
// with area <= tol.eps_abs counts as Touching when the boundaries meet.
RegionIntersection region_intersect(const Polygon2& p, const Polygon2& q,
                                    const Tolerance& tol = {});

// Subset of `p` on the kept closed side of `line`: keep_side=+1 keeps the left
// of dir, -1 the right. May return an empty polygon.
Polygon2 clip_to_halfplane(const Polygon2& p, const Line2& line, int keep_side,
                           const Tolerance& tol = {});

// Point containment with an "on boundary counts" closed test.
bool point_in_polygon(const Point2& pt, const Polygon2& poly, const Tolerance& tol = {});
// Strict interior test: inside and farther than eps from every edge.
bool point_strictly_inside(const Point2& pt, const Polygon2& poly, const Tolerance& tol = {});

double segment_point_distance(const Point2& a, const Point2& b, const Point2& p);
double segment_segment_distance(const Point2& a0, const Point2& a1,
                                const Point2& b0, const Point2& b1);

// Intersection parameter interval [t0, t1] of segment a+t(b-a), t in [0,1],
// with a convex polygon; empty when the segment misses it.
std::optional<std::pair<double, double>> clip_segment_to_convex(
    const Point2& a, const Point2& b, const Polygon2& poly, const Tolerance& tol = {});

// Parameter t with a + t*ad on line (p, pd); empty when parallel within tol.
std::optional<double> line_line_param(const Point2& a, const Vec2& ad,
                                      const Point2& p, const Vec2& pd,
                                      const Tolerance& tol = {});

}  // namespace thickfold
