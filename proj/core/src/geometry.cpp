#include "thickfold/geometry.hpp"

#include <algorithm>
#include <limits>

namespace thickfold {

Vec2 Vec2::normalized() const {
    double n = norm();
    if (n == 0.0) throw GeometryError("cannot normalize zero vector");
    return {x / n, y / n};
}

double Polygon2::signed_area() const {
    double twice = 0.0;
    std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = vertices[i];
        const Point2& b = vertices[(i + 1) % n];
        twice += a.cross(b);
    }
    return 0.5 * twice;
}

Point2 Polygon2::centroid() const {
    // Area-weighted centroid, falling back to the vertex mean for degenerate shapes.
    double twice = 0.0;
    Vec2 acc{0.0, 0.0};
    std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = vertices[i];
        const Point2& b = vertices[(i + 1) % n];
        double c = a.cross(b);
        twice += c;
        acc += (a + b) * c;
    }
    if (std::abs(twice) > 1e-300) return acc / (3.0 * twice);
    Vec2 mean{0.0, 0.0};
    for (const auto& v : vertices) mean += v;
    return n ? mean / static_cast<double>(n) : mean;
}

void Polygon2::make_ccw() {
    if (signed_area() < 0.0) std::reverse(vertices.begin(), vertices.end());
}

bool Polygon2::is_convex(const Tolerance& tol) const {
    std::size_t n = vertices.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        if (orient(vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n], tol) < 0)
            return false;
    }
    return true;
}

namespace {

bool segments_properly_cross(const Point2& a0, const Point2& a1,
                             const Point2& b0, const Point2& b1,
                             const Tolerance& tol) {
    int s1 = orient(a0, a1, b0, tol);
    int s2 = orient(a0, a1, b1, tol);
    int s3 = orient(b0, b1, a0, tol);
    int s4 = orient(b0, b1, a1, tol);
    return s1 * s2 < 0 && s3 * s4 < 0;
}

}  // namespace

bool Polygon2::is_simple(const Tolerance& tol) const {
    std::size_t n = vertices.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        Point2 a0 = vertices[i], a1 = vertices[(i + 1) % n];
        for (std::size_t j = i + 1; j < n; ++j) {
            bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (adjacent) continue;
            Point2 b0 = vertices[j], b1 = vertices[(j + 1) % n];
            if (segments_properly_cross(a0, a1, b0, b1, tol)) return false;
        }
    }
    return true;
}

Polygon2 Polygon2::simplified(const Tolerance& tol, bool drop_collinear) const {
    std::vector<Point2> out;
    for (const auto& v : vertices) {
        if (!out.empty() && (v - out.back()).norm() <= tol.eps_abs) continue;
        out.push_back(v);
    }
    while (out.size() > 1 && (out.front() - out.back()).norm() <= tol.eps_abs) out.pop_back();
    if (drop_collinear && out.size() > 2) {
        std::vector<Point2> slim;
        std::size_t n = out.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Point2& prev = out[(i + n - 1) % n];
            const Point2& cur = out[i];
            const Point2& next = out[(i + 1) % n];
            if (orient(prev, cur, next, tol) != 0) slim.push_back(cur);
        }
        if (slim.size() >= 3) out = std::move(slim);
    }
    Polygon2 r(std::move(out), degenerate);
    if (r.vertices.size() < 3) r.degenerate = true;
    return r;
}

int orient(const Point2& p, const Point2& q, const Point2& r, const Tolerance& tol) {
    double twice_area = (q - p).cross(r - p);
    if (std::abs(twice_area) <= 2.0 * tol.eps_abs) return 0;
    return twice_area > 0.0 ? 1 : -1;
}

Polygon2 convex_hull(std::vector<Point2> pts, const Tolerance& tol) {
    if (pts.empty()) throw GeometryError("convex_hull: no points");
    std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [&](const Point2& a, const Point2& b) {
                              return (a - b).norm() <= tol.eps_abs;
                          }),
              pts.end());
    if (pts.size() == 1) return Polygon2({pts[0]}, true);
    if (pts.size() == 2) return Polygon2({pts[0], pts[1]}, true);

    // Andrew monotone chain, strict turns so collinear points drop out.
    std::vector<Point2> hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && orient(hull[k - 2], hull[k - 1], pts[i], tol) <= 0) --k;
        hull[k++] = pts[i];
    }
    std::size_t lower = k + 1;
    for (std::size_t i = pts.size() - 1; i-- > 0;) {
        while (k >= lower && orient(hull[k - 2], hull[k - 1], pts[i], tol) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    if (hull.size() < 3) {
        // All collinear: report the extreme segment.
        return Polygon2({pts.front(), pts.back()}, true);
    }
    return Polygon2(std::move(hull), false);
}

Polygon2 clip_to_halfplane(const Polygon2& p, const Line2& line, int keep_side,
                           const Tolerance& tol) {
    if (line.dir.norm() <= tol.eps_abs)
        throw GeometryError("clip_to_halfplane: zero direction");
    if (keep_side != 1 && keep_side != -1)
        throw GeometryError("clip_to_halfplane: keep_side must be +1 or -1");
    double inv_len = 1.0 / line.dir.norm();
    auto dist = [&](const Point2& v) {
        return keep_side * line.side_value(v) * inv_len;  // >= 0 means keep
    };
    std::vector<Point2> out;
    std::size_t n = p.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& cur = p.vertices[i];
        const Point2& nxt = p.vertices[(i + 1) % n];
        double dc = dist(cur), dn = dist(nxt);
        bool keep_cur = dc >= -tol.eps_abs;
        bool keep_nxt = dn >= -tol.eps_abs;
        if (keep_cur) out.push_back(cur);
        if (keep_cur != keep_nxt) {
            double denom = dc - dn;
            if (std::abs(denom) > 1e-300) {
                double t = dc / denom;
                out.push_back(cur + (nxt - cur) * t);
            }
        }
    }
    Polygon2 r(std::move(out), p.degenerate);
    r = r.simplified(tol);
    if (r.vertices.size() < 3) {
        // Nothing two-dimensional survived the clip.
        Polygon2 empty;
        empty.degenerate = true;
        return empty;
    }
    return r;
}

bool point_in_polygon(const Point2& pt, const Polygon2& poly, const Tolerance& tol) {
    std::size_t n = poly.vertices.size();
    if (n == 0) return false;
    for (std::size_t i = 0; i < n; ++i) {
        if (segment_point_distance(poly.vertices[i], poly.vertices[(i + 1) % n], pt) <=
            tol.eps_abs)
            return true;  // on boundary
    }
    if (n < 3) return false;
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point2& a = poly.vertices[i];
        const Point2& b = poly.vertices[j];
        if ((a.y > pt.y) != (b.y > pt.y)) {
            double x_cross = a.x + (pt.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (pt.x < x_cross) inside = !inside;
        }
    }
    return inside;
}

bool point_strictly_inside(const Point2& pt, const Polygon2& poly, const Tolerance& tol) {
    std::size_t n = poly.vertices.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        if (segment_point_distance(poly.vertices[i], poly.vertices[(i + 1) % n], pt) <=
            tol.eps_abs)
            return false;
    }
    return point_in_polygon(pt, poly, tol);
}

double segment_point_distance(const Point2& a, const Point2& b, const Point2& p) {
    Vec2 ab = b - a;
    double len2 = ab.norm2();
    if (len2 == 0.0) return (p - a).norm();
    double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + ab * t)).norm();
}

double segment_segment_distance(const Point2& a0, const Point2& a1,
                                const Point2& b0, const Point2& b1) {
    Tolerance exact{0.0, 0.0};
    if (segments_properly_cross(a0, a1, b0, b1, exact)) return 0.0;
    return std::min(std::min(segment_point_distance(a0, a1, b0),
                             segment_point_distance(a0, a1, b1)),
                    std::min(segment_point_distance(b0, b1, a0),
                             segment_point_distance(b0, b1, a1)));
}

namespace {

double boundary_distance(const Polygon2& p, const Polygon2& q) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t np = p.vertices.size(), nq = q.vertices.size();
    for (std::size_t i = 0; i < np; ++i) {
        for (std::size_t j = 0; j < nq; ++j) {
            best = std::min(best, segment_segment_distance(
                                      p.vertices[i], p.vertices[(i + 1) % np],
                                      q.vertices[j], q.vertices[(j + 1) % nq]));
        }
    }
    return best;
}

Polygon2 clip_to_convex(const Polygon2& subject, const Polygon2& convex_clip,
                        const Tolerance& tol) {
    Polygon2 cur = subject;
    std::size_t n = convex_clip.vertices.size();
    for (std::size_t i = 0; i < n && !cur.vertices.empty(); ++i) {
        Line2 edge{convex_clip.vertices[i],
                   convex_clip.vertices[(i + 1) % n] - convex_clip.vertices[i]};
        if (edge.dir.norm() <= tol.eps_abs) continue;
        cur = clip_to_halfplane(cur, edge, +1, tol);
    }
    return cur;
}

}  // namespace

RegionIntersection region_intersect(const Polygon2& p, const Polygon2& q,
                                    const Tolerance& tol) {
    if (p.vertices.size() < 3 || q.vertices.size() < 3) {
        // Degenerate inputs can only touch.
        double d = boundary_distance(p, q);
        return {d <= tol.eps_abs ? RegionRelation::Touching : RegionRelation::Disjoint, 0.0};
    }
    if (!p.is_simple(tol) || !q.is_simple(tol))
        throw GeometryError("region_intersect: self-intersecting input polygon");

    const Polygon2* subject = &p;
    const Polygon2* clip = &q;
    Polygon2 p_ccw = p, q_ccw = q;
    p_ccw.make_ccw();
    q_ccw.make_ccw();
    if (q_ccw.is_convex(tol)) {
        subject = &p_ccw;
        clip = &q_ccw;
    } else if (p_ccw.is_convex(tol)) {
        subject = &q_ccw;
        clip = &p_ccw;
    } else {
        throw GeometryError("region_intersect: at least one polygon must be convex");
    }

    Polygon2 inter = clip_to_convex(*subject, *clip, tol);
    double area = inter.vertices.size() >= 3 ? inter.area() : 0.0;
    if (area > tol.eps_abs) return {RegionRelation::Overlapping, area};

    if (!inter.vertices.empty()) return {RegionRelation::Touching, 0.0};
    double d = boundary_distance(p_ccw, q_ccw);
    if (d <= tol.eps_abs) return {RegionRelation::Touching, 0.0};
    // One polygon nested in the other without boundary contact still overlaps.
    if (point_in_polygon(p_ccw.vertices[0], q_ccw, tol) ||
        point_in_polygon(q_ccw.vertices[0], p_ccw, tol))
        return {RegionRelation::Overlapping, std::min(p_ccw.area(), q_ccw.area())};
    return {RegionRelation::Disjoint, 0.0};
}

std::optional<std::pair<double, double>> clip_segment_to_convex(
    const Point2& a, const Point2& b, const Polygon2& poly, const Tolerance& tol) {
    if (poly.vertices.size() < 3) return std::nullopt;
    double t0 = 0.0, t1 = 1.0;
    Vec2 d = b - a;
    std::size_t n = poly.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& e0 = poly.vertices[i];
        const Point2& e1 = poly.vertices[(i + 1) % n];
        Vec2 edge = e1 - e0;
        double denom = edge.cross(d);
        double num = edge.cross(a - e0);  // >= 0 means inside (CCW polygon)
        if (std::abs(denom) <= 1e-300) {
            if (num < -tol.eps_abs) return std::nullopt;  // parallel, outside
            continue;
        }
        double t = -num / denom;
        if (denom > 0.0) t0 = std::max(t0, t);
        else t1 = std::min(t1, t);
        if (t0 > t1 + tol.eps_abs) return std::nullopt;
    }
    if (t0 > t1) return std::nullopt;
    return std::make_pair(t0, t1);
}

std::optional<double> line_line_param(const Point2& a, const Vec2& ad,
                                      const Point2& p, const Vec2& pd,
                                      const Tolerance& tol) {
    double denom = pd.cross(ad);
    if (std::abs(denom) <= tol.eps_abs * std::max(1.0, ad.norm() * pd.norm()))
        return std::nullopt;
    return pd.cross(p - a) / denom;
}

}  // namespace thickfold
