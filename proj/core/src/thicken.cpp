#include "thickfold/thicken.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace thickfold {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vec2 rotate_ccw(const Vec2& v, double angle) {
    double c = std::cos(angle), sn = std::sin(angle);
    return {c * v.x - sn * v.y, sn * v.x + c * v.y};
}

}  // namespace

PolygonVertexSolution polygon_vertex(double a, double b, double theta, const Tolerance& tol) {
    if (!(a > 0.0) || !(b > 0.0))
        throw ThickenError("polygon_vertex: offsets must be positive");
    const double pi = std::numbers::pi;
    if (!(theta > 0.0) || !(theta < 2.0 * pi))
        throw ThickenError("polygon_vertex: sector angle outside (0, 2*pi)");

    PolygonVertexSolution sol;
    sol.a = a;
    sol.b = b;
    sol.theta = theta;
    if (std::abs(theta - pi) <= 1e-9) {
        // Offset lines are parallel; they only meet for equal offsets.
        if (std::abs(a - b) > tol.eps_abs * std::max(1.0, std::max(a, b)))
            throw ThickenError("polygon_vertex: straight sector with unequal offsets");
        sol.alpha = sol.beta = 0.5 * pi;
        sol.h = a;
        return sol;
    }
    double s = std::sin(theta);
    double alpha = std::atan2(s, b / a + std::cos(theta));
    double beta = std::atan2(s, a / b + std::cos(theta));
    if (alpha <= 0.0) alpha += pi;
    if (beta <= 0.0) beta += pi;
    sol.alpha = alpha;
    sol.beta = beta;
    sol.h = a / std::sin(alpha);
    if (std::abs(alpha + beta - theta) > 1e-9)
        throw ThickenError("polygon_vertex: angle identity failed, sector is infeasible");
    return sol;
}

Polygon2 VertexPolygon::at(double s) const {
    Polygon2 poly;
    if (clipped) {
        for (int i : hull) poly.vertices.push_back(center + points[i].dir * s);
    } else {
        for (const auto& p : points) poly.vertices.push_back(center + p.dir * s);
    }
    poly.degenerate = degenerate;
    return poly;
}

VertexPolygon build_vertex_polygon(const CreasePattern& cp, const VertexClass& vc,
                                   const CreaseWidths& widths, int vertex,
                                   const Tolerance& tol) {
    VertexPolygon poly;
    poly.vertex = vertex;
    poly.center = cp.vertices()[vertex];

    const std::vector<int>& se = vc.sorted_edges[vertex];
    const std::size_t d = se.size();
    int crease_count = 0;
    for (int e : se)
        if (cp.edges()[e].kind == EdgeKind::Crease) ++crease_count;
    if (crease_count == 0) {
        poly.points.push_back({Vec2{0, 0}, VertexPointKind::OriginalVertex, -1, -1, -1});
        poly.degenerate = true;
        return poly;
    }

    auto edge_dir = [&](int e) {
        const PatternEdge& pe = cp.edges()[e];
        int other = pe.v0 == vertex ? pe.v1 : pe.v0;
        return (cp.vertices()[other] - poly.center).normalized();
    };
    auto half_width = [&](int e) { return 0.5 * widths.width[cp.crease_index(e)]; };

    // Emit sector corners in cyclic order; exterior vertices start right after
    // the exterior gap so the original vertex closes the cycle.
    int start = 0;
    if (vc.kind[vertex] == VertexKind::Exterior) {
        for (std::size_t i = 0; i < d; ++i)
            if (vc.sector_faces[vertex][i] == -1) start = static_cast<int>((i + 1) % d);
    }
    const Point2 origin{0.0, 0.0};
    for (std::size_t step = 0; step < d; ++step) {
        std::size_t i = (start + step) % d;
        int face = vc.sector_faces[vertex][i];
        if (face == -1) continue;
        int e0 = se[i];
        int e1 = se[(i + 1) % d];
        bool c0 = cp.edges()[e0].kind == EdgeKind::Crease;
        bool c1 = cp.edges()[e1].kind == EdgeKind::Crease;
        Vec2 d0 = edge_dir(e0);
        Vec2 d1 = edge_dir(e1);

        VertexPolygonPoint pt;
        pt.face = face;
        pt.sector = static_cast<int>(i);
        if (c0 && c1) {
            auto sol = polygon_vertex(half_width(e0), half_width(e1),
                                      vc.sector_angles[vertex][i], tol);
            pt.dir = rotate_ccw(d0, sol.alpha) * sol.h;
            pt.kind = VertexPointKind::FaceSector;
        } else if (c0 && !c1) {
            // Offset line of e0 (into the sector) against the boundary ray e1.
            double a = half_width(e0);
            auto lambda = line_line_param(origin, d1, origin + d0.perp() * a, d0, tol);
            if (!lambda)
                throw ThickenError("vertex " + std::to_string(vertex) +
                                   ": offset line parallel to its boundary edge");
            pt.dir = d1 * *lambda;
            pt.kind = VertexPointKind::BoundaryIntersection;
            pt.edge = e1;
            if (*lambda < -tol.eps_abs) poly.boundary_overshoot = true;
        } else if (!c0 && c1) {
            double b = half_width(e1);
            auto lambda = line_line_param(origin, d0, origin - d1.perp() * b, d1, tol);
            if (!lambda)
                throw ThickenError("vertex " + std::to_string(vertex) +
                                   ": offset line parallel to its boundary edge");
            pt.dir = d0 * *lambda;
            pt.kind = VertexPointKind::BoundaryIntersection;
            pt.edge = e0;
            if (*lambda < -tol.eps_abs) poly.boundary_overshoot = true;
        } else {
            // Crease-free face corner at a boundary vertex: nothing to remove.
            continue;
        }
        int idx = static_cast<int>(poly.points.size());
        if (c0) poly.offset_point[{cp.crease_index(e0), face}] = idx;
        if (c1) poly.offset_point[{cp.crease_index(e1), face}] = idx;
        poly.points.push_back(pt);
    }
    if (vc.kind[vertex] == VertexKind::Exterior)
        poly.points.push_back({Vec2{0, 0}, VertexPointKind::OriginalVertex, -1, -1, -1});

    Polygon2 shape = poly.at(1.0);
    poly.degenerate = shape.vertices.size() < 3 || shape.area() <= tol.eps_abs;
    return poly;
}

std::vector<VertexPolygon> build_all_vertex_polygons(const CreasePattern& cp,
                                                     const VertexClass& vc,
                                                     const CreaseWidths& widths,
                                                     const Tolerance& tol) {
    std::vector<VertexPolygon> out;
    out.reserve(cp.vertex_count());
    for (int v = 0; v < cp.vertex_count(); ++v)
        out.push_back(build_vertex_polygon(cp, vc, widths, v, tol));
    return out;
}

Line2 ScaledHalfplane::boundary_at(double s) const {
    Vec2 n = dir.perp() / dir.norm();
    return Line2{anchor + n * (keep * s * rate), dir};
}

double ScaledHalfplane::slack(const Point2& p, double s) const {
    return keep * dir.cross(p - anchor) / dir.norm() - s * rate;
}

namespace {

// +1 when face f lies left of the crease edge direction v0 -> v1.
int face_side_sign(const CreasePattern& cp, int crease, int face) {
    const PatternEdge& pe = cp.edges()[cp.creases()[crease]];
    const std::vector<int>& cycle = cp.faces()[face];
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        int a = cycle[i], b = cycle[(i + 1) % cycle.size()];
        if (a == pe.v0 && b == pe.v1) return +1;
        if (a == pe.v1 && b == pe.v0) return -1;
    }
    throw ThickenError("crease " + std::to_string(crease) + " missing from face cycle " +
                       std::to_string(face));
}

ScaledHalfplane offset_clip(const CreasePattern& cp, const CreaseWidths& widths, int crease,
                            int face) {
    const PatternEdge& pe = cp.edges()[cp.creases()[crease]];
    Point2 u = cp.vertices()[pe.v0];
    Vec2 dir = cp.vertices()[pe.v1] - u;
    return {u, dir, 0.5 * widths.width[crease], face_side_sign(cp, crease, face)};
}

}  // namespace

ReducedFaceClips base_face_clips(const CreasePattern& cp, const CreaseWidths& widths) {
    ReducedFaceClips rc;
    rc.clips.assign(cp.face_count(), {});
    for (int c = 0; c < cp.crease_count(); ++c) {
        auto [fa, fb] = cp.crease_faces(c);
        rc.clips[fa].push_back(offset_clip(cp, widths, c, fa));
        rc.clips[fb].push_back(offset_clip(cp, widths, c, fb));
    }
    return rc;
}

Polygon2 ReducedFaceClips::reduced_face_at(const CreasePattern& cp, int face, double s,
                                           const Tolerance& tol) const {
    Polygon2 poly = cp.face_polygon(face);
    for (const auto& hp : clips[face]) {
        if (poly.vertices.empty()) break;
        poly = clip_to_halfplane(poly, hp.boundary_at(s), hp.keep, tol);
    }
    return poly;
}

namespace {

// Local reduced-face wedge of one sector in dir space, clipped to a big box.
Polygon2 sector_wedge(const CreasePattern& cp, const VertexClass& vc,
                      const CreaseWidths& widths, int vertex, int sector, double extent,
                      const Tolerance& tol) {
    Polygon2 box(
        {{-extent, -extent}, {extent, -extent}, {extent, extent}, {-extent, extent}});
    const std::vector<int>& se = vc.sorted_edges[vertex];
    const std::size_t d = se.size();
    int e0 = se[sector];
    int e1 = se[(sector + 1) % d];
    Point2 center = cp.vertices()[vertex];
    const Point2 origin{0.0, 0.0};
    auto dir_of = [&](int e) {
        const PatternEdge& pe = cp.edges()[e];
        int other = pe.v0 == vertex ? pe.v1 : pe.v0;
        return (cp.vertices()[other] - center).normalized();
    };
    Vec2 d0 = dir_of(e0);
    Vec2 d1 = dir_of(e1);
    if (cp.edges()[e0].kind == EdgeKind::Crease) {
        double a = 0.5 * widths.width[cp.crease_index(e0)];
        box = clip_to_halfplane(box, Line2{origin + d0.perp() * a, d0}, +1, tol);
    } else {
        box = clip_to_halfplane(box, Line2{origin, d0}, +1, tol);
    }
    if (box.vertices.empty()) return box;
    if (cp.edges()[e1].kind == EdgeKind::Crease) {
        double b = 0.5 * widths.width[cp.crease_index(e1)];
        box = clip_to_halfplane(box, Line2{origin - d1.perp() * b, d1}, -1, tol);
    } else {
        box = clip_to_halfplane(box, Line2{origin, d1}, -1, tol);
    }
    return box;
}

}  // namespace

std::vector<TrimRecord> clip_vertex_polygon(const CreasePattern& cp, const VertexClass& vc,
                                            const CreaseWidths& widths, VertexPolygon& poly,
                                            ReducedFaceClips& clips, const Tolerance& tol) {
    std::vector<TrimRecord> trims;
    if (poly.trivial() || poly.degenerate || poly.points.size() < 4) return trims;

    Polygon2 outline = poly.at(1.0);
    if (outline.is_simple(tol)) return trims;

    double extent = 1.0;
    for (const auto& p : poly.points) extent = std::max(extent, 4.0 * p.dir.norm());

    std::vector<Point2> dir_pts;
    const Point2 origin{0.0, 0.0};
    for (const auto& p : poly.points) dir_pts.push_back(origin + p.dir);
    Polygon2 hull_all = convex_hull(dir_pts, tol);

    // A corner stays when its local reduced face does not properly intersect
    // the hull; corners of crossing sectors get absorbed and their faces trimmed.
    std::vector<char> marked(poly.points.size(), 0);
    std::vector<Polygon2> wedges(poly.points.size());
    for (std::size_t i = 0; i < poly.points.size(); ++i) {
        const auto& p = poly.points[i];
        if (p.kind != VertexPointKind::FaceSector) {
            marked[i] = 1;
            continue;
        }
        wedges[i] = sector_wedge(cp, vc, widths, poly.vertex, p.sector, extent, tol);
        if (wedges[i].vertices.size() < 3) {
            marked[i] = 1;
            continue;
        }
        marked[i] =
            region_intersect(wedges[i], hull_all, tol).relation != RegionRelation::Overlapping;
    }

    std::vector<Point2> marked_pts;
    std::vector<int> marked_idx;
    for (std::size_t i = 0; i < poly.points.size(); ++i) {
        if (marked[i]) {
            marked_pts.push_back(dir_pts[i]);
            marked_idx.push_back(static_cast<int>(i));
        }
    }
    if (marked_pts.size() < 2)
        throw ThickenError("vertex " + std::to_string(poly.vertex) +
                           ": self-crossing polygon with fewer than two marked corners");

    Polygon2 hull_marked = convex_hull(marked_pts, tol);
    poly.hull.clear();
    for (const Point2& hp : hull_marked.vertices) {
        for (int idx : marked_idx) {
            if ((dir_pts[idx] - hp).norm() <= tol.eps_abs) {
                poly.hull.push_back(idx);
                break;
            }
        }
    }
    poly.clipped = true;
    poly.degenerate = hull_marked.degenerate;

    // Trim each crossing face against the hull edges that cut through it.
    const std::size_t hn = hull_marked.vertices.size();
    for (std::size_t i = 0; i < poly.points.size(); ++i) {
        if (marked[i] || poly.points[i].kind != VertexPointKind::FaceSector) continue;
        int f = poly.points[i].face;
        for (std::size_t k = 0; k < hn && hn >= 2; ++k) {
            Point2 di = hull_marked.vertices[k];
            Point2 dj = hull_marked.vertices[(k + 1) % hn];
            if (hn == 2 && k == 1) break;
            auto span = clip_segment_to_convex(di, dj, wedges[i], tol);
            if (!span) continue;
            if ((span->second - span->first) * (dj - di).norm() <= tol.eps_abs) continue;
            Vec2 dirv = dj - di;
            double rate = (di - origin).cross(dirv) / dirv.norm();
            clips.clips[f].push_back({poly.center, dirv, -rate, -1});
            trims.push_back({f, -1, poly.vertex});
        }
    }
    return trims;
}

namespace {

Polygon2 hull_outline_dirs(const VertexPolygon& poly) {
    Polygon2 p;
    const Point2 origin{0.0, 0.0};
    for (int i : poly.hull) p.vertices.push_back(origin + poly.points[i].dir);
    return p;
}

}  // namespace

Polygon2 StripSide::quad_at(const CreasePattern& cp, double s) const {
    const PatternEdge& pe = cp.edges()[cp.creases()[crease]];
    Point2 u = cp.vertices()[pe.v0];
    Point2 w = cp.vertices()[pe.v1];
    Polygon2 q({u + crease_exit[0] * s, w + crease_exit[1] * s, w + offset_exit[1] * s,
                u + offset_exit[0] * s});
    q.make_ccw();
    return q.simplified();
}

std::array<Point2, 2> StripSide::offset_segment_at(const CreasePattern& cp, double s) const {
    const PatternEdge& pe = cp.edges()[cp.creases()[crease]];
    return {cp.vertices()[pe.v0] + offset_exit[0] * s,
            cp.vertices()[pe.v1] + offset_exit[1] * s};
}

std::array<Point2, 2> StripSide::inner_segment_at(const CreasePattern& cp, double s) const {
    const PatternEdge& pe = cp.edges()[cp.creases()[crease]];
    return {cp.vertices()[pe.v0] + crease_exit[0] * s,
            cp.vertices()[pe.v1] + crease_exit[1] * s};
}

std::vector<StripSide> build_strip_sides(const CreasePattern& cp,
                                         const std::vector<VertexPolygon>& polys,
                                         const CreaseWidths& widths, const Tolerance& tol) {
    std::vector<StripSide> out;
    const Point2 origin{0.0, 0.0};
    for (int c = 0; c < cp.crease_count(); ++c) {
        const PatternEdge& pe = cp.edges()[cp.creases()[c]];
        Point2 u = cp.vertices()[pe.v0];
        Point2 w = cp.vertices()[pe.v1];
        double len = (w - u).norm();
        Vec2 t = (w - u) / len;
        auto [fa, fb] = cp.crease_faces(c);
        double a = 0.5 * widths.width[c];

        for (int side = 0; side < 2; ++side) {
            int f = side == 0 ? fa : fb;
            Vec2 n = t.perp() * static_cast<double>(face_side_sign(cp, c, f));
            StripSide ss;
            ss.crease = c;
            ss.face = f;
            ss.side = side;
            ss.length = len;
            ss.half_width = a;
            for (int k = 0; k < 2; ++k) {
                int vtx = k == 0 ? pe.v0 : pe.v1;
                Vec2 dhat = k == 0 ? t : -t;  // into the crease from this end
                const VertexPolygon& P = polys[vtx];
                if (P.clipped) {
                    Polygon2 hull = hull_outline_dirs(P);
                    double L = 1.0;
                    for (const auto& p : P.points) L = std::max(L, 4.0 * p.dir.norm());
                    auto exit_on = [&](const Point2& base) -> std::optional<Vec2> {
                        Point2 A = base - dhat * L;
                        Point2 B = base + dhat * L;
                        auto span = clip_segment_to_convex(A, B, hull, tol);
                        if (!span) return std::nullopt;
                        Point2 p = A + (B - A) * span->second;
                        return p - origin;
                    };
                    auto off = exit_on(origin + n * a);
                    auto inner = exit_on(origin);
                    auto it = P.offset_point.find({c, f});
                    ss.offset_exit[k] = off ? *off
                                        : it != P.offset_point.end() ? P.points[it->second].dir
                                                                     : Vec2{0, 0};
                    ss.crease_exit[k] = inner ? *inner : Vec2{0, 0};
                } else {
                    auto it = P.offset_point.find({c, f});
                    if (it == P.offset_point.end())
                        throw ThickenError("vertex polygon at vertex " + std::to_string(vtx) +
                                           " lacks a corner for " + std::to_string(c));
                    ss.offset_exit[k] = P.points[it->second].dir;
                    auto ia = P.offset_point.find({c, fa});
                    auto ib = P.offset_point.find({c, fb});
                    if (ia == P.offset_point.end() || ib == P.offset_point.end())
                        throw ThickenError("crease " + std::to_string(c) +
                                           " lacks flanking polygon corners");
                    Vec2 s0 = P.points[ia->second].dir;
                    Vec2 s1 = P.points[ib->second].dir;
                    auto tp = line_line_param(origin + s0, s1 - s0, origin, dhat, tol);
                    if (!tp)
                        throw ThickenError(
                            "vertex polygon edge parallel to its crease at vertex " +
                            std::to_string(vtx));
                    ss.crease_exit[k] = s0 + (s1 - s0) * *tp;
                }
            }
            ss.rate = ss.offset_exit[0].dot(t) + ss.offset_exit[1].dot(-t);
            out.push_back(ss);
        }
    }
    return out;
}

ScaleBound scale_upper_bound(const CreasePattern& cp, const std::vector<StripSide>& sides,
                             const ReducedFaceClips& clips, const Tolerance& tol) {
    ScaleBound bound;
    bound.s_eq2 = kInf;
    for (const auto& ss : sides) {
        ScaleConstraint sc;
        sc.crease = ss.crease;
        sc.face = ss.face;
        sc.length = ss.length;
        sc.rate = ss.rate;
        sc.s_limit = ss.rate > tol.eps_abs ? ss.length / ss.rate : kInf;
        bound.s_eq2 = std::min(bound.s_eq2, sc.s_limit);
        bound.constraints.push_back(sc);
    }
    for (std::size_t i = 0; i < bound.constraints.size(); ++i) {
        if (std::isfinite(bound.s_eq2) &&
            bound.constraints[i].s_limit <= bound.s_eq2 * (1.0 + 1e-12))
            bound.binding.push_back(i);
    }

    // Reduced-face positivity: the clip regions shrink monotonically with s,
    // so the largest admissible scale bisects cleanly.
    auto all_positive = [&](double s) {
        for (int f = 0; f < cp.face_count(); ++f) {
            Polygon2 rf = clips.reduced_face_at(cp, f, s, tol);
            if (rf.vertices.size() < 3 || rf.area() <= 0.0) return false;
        }
        return true;
    };
    double hi = std::isfinite(bound.s_eq2) ? bound.s_eq2 : 1.0;
    if (!all_positive(hi)) {
        double lo = 0.0;
        for (int it = 0; it < 80 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
            double mid = 0.5 * (lo + hi);
            (all_positive(mid) ? lo : hi) = mid;
        }
        bound.positivity_cap = lo;
    } else {
        // Positivity holds at the Eq.-2 bound; push upward only if that bound
        // itself is infinite.
        if (std::isfinite(bound.s_eq2)) {
            bound.positivity_cap = bound.s_eq2;
        } else {
            while (all_positive(hi)) {
                hi *= 2.0;
                if (hi > 1e12)
                    throw ThickenError("no face ever loses area; pattern has no creases?");
            }
            double lo = hi * 0.5;
            for (int it = 0; it < 80 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
                double mid = 0.5 * (lo + hi);
                (all_positive(mid) ? lo : hi) = mid;
            }
            bound.positivity_cap = lo;
        }
    }
    bound.s_star = std::min(bound.s_eq2, bound.positivity_cap);
    if (!(bound.s_star > 0.0))
        throw ThickenError("scale upper bound is not positive");
    return bound;
}

std::vector<TrimRecord> refine(const CreasePattern& cp, const std::vector<StripSide>& sides,
                               ReducedFaceClips& clips, double s_hi, const Tolerance& tol) {
    std::vector<TrimRecord> trims;
    const std::array<double, 4> samples{s_hi, 0.75 * s_hi, 0.5 * s_hi, 0.25 * s_hi};
    const int max_rounds = 4 + cp.face_count() * 2;
    for (int round = 0; round < max_rounds; ++round) {
        bool changed = false;
        for (const auto& ss : sides) {
            auto [fa, fb] = cp.crease_faces(ss.crease);
            for (int f = 0; f < cp.face_count(); ++f) {
                if (f == fa || f == fb) continue;
                for (double s : samples) {
                    if (ss.remaining_length(s) < -tol.eps_abs) continue;
                    Polygon2 strip = ss.quad_at(cp, s);
                    if (strip.vertices.size() < 3) continue;
                    Polygon2 rf = clips.reduced_face_at(cp, f, s, tol);
                    if (rf.vertices.size() < 3) continue;
                    if (region_intersect(strip, rf, tol).relation !=
                        RegionRelation::Overlapping)
                        continue;
                    // Trim along the widened crease boundary: same halfplane
                    // that bounds the strip's own face.
                    const PatternEdge& pe = cp.edges()[cp.creases()[ss.crease]];
                    Point2 u = cp.vertices()[pe.v0];
                    Vec2 dir = cp.vertices()[pe.v1] - u;
                    clips.clips[f].push_back(
                        {u, dir, ss.half_width, face_side_sign(cp, ss.crease, ss.face)});
                    trims.push_back({f, ss.crease, -1});
                    changed = true;
                    break;
                }
            }
        }
        if (!changed) return trims;
    }
    throw ThickenError("refinement failed to terminate; input may wrap around a crease");
}

FoldedState3D build_folded_state(const CreasePattern& cp, const FlatMap& fm,
                                 const LayerGraph& g, const CreaseWidths& widths,
                                 const std::vector<StripSide>& sides,
                                 const ReducedFaceClips& clips, double s,
                                 const Tolerance& tol) {
    FoldedState3D fs;
    fs.scale = s;
    for (int f = 0; f < cp.face_count(); ++f) {
        Polygon2 rf = clips.reduced_face_at(cp, f, s, tol);
        if (rf.vertices.size() < 3 || rf.area() <= tol.eps_abs) continue;
        Region3 r;
        r.kind = Region3::Kind::Face;
        r.face = f;
        Polygon2 img;
        for (const Point2& p : rf.vertices) img.vertices.push_back(fm.face_maps[f].apply(p));
        img.make_ccw();
        double z = s * g.heights[f];
        for (const Point2& p : img.vertices) r.pts.push_back({p.x, p.y, z});
        fs.regions.push_back(std::move(r));
    }

    // Plan positions of each crease's two offset images must agree; the wall
    // is the vertical band between the incident faces above that line.
    std::vector<std::optional<Line2>> wall_line(cp.crease_count());
    for (const auto& ss : sides) {
        auto [fa, fb] = cp.crease_faces(ss.crease);
        int F = ss.face;
        int G = F == fa ? fb : fa;
        const Isometry2& iso = fm.face_maps[F];
        auto off = ss.offset_segment_at(cp, s);
        auto inn = ss.inner_segment_at(cp, s);
        Point2 ipu = iso.apply(off[0]);
        Point2 ipw = iso.apply(off[1]);
        const PatternEdge& pe = cp.edges()[cp.creases()[ss.crease]];
        Vec2 tdir =
            iso.apply_vector(cp.vertices()[pe.v1] - cp.vertices()[pe.v0]).normalized();
        auto foot = [&](const Point2& q) { return ipu + tdir * (q - ipu).dot(tdir); };

        if (!wall_line[ss.crease]) {
            wall_line[ss.crease] = Line2{ipu, tdir};
        } else if (s > 0.0) {
            const Line2& ln = *wall_line[ss.crease];
            double d0 = std::abs(ln.signed_distance(ipu));
            double d1 = std::abs(ln.signed_distance(ipw));
            if (std::max(d0, d1) > 1e-6 * std::max(1.0, s))
                throw ThickenError("offset images of crease " + std::to_string(ss.crease) +
                                   " do not coincide in plan view");
        }

        double zf = s * g.heights[F];
        double zg = s * g.heights[G];
        double zmid = 0.5 * (zf + zg);
        Region3 r;
        r.kind = Region3::Kind::Wall;
        r.crease = ss.crease;
        r.side = ss.side;
        r.inverted = ss.remaining_length(s) < -1e-9 * std::max(1.0, ss.length);
        Point2 fu = foot(iso.apply(inn[0]));
        Point2 fw = foot(iso.apply(inn[1]));
        r.pts = {{ipu.x, ipu.y, zf}, {ipw.x, ipw.y, zf}, {fw.x, fw.y, zmid}, {fu.x, fu.y, zmid}};
        fs.regions.push_back(std::move(r));
    }
    (void)widths;
    return fs;
}

namespace {

// Interval of coordinate `1-axis` where the polygon meets the line
// {coordinate axis == value}; empty when the polygon misses it.
std::optional<std::pair<double, double>> polygon_slice(const Polygon2& poly, int axis,
                                                       double value) {
    double lo = kInf, hi = -kInf;
    const std::size_t n = poly.vertices.size();
    auto coord = [&](const Point2& p, int ax) { return ax == 0 ? p.x : p.y; };
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& p = poly.vertices[i];
        const Point2& q = poly.vertices[(i + 1) % n];
        double cp_ = coord(p, axis) - value;
        double cq = coord(q, axis) - value;
        if (cp_ == 0.0) {
            lo = std::min(lo, coord(p, 1 - axis));
            hi = std::max(hi, coord(p, 1 - axis));
        }
        if ((cp_ < 0.0 && cq > 0.0) || (cp_ > 0.0 && cq < 0.0)) {
            double t = cp_ / (cp_ - cq);
            double other = coord(p, 1 - axis) + t * (coord(q, 1 - axis) - coord(p, 1 - axis));
            lo = std::min(lo, other);
            hi = std::max(hi, other);
        }
    }
    if (lo > hi) return std::nullopt;
    return std::make_pair(lo, hi);
}

struct FaceInfo {
    std::size_t region;
    double z = 0.0;
    Polygon2 plan;
};

struct WallInfo {
    std::size_t region;
    Point2 origin;
    Vec2 tdir;
    Polygon2 local;  // (tau, z)
    double zlo = 0.0, zhi = 0.0;
};

std::string region_name(const Region3& r) {
    if (r.kind == Region3::Kind::Face) return "face " + std::to_string(r.face);
    return "crease " + std::to_string(r.crease) + " side " + std::to_string(r.side);
}

}  // namespace

ValidationReport check_folded_intersections(const FoldedState3D& fs, const Tolerance& tol) {
    ValidationReport report{"folded_intersections"};
    std::vector<FaceInfo> faces;
    std::vector<WallInfo> walls;

    for (std::size_t i = 0; i < fs.regions.size(); ++i) {
        const Region3& r = fs.regions[i];
        if (r.inverted) {
            report.fail(region_name(r) +
                        " is inverted: neighboring vertex polygons overlap at this scale");
            continue;
        }
        if (r.kind == Region3::Kind::Face) {
            FaceInfo fi;
            fi.region = i;
            fi.z = r.pts.empty() ? 0.0 : r.pts[0][2];
            for (const auto& p : r.pts) fi.plan.vertices.push_back({p[0], p[1]});
            fi.plan.make_ccw();
            if (fi.plan.area() > tol.eps_abs) faces.push_back(std::move(fi));
        } else {
            WallInfo wi;
            wi.region = i;
            // Longest plan extent defines the wall's line.
            double best = 0.0;
            Point2 a{r.pts[0][0], r.pts[0][1]};
            Point2 borig = a;
            Vec2 dir{1, 0};
            for (const auto& p : r.pts) {
                for (const auto& q : r.pts) {
                    Point2 pp{p[0], p[1]}, qq{q[0], q[1]};
                    double dpq = (qq - pp).norm();
                    if (dpq > best) {
                        best = dpq;
                        borig = pp;
                        dir = qq - pp;
                    }
                }
            }
            if (best <= tol.eps_abs) continue;  // zero plan extent
            wi.origin = borig;
            wi.tdir = dir.normalized();
            wi.zlo = kInf;
            wi.zhi = -kInf;
            for (const auto& p : r.pts) {
                double tau = (Point2{p[0], p[1]} - wi.origin).dot(wi.tdir);
                wi.local.vertices.push_back({tau, p[2]});
                wi.zlo = std::min(wi.zlo, p[2]);
                wi.zhi = std::max(wi.zhi, p[2]);
            }
            wi.local.make_ccw();
            if (wi.local.area() > tol.eps_abs * tol.eps_abs) walls.push_back(std::move(wi));
        }
    }

    const double eps = tol.eps_abs;

    for (std::size_t i = 0; i < faces.size(); ++i) {
        for (std::size_t j = i + 1; j < faces.size(); ++j) {
            if (std::abs(faces[i].z - faces[j].z) > eps) continue;
            auto rel = region_intersect(faces[i].plan, faces[j].plan, tol);
            if (rel.relation == RegionRelation::Overlapping)
                report.fail(region_name(fs.regions[faces[i].region]) + " and " +
                            region_name(fs.regions[faces[j].region]) +
                            " interpenetrate in a common plane");
        }
    }

    for (const auto& fi : faces) {
        for (const auto& wi : walls) {
            if (fi.z <= wi.zlo + eps || fi.z >= wi.zhi - eps) continue;
            auto slice = polygon_slice(wi.local, 1, fi.z);
            if (!slice) continue;
            double t0 = slice->first + eps, t1 = slice->second - eps;
            if (t0 >= t1) continue;
            Point2 A = wi.origin + wi.tdir * t0;
            Point2 B = wi.origin + wi.tdir * t1;
            auto span = clip_segment_to_convex(A, B, fi.plan, tol);
            if (!span) continue;
            if ((span->second - span->first) * (B - A).norm() <= eps) continue;
            Point2 mid = A + (B - A) * (0.5 * (span->first + span->second));
            if (point_strictly_inside(mid, fi.plan, tol))
                report.fail(region_name(fs.regions[wi.region]) + " passes through " +
                            region_name(fs.regions[fi.region]));
        }
    }

    for (std::size_t i = 0; i < walls.size(); ++i) {
        for (std::size_t j = i + 1; j < walls.size(); ++j) {
            const WallInfo& A = walls[i];
            const WallInfo& B = walls[j];
            double crossness = std::abs(A.tdir.cross(B.tdir));
            if (crossness <= 1e-9) {
                if (std::abs(A.tdir.cross(B.origin - A.origin)) > eps) continue;
                Polygon2 b_in_a;
                for (std::size_t k = 0; k < B.local.vertices.size(); ++k) {
                    Point2 plan = B.origin + B.tdir * B.local.vertices[k].x;
                    b_in_a.vertices.push_back(
                        {(plan - A.origin).dot(A.tdir), B.local.vertices[k].y});
                }
                b_in_a.make_ccw();
                auto rel = region_intersect(A.local, b_in_a, tol);
                if (rel.relation == RegionRelation::Overlapping)
                    report.fail(region_name(fs.regions[A.region]) + " and " +
                                region_name(fs.regions[B.region]) +
                                " overlap in a common vertical plane");
                continue;
            }
            auto ta = line_line_param(A.origin, A.tdir, B.origin, B.tdir, tol);
            auto tb = line_line_param(B.origin, B.tdir, A.origin, A.tdir, tol);
            if (!ta || !tb) continue;
            auto za = polygon_slice(A.local, 0, *ta);
            auto zb = polygon_slice(B.local, 0, *tb);
            if (!za || !zb) continue;
            double zlo = std::max(za->first, zb->first);
            double zhi = std::min(za->second, zb->second);
            if (zhi - zlo <= eps) continue;
            double zmid = 0.5 * (zlo + zhi);
            auto ia = polygon_slice(A.local, 1, zmid);
            auto ib = polygon_slice(B.local, 1, zmid);
            if (!ia || !ib) continue;
            bool a_through = ia->first + eps < *ta && *ta < ia->second - eps;
            bool b_through = ib->first + eps < *tb && *tb < ib->second - eps;
            if (a_through && b_through)
                report.fail(region_name(fs.regions[A.region]) + " and " +
                            region_name(fs.regions[B.region]) + " cross each other");
        }
    }
    return report;
}

GlobalScaleResult find_global_scale(const CreasePattern& cp, const FlatMap& fm,
                                    const LayerGraph& g, const CreaseWidths& widths,
                                    const std::vector<StripSide>& sides,
                                    const ReducedFaceClips& clips, double s_star,
                                    double requested, const Tolerance& tol, int max_probes) {
    if (!(requested > 0.0) || requested > s_star * (1.0 + 1e-12))
        throw ThickenError("requested scale must lie in (0, s*]");
    double s = std::min(requested, s_star);
    GlobalScaleResult res;
    double last_failing = kInf;
    for (int probe = 0; probe < max_probes; ++probe) {
        FoldedState3D fs = build_folded_state(cp, fm, g, widths, sides, clips, s, tol);
        ValidationReport rep = check_folded_intersections(fs, tol);
        ++res.probes;
        if (rep.passed()) {
            res.scale = s;
            res.certificate = std::move(rep);
            return res;
        }
        last_failing = s;
        s *= 0.5;
    }
    std::ostringstream os;
    os << "no intersection-free scale found after " << max_probes
       << " probes; smallest failing scale " << last_failing;
    throw ThickenError(os.str());
}

ThickenedPattern layout_pattern(const CreasePattern& cp,
                                const std::vector<VertexPolygon>& polys,
                                const std::vector<StripSide>& sides,
                                const ReducedFaceClips& clips,
                                const std::vector<CreaseAssignment>& assignments,
                                const CreaseWidths& widths,
                                const std::vector<TrimRecord>& trims, double s,
                                const Tolerance& tol) {
    if (!(s > 0.0)) throw ThickenError("layout scale must be positive");
    ThickenedPattern tp;
    tp.scale = s;
    tp.assignments = assignments;
    tp.widths = widths.width;
    tp.trims = trims;

    for (int f = 0; f < cp.face_count(); ++f) {
        Polygon2 rf = clips.reduced_face_at(cp, f, s, tol);
        if (rf.vertices.size() < 3 || rf.area() <= tol.eps_abs)
            throw ThickenError("reduced face " + std::to_string(f) +
                               " has no positive area at scale " + std::to_string(s));
        tp.reduced_faces.push_back(std::move(rf));
    }

    for (const auto& ss : sides) {
        if (ss.remaining_length(s) < -tol.eps_abs)
            throw ThickenError("widened crease " + std::to_string(ss.crease) +
                               " has negative length at scale " + std::to_string(s));
        StripGeometry sg;
        sg.crease = ss.crease;
        sg.face = ss.face;
        sg.side = ss.side;
        sg.polygon = ss.quad_at(cp, s);
        sg.offset_segment = ss.offset_segment_at(cp, s);
        sg.inner_segment = ss.inner_segment_at(cp, s);

        // Offset segment parallel to the crease at distance s*w/2.
        const PatternEdge& pe = cp.edges()[cp.creases()[ss.crease]];
        Line2 crease_line{cp.vertices()[pe.v0],
                          cp.vertices()[pe.v1] - cp.vertices()[pe.v0]};
        double want = s * 0.5 * widths.width[ss.crease];
        for (const Point2& p : sg.offset_segment) {
            if (std::abs(std::abs(crease_line.signed_distance(p)) - want) >
                1e-9 * std::max(1.0, want))
                throw ThickenError("offset segment of crease " + std::to_string(ss.crease) +
                                   " is not at the scaled half-width distance");
        }
        tp.strips.push_back(std::move(sg));
    }

    for (const auto& vp : polys) {
        if (vp.trivial()) continue;
        // Boundary intersections must stay within their edges at this scale.
        auto check_point = [&](const VertexPolygonPoint& p) {
            if (p.kind != VertexPointKind::BoundaryIntersection) return;
            const PatternEdge& pe = cp.edges()[p.edge];
            Point2 a = cp.vertices()[pe.v0];
            Point2 b = cp.vertices()[pe.v1];
            Point2 q = vp.center + p.dir * s;
            Vec2 ab = b - a;
            double t = (q - a).dot(ab) / ab.norm2();
            if (t < -1e-9 || t > 1.0 + 1e-9)
                throw ThickenError("vertex " + std::to_string(vp.vertex) +
                                   ": offset line leaves boundary edge " +
                                   std::to_string(p.edge) + " at scale " + std::to_string(s));
        };
        if (vp.clipped)
            for (int i : vp.hull) check_point(vp.points[i]);
        else
            for (const auto& p : vp.points) check_point(p);

        HoleGeometry hg;
        hg.vertex = vp.vertex;
        hg.polygon = vp.at(s);
        hg.degenerate = vp.degenerate;
        tp.holes.push_back(std::move(hg));
    }

    // Pairwise disjointness. Holes may be non-convex but are star-shaped about
    // their vertex, so fan pieces keep every test convex-vs-convex.
    std::vector<std::pair<std::string, Polygon2>> chunks;
    for (int f = 0; f < cp.face_count(); ++f)
        chunks.push_back({"reduced face " + std::to_string(f), tp.reduced_faces[f]});
    for (const auto& sgeo : tp.strips)
        chunks.push_back({"strip of crease " + std::to_string(sgeo.crease) + " side " +
                              std::to_string(sgeo.side),
                          sgeo.polygon});
    std::vector<int> chunk_crease(chunks.size(), -1);
    for (std::size_t i = cp.face_count(); i < chunks.size(); ++i)
        chunk_crease[i] = tp.strips[i - cp.face_count()].crease;
    for (const auto& hg : tp.holes) {
        if (hg.degenerate || hg.polygon.vertices.size() < 3) continue;
        const std::size_t n = hg.polygon.vertices.size();
        Point2 c = cp.vertices()[hg.vertex];
        bool convex = hg.polygon.is_convex(tol);
        if (convex) {
            chunks.push_back({"hole at vertex " + std::to_string(hg.vertex), hg.polygon});
            chunk_crease.push_back(-1);
        } else {
            for (std::size_t k = 0; k < n; ++k) {
                Polygon2 tri({c, hg.polygon.vertices[k], hg.polygon.vertices[(k + 1) % n]});
                if (tri.area() <= tol.eps_abs) continue;
                tri.make_ccw();
                chunks.push_back({"hole at vertex " + std::to_string(hg.vertex), tri});
                chunk_crease.push_back(-1);
            }
        }
    }

    for (std::size_t i = 0; i < chunks.size(); ++i) {
        bool i_face = static_cast<int>(i) < cp.face_count();
        for (std::size_t j = i + 1; j < chunks.size(); ++j) {
            bool j_face = static_cast<int>(j) < cp.face_count();
            if (i_face && j_face) continue;  // subsets of disjoint faces
            if (chunks[i].first == chunks[j].first) continue;
            if (chunk_crease[i] >= 0 && chunk_crease[i] == chunk_crease[j])
                continue;  // two sides of one crease share the crease line
            auto rel = region_intersect(chunks[i].second, chunks[j].second, tol);
            if (rel.relation == RegionRelation::Overlapping)
                throw ThickenError("layout invariant violated: " + chunks[i].first + " and " +
                                   chunks[j].first + " overlap (area " +
                                   std::to_string(rel.area) + ")");
        }
    }

    // Containment inside the original pattern.
    auto inside_pattern = [&](const Point2& p) {
        for (int f = 0; f < cp.face_count(); ++f)
            if (point_in_polygon(p, cp.face_polygon(f), tol)) return true;
        return false;
    };
    for (const auto& [name, poly] : chunks) {
        for (const Point2& p : poly.vertices)
            if (!inside_pattern(p))
                throw ThickenError("layout invariant violated: " + name +
                                   " leaves the original pattern");
    }
    return tp;
}

}  // namespace thickfold
