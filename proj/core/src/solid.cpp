#include "thickfold/solid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace thickfold {

namespace {

Point3 sub(const Point3& a, const Point3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Point3 cross3(const Point3& a, const Point3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double dot3(const Point3& a, const Point3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
double norm3(const Point3& a) { return std::sqrt(dot3(a, a)); }
Point3 scale3(const Point3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }
Point3 add3(const Point3& a, const Point3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }

// Newell normal, not normalized.
Point3 face_normal(const std::vector<Point3>& poly) {
    Point3 n{0, 0, 0};
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point3& p = poly[i];
        const Point3& q = poly[(i + 1) % poly.size()];
        n[0] += (p[1] - q[1]) * (p[2] + q[2]);
        n[1] += (p[2] - q[2]) * (p[0] + q[0]);
        n[2] += (p[0] - q[0]) * (p[1] + q[1]);
    }
    return n;
}

}  // namespace

double ConvexSolid::volume() const {
    double six_v = 0.0;
    for (const auto& poly : faces) {
        for (std::size_t i = 1; i + 1 < poly.size(); ++i)
            six_v += dot3(poly[0], cross3(poly[i], poly[i + 1]));
    }
    return six_v / 6.0;
}

ConvexSolid ConvexSolid::clipped(const Point3& normal, double offset, double eps) const {
    ConvexSolid out;
    std::vector<Point3> section;
    for (const auto& poly : faces) {
        std::vector<Point3> kept;
        const std::size_t n = poly.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Point3& cur = poly[i];
            const Point3& nxt = poly[(i + 1) % n];
            double dc = dot3(cur, normal) - offset;
            double dn = dot3(nxt, normal) - offset;
            bool keep_cur = dc <= eps;
            bool keep_nxt = dn <= eps;
            if (keep_cur) kept.push_back(cur);
            if (keep_cur != keep_nxt && std::abs(dc - dn) > 1e-300) {
                double t = dc / (dc - dn);
                Point3 x = add3(cur, scale3(sub(nxt, cur), t));
                kept.push_back(x);
                section.push_back(x);
            } else if (std::abs(dc) <= eps && !keep_nxt) {
                section.push_back(cur);
            } else if (std::abs(dn) <= eps && !keep_cur) {
                section.push_back(nxt);
            }
        }
        if (kept.size() >= 3) out.faces.push_back(std::move(kept));
    }
    if (section.size() >= 3) {
        // Build the cap by sorting the section points around their centroid
        // within the cutting plane.
        Point3 c{0, 0, 0};
        for (const auto& p : section) c = add3(c, p);
        c = scale3(c, 1.0 / static_cast<double>(section.size()));
        Point3 nn = scale3(normal, 1.0 / std::max(norm3(normal), 1e-300));
        Point3 ref = sub(section[0], c);
        double rn = norm3(ref);
        if (rn > 1e-300) {
            ref = scale3(ref, 1.0 / rn);
            Point3 ref2 = cross3(nn, ref);
            std::vector<std::pair<double, Point3>> ordered;
            for (const auto& p : section) {
                Point3 d = sub(p, c);
                ordered.push_back({std::atan2(dot3(d, ref2), dot3(d, ref)), p});
            }
            std::sort(ordered.begin(), ordered.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            std::vector<Point3> cap;
            for (const auto& [ang, p] : ordered) {
                if (!cap.empty() && norm3(sub(p, cap.back())) <= 1e-12) continue;
                cap.push_back(p);
            }
            while (cap.size() > 1 && norm3(sub(cap.front(), cap.back())) <= 1e-12)
                cap.pop_back();
            if (cap.size() >= 3) out.faces.push_back(std::move(cap));
        }
    }
    return out;
}

ConvexSolid ConvexSolid::vertical_prism(const Polygon2& footprint, double z0, double z1) {
    ConvexSolid s;
    if (footprint.vertices.size() < 3) return s;
    Polygon2 fp = footprint;
    fp.make_ccw();
    const std::size_t n = fp.vertices.size();
    std::vector<Point3> top, bottom;
    for (const Point2& p : fp.vertices) {
        top.push_back({p.x, p.y, z1});
        bottom.push_back({p.x, p.y, z0});
    }
    std::reverse(bottom.begin(), bottom.end());  // outward (down)
    s.faces.push_back(top);
    s.faces.push_back(bottom);
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = fp.vertices[i];
        const Point2& b = fp.vertices[(i + 1) % n];
        s.faces.push_back({{a.x, a.y, z0}, {b.x, b.y, z0}, {b.x, b.y, z1}, {a.x, a.y, z1}});
    }
    return s;
}

ConvexSolid ConvexSolid::slab(const std::vector<Point3>& polygon, const Point3& normal,
                              double h0, double h1) {
    ConvexSolid s;
    if (polygon.size() < 3) return s;
    Point3 nn = scale3(normal, 1.0 / std::max(norm3(normal), 1e-300));
    std::vector<Point3> near, far;
    for (const auto& p : polygon) {
        near.push_back(add3(p, scale3(nn, h0)));
        far.push_back(add3(p, scale3(nn, h1)));
    }
    std::vector<Point3> near_rev = near;
    std::reverse(near_rev.begin(), near_rev.end());
    s.faces.push_back(far);
    s.faces.push_back(near_rev);
    const std::size_t n = polygon.size();
    for (std::size_t i = 0; i < n; ++i) {
        s.faces.push_back({near[i], near[(i + 1) % n], far[(i + 1) % n], far[i]});
    }
    return s;
}

double intersection_volume(const ConvexSolid& a, const ConvexSolid& b) {
    ConvexSolid cur = a;
    for (const auto& poly : b.faces) {
        if (cur.empty()) return 0.0;
        Point3 n = face_normal(poly);
        double len = norm3(n);
        if (len <= 1e-300) continue;
        n = scale3(n, 1.0 / len);
        cur = cur.clipped(n, dot3(n, poly[0]), 1e-12);
    }
    return cur.empty() ? 0.0 : std::max(0.0, cur.volume());
}

double max_thickness(const CreaseWidths& widths, double scale) {
    if (widths.width.empty()) throw SolidError("no creases: max thickness undefined");
    return scale * widths.min_width();
}

double SolidPanel::volume() const {
    double v = 0.0;
    for (const auto& piece : pieces) v += piece.volume();
    return v;
}

double SolidModel::total_volume() const {
    double v = 0.0;
    for (const auto& p : panels) v += p.volume();
    return v;
}

SolidModel apply_thickness(const CreasePattern& cp, const ThickenedPattern& tp,
                           const FoldedState3D& fs, const LayerGraph& g,
                           const ThicknessConfig& cfg, const Tolerance& tol) {
    if (cfg.t < 0.0) throw SolidError("thickness must be nonnegative");
    if (cfg.split < 0.0 || cfg.split > 1.0) throw SolidError("split must lie in [0, 1]");
    double t_max = max_thickness(CreaseWidths{tp.widths}, tp.scale);
    if (cfg.t > t_max * (1.0 + 1e-12)) {
        int binding = 0;
        for (std::size_t c = 1; c < tp.widths.size(); ++c)
            if (tp.widths[c] < tp.widths[binding]) binding = static_cast<int>(c);
        std::ostringstream os;
        os << "thickness " << cfg.t << " exceeds t_max " << t_max << " (binding crease "
           << binding << ")";
        throw SolidError(os.str());
    }

    SolidModel sm;
    sm.thickness = cfg.t;
    sm.t_max = t_max;
    sm.split = cfg.split;

    // Folded plan geometry per face and per crease wall.
    std::map<int, const Region3*> face_region;
    std::map<std::pair<int, int>, const Region3*> wall_region;
    for (const auto& r : fs.regions) {
        if (r.kind == Region3::Kind::Face) face_region[r.face] = &r;
        else wall_region[{r.crease, r.side}] = &r;
    }

    const double up = cfg.split * cfg.t;
    const double down = (1.0 - cfg.split) * cfg.t;

    for (int f = 0; f < cp.face_count(); ++f) {
        auto it = face_region.find(f);
        if (it == face_region.end()) continue;
        const Region3& r = *it->second;
        double z = r.pts[0][2];
        Polygon2 plan;
        for (const auto& p : r.pts) plan.vertices.push_back({p[0], p[1]});
        plan.make_ccw();

        Polygon2 top_plan = plan;
        Polygon2 bottom_plan = plan;
        if (!cfg.suppress_relief && cfg.t > 0.0) {
            for (const auto& sg : tp.strips) {
                if (sg.face != f) continue;
                auto wr = wall_region.find({sg.crease, sg.side});
                if (wr == wall_region.end()) continue;
                const Region3& w = *wr->second;
                // Wall plan line; relief keeps face material beyond t/2 of it.
                Point2 a{w.pts[0][0], w.pts[0][1]};
                Point2 b{w.pts[1][0], w.pts[1][1]};
                if ((b - a).norm() <= tol.eps_abs) continue;
                Line2 line{a, b - a};
                // Face side of the line: probe with the plan centroid.
                double side = line.signed_distance(plan.centroid());
                int keep = side >= 0.0 ? +1 : -1;
                Line2 shifted{a + line.dir.perp().normalized() * (keep * 0.5 * cfg.t),
                              line.dir};
                auto [fa, fb] = cp.crease_faces(sg.crease);
                int other = sg.face == fa ? fb : fa;
                bool inside_up = g.heights[other] > g.heights[sg.face];
                Polygon2& target = inside_up ? top_plan : bottom_plan;
                Polygon2 before = target;
                target = clip_to_halfplane(target, shifted, keep, tol);
                double removed = before.area() - (target.vertices.size() >= 3 ? target.area() : 0.0);
                if (removed > tol.eps_abs)
                    sm.reliefs.push_back({f, sg.crease, removed, inside_up ? up : down});
            }
        }

        SolidPanel panel;
        panel.name = "face_" + std::to_string(f);
        panel.face = f;
        if (up > 0.0 && top_plan.vertices.size() >= 3)
            panel.pieces.push_back(ConvexSolid::vertical_prism(top_plan, z, z + up));
        if (down > 0.0 && bottom_plan.vertices.size() >= 3)
            panel.pieces.push_back(ConvexSolid::vertical_prism(bottom_plan, z - down, z));
        sm.panels.push_back(std::move(panel));
    }

    for (int c = 0; c < cp.crease_count(); ++c) {
        SolidPanel panel;
        panel.name = "crease_" + std::to_string(c);
        panel.crease = c;
        auto [fa, fb] = cp.crease_faces(c);
        panel.face_a = fa;
        panel.face_b = fb;
        for (int side = 0; side < 2; ++side) {
            auto wr = wall_region.find({c, side});
            if (wr == wall_region.end()) continue;
            const Region3& w = *wr->second;
            if (w.pts.size() < 3) continue;
            Point3 n = face_normal(w.pts);
            if (norm3(n) <= 1e-12) continue;
            if (cfg.t > 0.0)
                panel.pieces.push_back(ConvexSolid::slab(w.pts, n, -0.5 * cfg.t, 0.5 * cfg.t));
        }
        sm.panels.push_back(std::move(panel));
    }
    return sm;
}

ValidationReport check_solid_local(const SolidModel& sm, const Tolerance& tol) {
    ValidationReport report{"solid_local"};
    std::map<int, const SolidPanel*> by_face;
    for (const auto& p : sm.panels)
        if (p.face >= 0) by_face[p.face] = &p;

    auto interpenetrate = [&](const SolidPanel& a, const SolidPanel& b) {
        double v = 0.0;
        for (const auto& pa : a.pieces)
            for (const auto& pb : b.pieces) v += intersection_volume(pa, pb);
        return v;
    };

    for (const auto& wall : sm.panels) {
        if (wall.crease < 0) continue;
        const SolidPanel* pa = by_face.count(wall.face_a) ? by_face[wall.face_a] : nullptr;
        const SolidPanel* pb = by_face.count(wall.face_b) ? by_face[wall.face_b] : nullptr;
        struct Pair {
            const SolidPanel* x;
            const SolidPanel* y;
        };
        std::vector<Pair> pairs;
        if (pa) pairs.push_back({&wall, pa});
        if (pb) pairs.push_back({&wall, pb});
        if (pa && pb) pairs.push_back({pa, pb});
        for (const auto& [x, y] : pairs) {
            double v = interpenetrate(*x, *y);
            if (v > tol.eps_abs) {
                std::ostringstream os;
                os << x->name << " and " << y->name << " interpenetrate near crease "
                   << wall.crease << " (volume " << v << ")";
                report.fail(os.str());
            }
        }
    }
    return report;
}

}  // namespace thickfold
