#include "thickfold/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace thickfold {

std::string fmt_real(double v) {
    if (v == 0.0) v = 0.0;  // normalize -0
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

namespace {

std::string fmt_point(const Point2& p) {
    return "[" + fmt_real(p.x) + ", " + fmt_real(p.y) + "]";
}

std::string fmt_polygon(const Polygon2& poly) {
    std::string out = "[";
    for (std::size_t i = 0; i < poly.vertices.size(); ++i) {
        if (i) out += ", ";
        out += fmt_point(poly.vertices[i]);
    }
    return out + "]";
}

const char* assignment_name(CreaseAssignment a) {
    return a == CreaseAssignment::Valley ? "valley" : "mountain";
}

}  // namespace

std::string write_thickened_json(const ParsedDocument& doc, const ThickenedPattern& tp) {
    const CreasePattern& cp = doc.pattern;
    std::ostringstream os;
    os << "{\n";
    os << "  \"vertices\": [";
    for (int v = 0; v < cp.vertex_count(); ++v) {
        if (v) os << ", ";
        os << fmt_point(cp.vertices()[v]);
    }
    os << "],\n";
    os << "  \"edges\": [";
    for (int e = 0; e < cp.edge_count(); ++e) {
        const PatternEdge& pe = cp.edges()[e];
        if (e) os << ", ";
        os << "{\"v\": [" << pe.v0 << ", " << pe.v1 << "], \"kind\": \""
           << (pe.kind == EdgeKind::Crease ? "crease" : "boundary") << "\"}";
    }
    os << "],\n";
    os << "  \"faces\": [";
    for (int f = 0; f < cp.face_count(); ++f) {
        if (f) os << ", ";
        os << "[";
        for (std::size_t i = 0; i < cp.faces()[f].size(); ++i) {
            if (i) os << ", ";
            os << cp.faces()[f][i];
        }
        os << "]";
    }
    os << "],\n";
    os << "  \"layer_order\": [";
    for (std::size_t i = 0; i < doc.layer_order.size(); ++i) {
        if (i) os << ", ";
        os << doc.layer_order[i];
    }
    os << "],\n";
    if (doc.weights.automatic) {
        os << "  \"weights\": \"auto\",\n";
    } else {
        os << "  \"weights\": [";
        for (std::size_t i = 0; i < doc.weights.overrides.size(); ++i) {
            const auto& ov = doc.weights.overrides[i];
            if (i) os << ", ";
            os << "{\"faces\": [" << ov.face_a << ", " << ov.face_b << "], \"w\": "
               << fmt_real(ov.w) << "}";
        }
        os << "],\n";
    }
    os << "  \"scale\": " << fmt_real(tp.scale) << ",\n";
    os << "  \"widths\": [";
    for (std::size_t c = 0; c < tp.widths.size(); ++c) {
        if (c) os << ", ";
        os << fmt_real(tp.widths[c]);
    }
    os << "],\n";
    os << "  \"reduced_faces\": [";
    for (std::size_t f = 0; f < tp.reduced_faces.size(); ++f) {
        if (f) os << ", ";
        os << fmt_polygon(tp.reduced_faces[f]);
    }
    os << "],\n";
    os << "  \"strips\": [";
    bool first = true;
    for (int c = 0; c < cp.crease_count(); ++c) {
        if (!first) os << ", ";
        first = false;
        os << "{\"crease\": " << c << ", \"assignment\": \""
           << assignment_name(tp.assignments[c]) << "\", \"sides\": [";
        bool first_side = true;
        for (const auto& sg : tp.strips) {
            if (sg.crease != c) continue;
            if (!first_side) os << ", ";
            first_side = false;
            os << "{\"face\": " << sg.face << ", \"polygon\": " << fmt_polygon(sg.polygon)
               << ", \"offset\": [" << fmt_point(sg.offset_segment[0]) << ", "
               << fmt_point(sg.offset_segment[1]) << "]}";
        }
        os << "]}";
    }
    os << "],\n";
    os << "  \"holes\": [";
    first = true;
    for (const auto& hg : tp.holes) {
        if (!first) os << ", ";
        first = false;
        os << "{\"vertex\": " << hg.vertex << ", \"degenerate\": "
           << (hg.degenerate ? "true" : "false") << ", \"polygon\": " << fmt_polygon(hg.polygon)
           << "}";
    }
    os << "]\n}\n";
    return os.str();
}

namespace {

struct SvgFrame {
    double min_x, min_y, max_x, max_y;
    double px(double x) const { return (x - min_x) * 100.0; }
    double py(double y) const { return (max_y - y) * 100.0; }  // flip for SVG
};

std::string svg_points(const Polygon2& poly, const SvgFrame& fr) {
    std::string out;
    for (std::size_t i = 0; i < poly.vertices.size(); ++i) {
        if (i) out += " ";
        out += fmt_real(fr.px(poly.vertices[i].x)) + "," + fmt_real(fr.py(poly.vertices[i].y));
    }
    return out;
}

}  // namespace

std::string export_svg(const CreasePattern& cp, const ThickenedPattern& tp) {
    SvgFrame fr{1e300, 1e300, -1e300, -1e300};
    for (const Point2& p : cp.vertices()) {
        fr.min_x = std::min(fr.min_x, p.x);
        fr.min_y = std::min(fr.min_y, p.y);
        fr.max_x = std::max(fr.max_x, p.x);
        fr.max_y = std::max(fr.max_y, p.y);
    }
    double w = (fr.max_x - fr.min_x) * 100.0;
    double h = (fr.max_y - fr.min_y) * 100.0;

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt_real(w)
       << "\" height=\"" << fmt_real(h) << "\" viewBox=\"0 0 " << fmt_real(w) << " "
       << fmt_real(h) << "\">\n";

    os << "  <g id=\"reduced-faces\" fill=\"#9ecae1\" stroke=\"#31608f\" stroke-width=\"1\">\n";
    for (const auto& poly : tp.reduced_faces)
        os << "    <polygon points=\"" << svg_points(poly, fr) << "\"/>\n";
    os << "  </g>\n";

    // One merged shape per widened crease.
    os << "  <g id=\"widened-creases\" fill=\"#cccccc\" stroke=\"#888888\" stroke-width=\"1\">\n";
    for (int c = 0; c < static_cast<int>(tp.widths.size()); ++c) {
        const StripGeometry* s0 = nullptr;
        const StripGeometry* s1 = nullptr;
        for (const auto& sg : tp.strips) {
            if (sg.crease != c) continue;
            (sg.side == 0 ? s0 : s1) = &sg;
        }
        if (!s0 || !s1) continue;
        Polygon2 merged({s0->offset_segment[0], s0->offset_segment[1], s0->inner_segment[1],
                         s1->offset_segment[1], s1->offset_segment[0], s0->inner_segment[0]});
        merged.make_ccw();
        merged = merged.simplified({}, true);
        os << "    <polygon points=\"" << svg_points(merged, fr) << "\"/>\n";
    }
    os << "  </g>\n";

    os << "  <g id=\"holes\" fill=\"none\" stroke=\"#222222\" stroke-width=\"1.5\">\n";
    for (const auto& hg : tp.holes) {
        if (hg.degenerate || hg.polygon.vertices.size() < 3) continue;
        os << "    <polygon points=\"" << svg_points(hg.polygon, fr) << "\"/>\n";
    }
    os << "  </g>\n";

    os << "  <g id=\"offset-creases\" fill=\"none\" stroke-width=\"2\">\n";
    for (const auto& sg : tp.strips) {
        bool valley = tp.assignments[sg.crease] == CreaseAssignment::Valley;
        const char* dash = valley ? "12,4,2,4" : "8,8";  // dash-dot vs dashed
        const char* color = valley ? "#1a6b1a" : "#8b1a1a";
        os << "    <line x1=\"" << fmt_real(fr.px(sg.offset_segment[0].x)) << "\" y1=\""
           << fmt_real(fr.py(sg.offset_segment[0].y)) << "\" x2=\""
           << fmt_real(fr.px(sg.offset_segment[1].x)) << "\" y2=\""
           << fmt_real(fr.py(sg.offset_segment[1].y)) << "\" stroke=\"" << color
           << "\" stroke-dasharray=\"" << dash << "\"/>\n";
    }
    os << "  </g>\n</svg>\n";
    return os.str();
}

namespace {

struct ObjWriter {
    std::ostringstream os;
    int next_vertex = 1;

    void object(const std::string& name) { os << "o " << name << "\n"; }
    void polygon(const std::vector<std::array<double, 3>>& pts) {
        int base = next_vertex;
        for (const auto& p : pts)
            os << "v " << fmt_real(p[0]) << " " << fmt_real(p[1]) << " " << fmt_real(p[2])
               << "\n";
        os << "f";
        for (std::size_t i = 0; i < pts.size(); ++i) os << " " << base + static_cast<int>(i);
        os << "\n";
        next_vertex += static_cast<int>(pts.size());
    }
};

}  // namespace

std::string export_obj_fold(const FoldedState3D& fs, const Tolerance& tol) {
    ObjWriter w;
    for (const auto& r : fs.regions) {
        if (r.kind != Region3::Kind::Face) continue;
        w.object("face_" + std::to_string(r.face));
        w.polygon(r.pts);
    }
    // Merge the two wall sides of each crease into one planar polygon.
    std::map<int, std::array<const Region3*, 2>> walls;
    for (const auto& r : fs.regions) {
        if (r.kind != Region3::Kind::Wall) continue;
        walls[r.crease][r.side] = &r;
    }
    for (const auto& [crease, pair] : walls) {
        const Region3* a = pair[0];
        const Region3* b = pair[1];
        if (a && b && a->pts.size() == 4 && b->pts.size() == 4) {
            const Region3* lower = a->pts[0][2] <= b->pts[0][2] ? a : b;
            const Region3* upper = lower == a ? b : a;
            // lower: [pu, pw] at z_lo then feet at z_mid; upper symmetric. Feet
            // coincide, so the outline runs lo edge -> mid -> hi edge -> mid.
            std::vector<std::array<double, 3>> outline{lower->pts[0], lower->pts[1],
                                                       lower->pts[2], upper->pts[1],
                                                       upper->pts[0], upper->pts[3]};
            // Drop repeated/collinear corners (in the wall plane).
            Point2 origin{outline[0][0], outline[0][1]};
            Vec2 dir{outline[1][0] - outline[0][0], outline[1][1] - outline[0][1]};
            if (dir.norm() <= tol.eps_abs) dir = Vec2{outline[2][0] - outline[0][0],
                                                      outline[2][1] - outline[0][1]};
            Polygon2 local;
            for (const auto& p : outline)
                local.vertices.push_back(
                    {(Point2{p[0], p[1]} - origin).dot(dir.normalized()), p[2]});
            std::vector<std::array<double, 3>> merged;
            const std::size_t n = outline.size();
            for (std::size_t i = 0; i < n; ++i) {
                const Point2& prev = local.vertices[(i + n - 1) % n];
                const Point2& cur = local.vertices[i];
                const Point2& next = local.vertices[(i + 1) % n];
                if ((cur - prev).norm() <= tol.eps_abs) continue;
                if (orient(prev, cur, next, tol) == 0 &&
                    (next - prev).norm() > tol.eps_abs)
                    continue;
                merged.push_back(outline[i]);
            }
            Polygon2 check;
            for (const auto& p : merged) {
                Point2 plan{p[0], p[1]};
                check.vertices.push_back({(plan - origin).dot(dir.normalized()), p[2]});
            }
            if (merged.size() >= 3 && check.is_simple(tol)) {
                w.object("crease_" + std::to_string(crease));
                w.polygon(merged);
                continue;
            }
        }
        for (int side = 0; side < 2; ++side) {
            const Region3* r = pair[side];
            if (!r) continue;
            w.object("crease_" + std::to_string(crease) + "_side_" + std::to_string(side));
            w.polygon(r->pts);
        }
    }
    return w.os.str();
}

std::string export_obj_solid(const SolidModel& sm) {
    ObjWriter w;
    for (const auto& panel : sm.panels) {
        if (panel.pieces.empty()) continue;
        w.object(panel.name);
        for (const auto& piece : panel.pieces)
            for (const auto& poly : piece.faces) w.polygon(poly);
    }
    return w.os.str();
}

}  // namespace thickfold
