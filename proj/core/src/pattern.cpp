#include "thickfold/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

namespace thickfold {

namespace {

std::pair<int, int> ordered(int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

}  // namespace

CreasePattern::CreasePattern(std::vector<Point2> vertices, std::vector<PatternEdge> edges,
                             std::vector<std::vector<int>> faces, const Tolerance& tol)
    : vertices_(std::move(vertices)), edges_(std::move(edges)), faces_(std::move(faces)) {
    const int nv = static_cast<int>(vertices_.size());
    for (int i = 0; i < nv; ++i) {
        if (!vertices_[i].finite())
            throw ParseError("vertex " + std::to_string(i) + " has non-finite coordinates");
    }

    crease_index_.assign(edges_.size(), -1);
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const PatternEdge& pe = edges_[e];
        if (pe.v0 < 0 || pe.v0 >= nv || pe.v1 < 0 || pe.v1 >= nv)
            throw ParseError("edge " + std::to_string(e) + ": vertex index out of range");
        if (pe.v0 == pe.v1)
            throw ParseError("edge " + std::to_string(e) + " is a loop");
        auto key = ordered(pe.v0, pe.v1);
        if (!edge_lookup_.emplace(key, static_cast<int>(e)).second)
            throw ParseError("duplicate edge (" + std::to_string(pe.v0) + ", " +
                             std::to_string(pe.v1) + ")");
        if (pe.kind == EdgeKind::Crease) {
            crease_index_[e] = static_cast<int>(crease_edges_.size());
            crease_edges_.push_back(static_cast<int>(e));
        }
    }

    vertex_edges_.assign(nv, {});
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        vertex_edges_[edges_[e].v0].push_back(static_cast<int>(e));
        vertex_edges_[edges_[e].v1].push_back(static_cast<int>(e));
    }

    // Normalize face cycles counterclockwise, then bind them to edges.
    edge_faces_.assign(edges_.size(), {-1, -1});
    std::vector<std::pair<int, int>> traversal(edges_.size(), {0, 0});  // (forward, backward)
    for (std::size_t f = 0; f < faces_.size(); ++f) {
        std::vector<int>& cycle = faces_[f];
        if (cycle.size() < 3)
            throw ParseError("face " + std::to_string(f) + " has fewer than 3 vertices");
        for (int vi : cycle) {
            if (vi < 0 || vi >= nv)
                throw ParseError("face " + std::to_string(f) + ": vertex index out of range");
        }
        std::set<int> uniq(cycle.begin(), cycle.end());
        if (uniq.size() != cycle.size())
            throw ParseError("face " + std::to_string(f) + " repeats a vertex");

        Polygon2 poly;
        for (int vi : cycle) poly.vertices.push_back(vertices_[vi]);
        if (poly.signed_area() < 0.0) std::reverse(cycle.begin(), cycle.end());

        for (std::size_t i = 0; i < cycle.size(); ++i) {
            int a = cycle[i];
            int b = cycle[(i + 1) % cycle.size()];
            auto it = edge_lookup_.find(ordered(a, b));
            if (it == edge_lookup_.end())
                throw ParseError("face " + std::to_string(f) + " cycle not closed: no edge (" +
                                 std::to_string(a) + ", " + std::to_string(b) + ")");
            int e = it->second;
            auto& slots = edge_faces_[e];
            if (slots.first == -1) slots.first = static_cast<int>(f);
            else if (slots.second == -1) slots.second = static_cast<int>(f);
            else
                throw PatternError("edge " + std::to_string(e) + " borders more than two faces");
            if (edges_[e].v0 == a) traversal[e].first++;
            else traversal[e].second++;
        }
    }

    for (std::size_t e = 0; e < edges_.size(); ++e) {
        bool crease = edges_[e].kind == EdgeKind::Crease;
        int count = (edge_faces_[e].first != -1) + (edge_faces_[e].second != -1);
        if (crease && count != 2)
            throw PatternError("crease edge " + std::to_string(e) + " borders " +
                               std::to_string(count) + " faces, expected 2");
        if (!crease && count != 1)
            throw PatternError("boundary edge " + std::to_string(e) + " borders " +
                               std::to_string(count) + " faces, expected 1");
        if (crease && (traversal[e].first != 1 || traversal[e].second != 1))
            throw PatternError("crease edge " + std::to_string(e) +
                               " not traversed once in each direction");
    }
    (void)tol;
}

Polygon2 CreasePattern::face_polygon(int face) const {
    Polygon2 poly;
    for (int vi : faces_[face]) poly.vertices.push_back(vertices_[vi]);
    return poly;
}

int CreasePattern::find_edge(int a, int b) const {
    auto it = edge_lookup_.find(ordered(a, b));
    return it == edge_lookup_.end() ? -1 : it->second;
}

namespace {

using nlohmann::json;

double angle_of(const Vec2& v) { return std::atan2(v.y, v.x); }

// Normalizes an angle difference into (0, 2*pi].
double sector_span(double from, double to) {
    double d = to - from;
    const double two_pi = 2.0 * std::numbers::pi;
    while (d <= 0.0) d += two_pi;
    while (d > two_pi) d -= two_pi;
    return d;
}

json must_get(const json& j, const char* key) {
    if (!j.contains(key)) throw ParseError(std::string("missing required key \"") + key + "\"");
    return j.at(key);
}

}  // namespace

ParsedDocument parse_pattern(const std::string& json_text, const Tolerance& tol) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("JSON syntax error: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("document root must be an object");

    const bool fold_style = !j.contains("vertices") && j.contains("vertices_coords");

    std::vector<Point2> vertices;
    for (const auto& v : must_get(j, fold_style ? "vertices_coords" : "vertices")) {
        if (!v.is_array() || v.size() < 2) throw ParseError("vertex entries must be [x, y]");
        vertices.emplace_back(v[0].get<double>(), v[1].get<double>());
    }

    std::vector<PatternEdge> edges;
    if (!fold_style) {
        for (const auto& e : must_get(j, "edges")) {
            auto pair = must_get(e, "v");
            if (!pair.is_array() || pair.size() != 2)
                throw ParseError("edge \"v\" must be a pair of vertex indices");
            std::string kind = must_get(e, "kind").get<std::string>();
            if (kind != "crease" && kind != "boundary")
                throw ParseError("edge kind must be \"crease\" or \"boundary\", got \"" + kind +
                                 "\"");
            edges.push_back({pair[0].get<int>(), pair[1].get<int>(),
                             kind == "crease" ? EdgeKind::Crease : EdgeKind::Boundary});
        }
    } else {
        auto ev = must_get(j, "edges_vertices");
        auto ea = must_get(j, "edges_assignment");
        if (ev.size() != ea.size())
            throw ParseError("edges_vertices and edges_assignment lengths differ");
        for (std::size_t i = 0; i < ev.size(); ++i) {
            std::string a = ea[i].get<std::string>();
            edges.push_back({ev[i][0].get<int>(), ev[i][1].get<int>(),
                             a == "B" ? EdgeKind::Boundary : EdgeKind::Crease});
        }
    }

    std::vector<std::vector<int>> faces;
    for (const auto& f : must_get(j, fold_style ? "faces_vertices" : "faces"))
        faces.push_back(f.get<std::vector<int>>());

    CreasePattern cp(std::move(vertices), std::move(edges), std::move(faces), tol);

    auto order_json = must_get(j, "layer_order");
    std::vector<int> order = order_json.get<std::vector<int>>();
    if (static_cast<int>(order.size()) != cp.face_count())
        throw ParseError("layer_order must list every face exactly once");
    std::vector<bool> seen(cp.face_count(), false);
    for (int f : order) {
        if (f < 0 || f >= cp.face_count())
            throw ParseError("layer_order face index out of range: " + std::to_string(f));
        if (seen[f]) throw ParseError("layer_order repeats face " + std::to_string(f));
        seen[f] = true;
    }

    WeightSpec weights;
    if (j.contains("weights") && !j.at("weights").is_string()) {
        weights.automatic = false;
        for (const auto& w : j.at("weights")) {
            auto pair = must_get(w, "faces");
            WeightOverride ov{pair[0].get<int>(), pair[1].get<int>(),
                              must_get(w, "w").get<double>()};
            if (ov.face_a < 0 || ov.face_a >= cp.face_count() || ov.face_b < 0 ||
                ov.face_b >= cp.face_count())
                throw ParseError("weight override face index out of range");
            weights.overrides.push_back(ov);
        }
    }

    return ParsedDocument{std::move(cp), std::move(order), std::move(weights)};
}

VertexClass classify_vertices(const CreasePattern& cp, const Tolerance& tol) {
    const int nv = cp.vertex_count();
    VertexClass vc;
    vc.kind.assign(nv, VertexKind::Interior);
    vc.sector_angles.assign(nv, {});
    vc.sector_faces.assign(nv, {});
    vc.sorted_edges.assign(nv, {});

    // Sector key: edge whose direction starts the sector (ray v->b of a CCW
    // face corner a, v, b) maps to (face, edge closing the sector).
    for (int v = 0; v < nv; ++v) {
        std::vector<int> inc = cp.vertex_edges(v);
        if (inc.empty()) throw PatternError("isolated vertex " + std::to_string(v));
        std::vector<std::pair<double, int>> by_angle;
        for (int e : inc) {
            const PatternEdge& pe = cp.edges()[e];
            int other = pe.v0 == v ? pe.v1 : pe.v0;
            by_angle.emplace_back(angle_of(cp.vertices()[other] - cp.vertices()[v]), e);
        }
        std::sort(by_angle.begin(), by_angle.end());
        for (auto& [ang, e] : by_angle) vc.sorted_edges[v].push_back(e);
        if (std::any_of(inc.begin(), inc.end(), [&](int e) {
                return cp.edges()[e].kind == EdgeKind::Boundary;
            }))
            vc.kind[v] = VertexKind::Exterior;
    }

    std::map<std::pair<int, int>, std::pair<int, int>> sector_by_start;  // (v, start edge) -> (face, end edge)
    for (int f = 0; f < cp.face_count(); ++f) {
        const std::vector<int>& cycle = cp.faces()[f];
        const std::size_t n = cycle.size();
        for (std::size_t i = 0; i < n; ++i) {
            int a = cycle[(i + n - 1) % n];
            int v = cycle[i];
            int b = cycle[(i + 1) % n];
            int start = cp.find_edge(v, b);
            int end = cp.find_edge(v, a);
            if (!sector_by_start.emplace(std::pair{v, start}, std::pair{f, end}).second)
                throw PatternError("two faces claim the same sector at vertex " +
                                   std::to_string(v));
        }
    }

    for (int v = 0; v < nv; ++v) {
        const std::vector<int>& se = vc.sorted_edges[v];
        const std::size_t d = se.size();
        int gaps = 0;
        for (std::size_t i = 0; i < d; ++i) {
            int e_start = se[i];
            int e_end = se[(i + 1) % d];
            double a0 = angle_of(cp.edge_point(e_start, cp.edges()[e_start].v0 == v ? 1 : 0) -
                                 cp.vertices()[v]);
            double a1 = angle_of(cp.edge_point(e_end, cp.edges()[e_end].v0 == v ? 1 : 0) -
                                 cp.vertices()[v]);
            double span = d == 1 ? 2.0 * std::numbers::pi : sector_span(a0, a1);
            auto it = sector_by_start.find({v, e_start});
            int face = -1;
            if (it != sector_by_start.end()) {
                if (it->second.second != e_end)
                    throw PatternError("faces around vertex " + std::to_string(v) +
                                       " do not match the angular edge order");
                face = it->second.first;
            } else {
                ++gaps;
            }
            vc.sector_faces[v].push_back(face);
            vc.sector_angles[v].push_back(span);
        }
        if (vc.kind[v] == VertexKind::Interior) {
            if (gaps != 0)
                throw PatternError("interior vertex " + std::to_string(v) +
                                   " has an uncovered sector");
            double total = 0.0;
            for (double a : vc.sector_angles[v]) total += a;
            if (std::abs(total - 2.0 * std::numbers::pi) > 1e-6)
                throw PatternError("sector angles at interior vertex " + std::to_string(v) +
                                   " do not sum to 2*pi");
        } else if (gaps != 1) {
            throw PatternError("exterior vertex " + std::to_string(v) + " has " +
                               std::to_string(gaps) + " uncovered sectors, expected 1");
        }
    }
    (void)tol;
    return vc;
}

std::string ValidationReport::summary() const {
    std::ostringstream os;
    os << check << ": " << (passed() ? "PASS" : "FAIL");
    for (const auto& issue : issues) os << "\n  - " << issue.what;
    return os.str();
}

ValidationReport check_convex_faces(const CreasePattern& cp, const Tolerance& tol) {
    ValidationReport report{"convex_faces"};
    for (int f = 0; f < cp.face_count(); ++f) {
        Polygon2 poly = cp.face_polygon(f);
        const std::size_t n = poly.vertices.size();
        for (std::size_t i = 0; i < n; ++i) {
            if (orient(poly.vertices[i], poly.vertices[(i + 1) % n],
                       poly.vertices[(i + 2) % n], tol) < 0) {
                report.fail("face " + std::to_string(f) + " has a reflex corner at vertex " +
                            std::to_string(cp.faces()[f][(i + 1) % n]));
                break;
            }
        }
    }
    return report;
}

bool kawasaki_holds(const std::vector<double>& angles, double* alternating_sum,
                    const Tolerance& tol) {
    if (angles.size() % 2 != 0) {
        if (alternating_sum) *alternating_sum = std::numeric_limits<double>::quiet_NaN();
        return false;
    }
    double sum = 0.0;
    double sign = 1.0;
    for (double a : angles) {
        sum += sign * a;
        sign = -sign;
    }
    if (alternating_sum) *alternating_sum = sum;
    return std::abs(sum) <= tol.eps_abs;
}

ValidationReport check_kawasaki(const CreasePattern& cp, const VertexClass& vc,
                                const Tolerance& tol) {
    ValidationReport report{"kawasaki"};
    for (int v = 0; v < cp.vertex_count(); ++v) {
        if (vc.kind[v] != VertexKind::Interior) continue;
        const std::vector<double>& angles = vc.sector_angles[v];
        if (angles.size() % 2 != 0) {
            report.fail("interior vertex " + std::to_string(v) + " has odd degree " +
                        std::to_string(angles.size()));
            continue;
        }
        double sum = 0.0;
        if (!kawasaki_holds(angles, &sum, tol)) {
            std::ostringstream os;
            os << "interior vertex " << v << " violates Kawasaki: alternating sum = " << sum;
            report.fail(os.str());
        }
    }
    return report;
}

double boundary_enclosed_area(const CreasePattern& cp, const Tolerance& tol) {
    // Chain boundary edges into loops and add up their areas.
    std::map<int, std::vector<std::pair<int, int>>> next;  // vertex -> (other vertex, edge)
    std::set<int> boundary_edges;
    for (int e = 0; e < cp.edge_count(); ++e) {
        if (cp.edges()[e].kind != EdgeKind::Boundary) continue;
        boundary_edges.insert(e);
        next[cp.edges()[e].v0].push_back({cp.edges()[e].v1, e});
        next[cp.edges()[e].v1].push_back({cp.edges()[e].v0, e});
    }
    double total = 0.0;
    std::set<int> used;
    for (int start_edge : boundary_edges) {
        if (used.count(start_edge)) continue;
        std::vector<Point2> loop;
        int v = cp.edges()[start_edge].v0;
        int e = start_edge;
        while (true) {
            used.insert(e);
            loop.push_back(cp.vertices()[v]);
            int w = cp.edges()[e].v0 == v ? cp.edges()[e].v1 : cp.edges()[e].v0;
            int next_e = -1;
            for (auto [u, f] : next[w]) {
                (void)u;
                if (f != e && !used.count(f)) { next_e = f; break; }
            }
            v = w;
            if (next_e == -1) break;
            e = next_e;
        }
        total += Polygon2(loop).area();
    }
    (void)tol;
    return total;
}

}  // namespace thickfold
