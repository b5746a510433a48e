#include "thickfold/flat_state.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace thickfold {

Isometry2 Isometry2::reflection(const Line2& axis) {
    Vec2 u = axis.dir.normalized();
    Isometry2 r;
    r.m00 = u.x * u.x - u.y * u.y;
    r.m01 = 2.0 * u.x * u.y;
    r.m10 = r.m01;
    r.m11 = u.y * u.y - u.x * u.x;
    Point2 p = axis.point;
    r.tx = p.x - (r.m00 * p.x + r.m01 * p.y);
    r.ty = p.y - (r.m10 * p.x + r.m11 * p.y);
    return r;
}

Isometry2 Isometry2::compose_after(const Isometry2& inner) const {
    Isometry2 c;
    c.m00 = m00 * inner.m00 + m01 * inner.m10;
    c.m01 = m00 * inner.m01 + m01 * inner.m11;
    c.m10 = m10 * inner.m00 + m11 * inner.m10;
    c.m11 = m10 * inner.m01 + m11 * inner.m11;
    c.tx = m00 * inner.tx + m01 * inner.ty + tx;
    c.ty = m10 * inner.tx + m11 * inner.ty + ty;
    return c;
}

Polygon2 FlatMap::face_image(const CreasePattern& cp, int face) const {
    Polygon2 img;
    for (int vi : cp.faces()[face]) img.vertices.push_back(face_maps[face].apply(cp.vertices()[vi]));
    img.make_ccw();
    return img;
}

std::pair<Point2, Point2> FlatMap::crease_image(const CreasePattern& cp, int crease) const {
    int e = cp.creases()[crease];
    int face = cp.edge_faces(e).first;
    const PatternEdge& pe = cp.edges()[e];
    return {face_maps[face].apply(cp.vertices()[pe.v0]),
            face_maps[face].apply(cp.vertices()[pe.v1])};
}

FlatMap compute_flat_map(const CreasePattern& cp, const Tolerance& tol, int seed_face) {
    const int nf = cp.face_count();
    if (seed_face < 0 || seed_face >= nf) throw FlatStateError("seed face out of range");

    FlatMap fm;
    fm.seed_face = seed_face;
    fm.face_maps.assign(nf, Isometry2::identity());
    std::vector<bool> assigned(nf, false);
    assigned[seed_face] = true;

    std::deque<int> queue{seed_face};
    int visited = 1;
    while (!queue.empty()) {
        int f = queue.front();
        queue.pop_front();
        for (int c = 0; c < cp.crease_count(); ++c) {
            auto [a, b] = cp.crease_faces(c);
            if (a != f && b != f) continue;
            int g = a == f ? b : a;
            const PatternEdge& pe = cp.edges()[cp.creases()[c]];
            Point2 p = fm.face_maps[f].apply(cp.vertices()[pe.v0]);
            Point2 q = fm.face_maps[f].apply(cp.vertices()[pe.v1]);
            Isometry2 candidate =
                Isometry2::reflection(Line2{p, q - p}).compose_after(fm.face_maps[f]);
            if (!assigned[g]) {
                fm.face_maps[g] = candidate;
                assigned[g] = true;
                ++visited;
                queue.push_back(g);
            } else {
                for (int vi : cp.faces()[g]) {
                    Point2 got = candidate.apply(cp.vertices()[vi]);
                    Point2 want = fm.face_maps[g].apply(cp.vertices()[vi]);
                    if ((got - want).norm() > tol.eps_abs)
                        throw FlatStateError(
                            "flat mapping is inconsistent around a cycle at face " +
                            std::to_string(g));
                }
            }
        }
    }
    if (visited != nf)
        throw FlatStateError("crease pattern is not connected through creases");
    return fm;
}

bool LayerGraph::has_lambda_edge(int a, int b) const {
    return std::binary_search(lambda.begin(), lambda.end(), std::pair{a, b});
}

LayerGraph build_layer_graph(const CreasePattern& cp, const FlatMap& fm,
                             const std::vector<int>& order, const Tolerance& tol) {
    const int nf = cp.face_count();
    if (static_cast<int>(order.size()) != nf)
        throw FlatStateError("layer order must be a permutation of all faces");
    std::vector<int> pos(nf, -1);
    for (int i = 0; i < nf; ++i) {
        if (order[i] < 0 || order[i] >= nf || pos[order[i]] != -1)
            throw FlatStateError("layer order must be a permutation of all faces");
        pos[order[i]] = i;
    }

    LayerGraph g;
    g.face_count = nf;
    g.order = order;
    g.heights.assign(nf, 0.0);
    for (int f = 0; f < nf; ++f) g.heights[f] = static_cast<double>(pos[f]);

    std::vector<Polygon2> images(nf);
    for (int f = 0; f < nf; ++f) images[f] = fm.face_image(cp, f);

    for (int f = 0; f < nf; ++f) {
        for (int h = f + 1; h < nf; ++h) {
            auto rel = region_intersect(images[f], images[h], tol);
            if (rel.relation != RegionRelation::Overlapping) continue;
            if (pos[f] < pos[h]) g.lambda.push_back({f, h});
            else g.lambda.push_back({h, f});
        }
    }
    std::sort(g.lambda.begin(), g.lambda.end());
    g.gamma = transitive_reduction(nf, g.lambda);
    g.gamma_weights.assign(g.gamma.size(), 0.0);
    for (std::size_t i = 0; i < g.gamma.size(); ++i)
        g.gamma_weights[i] = g.heights[g.gamma[i].second] - g.heights[g.gamma[i].first];
    return g;
}

std::vector<std::pair<int, int>> transitive_reduction(
    int n, const std::vector<std::pair<int, int>>& edges_in) {
    std::set<std::pair<int, int>> edge_set(edges_in.begin(), edges_in.end());
    std::vector<std::vector<int>> succ(n);
    std::vector<int> indegree(n, 0);
    for (auto [a, b] : edge_set) {
        if (a < 0 || a >= n || b < 0 || b >= n)
            throw FlatStateError("transitive_reduction: vertex out of range");
        succ[a].push_back(b);
        ++indegree[b];
    }

    // Kahn topological order; failure means a cycle, which the layer-ordering
    // restriction forbids.
    std::vector<int> topo;
    std::deque<int> ready;
    std::vector<int> deg = indegree;
    for (int v = 0; v < n; ++v)
        if (deg[v] == 0) ready.push_back(v);
    while (!ready.empty()) {
        int v = ready.front();
        ready.pop_front();
        topo.push_back(v);
        for (int w : succ[v])
            if (--deg[w] == 0) ready.push_back(w);
    }
    if (static_cast<int>(topo.size()) != n)
        throw FlatStateError("layer ordering graph contains a directed cycle");

    // Strict descendants as bitsets, filled in reverse topological order.
    const int words = (n + 63) / 64;
    std::vector<std::vector<std::uint64_t>> desc(n, std::vector<std::uint64_t>(words, 0));
    for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
        int v = *it;
        for (int w : succ[v]) {
            desc[v][w / 64] |= 1ull << (w % 64);
            for (int k = 0; k < words; ++k) desc[v][k] |= desc[w][k];
        }
    }

    std::vector<std::pair<int, int>> reduced;
    for (auto [a, b] : edge_set) {
        bool redundant = false;
        for (int s : succ[a]) {
            if (s == b) continue;
            if (desc[s][b / 64] & (1ull << (b % 64))) {
                redundant = true;
                break;
            }
        }
        if (!redundant) reduced.push_back({a, b});
    }
    std::sort(reduced.begin(), reduced.end());
    return reduced;
}

namespace {

// Does segment (t0, t1) share a point with the relative interior of (s0, s1)?
bool touches_relative_interior(const Point2& s0, const Point2& s1, const Point2& t0,
                               const Point2& t1, const Tolerance& tol) {
    Vec2 d = s1 - s0;
    double len = d.norm();
    if (len <= tol.eps_abs) return false;
    double delta = tol.eps_abs / len;
    auto in_relint = [&](double t) { return t > delta && t < 1.0 - delta; };
    auto param_of = [&](const Point2& p) { return (p - s0).dot(d) / (len * len); };

    double dist_t0 = std::abs(d.cross(t0 - s0)) / len;
    double dist_t1 = std::abs(d.cross(t1 - s0)) / len;
    if (dist_t0 <= tol.eps_abs && dist_t1 <= tol.eps_abs) {
        // Collinear: overlap of parameter ranges.
        double a = param_of(t0), b = param_of(t1);
        if (a > b) std::swap(a, b);
        double lo = std::max(a, 0.0), hi = std::min(b, 1.0);
        if (lo > hi) return false;
        return std::max(lo, delta) < std::min(hi, 1.0 - delta) ||
               (hi - lo <= 2.0 * delta && in_relint(0.5 * (lo + hi)));
    }

    // Endpoint of T resting on S.
    for (const Point2& t : {t0, t1}) {
        if (segment_point_distance(s0, s1, t) <= tol.eps_abs && in_relint(param_of(t)))
            return true;
    }

    // Proper crossing.
    int o1 = orient(s0, s1, t0, tol), o2 = orient(s0, s1, t1, tol);
    int o3 = orient(t0, t1, s0, tol), o4 = orient(t0, t1, s1, tol);
    if (o1 * o2 < 0 && o3 * o4 < 0) {
        Vec2 e = t1 - t0;
        auto t = line_line_param(s0, d, t0, e, tol);
        if (t && in_relint(*t)) return true;
    }
    return false;
}

}  // namespace

ValidationReport check_self_intersection(const CreasePattern& cp, const FlatMap& fm,
                                         const LayerGraph& g, const Tolerance& tol) {
    ValidationReport report{"self_intersection"};
    std::vector<Polygon2> images(cp.face_count());
    for (int f = 0; f < cp.face_count(); ++f) images[f] = fm.face_image(cp, f);

    for (int c = 0; c < cp.crease_count(); ++c) {
        auto [fa, fb] = cp.crease_faces(c);
        auto [s0, s1] = fm.crease_image(cp, c);
        double lo = std::min(g.height(fa), g.height(fb));
        double hi = std::max(g.height(fa), g.height(fb));
        for (int f = 0; f < cp.face_count(); ++f) {
            if (f == fa || f == fb) continue;
            // Transversal crossing of the crease image's relative interior with
            // positive length. Collinear boundary contact belongs to the
            // non-wrapping check instead.
            auto span = clip_segment_to_convex(s0, s1, images[f], tol);
            if (!span) continue;
            auto [t0, t1] = *span;
            double seg_len = (s1 - s0).norm();
            double inside_len = (t1 - t0) * seg_len;
            if (inside_len <= tol.eps_abs) continue;
            Point2 mid = s0 + (s1 - s0) * (0.5 * (t0 + t1));
            if (!point_strictly_inside(mid, images[f], tol)) continue;
            if (g.height(f) > lo + tol.eps_abs && g.height(f) < hi - tol.eps_abs) {
                std::ostringstream os;
                os << "face " << f << " (height " << g.height(f) << ") crosses crease " << c
                   << " between its faces " << fa << " and " << fb << " (heights " << lo
                   << ", " << hi << ")";
                report.fail(os.str());
            }
        }
    }
    return report;
}

ValidationReport check_non_wrapping(const CreasePattern& cp, const FlatMap& fm,
                                    const LayerGraph& g, const Tolerance& tol) {
    ValidationReport report{"non_wrapping"};
    for (int c = 0; c < cp.crease_count(); ++c) {
        int crease_edge = cp.creases()[c];
        auto [fa, fb] = cp.crease_faces(c);
        auto [s0, s1] = fm.crease_image(cp, c);
        double lo = std::min(g.height(fa), g.height(fb));
        double hi = std::max(g.height(fa), g.height(fb));

        for (int e = 0; e < cp.edge_count(); ++e) {
            if (e == crease_edge) continue;
            auto [ga, gb] = cp.edge_faces(e);
            const PatternEdge& pe = cp.edges()[e];
            Point2 t0 = fm.face_maps[ga].apply(cp.vertices()[pe.v0]);
            Point2 t1 = fm.face_maps[ga].apply(cp.vertices()[pe.v1]);
            if (!touches_relative_interior(s0, s1, t0, t1, tol)) continue;

            bool all_between = g.height(ga) > lo + tol.eps_abs && g.height(ga) < hi - tol.eps_abs;
            if (gb != -1)
                all_between = all_between && g.height(gb) > lo + tol.eps_abs &&
                              g.height(gb) < hi - tol.eps_abs;
            if (all_between) {
                std::ostringstream os;
                os << (gb == -1 ? "boundary edge " : "crease edge ") << e
                   << " touches the inside of crease " << c << " (faces " << fa << ", " << fb
                   << "): its material lies strictly between heights " << lo << " and " << hi;
                report.fail(os.str());
            }
        }
    }
    return report;
}

std::vector<CreaseAssignment> derive_crease_assignment(const CreasePattern& cp,
                                                       const FlatMap& fm,
                                                       const LayerGraph& g) {
    std::vector<CreaseAssignment> out(cp.crease_count(), CreaseAssignment::Valley);
    bool seed_reflected = fm.face_maps[fm.seed_face].reflects();
    for (int c = 0; c < cp.crease_count(); ++c) {
        auto [fa, fb] = cp.crease_faces(c);
        int lower = g.height(fa) < g.height(fb) ? fa : fb;
        // The fold closes on the lower face's front side exactly when that
        // side still faces up, i.e. the lower face is unreflected.
        bool lower_up = fm.face_maps[lower].reflects() == seed_reflected;
        out[c] = lower_up ? CreaseAssignment::Valley : CreaseAssignment::Mountain;
    }
    return out;
}

double CreaseWidths::min_width() const {
    double m = std::numeric_limits<double>::infinity();
    for (double w : width) m = std::min(m, w);
    return m;
}

WeightResult assign_weights(const CreasePattern& cp, LayerGraph g, const WeightSpec& spec,
                            const Tolerance& tol) {
    const int nf = g.face_count;
    if (!spec.automatic) {
        std::map<std::pair<int, int>, double> by_pair;
        for (const auto& ov : spec.overrides) {
            if (ov.w <= 0.0)
                throw FlatStateError("weight override for faces (" + std::to_string(ov.face_a) +
                                     ", " + std::to_string(ov.face_b) + ") must be positive");
            by_pair[std::minmax(ov.face_a, ov.face_b)] = ov.w;
        }
        std::vector<double> w_edge(g.gamma.size(), 0.0);
        for (std::size_t i = 0; i < g.gamma.size(); ++i) {
            auto it = by_pair.find(std::minmax(g.gamma[i].first, g.gamma[i].second));
            if (it == by_pair.end())
                throw FlatStateError("explicit weights missing reduced-graph edge (" +
                                     std::to_string(g.gamma[i].first) + " -> " +
                                     std::to_string(g.gamma[i].second) + ")");
            w_edge[i] = it->second;
            by_pair.erase(it);
        }
        if (!by_pair.empty())
            throw FlatStateError("weight override for faces (" +
                                 std::to_string(by_pair.begin()->first.first) + ", " +
                                 std::to_string(by_pair.begin()->first.second) +
                                 ") is not a reduced-graph edge");

        // Solve the height potential over the (weakly connected) reduced graph
        // and verify each edge; a mismatch exhibits two paths with different sums.
        std::vector<std::vector<std::pair<int, double>>> adj(nf);
        for (std::size_t i = 0; i < g.gamma.size(); ++i) {
            adj[g.gamma[i].first].push_back({g.gamma[i].second, w_edge[i]});
            adj[g.gamma[i].second].push_back({g.gamma[i].first, -w_edge[i]});
        }
        std::vector<double> h(nf, std::numeric_limits<double>::quiet_NaN());
        for (int root = 0; root < nf; ++root) {
            if (!std::isnan(h[root])) continue;
            h[root] = 0.0;
            std::deque<int> queue{root};
            while (!queue.empty()) {
                int v = queue.front();
                queue.pop_front();
                for (auto [w, dw] : adj[v]) {
                    if (std::isnan(h[w])) {
                        h[w] = h[v] + dw;
                        queue.push_back(w);
                    } else if (std::abs(h[w] - (h[v] + dw)) > tol.eps_abs) {
                        std::ostringstream os;
                        os << "explicit weights admit no height potential: edge between faces "
                           << v << " and " << w << " wants height difference " << std::abs(dw)
                           << " but another path forces " << std::abs(h[w] - h[v]);
                        throw FlatStateError(os.str());
                    }
                }
            }
        }
        g.heights = std::move(h);
        g.gamma_weights = std::move(w_edge);
    } else {
        g.gamma_weights.resize(g.gamma.size());
        for (std::size_t i = 0; i < g.gamma.size(); ++i)
            g.gamma_weights[i] = g.heights[g.gamma[i].second] - g.heights[g.gamma[i].first];
    }

    for (auto [a, b] : g.lambda) {
        if (g.heights[b] <= g.heights[a] + tol.eps_abs)
            throw FlatStateError("height potential does not separate overlapping faces " +
                                 std::to_string(a) + " and " + std::to_string(b));
    }

    CreaseWidths widths;
    widths.width.resize(cp.crease_count());
    for (int c = 0; c < cp.crease_count(); ++c) {
        auto [fa, fb] = cp.crease_faces(c);
        if (!g.has_lambda_edge(fa, fb) && !g.has_lambda_edge(fb, fa))
            throw FlatStateError("crease " + std::to_string(c) +
                                 ": incident faces do not overlap in the folding, width "
                                 "undefined");
        widths.width[c] = std::abs(g.heights[fa] - g.heights[fb]);
        if (widths.width[c] <= tol.eps_abs)
            throw FlatStateError("crease " + std::to_string(c) + " has zero width");
    }
    return WeightResult{std::move(g), std::move(widths)};
}

}  // namespace thickfold
