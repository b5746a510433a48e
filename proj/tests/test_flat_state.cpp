#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "support.hpp"

using namespace thickfold;
using testsupport::load_fixture;
using testsupport::with_order;

namespace {

LayerGraph graph_for(const ParsedDocument& doc, const FlatMap& fm) {
    return build_layer_graph(doc.pattern, fm, doc.layer_order);
}

std::set<std::pair<int, int>> edge_set(const std::vector<std::pair<int, int>>& edges) {
    return {edges.begin(), edges.end()};
}

// Independent assignment oracle: a fold is a valley when the two faces' front
// surfaces come together, i.e. the lower face is unreflected (its front still
// faces up into the gap) and the upper face is reflected onto it.
CreaseAssignment assignment_oracle(const CreasePattern& cp, const FlatMap& fm,
                                   const LayerGraph& g, int crease) {
    auto [fa, fb] = cp.crease_faces(crease);
    int lower = g.height(fa) < g.height(fb) ? fa : fb;
    int upper = lower == fa ? fb : fa;
    bool lower_front_up = !fm.face_maps[lower].reflects();
    bool upper_front_down = fm.face_maps[upper].reflects();
    REQUIRE(lower_front_up == upper_front_down);  // parities alternate
    return lower_front_up ? CreaseAssignment::Valley : CreaseAssignment::Mountain;
}

}  // namespace

TEST_CASE("flat map of the half fixture is a single reflection") {
    ParsedDocument doc = load_fixture("half.json");
    FlatMap fm = compute_flat_map(doc.pattern);
    CHECK(!fm.face_maps[0].reflects());
    CHECK(fm.face_maps[1].reflects());
    // f_B: x -> 1 - x
    Point2 img = fm.face_maps[1].apply({1.0, 0.25});
    CHECK(img.x == doctest::Approx(0.0));
    CHECK(img.y == doctest::Approx(0.25));
    for (int f = 0; f < 2; ++f) {
        Polygon2 image = fm.face_image(doc.pattern, f);
        CHECK(image.area() == doctest::Approx(0.5));
        for (const Point2& p : image.vertices) {
            CHECK(p.x >= -1e-12);
            CHECK(p.x <= 0.5 + 1e-12);
        }
    }
}

TEST_CASE("flat map of the four-sector fixture") {
    ParsedDocument doc = load_fixture("fourvertex.json");
    FlatMap fm = compute_flat_map(doc.pattern);
    auto expect = [&](int face, Point2 in, Point2 want) {
        Point2 got = fm.face_maps[face].apply(in);
        CHECK(got.x == doctest::Approx(want.x).epsilon(1e-12));
        CHECK(got.y == doctest::Approx(want.y).epsilon(1e-12));
    };
    expect(1, {2, 0}, {0, 0});       // f_B: x -> 2 - x
    expect(2, {2, 2}, {0, 0});       // f_C: (x, y) -> (2 - x, 2 - y)
    expect(3, {0, 2}, {0, 0});       // f_D: y -> 2 - y
    for (int f = 0; f < 4; ++f) {
        Polygon2 image = fm.face_image(doc.pattern, f);
        CHECK(image.area() == doctest::Approx(1.0));
        for (const Point2& p : image.vertices) {
            CHECK(p.x >= -1e-12);
            CHECK(p.x <= 1 + 1e-12);
            CHECK(p.y >= -1e-12);
            CHECK(p.y <= 1 + 1e-12);
        }
    }
}

TEST_CASE("flat map is unique up to isometry (seed independence)") {
    ParsedDocument doc = load_fixture("half.json");
    FlatMap a = compute_flat_map(doc.pattern, {}, 0);
    FlatMap b = compute_flat_map(doc.pattern, {}, 1);
    for (int f = 0; f < 2; ++f)
        CHECK(a.face_image(doc.pattern, f).area() ==
              doctest::Approx(b.face_image(doc.pattern, f).area()).epsilon(1e-12));
}

TEST_CASE("flat map preserves lengths and areas") {
    for (const char* name : {"fourvertex.json", "strip3.json"}) {
        ParsedDocument doc = load_fixture(name);
        FlatMap fm = compute_flat_map(doc.pattern);
        for (int f = 0; f < doc.pattern.face_count(); ++f) {
            Polygon2 orig = doc.pattern.face_polygon(f);
            CHECK(fm.face_image(doc.pattern, f).area() ==
                  doctest::Approx(orig.area()).epsilon(1e-12));
            for (std::size_t i = 0; i < orig.vertices.size(); ++i) {
                Point2 a = orig.vertices[i];
                Point2 b = orig.vertices[(i + 1) % orig.vertices.size()];
                double len = (b - a).norm();
                double img_len =
                    (fm.face_maps[f].apply(b) - fm.face_maps[f].apply(a)).norm();
                CHECK(img_len == doctest::Approx(len).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("layer graph overlap edges") {
    {
        ParsedDocument doc = load_fixture("half.json");
        FlatMap fm = compute_flat_map(doc.pattern);
        LayerGraph g = graph_for(doc, fm);
        CHECK(edge_set(g.lambda) == std::set<std::pair<int, int>>{{0, 1}});
    }
    {
        ParsedDocument doc = load_fixture("fourvertex.json");
        FlatMap fm = compute_flat_map(doc.pattern);
        LayerGraph g = graph_for(doc, fm);
        CHECK(g.lambda.size() == 6);  // all pairs overlap on the unit square
    }
    {
        ParsedDocument doc = load_fixture("wrap.json");  // order [A, C, B]
        FlatMap fm = compute_flat_map(doc.pattern);
        LayerGraph g = graph_for(doc, fm);
        CHECK(edge_set(g.lambda) == std::set<std::pair<int, int>>{{0, 1}, {0, 2}, {2, 1}});
    }
}

TEST_CASE("transitive reduction examples") {
    {
        auto got = transitive_reduction(3, {{0, 1}, {1, 2}, {0, 2}});
        CHECK(edge_set(got) == std::set<std::pair<int, int>>{{0, 1}, {1, 2}});
    }
    {
        auto got = transitive_reduction(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}, {0, 3}});
        CHECK(edge_set(got) ==
              std::set<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 3}, {2, 3}});
    }
    {
        auto got = transitive_reduction(2, {{0, 1}});
        CHECK(edge_set(got) == std::set<std::pair<int, int>>{{0, 1}});
    }
    CHECK_THROWS_AS((void)transitive_reduction(2, {{0, 1}, {1, 0}}), FlatStateError);
}

TEST_CASE("transitive reduction matches the brute-force oracle on random DAGs") {
    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> size(2, 8);
    std::uniform_real_distribution<double> density(0.1, 0.9);
    for (int rep = 0; rep < 300; ++rep) {
        int n = size(rng);
        auto edges = testsupport::random_dag(rng, n, density(rng));
        auto got = transitive_reduction(n, edges);
        auto want = testsupport::tr_oracle(n, edges);
        CHECK(edge_set(got) == edge_set(want));
    }
}

TEST_CASE("self-intersection check separates the strip3 orders") {
    ParsedDocument doc = load_fixture("strip3.json");  // order [A, C, B]
    FlatMap fm = compute_flat_map(doc.pattern);
    LayerGraph bad = graph_for(doc, fm);
    CHECK(!check_self_intersection(doc.pattern, fm, bad).passed());

    ParsedDocument good_doc = with_order(load_fixture("strip3.json"), {0, 1, 2});
    LayerGraph good = graph_for(good_doc, fm);
    CHECK(check_self_intersection(good_doc.pattern, fm, good).passed());

    ParsedDocument half = load_fixture("half.json");
    FlatMap hfm = compute_flat_map(half.pattern);
    CHECK(check_self_intersection(half.pattern, hfm, graph_for(half, hfm)).passed());
}

TEST_CASE("self-intersection does not fire on the wrap fixture") {
    // The offending contact there is boundary-on-crease, which belongs to the
    // non-wrapping check.
    ParsedDocument doc = load_fixture("wrap.json");
    FlatMap fm = compute_flat_map(doc.pattern);
    CHECK(check_self_intersection(doc.pattern, fm, graph_for(doc, fm)).passed());
}

TEST_CASE("non-wrapping check separates the wrap orders") {
    ParsedDocument doc = load_fixture("wrap.json");  // order [A, C, B]
    FlatMap fm = compute_flat_map(doc.pattern);
    ValidationReport bad = check_non_wrapping(doc.pattern, fm, graph_for(doc, fm));
    REQUIRE(!bad.passed());

    ParsedDocument accordion = with_order(load_fixture("wrap.json"), {0, 1, 2});
    CHECK(check_non_wrapping(accordion.pattern, fm, graph_for(accordion, fm)).passed());

    ParsedDocument fv = load_fixture("fourvertex.json");
    FlatMap fvm = compute_flat_map(fv.pattern);
    CHECK(check_non_wrapping(fv.pattern, fvm, graph_for(fv, fvm)).passed());
}

TEST_CASE("crease assignments of the half fixture flip with the order") {
    ParsedDocument doc = load_fixture("half.json");
    FlatMap fm = compute_flat_map(doc.pattern);
    {
        LayerGraph g = graph_for(doc, fm);
        auto got = derive_crease_assignment(doc.pattern, fm, g);
        CHECK(got[0] == CreaseAssignment::Valley);
        CHECK(got[0] == assignment_oracle(doc.pattern, fm, g, 0));
    }
    {
        ParsedDocument rev = with_order(load_fixture("half.json"), {1, 0});
        LayerGraph g = graph_for(rev, fm);
        auto got = derive_crease_assignment(rev.pattern, fm, g);
        CHECK(got[0] == CreaseAssignment::Mountain);
        CHECK(got[0] == assignment_oracle(rev.pattern, fm, g, 0));
    }
}

TEST_CASE("crease assignments of the four-sector fixture") {
    ParsedDocument doc = load_fixture("fourvertex.json");
    FlatMap fm = compute_flat_map(doc.pattern);
    LayerGraph g = graph_for(doc, fm);
    auto got = derive_crease_assignment(doc.pattern, fm, g);
    // Twice-folded sheet: the two folds seen from above give V, M, V, V.
    CHECK(got[0] == CreaseAssignment::Valley);
    CHECK(got[1] == CreaseAssignment::Mountain);
    CHECK(got[2] == CreaseAssignment::Valley);
    CHECK(got[3] == CreaseAssignment::Valley);
    for (int c = 0; c < 4; ++c) CHECK(got[c] == assignment_oracle(doc.pattern, fm, g, c));
}

TEST_CASE("automatic weights from the layer order") {
    {
        ParsedDocument doc = load_fixture("half.json");
        FlatMap fm = compute_flat_map(doc.pattern);
        auto wr = assign_weights(doc.pattern, graph_for(doc, fm), WeightSpec{});
        CHECK(wr.widths.width == std::vector<double>{1.0});
    }
    {
        ParsedDocument doc = load_fixture("fourvertex.json");
        FlatMap fm = compute_flat_map(doc.pattern);
        auto wr = assign_weights(doc.pattern, graph_for(doc, fm), WeightSpec{});
        CHECK(wr.widths.width == std::vector<double>{1.0, 1.0, 1.0, 3.0});
    }
}

TEST_CASE("explicit weights induce path-sum widths") {
    ParsedDocument doc = load_fixture("fourvertex.json");
    FlatMap fm = compute_flat_map(doc.pattern);
    WeightSpec spec;
    spec.automatic = false;
    spec.overrides = {{0, 1, 2.0}, {1, 2, 1.0}, {2, 3, 2.0}};
    auto wr = assign_weights(doc.pattern, graph_for(doc, fm), spec);
    CHECK(wr.widths.width == std::vector<double>{2.0, 1.0, 2.0, 5.0});
    CHECK(wr.graph.heights == std::vector<double>{0.0, 2.0, 3.0, 5.0});
}

TEST_CASE("invalid explicit weights are rejected") {
    ParsedDocument doc = load_fixture("fourvertex.json");
    FlatMap fm = compute_flat_map(doc.pattern);
    {
        WeightSpec spec;
        spec.automatic = false;
        spec.overrides = {{0, 1, -1.0}, {1, 2, 1.0}, {2, 3, 2.0}};
        CHECK_THROWS_AS((void)assign_weights(doc.pattern, graph_for(doc, fm), spec),
                        FlatStateError);
    }
    {
        WeightSpec spec;  // missing an edge of the reduced graph
        spec.automatic = false;
        spec.overrides = {{0, 1, 1.0}};
        CHECK_THROWS_AS((void)assign_weights(doc.pattern, graph_for(doc, fm), spec),
                        FlatStateError);
    }
}

TEST_CASE("random weight assignments give consistent path sums") {
    ParsedDocument doc = load_fixture("fourvertex.json");
    FlatMap fm = compute_flat_map(doc.pattern);
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(0.2, 3.0);
    for (int rep = 0; rep < 50; ++rep) {
        WeightSpec spec;
        spec.automatic = false;
        double w01 = u(rng), w12 = u(rng), w23 = u(rng);
        spec.overrides = {{0, 1, w01}, {1, 2, w12}, {2, 3, w23}};
        auto wr = assign_weights(doc.pattern, graph_for(doc, fm), spec);
        // Crease (D, A) closes the cycle: its width equals the chain sum.
        CHECK(wr.widths.width[3] == doctest::Approx(w01 + w12 + w23).epsilon(1e-12));
        // Every crease width is positive and equals the incident height gap.
        for (int c = 0; c < 4; ++c) {
            auto [fa, fb] = doc.pattern.crease_faces(c);
            CHECK(wr.widths.width[c] ==
                  doctest::Approx(std::abs(wr.graph.heights[fa] - wr.graph.heights[fb])));
            CHECK(wr.widths.width[c] > 0.0);
        }
    }
}

TEST_CASE("reachability of the reduced graph equals the full graph") {
    std::mt19937 rng(5);
    for (const char* name : {"fourvertex.json", "wrap.json", "strip3.json"}) {
        ParsedDocument doc = load_fixture(name);
        FlatMap fm = compute_flat_map(doc.pattern);
        LayerGraph g = graph_for(doc, fm);
        auto closure = [&](const std::vector<std::pair<int, int>>& edges) {
            int n = g.face_count;
            std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
            for (auto [a, b] : edges) reach[a][b] = true;
            for (int k = 0; k < n; ++k)
                for (int i = 0; i < n; ++i)
                    if (reach[i][k])
                        for (int j = 0; j < n; ++j)
                            if (reach[k][j]) reach[i][j] = true;
            return reach;
        };
        CHECK(closure(g.lambda) == closure(g.gamma));
    }
    (void)rng;
}
