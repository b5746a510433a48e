#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "thickfold/pipeline.hpp"

namespace testsupport {

inline std::string fixture_path(const std::string& name) {
    return std::string(THICKFOLD_FIXTURE_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("missing fixture: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline thickfold::ParsedDocument load_fixture(const std::string& name,
                                              const thickfold::Tolerance& tol = {}) {
    return thickfold::parse_pattern(read_file(fixture_path(name)), tol);
}

// Reorders the layer_order of a parsed document (fixture files carry one
// default order; several tests exercise alternatives).
inline thickfold::ParsedDocument with_order(thickfold::ParsedDocument doc,
                                            std::vector<int> order) {
    doc.layer_order = std::move(order);
    return doc;
}

// n-face accordion strip on [0,n] x [0,1] with creases at x = 1..n-1 and the
// identity (bottom-to-top) layer order.
inline std::string accordion_json(int n) {
    std::ostringstream os;
    os << "{\"vertices\": [";
    for (int i = 0; i <= n; ++i) os << (i ? ", " : "") << "[" << i << ", 0]";
    for (int i = n; i >= 0; --i) os << ", [" << i << ", 1]";
    os << "], \"edges\": [";
    // bottom, right, top, left boundary
    bool first = true;
    auto edge = [&](int a, int b, const char* kind) {
        os << (first ? "" : ", ") << "{\"v\": [" << a << ", " << b << "], \"kind\": \"" << kind
           << "\"}";
        first = false;
    };
    for (int i = 0; i < n; ++i) edge(i, i + 1, "boundary");
    edge(n, n + 1, "boundary");
    for (int i = n + 1; i < 2 * n + 1; ++i) edge(i, i + 1, "boundary");
    edge(2 * n + 1, 0, "boundary");
    // top vertex above x=i is index 2n+1-i
    for (int i = 1; i < n; ++i) edge(i, 2 * n + 1 - i, "crease");
    os << "], \"faces\": [";
    for (int i = 0; i < n; ++i) {
        os << (i ? ", " : "") << "[" << i << ", " << i + 1 << ", " << 2 * n - i << ", "
           << 2 * n + 1 - i << "]";
    }
    os << "], \"layer_order\": [";
    for (int i = 0; i < n; ++i) os << (i ? ", " : "") << i;
    os << "]}";
    return os.str();
}

// Brute-force transitive reduction oracle: Floyd-Warshall closure, then the
// covering pairs of the reachability order.
inline std::vector<std::pair<int, int>> tr_oracle(int n,
                                                  const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (auto [a, b] : edges) reach[a][b] = true;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            if (reach[i][k])
                for (int j = 0; j < n; ++j)
                    if (reach[k][j]) reach[i][j] = true;
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (!reach[a][b]) continue;
            bool covered = false;
            for (int w = 0; w < n && !covered; ++w)
                if (w != a && w != b && reach[a][w] && reach[w][b]) covered = true;
            if (!covered) out.push_back({a, b});
        }
    }
    return out;
}

// Random DAG with edges directed from lower to higher labels.
inline std::vector<std::pair<int, int>> random_dag(std::mt19937& rng, int n, double p) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<std::pair<int, int>> edges;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (coin(rng) < p) edges.push_back({a, b});
    return edges;
}

}  // namespace testsupport
