#pragma once

#include "perslap/complex.hpp"
#include "perslap/filtration.hpp"

#include <optional>
#include <string>
#include <vector>

namespace perslap::fixtures {

inline SimplicialComplex graph(int n, const std::vector<std::pair<int, int>>& edges) {
    std::vector<Simplex> gens;
    for (int v = 0; v < n; ++v) gens.push_back({v});
    for (const auto& [u, v] : edges) gens.push_back({u, v});
    return build_complex(gens);
}

/// Two triangles joined by a bridge. Vertices: 0=(0,0), 1=(1,.5), 2=(0,1),
/// 3=(2,.5), 4=(3,1), 5=(3,0).
inline SimplicialComplex g1() { return graph(6, {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {3, 4}, {3, 5}, {4, 5}}); }

/// 2 x 3 ladder: rungs 0-3, 1-4, 2-5; rails 0-1-2 and 3-4-5.
inline SimplicialComplex g2() { return graph(6, {{0, 1}, {1, 2}, {3, 4}, {4, 5}, {0, 3}, {1, 4}, {2, 5}}); }

/// a, b, c, d, e, r, x = 0..6; x is the apex joined to c, d, b, e, r.
inline SimplicialComplex g() {
    enum { a, b, c, d, e, r, x };
    return graph(7, {{a, b}, {a, c}, {a, d}, {a, e}, {c, b}, {c, d}, {b, r}, {r, e}, {e, d},
                     {x, c}, {x, d}, {x, b}, {x, e}, {x, r}});
}

/// p, q, c, d, b, e, x = 0..6; x is the apex joined to c, d, p, e, b.
inline SimplicialComplex h() {
    enum { p, q, c, d, b, e, x };
    return graph(7, {{p, c}, {p, d}, {p, q}, {q, b}, {q, e}, {c, b}, {b, e}, {e, d}, {d, c},
                     {x, c}, {x, d}, {x, p}, {x, e}, {x, b}});
}

/// Cayley graph on Z4 x Z4 with connection set (+-1,0), (0,+-1), +-(1,1);
/// vertex (i, j) has id 4i + j.
inline SimplicialComplex shrikhande() {
    std::vector<std::pair<int, int>> edges;
    const int steps[][2] = {{1, 0}, {0, 1}, {1, 1}};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (const auto& s : steps) {
                const int u = 4 * i + j;
                const int v = 4 * ((i + s[0]) % 4) + (j + s[1]) % 4;
                edges.emplace_back(std::min(u, v), std::max(u, v));
            }
    return graph(16, edges);
}

/// 4 x 4 rook's graph: (i, j) ~ (i', j') when they share a row or column.
inline SimplicialComplex rook() {
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < 16; ++u)
        for (int v = u + 1; v < 16; ++v)
            if (u / 4 == v / 4 || u % 4 == v % 4) edges.emplace_back(u, v);
    return graph(16, edges);
}

/// Corners of the unit square.
inline std::vector<std::vector<double>> square_cloud() { return {{0, 0}, {1, 0}, {1, 1}, {0, 1}}; }

inline std::vector<std::string> names() { return {"G1", "G2", "G", "H", "shrikhande", "rook", "square_cloud"}; }

/// Graph fixtures by name; square_cloud is a point cloud and is not a graph.
inline std::optional<SimplicialComplex> graph_by_name(const std::string& name) {
    if (name == "G1") return g1();
    if (name == "G2") return g2();
    if (name == "G") return g();
    if (name == "H") return h();
    if (name == "shrikhande") return shrikhande();
    if (name == "rook") return rook();
    return std::nullopt;
}

} // namespace perslap::fixtures
