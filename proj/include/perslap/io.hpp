#pragma once

#include "perslap/complex.hpp"
#include "perslap/errors.hpp"
#include "perslap/persistence.hpp"

#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace perslap {

struct EdgeList {
    SimplicialComplex graph;
    /// Number of edges listed more than once (kept once).
    std::size_t duplicates = 0;
};

/// Whitespace-separated `u v [weight]` lines; `#` starts a comment. Vertices
/// are 0-based integers. The optional weight is the edge weight; vertices
/// keep weight 1. Self-loops are rejected.
inline EdgeList read_edge_list(std::istream& is) {
    std::map<Simplex, double> simplices;
    EdgeList out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<std::string> tokens;
        for (std::string t; ls >> t;) tokens.push_back(t);
        if (tokens.empty()) continue;
        if (tokens.size() < 2 || tokens.size() > 3) throw ParseError("expected 'u v [weight]'", line_no);
        auto vertex = [&](const std::string& t) {
            const double v = parse_real(t, line_no);
            if (v < 0 || v != std::floor(v) || v > 1e9) throw ParseError("vertex must be a non-negative integer", line_no);
            return static_cast<Vertex>(v);
        };
        const Vertex u = vertex(tokens[0]);
        const Vertex v = vertex(tokens[1]);
        if (u == v) throw ParseError("self-loop on vertex " + tokens[0], line_no);
        const double w = tokens.size() == 3 ? parse_real(tokens[2], line_no) : 1.0;
        if (!(w > 0.0) || !std::isfinite(w)) throw ParseError("edge weight must be positive and finite", line_no);
        simplices.emplace(Simplex{u}, 1.0);
        simplices.emplace(Simplex{v}, 1.0);
        if (!simplices.emplace(Simplex{std::min(u, v), std::max(u, v)}, w).second) ++out.duplicates;
    }
    out.graph = SimplicialComplex::from_closed(simplices);
    return out;
}

/// Rows of a headerless numeric CSV, all of the same width.
inline std::vector<std::vector<double>> read_numeric_csv(std::istream& is) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        if (line.front() == '#') continue;
        std::vector<double> row;
        for (auto field : split_csv(line)) row.push_back(parse_real(field, line_no));
        if (!rows.empty() && row.size() != rows.front().size())
            throw ParseError("row has " + std::to_string(row.size()) + " fields, expected " +
                                 std::to_string(rows.front().size()),
                             line_no);
        for (double x : row)
            if (!std::isfinite(x)) throw ParseError("non-finite value", line_no);
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::vector<std::vector<double>> read_point_cloud(std::istream& is) { return read_numeric_csv(is); }

/// Column `column` of a vertex-value table; row i is vertex i.
inline std::vector<double> read_vertex_values(std::istream& is, std::size_t column) {
    const auto rows = read_numeric_csv(is);
    std::vector<double> out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (column >= rows[i].size())
            throw ParseError("column " + std::to_string(column) + " out of range", i + 1);
        out.push_back(rows[i][column]);
    }
    return out;
}

} // namespace perslap
