#pragma once

#include "perslap/complex.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace perslap {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Nested family K_t = f^{-1}((-inf, t]) over a final complex.
///
/// Values are kept monotone under face inclusion; the index set T is the
/// sorted set of distinct attained values.
class Filtration {
public:
    Filtration() = default;

    /// values[q][i] is f of the i-th q-simplex of final_complex. Values that
    /// break monotonicity are raised to the max over their faces and counted.
    Filtration(SimplicialComplex final_complex, std::vector<std::vector<double>> values)
        : final_(std::move(final_complex)), values_(std::move(values)) {
        const int dim = final_.dimension();
        values_.resize(static_cast<std::size_t>(dim + 1));
        for (int q = 0; q <= dim; ++q) {
            if (values_[q].size() != final_.count(q))
                throw DomainError("filtration values missing for dimension " + std::to_string(q));
            for (double v : values_[q])
                if (!std::isfinite(v)) throw DomainError("filtration values must be finite");
        }
        repair();
        std::vector<double> all;
        for (const auto& layer : values_) all.insert(all.end(), layer.begin(), layer.end());
        std::sort(all.begin(), all.end());
        all.erase(std::unique(all.begin(), all.end()), all.end());
        levels_ = std::move(all);
    }

    const SimplicialComplex& final_complex() const { return final_; }

    /// Sorted index set T.
    const std::vector<double>& levels() const { return levels_; }

    std::size_t repair_count() const { return repairs_; }

    double value(int q, std::size_t i) const { return values_.at(q).at(i); }

    double value(const Simplex& s) const {
        const auto idx = final_.index_of(s);
        if (!idx) throw DomainError("simplex " + to_string(s) + " not in filtration");
        return values_[simplex_dimension(s)][*idx];
    }

    const std::vector<std::vector<double>>& values() const { return values_; }

    /// The member of T equal to t up to a relative 1e-12, if any.
    std::optional<double> find_level(double t) const {
        if (!std::isfinite(t)) return std::nullopt;
        const auto it = std::lower_bound(levels_.begin(), levels_.end(), t - level_slack(t));
        if (it != levels_.end() && std::abs(*it - t) <= level_slack(t)) return *it;
        return std::nullopt;
    }

    /// sup{tau in T : tau < t}; nullopt when t is at or below min T.
    std::optional<double> predecessor(double t) const {
        const auto it = std::lower_bound(levels_.begin(), levels_.end(), t);
        if (it == levels_.begin()) return std::nullopt;
        return *std::prev(it);
    }

    /// K_t. t = +inf yields the final complex, t below min T the empty one.
    SimplicialComplex complex_at(double t) const {
        if (t == kInfinity) return final_;
        return final_.filter([&](int q, std::size_t i) { return values_[q][i] <= t; });
    }

private:
    static double level_slack(double t) { return 1e-12 * std::max(1.0, std::abs(t)); }

    void repair() {
        for (int q = 1; q <= final_.dimension(); ++q) {
            const auto simplices = final_.simplices(q);
            for (std::size_t i = 0; i < simplices.size(); ++i) {
                double face_max = -kInfinity;
                const Simplex& s = simplices[i];
                for (std::size_t drop = 0; drop < s.size(); ++drop) {
                    Simplex facet;
                    for (std::size_t m = 0; m < s.size(); ++m)
                        if (m != drop) facet.push_back(s[m]);
                    face_max = std::max(face_max, values_[q - 1][*final_.index_of(facet)]);
                }
                if (values_[q][i] < face_max) {
                    values_[q][i] = face_max;
                    ++repairs_;
                }
            }
        }
    }

    SimplicialComplex final_;
    std::vector<std::vector<double>> values_;
    std::vector<double> levels_;
    std::size_t repairs_ = 0;
};

inline Filtration sublevel_filtration(const SimplicialComplex& k,
                                      const std::function<double(const Simplex&)>& f) {
    std::vector<std::vector<double>> values(static_cast<std::size_t>(k.dimension() + 1));
    for (int q = 0; q <= k.dimension(); ++q)
        for (const auto& s : k.simplices(q)) values[q].push_back(f(s));
    return Filtration(k, std::move(values));
}

/// Vertex value = degree in the full graph; an edge enters with its later
/// endpoint, so every K_t is the subgraph induced by {v : deg(v) <= t}.
inline Filtration degree_filtration(const SimplicialComplex& graph) {
    if (graph.dimension() > 1)
        throw DimensionError("degree_filtration expects a graph (dimension <= 1), got dimension " +
                             std::to_string(graph.dimension()));
    std::map<Vertex, int> degree;
    for (const auto& v : graph.simplices(0)) degree[v.front()] = 0;
    for (const auto& e : graph.simplices(1)) {
        ++degree[e[0]];
        ++degree[e[1]];
    }
    return sublevel_filtration(graph, [&](const Simplex& s) {
        int d = 0;
        for (Vertex v : s) d = std::max(d, degree.at(v));
        return static_cast<double>(d);
    });
}

struct EuclideanMetric {
    double operator()(const std::vector<double>& a, const std::vector<double>& b) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
        return std::sqrt(acc);
    }
};

/// Vietoris–Rips filtration: a simplex enters at its diameter. With
/// eps_values, every value is snapped up to the grid and simplices beyond the
/// last grid value are left out.
template <class Metric = EuclideanMetric>
Filtration vietoris_rips(const std::vector<std::vector<double>>& points, int max_dim,
                         std::optional<std::vector<double>> eps_values = std::nullopt,
                         Metric metric = {}) {
    if (points.empty()) throw DomainError("vietoris_rips: empty point set");
    if (max_dim < 0) throw DomainError("vietoris_rips: max_dim must be non-negative");
    for (const auto& p : points)
        if (p.size() != points.front().size())
            throw DomainError("vietoris_rips: points have inconsistent dimension");

    const int n = static_cast<int>(points.size());
    std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) dist[i][j] = dist[j][i] = metric(points[i], points[j]);

    std::optional<std::vector<double>> grid = std::move(eps_values);
    if (grid) {
        if (grid->empty()) throw DomainError("vietoris_rips: empty eps grid");
        std::sort(grid->begin(), grid->end());
    }
    auto snap = [&](double v) -> std::optional<double> {
        if (!grid) return v;
        const double slack = 1e-12 * std::max(1.0, std::abs(v));
        const auto it = std::lower_bound(grid->begin(), grid->end(), v - slack);
        if (it == grid->end()) return std::nullopt;
        return *it;
    };

    std::map<Simplex, double> weighted;
    std::map<Simplex, double> value;
    // A (q+1)-simplex is only tried when its prefix facet survived; diameters
    // are monotone, so nothing closed gets lost.
    std::vector<Simplex> frontier;
    for (int i = 0; i < n; ++i) {
        const auto v = snap(0.0);
        if (!v) continue;
        Simplex s{i};
        value[s] = *v;
        weighted[s] = 1.0;
        frontier.push_back(s);
    }
    for (int q = 1; q <= max_dim; ++q) {
        std::vector<Simplex> next;
        for (const auto& s : frontier) {
            for (int v = s.back() + 1; v < n; ++v) {
                Simplex t = s;
                t.push_back(v);
                double diam = 0.0;
                for (std::size_t a = 0; a < t.size(); ++a)
                    for (std::size_t b = a + 1; b < t.size(); ++b) diam = std::max(diam, dist[t[a]][t[b]]);
                const auto snapped = snap(diam);
                if (!snapped) continue;
                value[t] = *snapped;
                weighted[t] = 1.0;
                next.push_back(std::move(t));
            }
        }
        frontier = std::move(next);
    }

    SimplicialComplex k = SimplicialComplex::from_closed(weighted);
    std::vector<std::vector<double>> values(static_cast<std::size_t>(k.dimension() + 1));
    for (int q = 0; q <= k.dimension(); ++q)
        for (const auto& s : k.simplices(q)) values[q].push_back(value.at(s));
    return Filtration(std::move(k), std::move(values));
}

} // namespace perslap
