#pragma once

#include "perslap/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace perslap {

using Vertex = int;

/// Strictly increasing vertex tuple; orientation follows the vertex order.
using Simplex = std::vector<Vertex>;

using WeightFn = std::function<double(const Simplex&)>;

inline int simplex_dimension(const Simplex& s) { return static_cast<int>(s.size()) - 1; }

inline std::string to_string(const Simplex& s) {
    std::string out = "[";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(s[i]);
    }
    return out + "]";
}

/// Finite weighted simplicial complex.
///
/// Simplices of each dimension are stored in lexicographic order, which fixes
/// the basis of every chain group C_q. Weights are strictly positive and live
/// alongside the simplices (w^K). Immutable once built.
class SimplicialComplex {
public:
    SimplicialComplex() = default;

    /// Build from a face-closed simplex set. Closure is the caller's contract;
    /// use build_complex() for arbitrary generators.
    static SimplicialComplex from_closed(const std::map<Simplex, double>& weighted) {
        SimplicialComplex k;
        for (const auto& [s, w] : weighted) {
            const int q = simplex_dimension(s);
            if (q < 0) throw DomainError("empty simplex");
            if (static_cast<int>(k.layers_.size()) <= q) k.layers_.resize(q + 1);
            auto& layer = k.layers_[q];
            layer.index.emplace(s, layer.simplices.size());
            layer.simplices.push_back(s);
            layer.weights.push_back(w);
        }
        // std::map iteration is lexicographic, and within one dimension that
        // is the canonical order we want.
        while (!k.layers_.empty() && k.layers_.back().simplices.empty()) k.layers_.pop_back();
        return k;
    }

    /// Largest q with a q-simplex; -1 for the empty complex.
    int dimension() const { return static_cast<int>(layers_.size()) - 1; }

    bool empty() const { return layers_.empty(); }

    /// n_q^K
    std::size_t count(int q) const {
        if (q < 0 || q >= static_cast<int>(layers_.size())) return 0;
        return layers_[q].simplices.size();
    }

    std::size_t total_count() const {
        std::size_t n = 0;
        for (const auto& l : layers_) n += l.simplices.size();
        return n;
    }

    std::span<const Simplex> simplices(int q) const {
        if (q < 0 || q >= static_cast<int>(layers_.size())) return {};
        return layers_[q].simplices;
    }

    std::span<const double> weights(int q) const {
        if (q < 0 || q >= static_cast<int>(layers_.size())) return {};
        return layers_[q].weights;
    }

    std::optional<std::size_t> index_of(const Simplex& s) const {
        const int q = simplex_dimension(s);
        if (q < 0 || q >= static_cast<int>(layers_.size())) return std::nullopt;
        const auto it = layers_[q].index.find(s);
        if (it == layers_[q].index.end()) return std::nullopt;
        return it->second;
    }

    bool contains(const Simplex& s) const { return index_of(s).has_value(); }

    double weight(const Simplex& s) const {
        const auto idx = index_of(s);
        if (!idx) throw DomainError("simplex " + to_string(s) + " not in complex");
        return layers_[simplex_dimension(s)].weights[*idx];
    }

    std::vector<Vertex> vertices() const {
        std::vector<Vertex> out;
        for (const auto& s : simplices(0)) out.push_back(s.front());
        return out;
    }

    /// Every simplex with its weight, keyed for from_closed().
    std::map<Simplex, double> weighted_simplices() const {
        std::map<Simplex, double> out;
        for (const auto& layer : layers_)
            for (std::size_t i = 0; i < layer.simplices.size(); ++i)
                out.emplace(layer.simplices[i], layer.weights[i]);
        return out;
    }

    /// Sub-complex of the simplices accepted by keep(q, index). keep must
    /// select a face-closed family.
    template <class Pred>
    SimplicialComplex filter(Pred&& keep) const {
        SimplicialComplex k;
        for (int q = 0; q <= dimension(); ++q) {
            Layer layer;
            const auto& src = layers_[q];
            for (std::size_t i = 0; i < src.simplices.size(); ++i) {
                if (!keep(q, i)) continue;
                layer.index.emplace(src.simplices[i], layer.simplices.size());
                layer.simplices.push_back(src.simplices[i]);
                layer.weights.push_back(src.weights[i]);
            }
            if (layer.simplices.empty()) break;
            k.layers_.push_back(std::move(layer));
        }
        return k;
    }

    friend bool operator==(const SimplicialComplex& a, const SimplicialComplex& b) {
        if (a.layers_.size() != b.layers_.size()) return false;
        for (std::size_t q = 0; q < a.layers_.size(); ++q)
            if (a.layers_[q].simplices != b.layers_[q].simplices ||
                a.layers_[q].weights != b.layers_[q].weights)
                return false;
        return true;
    }

private:
    struct Layer {
        std::vector<Simplex> simplices;
        std::vector<double> weights;
        std::map<Simplex, std::size_t> index;
    };
    std::vector<Layer> layers_;
};

namespace detail {

inline Simplex normalized(const Simplex& raw) {
    if (raw.empty()) throw DomainError("empty vertex tuple");
    Simplex s = raw;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
        throw DomainError("repeated vertex in tuple " + to_string(raw));
    if (s.front() < 0) throw DomainError("negative vertex label in " + to_string(raw));
    return s;
}

inline void add_faces(const Simplex& s, std::set<Simplex>& out) {
    const std::size_t k = s.size();
    if (k > 24) throw DomainError("simplex too large to close: " + to_string(s));
    const std::size_t subsets = std::size_t{1} << k;
    for (std::size_t mask = 1; mask < subsets; ++mask) {
        Simplex face;
        for (std::size_t i = 0; i < k; ++i)
            if (mask & (std::size_t{1} << i)) face.push_back(s[i]);
        out.insert(std::move(face));
    }
}

} // namespace detail

/// Closure of the given generators. Weights default to 1.
inline SimplicialComplex build_complex(std::span<const Simplex> maximal_simplices,
                                       const WeightFn& weight_fn = {}) {
    std::set<Simplex> closed;
    for (const auto& raw : maximal_simplices) detail::add_faces(detail::normalized(raw), closed);

    std::map<Simplex, double> weighted;
    for (const auto& s : closed) {
        const double w = weight_fn ? weight_fn(s) : 1.0;
        if (!(w > 0.0) || !std::isfinite(w))
            throw WeightDomainError("weight of " + to_string(s) + " must be positive and finite, got " +
                                    std::to_string(w));
        weighted.emplace(s, w);
    }
    return SimplicialComplex::from_closed(weighted);
}

inline SimplicialComplex build_complex(std::initializer_list<Simplex> maximal_simplices,
                                       const WeightFn& weight_fn = {}) {
    return build_complex(std::span<const Simplex>(maximal_simplices.begin(), maximal_simplices.size()),
                         weight_fn);
}

/// Dense matrix of ∂_q: rows are the (q-1)-simplices, columns the q-simplices,
/// both in the complex's canonical order.
struct BoundaryMatrix {
    int q = 0;
    Eigen::MatrixXd entries;
};

inline BoundaryMatrix boundary_matrix(const SimplicialComplex& k, int q) {
    if (q < 0) throw DomainError("boundary_matrix: q must be non-negative");
    const auto rows = static_cast<Eigen::Index>(q == 0 ? 0 : k.count(q - 1));
    const auto cols = static_cast<Eigen::Index>(k.count(q));
    BoundaryMatrix b{q, Eigen::MatrixXd::Zero(rows, cols)};
    if (q == 0) return b;

    const auto simplices = k.simplices(q);
    for (Eigen::Index j = 0; j < cols; ++j) {
        const Simplex& s = simplices[j];
        for (std::size_t i = 0; i < s.size(); ++i) {
            Simplex facet;
            facet.reserve(s.size() - 1);
            for (std::size_t m = 0; m < s.size(); ++m)
                if (m != i) facet.push_back(s[m]);
            const auto row = k.index_of(facet);
            if (!row) throw DomainError("complex is not closed: missing facet " + to_string(facet));
            b.entries(static_cast<Eigen::Index>(*row), j) = (i % 2 == 0) ? 1.0 : -1.0;
        }
    }
    return b;
}

/// Diagonal of W_q^K.
inline Eigen::VectorXd weight_vector(const SimplicialComplex& k, int q) {
    const auto w = k.weights(q);
    Eigen::VectorXd v(static_cast<Eigen::Index>(w.size()));
    for (std::size_t i = 0; i < w.size(); ++i) v(static_cast<Eigen::Index>(i)) = w[i];
    return v;
}

} // namespace perslap
