#pragma once

#include "perslap/persistence.hpp"
#include "perslap/plaplacian.hpp"
#include "perslap/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace perslap {

enum class SignatureKind { gap, entropy, geo };

enum class GeoMode { distinct_eigenspaces, multiplicity_weighted };

/// Reference vector v for s_geo. PLD cells have different sizes, so the
/// vector is resolved per matrix size.
struct ReferenceVector {
    enum class Kind { first_basis, uniform, explicit_values };
    Kind kind = Kind::first_basis;
    std::vector<double> values;

    static ReferenceVector first_basis() { return {}; }
    static ReferenceVector uniform() { return {Kind::uniform, {}}; }
    static ReferenceVector explicit_vector(std::vector<double> v) { return {Kind::explicit_values, std::move(v)}; }

    Eigen::VectorXd resolve(Index n) const {
        switch (kind) {
        case Kind::first_basis: return n > 0 ? Eigen::VectorXd::Unit(n, 0) : Eigen::VectorXd();
        case Kind::uniform: return Eigen::VectorXd::Ones(n);
        case Kind::explicit_values:
            if (static_cast<Index>(values.size()) != n)
                throw DomainError("reference vector has length " + std::to_string(values.size()) +
                                  ", matrix has size " + std::to_string(n));
            return Eigen::Map<const Eigen::VectorXd>(values.data(), n);
        }
        return {};
    }

    std::string name() const {
        switch (kind) {
        case Kind::first_basis: return "e1";
        case Kind::uniform: return "ones";
        case Kind::explicit_values: return "v";
        }
        return "v";
    }
};

namespace detail {

inline double p_norm(const Eigen::VectorXd& x, double p) {
    if (std::isinf(p)) return x.size() ? x.cwiseAbs().maxCoeff() : 0.0;
    double acc = 0.0;
    for (Index i = 0; i < x.size(); ++i) acc += std::pow(std::abs(x(i)), p);
    return std::pow(acc, 1.0 / p);
}

inline void check_p(double p) {
    if (std::isnan(p) || p < 1.0) throw DomainError("s_geo: p must be >= 1");
}

} // namespace detail

/// lambda_2 of the sorted spectrum; lambda_1 when N = 1.
inline double s_gap(const EigenDecomposition& eig) {
    if (eig.size() == 0) throw DomainError("s_gap: empty matrix");
    return eig.size() == 1 ? eig.eigenvalues(0) : eig.eigenvalues(1);
}

inline double s_gap(const SymmetricMatrix& m) {
    if (m.empty()) throw DomainError("s_gap: empty matrix");
    return s_gap(sym_eigen(m));
}

/// Spectral entropy of the normalized spectrum. An all-zero spectrum counts
/// as uniform (value log N).
inline double s_ent(const EigenDecomposition& eig, double rank_tol = kDefaultRankTol) {
    const Index n = eig.size();
    if (n == 0) throw DomainError("s_ent: empty matrix");
    const double scale = std::max(1.0, eig.max_abs());
    const double zero_cut = rank_tol * scale;
    Eigen::VectorXd lam = eig.eigenvalues;
    for (Index i = 0; i < n; ++i) {
        if (lam(i) < -1e-6 * scale) throw NumericDomainError("s_ent: matrix is not positive semidefinite");
        if (lam(i) <= zero_cut) lam(i) = 0.0;
    }
    const double total = lam.sum();
    if (total == 0.0) return std::log(static_cast<double>(n));
    double h = 0.0;
    for (Index i = 0; i < n; ++i) {
        const double p = lam(i) / total;
        if (p > 0.0) h -= p * std::log(p);
    }
    return h;
}

inline double s_ent(const SymmetricMatrix& m, double rank_tol = kDefaultRankTol) {
    if (m.empty()) throw DomainError("s_ent: empty matrix");
    return s_ent(sym_eigen(m), rank_tol);
}

struct EigenspaceProjection {
    double eigenvalue = 0.0;
    Index multiplicity = 0;
    Eigen::VectorXd projection;
};

/// P_lambda v for every eigenspace, grouped by the decomposition's clusters.
inline std::vector<EigenspaceProjection> eigenspace_projections(const EigenDecomposition& eig,
                                                                const Eigen::VectorXd& v) {
    if (v.size() != eig.size()) throw DomainError("eigenspace_projections: dimension mismatch");
    std::vector<EigenspaceProjection> out;
    for (const auto& [begin, end] : eig.clusters()) {
        const auto basis = eig.eigenvectors.middleCols(begin, end - begin);
        EigenspaceProjection e;
        e.eigenvalue = eig.eigenvalues.segment(begin, end - begin).mean();
        e.multiplicity = end - begin;
        e.projection = basis * (basis.transpose() * v);
        out.push_back(std::move(e));
    }
    return out;
}

inline double s_geo(const EigenDecomposition& eig, const Eigen::VectorXd& v, double p,
                    GeoMode mode = GeoMode::distinct_eigenspaces) {
    detail::check_p(p);
    if (eig.size() == 0) throw DomainError("s_geo: empty matrix");
    if (v.size() != eig.size()) throw DomainError("s_geo: reference vector length does not match matrix size");
    if (v.norm() == 0.0) throw DomainError("s_geo: reference vector must be nonzero");
    double total = 0.0;
    for (const auto& e : eigenspace_projections(eig, v)) {
        const double norm = detail::p_norm(e.projection, p);
        total += mode == GeoMode::multiplicity_weighted ? static_cast<double>(e.multiplicity) * norm : norm;
    }
    return total;
}

inline double s_geo(const SymmetricMatrix& m, const Eigen::VectorXd& v, double p,
                    GeoMode mode = GeoMode::distinct_eigenspaces, double cluster_tol = kDefaultClusterTol) {
    if (m.empty()) throw DomainError("s_geo: empty matrix");
    return s_geo(sym_eigen(m, cluster_tol), v, p, mode);
}

struct SignatureSpec {
    SignatureKind kind = SignatureKind::gap;
    double p = 2.0;
    ReferenceVector v;
    GeoMode geo_mode = GeoMode::distinct_eigenspaces;
    double rank_tol = kDefaultRankTol;
    double cluster_tol = kDefaultClusterTol;

    static SignatureSpec gap() { return {}; }
    static SignatureSpec entropy() { return {SignatureKind::entropy}; }
    static SignatureSpec geo(double p, ReferenceVector v = ReferenceVector::first_basis(),
                             GeoMode mode = GeoMode::distinct_eigenspaces) {
        SignatureSpec s{SignatureKind::geo, p, std::move(v), mode};
        return s;
    }

    double evaluate(const SymmetricMatrix& m) const {
        if (m.empty()) throw DomainError("signature of an empty matrix");
        const auto eig = sym_eigen(m, cluster_tol);
        double value = 0.0;
        switch (kind) {
        case SignatureKind::gap: value = s_gap(eig); break;
        case SignatureKind::entropy: value = s_ent(eig, rank_tol); break;
        case SignatureKind::geo: value = s_geo(eig, v.resolve(m.size()), p, geo_mode); break;
        }
        if (std::abs(value) > bound(m) * (1.0 + 1e-9) + 1e-12)
            throw NumericDomainError(name() + " = " + format_real(value) + " exceeds its admissibility bound");
        return value;
    }

    /// Uniform bound on |s(M)| for matrices like m:
    /// 2 max_i M_ii for the gap (PSD input), log N for the entropy,
    /// N ||v||_p (distinct) or N^{3/2} ||v||_p (weighted) for s_geo.
    double bound(const SymmetricMatrix& m) const {
        const auto n = static_cast<double>(m.size());
        switch (kind) {
        case SignatureKind::gap: return m.empty() ? 0.0 : 2.0 * m.dense().diagonal().maxCoeff();
        case SignatureKind::entropy: return std::log(std::max(1.0, n));
        case SignatureKind::geo: {
            const double vn = detail::p_norm(v.resolve(m.size()), p);
            return (geo_mode == GeoMode::multiplicity_weighted ? n * std::sqrt(n) : n) * vn;
        }
        }
        return 0.0;
    }

    /// CSV-safe identifier, e.g. "s_geo_p2_e1_distinct".
    std::string name() const {
        switch (kind) {
        case SignatureKind::gap: return "s_gap";
        case SignatureKind::entropy: return "s_ent";
        case SignatureKind::geo: {
            std::string pn = std::isinf(p) ? "inf" : format_real(p);
            return "s_geo_p" + pn + "_" + v.name() + "_" +
                   (geo_mode == GeoMode::distinct_eigenspaces ? "distinct" : "weighted");
        }
        }
        return "s";
    }
};

// ---------------------------------------------------------------------------
// Persistent Laplacian diagrams

/// pooled: levels from the diagrams of every degree; per_q: only degree q.
enum class GridMode { pooled, per_q };

struct PLDCell {
    double birth = 0.0;
    double death = 0.0;
    double value = 0.0;

    friend bool operator==(const PLDCell&, const PLDCell&) = default;
};

struct PLDiagram {
    int q = 0;
    std::string signature;
    GridMode mode = GridMode::pooled;
    std::vector<double> births;
    std::vector<double> deaths;
    /// Sorted by (birth, death).
    std::vector<PLDCell> cells;

    bool empty() const { return cells.empty(); }
    std::size_t size() const { return cells.size(); }

    std::vector<PlanePoint> points() const {
        std::vector<PlanePoint> out;
        out.reserve(cells.size());
        for (const auto& c : cells) out.push_back({c.birth, c.death});
        return out;
    }

    std::optional<double> value_at(double b, double d) const {
        for (const auto& c : cells)
            if (c.birth == b && c.death == d) return c.value;
        return std::nullopt;
    }

    double max_abs_value() const {
        double m = 0.0;
        for (const auto& c : cells) m = std::max(m, std::abs(c.value));
        return m;
    }
};

namespace detail {

/// Grid levels and whether infinity joins them.
struct PLDLevels {
    std::vector<double> births;
    std::vector<double> deaths;
    std::vector<double> grid;
    bool infinite = false;
};

inline PLDLevels pld_levels(std::span<const PersistenceDiagram> diagrams) {
    std::set<double> births, deaths;
    bool infinite = false;
    for (const auto& d : diagrams) {
        for (const auto& p : d.points) {
            births.insert(p.birth);
            if (std::isinf(p.death))
                infinite = true;
            else
                deaths.insert(p.death);
        }
    }
    PLDLevels out;
    out.births.assign(births.begin(), births.end());
    out.deaths.assign(deaths.begin(), deaths.end());
    std::set<double> all = births;
    all.insert(deaths.begin(), deaths.end());
    out.grid.assign(all.begin(), all.end());
    out.infinite = infinite;
    return out;
}

} // namespace detail

/// PLD from precomputed diagrams. pooled reads levels from every diagram in
/// `diagrams`; per_q only from the one with matching q. Cells whose K_b has
/// no q-simplices carry 0.
inline PLDiagram build_pld(const Filtration& f, int q, const SignatureSpec& spec, GridMode mode,
                           std::span<const PersistenceDiagram> diagrams) {
    detail::check_q(q);
    std::vector<PersistenceDiagram> chosen;
    for (const auto& d : diagrams)
        if (mode == GridMode::pooled || d.q == q) chosen.push_back(d);
    const auto levels = detail::pld_levels(chosen);

    PLDiagram out;
    out.q = q;
    out.signature = spec.name();
    out.mode = mode;
    out.births = levels.births;
    out.deaths = levels.deaths;

    std::vector<double> ends = levels.grid;
    if (levels.infinite) ends.push_back(kInfinity);
    std::map<double, SimplicialComplex> complexes;
    auto complex = [&](double t) -> const SimplicialComplex& {
        auto it = complexes.find(t);
        if (it == complexes.end()) it = complexes.emplace(t, f.complex_at(t)).first;
        return it->second;
    };
    for (double b : levels.grid) {
        if (!f.find_level(b)) throw DomainError("PLD level " + format_real(b) + " is not a filtration level");
        for (double d : ends) {
            if (!(d > b)) continue;
            const auto& kb = complex(b);
            double value = 0.0;
            if (kb.count(q) > 0) {
                const auto m = up_persistent_laplacian(kb, complex(d), q) + down_laplacian(kb, q);
                value = spec.evaluate(m);
            }
            out.cells.push_back({b, d, value});
        }
    }
    return out;
}

inline std::vector<PersistenceDiagram> all_diagrams(const Filtration& f, double rank_tol = kDefaultRankTol) {
    std::vector<PersistenceDiagram> out;
    for (int q = 0; q <= f.final_complex().dimension(); ++q) out.push_back(persistence_diagram(f, q, rank_tol));
    return out;
}

inline PLDiagram build_pld(const Filtration& f, int q, const SignatureSpec& spec,
                           GridMode mode = GridMode::pooled) {
    std::vector<PersistenceDiagram> diagrams;
    if (mode == GridMode::pooled)
        diagrams = all_diagrams(f, spec.rank_tol);
    else if (q <= f.final_complex().dimension())
        diagrams.push_back(persistence_diagram(f, q, spec.rank_tol));
    return build_pld(f, q, spec, mode, diagrams);
}

/// Wasserstein distance between cell coordinates; values do not enter.
inline double pld_wasserstein(const PLDiagram& a, const PLDiagram& b, double p) {
    const auto pa = a.points();
    const auto pb = b.points();
    return wasserstein(pa, pb, p);
}

inline void write_pld_csv(std::ostream& os, std::span<const PLDiagram> plds) {
    os << "q,birth,death,signature,value\n";
    for (const auto& pld : plds)
        for (const auto& c : pld.cells)
            os << pld.q << ',' << format_real(c.birth) << ',' << format_real(c.death) << ',' << pld.signature << ','
               << format_real(c.value) << '\n';
}

inline void write_pld_csv(std::ostream& os, const PLDiagram& pld) {
    write_pld_csv(os, std::span<const PLDiagram>(&pld, 1));
}

/// PLDs keyed by (q, signature), in ascending order.
inline std::vector<PLDiagram> read_pld_csv(std::istream& is) {
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(is, line)) throw ParseError("missing header", 1);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "q,birth,death,signature,value") throw ParseError("unexpected header '" + line + "'", line_no);

    std::map<std::pair<int, std::string>, PLDiagram> by_key;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != 5) throw ParseError("expected 5 fields", line_no);
        const double q = parse_real(fields[0], line_no);
        if (q < 0 || q != std::floor(q)) throw ParseError("q must be a non-negative integer", line_no);
        PLDCell c{parse_real(fields[1], line_no), parse_real(fields[2], line_no), parse_real(fields[4], line_no)};
        if (!(c.birth < c.death)) throw ParseError("birth must precede death", line_no);
        const std::string sig(fields[3]);
        auto& pld = by_key[{static_cast<int>(q), sig}];
        pld.q = static_cast<int>(q);
        pld.signature = sig;
        pld.cells.push_back(c);
    }
    std::vector<PLDiagram> out;
    for (auto& [key, pld] : by_key) {
        std::sort(pld.cells.begin(), pld.cells.end(), [](const PLDCell& a, const PLDCell& b) {
            return std::tie(a.birth, a.death) < std::tie(b.birth, b.death);
        });
        out.push_back(std::move(pld));
    }
    return out;
}

} // namespace perslap
