#pragma once

#include "perslap/complex.hpp"
#include "perslap/filtration.hpp"
#include "perslap/spectral.hpp"

#include <Eigen/Cholesky>

#include <vector>

namespace perslap {

/// Persistent Laplacian of K_b -> K_d on C_q^{K_b}, stored in the
/// similarity-symmetrized form W^{-1/2} Delta W^{1/2}. For unit weights this is
/// the plain matrix representation.
struct PersistentLaplacian {
    SymmetricMatrix matrix;
    SymmetricMatrix up_part;
    SymmetricMatrix down_part;
    int q = 0;
    double birth = 0.0;
    double death = 0.0;
};

namespace detail {

inline void check_q(int q) {
    if (q < 0) throw DomainError("homological degree q must be non-negative");
}

/// Row position in L of each q-simplex of K, in K's canonical order.
inline std::vector<Index> embed_rows(const SimplicialComplex& k, const SimplicialComplex& l, int q) {
    std::vector<Index> rows;
    rows.reserve(k.count(q));
    for (const auto& s : k.simplices(q)) {
        const auto idx = l.index_of(s);
        if (!idx) throw DomainError("simplicial pair: " + to_string(s) + " is in K but not in L");
        rows.push_back(static_cast<Index>(*idx));
    }
    return rows;
}

inline void check_weights_agree(const SimplicialComplex& k, const SimplicialComplex& l, int q) {
    const auto rows = embed_rows(k, l, q);
    const auto wk = k.weights(q);
    const auto wl = l.weights(q);
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (wk[i] != wl[static_cast<std::size_t>(rows[i])])
            throw DomainError("simplicial pair: weights of K and L disagree on a shared simplex");
}

} // namespace detail

/// Delta_{q,up}^K, symmetrized: W_q^{-1/2} B_{q+1} W_{q+1} B_{q+1}^T W_q^{-1/2}.
inline SymmetricMatrix up_laplacian(const SimplicialComplex& k, int q) {
    detail::check_q(q);
    const auto n = static_cast<Index>(k.count(q));
    if (k.count(q + 1) == 0) return SymmetricMatrix::zero(n);
    const auto b = boundary_matrix(k, q + 1).entries;
    const Eigen::VectorXd wq_isqrt = weight_vector(k, q).cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd scaled = wq_isqrt.asDiagonal() * b * weight_vector(k, q + 1).cwiseSqrt().asDiagonal();
    return SymmetricMatrix(scaled * scaled.transpose());
}

/// Delta_{q,down}^K, symmetrized: W_q^{1/2} B_q^T W_{q-1}^{-1} B_q W_q^{1/2}.
inline SymmetricMatrix down_laplacian(const SimplicialComplex& k, int q) {
    detail::check_q(q);
    const auto n = static_cast<Index>(k.count(q));
    if (q == 0 || n == 0) return SymmetricMatrix::zero(n);
    const auto b = boundary_matrix(k, q).entries;
    const Eigen::MatrixXd scaled =
        weight_vector(k, q - 1).cwiseSqrt().cwiseInverse().asDiagonal() * b * weight_vector(k, q).cwiseSqrt().asDiagonal();
    return SymmetricMatrix(scaled.transpose() * scaled);
}

/// Delta_q^K = up + down. With unit weights and q = 0 on a graph this is the
/// classical graph Laplacian D - A.
inline SymmetricMatrix combinatorial_laplacian(const SimplicialComplex& k, int q) {
    return up_laplacian(k, q) + down_laplacian(k, q);
}

/// Up persistent Laplacian of the pair K -> L via column reduction.
///
/// D := rows of B^L_{q+1} for q-simplices outside K. Column-reducing D = R Y^{-1}
/// exposes, in the zero columns I of R, a basis Z = Y(:, I) of the (q+1)-chains
/// of L whose boundary lies in K. With B^{L,K} = (B^L_{q+1} Y)(K rows, I):
///
///   Delta_up = B^{L,K} (Z^T W_{q+1}^{-1} Z)^{-1} (B^{L,K})^T W_q^{-1}
///
/// returned in symmetrized form. I empty means C_{q+1}^{L,K} = 0 and the
/// result is the zero matrix.
inline SymmetricMatrix up_persistent_laplacian(const SimplicialComplex& k, const SimplicialComplex& l, int q) {
    detail::check_q(q);
    const auto nk = static_cast<Index>(k.count(q));
    const auto m = static_cast<Index>(l.count(q + 1));
    const auto k_rows = detail::embed_rows(k, l, q);
    detail::check_weights_agree(k, l, q);
    if (nk == 0) return SymmetricMatrix::zero(0);
    if (m == 0) return SymmetricMatrix::zero(nk);

    const auto nl = static_cast<Index>(l.count(q));
    std::vector<bool> in_k(static_cast<std::size_t>(nl), false);
    for (Index r : k_rows) in_k[r] = true;
    std::vector<Index> new_rows;
    for (Index r = 0; r < nl; ++r)
        if (!in_k[r]) new_rows.push_back(r);

    const Eigen::MatrixXd b_l = boundary_matrix(l, q + 1).entries;
    const Eigen::MatrixXd d = b_l(new_rows, Eigen::all);
    const auto reduction = column_reduce(d);
    const auto& cols = reduction.zero_columns;
    if (cols.empty()) return SymmetricMatrix::zero(nk);

    const Eigen::MatrixXd z = reduction.transform(Eigen::all, cols);
    const Eigen::MatrixXd b_lk = (b_l * z)(k_rows, Eigen::all);
    const Eigen::VectorXd w_next_inv = weight_vector(l, q + 1).cwiseInverse();
    const Eigen::MatrixXd gram = z.transpose() * w_next_inv.asDiagonal() * z;

    const Eigen::VectorXd wk_isqrt = weight_vector(k, q).cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd lhs = wk_isqrt.asDiagonal() * b_lk;
    const Eigen::LLT<Eigen::MatrixXd> chol(gram);
    if (chol.info() != Eigen::Success)
        throw NumericDomainError("up_persistent_laplacian: Gram matrix of the cycle basis is not positive definite");
    return SymmetricMatrix(lhs * chol.solve(lhs.transpose()));
}

/// Same operator through the Kron-reduction identity
/// Delta_up^{L,K} = Delta_up^L / D (Schur complement eliminating L \ K).
inline SymmetricMatrix up_persistent_laplacian_schur(const SimplicialComplex& k, const SimplicialComplex& l, int q,
                                                     double rank_tol = kDefaultRankTol) {
    detail::check_q(q);
    const auto k_rows = detail::embed_rows(k, l, q);
    detail::check_weights_agree(k, l, q);
    return schur_complement(up_laplacian(l, q), k_rows, rank_tol);
}

inline PersistentLaplacian persistent_laplacian(const SimplicialComplex& k, const SimplicialComplex& l, int q) {
    PersistentLaplacian out;
    out.q = q;
    out.up_part = up_persistent_laplacian(k, l, q);
    out.down_part = down_laplacian(k, q);
    out.matrix = out.up_part + out.down_part;
    return out;
}

namespace detail {

/// Resolves (b, d) against the filtration: b must be a level, d >= b.
inline std::pair<double, double> resolve_pair(const Filtration& f, double b, double d) {
    const auto level = f.find_level(b);
    if (!level) throw DomainError("birth " + std::to_string(b) + " is not a filtration level");
    if (d < *level) throw DomainError("death level precedes birth level");
    return {*level, d};
}

} // namespace detail

inline SymmetricMatrix up_persistent_laplacian(const Filtration& f, int q, double b, double d) {
    const auto [birth, death] = detail::resolve_pair(f, b, d);
    return up_persistent_laplacian(f.complex_at(birth), f.complex_at(death), q);
}

/// Delta_q^{K_d, K_b}; d = +inf pairs K_b with the final complex.
inline PersistentLaplacian persistent_laplacian(const Filtration& f, int q, double b, double d) {
    const auto [birth, death] = detail::resolve_pair(f, b, d);
    auto out = persistent_laplacian(f.complex_at(birth), f.complex_at(death), q);
    out.birth = birth;
    out.death = death;
    return out;
}

} // namespace perslap
