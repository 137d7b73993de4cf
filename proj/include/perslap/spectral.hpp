#pragma once

#include "perslap/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

namespace perslap {

using Index = Eigen::Index;

inline constexpr double kDefaultRankTol = 1e-10;
inline constexpr double kDefaultClusterTol = 1e-8;

/// Dense real symmetric matrix. Construction symmetrizes (M + M^T) / 2.
class SymmetricMatrix {
public:
    SymmetricMatrix() = default;

    explicit SymmetricMatrix(const Eigen::MatrixXd& m) {
        if (m.rows() != m.cols()) throw DomainError("SymmetricMatrix: matrix is not square");
        m_ = 0.5 * (m + m.transpose());
    }

    static SymmetricMatrix zero(Index n) { return SymmetricMatrix(Eigen::MatrixXd::Zero(n, n)); }
    static SymmetricMatrix identity(Index n) { return SymmetricMatrix(Eigen::MatrixXd::Identity(n, n)); }

    Index size() const { return m_.rows(); }
    bool empty() const { return m_.rows() == 0; }
    const Eigen::MatrixXd& dense() const { return m_; }
    double operator()(Index i, Index j) const { return m_(i, j); }

    bool all_finite() const { return m_.allFinite(); }

    friend SymmetricMatrix operator+(const SymmetricMatrix& a, const SymmetricMatrix& b) {
        return SymmetricMatrix(a.m_ + b.m_);
    }

private:
    Eigen::MatrixXd m_;
};

/// Sorted eigenpairs of a symmetric matrix; columns of eigenvectors are
/// orthonormal and follow the ascending eigenvalue order.
struct EigenDecomposition {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;
    double cluster_tol = kDefaultClusterTol;

    Index size() const { return eigenvalues.size(); }

    double max_abs() const { return eigenvalues.size() ? eigenvalues.cwiseAbs().maxCoeff() : 0.0; }

    /// Eigenvalues within rank_tol * max(1, max|lambda|) of zero.
    std::size_t nullity(double rank_tol = kDefaultRankTol) const {
        const double cut = rank_tol * std::max(1.0, max_abs());
        std::size_t n = 0;
        for (Index i = 0; i < eigenvalues.size(); ++i)
            if (std::abs(eigenvalues(i)) <= cut) ++n;
        return n;
    }

    /// Half-open index ranges of numerically equal eigenvalues: consecutive
    /// sorted values closer than cluster_tol * max(1, max|lambda|) share an
    /// eigenspace.
    std::vector<std::pair<Index, Index>> clusters() const {
        std::vector<std::pair<Index, Index>> out;
        const double cut = cluster_tol * std::max(1.0, max_abs());
        Index begin = 0;
        for (Index i = 1; i <= eigenvalues.size(); ++i) {
            if (i == eigenvalues.size() || eigenvalues(i) - eigenvalues(i - 1) > cut) {
                if (i > begin) out.emplace_back(begin, i);
                begin = i;
            }
        }
        return out;
    }
};

namespace detail {

inline double off_diagonal_norm(const Eigen::MatrixXd& a) {
    double acc = 0.0;
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = 0; i < j; ++i) acc += a(i, j) * a(i, j);
    return std::sqrt(2.0 * acc);
}

} // namespace detail

/// Cyclic Jacobi eigensolver. Sweeps until the off-diagonal Frobenius mass is
/// below 1e-14 of the matrix norm; degenerate eigenspaces come out with
/// orthonormal bases.
inline EigenDecomposition sym_eigen(const SymmetricMatrix& m, double cluster_tol = kDefaultClusterTol) {
    if (!m.all_finite()) throw NumericDomainError("sym_eigen: non-finite matrix entry");
    const Index n = m.size();
    Eigen::MatrixXd a = m.dense();
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);

    const double scale = a.norm();
    constexpr int kMaxSweeps = 100;
    bool converged = false;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        const double off = detail::off_diagonal_norm(a);
        if (off == 0.0 || off <= 1e-14 * scale) {
            converged = true;
            break;
        }
        for (Index p = 0; p < n - 1; ++p) {
            for (Index q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double app = a(p, p);
                const double aqq = a(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (Index k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Index k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = a(q, p) = 0.0;
                for (Index k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    // Stagnation at the rounding floor is still an accurate decomposition.
    if (!converged && detail::off_diagonal_norm(a) > 1e-10 * scale)
        throw NumericDomainError("sym_eigen: Jacobi sweeps did not converge");

    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) { return a(i, i) < a(j, j); });

    EigenDecomposition out;
    out.cluster_tol = cluster_tol;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, n);
    for (Index k = 0; k < n; ++k) {
        out.eigenvalues(k) = a(order[k], order[k]);
        out.eigenvectors.col(k) = v.col(order[k]);
    }
    return out;
}

/// Moore–Penrose pseudo-inverse through the eigendecomposition; eigenvalues
/// with |lambda| <= rank_tol * max|lambda| are treated as zero.
inline SymmetricMatrix pseudo_inverse(const SymmetricMatrix& m, double rank_tol = kDefaultRankTol) {
    if (m.empty()) return m;
    const auto eig = sym_eigen(m);
    const double cut = rank_tol * eig.max_abs();
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(m.size());
    for (Index i = 0; i < m.size(); ++i)
        if (std::abs(eig.eigenvalues(i)) > cut) inv(i) = 1.0 / eig.eigenvalues(i);
    return SymmetricMatrix(eig.eigenvectors * inv.asDiagonal() * eig.eigenvectors.transpose());
}

/// Result of column-reducing M: reduced = M * transform, with transform a
/// product of column shears (unit determinant). zero_columns lists the
/// columns of reduced that vanished.
struct ColumnReduction {
    Eigen::MatrixXd reduced;
    Eigen::MatrixXd transform;
    std::vector<Index> zero_columns;
    /// (row, column) of each pivot in elimination order.
    std::vector<std::pair<Index, Index>> pivots;

    /// det(transform) from the elimination record: every step is a shear.
    double transform_determinant() const { return 1.0; }
};

/// Gaussian elimination on columns with partial pivoting. Row by row, the
/// largest remaining entry (lowest column on ties) becomes the pivot and
/// clears that row in every other unpivoted column. Entries at or below
/// 1e-10 * max|M| count as zero.
inline ColumnReduction column_reduce(const Eigen::MatrixXd& m) {
    const Index rows = m.rows();
    const Index cols = m.cols();
    ColumnReduction out;
    out.reduced = m;
    out.transform = Eigen::MatrixXd::Identity(cols, cols);
    const double zero_cut = m.size() ? 1e-10 * m.cwiseAbs().maxCoeff() : 0.0;

    auto& r = out.reduced;
    auto& y = out.transform;
    std::vector<bool> pivoted(static_cast<std::size_t>(cols), false);
    for (Index row = 0; row < rows; ++row) {
        Index best = -1;
        double best_abs = zero_cut;
        for (Index c = 0; c < cols; ++c) {
            if (pivoted[c]) continue;
            if (std::abs(r(row, c)) > best_abs) {
                best_abs = std::abs(r(row, c));
                best = c;
            }
        }
        if (best < 0) continue;
        pivoted[best] = true;
        out.pivots.emplace_back(row, best);
        for (Index c = 0; c < cols; ++c) {
            if (pivoted[c] || r(row, c) == 0.0) continue;
            const double factor = r(row, c) / r(row, best);
            r.col(c) -= factor * r.col(best);
            y.col(c) -= factor * y.col(best);
            r(row, c) = 0.0;
        }
    }
    for (Index c = 0; c < cols; ++c) {
        if (pivoted[c]) continue;
        r.col(c).setZero();
        out.zero_columns.push_back(c);
    }
    return out;
}

/// A - B D^+ B^T for A = M(keep, keep), B = M(keep, drop), D = M(drop, drop);
/// drop is the complement of keep in ascending order.
inline SymmetricMatrix schur_complement(const SymmetricMatrix& m, std::span<const Index> keep,
                                        double rank_tol = kDefaultRankTol) {
    const Index n = m.size();
    std::vector<bool> kept(static_cast<std::size_t>(n), false);
    for (Index k : keep) {
        if (k < 0 || k >= n) throw DomainError("schur_complement: keep index out of range");
        if (kept[k]) throw DomainError("schur_complement: repeated keep index");
        kept[k] = true;
    }
    std::vector<Index> drop;
    for (Index i = 0; i < n; ++i)
        if (!kept[i]) drop.push_back(i);

    const auto nk = static_cast<Index>(keep.size());
    const auto nd = static_cast<Index>(drop.size());
    const auto& full = m.dense();
    Eigen::MatrixXd a(nk, nk), b(nk, nd), d(nd, nd);
    for (Index i = 0; i < nk; ++i) {
        for (Index j = 0; j < nk; ++j) a(i, j) = full(keep[i], keep[j]);
        for (Index j = 0; j < nd; ++j) b(i, j) = full(keep[i], drop[j]);
    }
    for (Index i = 0; i < nd; ++i)
        for (Index j = 0; j < nd; ++j) d(i, j) = full(drop[i], drop[j]);
    if (nd == 0) return SymmetricMatrix(a);

    const auto d_pinv = pseudo_inverse(SymmetricMatrix(d), rank_tol);
    return SymmetricMatrix(a - b * d_pinv.dense() * b.transpose());
}

inline SymmetricMatrix schur_complement(const SymmetricMatrix& m, std::initializer_list<Index> keep,
                                        double rank_tol = kDefaultRankTol) {
    return schur_complement(m, std::span<const Index>(keep.begin(), keep.size()), rank_tol);
}

} // namespace perslap
