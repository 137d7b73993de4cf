#pragma once

// Independent reference implementations used only for verification. Nothing
// here touches the Jacobi solver, the column reduction or the matcher.

#include "perslap/complex.hpp"
#include "perslap/filtration.hpp"
#include "perslap/persistence.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <tuple>
#include <vector>

namespace perslap::oracle {

inline Eigen::VectorXd spectrum(const Eigen::MatrixXd& m) {
    if (m.rows() == 0) return {};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

inline Index rank(const Eigen::MatrixXd& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    lu.setThreshold(1e-10);
    return lu.rank();
}

/// beta_q^{s,t} = dim Z_q(K_s) - dim(Z_q(K_s) cap B_q(K_t))
///             = rank [Z | B] - rank B, all in the q-chains of K_t.
inline std::size_t persistent_betti(const Filtration& f, int q, double s, double t) {
    const auto ks = f.complex_at(s);
    const auto kt = f.complex_at(t);
    const auto ns = static_cast<Index>(ks.count(q));
    const auto nt = static_cast<Index>(kt.count(q));
    if (ns == 0) return 0;

    Eigen::MatrixXd z_local;
    if (q == 0) {
        z_local = Eigen::MatrixXd::Identity(ns, ns);
    } else {
        const auto bq = boundary_matrix(ks, q).entries;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(bq);
        lu.setThreshold(1e-10);
        if (lu.rank() == ns) return 0;
        z_local = lu.kernel();
    }
    Eigen::MatrixXd z = Eigen::MatrixXd::Zero(nt, z_local.cols());
    const auto simplices = ks.simplices(q);
    for (Index i = 0; i < ns; ++i) z.row(static_cast<Index>(*kt.index_of(simplices[i]))) = z_local.row(i);

    const Eigen::MatrixXd b = boundary_matrix(kt, q + 1).entries;
    Eigen::MatrixXd both(nt, z.cols() + b.cols());
    both << z, b;
    return static_cast<std::size_t>(rank(both) - rank(b));
}

/// Standard boundary-matrix reduction over the reals, simplices ordered by
/// (value, dimension, lexicographic). Zero-length pairs are dropped.
inline PersistenceDiagram reduction_diagram(const Filtration& f, int q) {
    const auto& k = f.final_complex();
    struct Entry {
        double value;
        int dim;
        Simplex s;
    };
    std::vector<Entry> order;
    for (int d = 0; d <= k.dimension(); ++d)
        for (std::size_t i = 0; i < k.count(d); ++i) order.push_back({f.value(d, i), d, k.simplices(d)[i]});
    std::sort(order.begin(), order.end(),
              [](const Entry& a, const Entry& b) { return std::tie(a.value, a.dim, a.s) < std::tie(b.value, b.dim, b.s); });
    const auto n = static_cast<Index>(order.size());
    std::map<Simplex, Index> pos;
    for (Index i = 0; i < n; ++i) pos[order[i].s] = i;

    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(n, n);
    for (Index j = 0; j < n; ++j) {
        const auto& s = order[j].s;
        if (s.size() < 2) continue;
        for (std::size_t i = 0; i < s.size(); ++i) {
            Simplex facet;
            for (std::size_t m = 0; m < s.size(); ++m)
                if (m != i) facet.push_back(s[m]);
            r(pos.at(facet), j) = (i % 2 == 0) ? 1.0 : -1.0;
        }
    }
    auto low = [&](Index j) -> Index {
        for (Index i = n - 1; i >= 0; --i)
            if (std::abs(r(i, j)) > 1e-9) return i;
        return -1;
    };
    std::vector<Index> owner(static_cast<std::size_t>(n), -1);
    std::vector<Index> lows(static_cast<std::size_t>(n), -1);
    for (Index j = 0; j < n; ++j) {
        Index l = low(j);
        while (l >= 0 && owner[l] >= 0) {
            const Index i = owner[l];
            r.col(j) -= (r(l, j) / r(l, i)) * r.col(i);
            r(l, j) = 0.0;
            l = low(j);
        }
        lows[j] = l;
        if (l >= 0) owner[l] = j;
    }

    std::vector<PlanePoint> pts;
    for (Index j = 0; j < n; ++j) {
        if (order[j].dim != q) continue;
        if (lows[j] >= 0) continue; // j kills a (q-1)-class
        if (owner[j] >= 0) {
            const double b = order[j].value;
            const double d = order[owner[j]].value;
            if (d > b) pts.push_back({b, d});
        } else {
            pts.push_back({order[j].value, kInfinity});
        }
    }
    std::sort(pts.begin(), pts.end());
    PersistenceDiagram out;
    out.q = q;
    for (const auto& p : pts) {
        if (!out.points.empty() && out.points.back().birth == p.x && out.points.back().death == p.y)
            ++out.points.back().multiplicity;
        else
            out.points.push_back({p.x, p.y, 1});
    }
    return out;
}

namespace detail {

inline double linf(const PlanePoint& a, const PlanePoint& b) {
    return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
}

/// Every partial matching of finite points (unmatched ones go to the
/// diagonal) and every bijection of infinite points, folded with combine.
inline double enumerate(std::span<const PlanePoint> a, std::span<const PlanePoint> b,
                        const std::function<double(double, double)>& combine, const std::function<double(double)>& lift) {
    std::vector<PlanePoint> fa, fb;
    std::vector<double> ia, ib;
    for (const auto& p : a) (std::isinf(p.y) ? ia.push_back(p.x) : fa.push_back(p));
    for (const auto& p : b) (std::isinf(p.y) ? ib.push_back(p.x) : fb.push_back(p));
    if (ia.size() != ib.size()) return kInfinity;

    double best_inf = kInfinity;
    std::vector<std::size_t> perm(ib.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
        double acc = 0.0;
        for (std::size_t i = 0; i < ia.size(); ++i) acc = combine(acc, lift(std::abs(ia[i] - ib[perm[i]])));
        best_inf = std::min(best_inf, acc);
    } while (std::next_permutation(perm.begin(), perm.end()));

    double best = kInfinity;
    std::vector<char> used(fb.size(), 0);
    std::function<void(std::size_t, double)> rec = [&](std::size_t i, double acc) {
        if (i == fa.size()) {
            for (std::size_t j = 0; j < fb.size(); ++j)
                if (!used[j]) acc = combine(acc, lift((fb[j].y - fb[j].x) / 2.0));
            best = std::min(best, acc);
            return;
        }
        rec(i + 1, combine(acc, lift((fa[i].y - fa[i].x) / 2.0)));
        for (std::size_t j = 0; j < fb.size(); ++j) {
            if (used[j]) continue;
            used[j] = 1;
            rec(i + 1, combine(acc, lift(linf(fa[i], fb[j]))));
            used[j] = 0;
        }
    };
    rec(0, 0.0);
    return combine(best_inf, best);
}

} // namespace detail

inline double brute_force_wasserstein(std::span<const PlanePoint> a, std::span<const PlanePoint> b, double p) {
    const double total = detail::enumerate(
        a, b, [](double x, double y) { return x + y; }, [p](double c) { return std::pow(c, p); });
    return std::pow(total, 1.0 / p);
}

inline double brute_force_bottleneck(std::span<const PlanePoint> a, std::span<const PlanePoint> b) {
    return detail::enumerate(
        a, b, [](double x, double y) { return std::max(x, y); }, [](double c) { return c; });
}

} // namespace perslap::oracle
