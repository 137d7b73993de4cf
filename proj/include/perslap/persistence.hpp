#pragma once

#include "perslap/filtration.hpp"
#include "perslap/plaplacian.hpp"
#include "perslap/spectral.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace perslap {

struct DiagramPoint {
    double birth = 0.0;
    double death = kInfinity;
    int multiplicity = 1;

    friend bool operator==(const DiagramPoint&, const DiagramPoint&) = default;
};

/// A point of the (birth, death) plane; death may be +inf.
struct PlanePoint {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const PlanePoint&, const PlanePoint&) = default;
    friend auto operator<=>(const PlanePoint&, const PlanePoint&) = default;
};

struct PersistenceDiagram {
    int q = 0;
    /// Sorted by (birth, death); one entry per distinct point.
    std::vector<DiagramPoint> points;

    std::size_t size() const {
        std::size_t n = 0;
        for (const auto& p : points) n += static_cast<std::size_t>(p.multiplicity);
        return n;
    }

    bool empty() const { return points.empty(); }

    /// Points repeated by multiplicity.
    std::vector<PlanePoint> expanded() const {
        std::vector<PlanePoint> out;
        for (const auto& p : points)
            for (int i = 0; i < p.multiplicity; ++i) out.push_back({p.birth, p.death});
        return out;
    }

    friend bool operator==(const PersistenceDiagram&, const PersistenceDiagram&) = default;
};

/// Kernel dimension with cut rank_tol * max(1, max|lambda|).
inline std::size_t nullity(const SymmetricMatrix& m, double rank_tol = kDefaultRankTol) {
    if (m.empty()) return 0;
    return sym_eigen(m).nullity(rank_tol);
}

/// beta_q^{s,t} as the nullity of Delta_q^{K_t, K_s}.
inline std::size_t persistent_betti(const Filtration& f, int q, double s, double t,
                                    double rank_tol = kDefaultRankTol) {
    return nullity(persistent_laplacian(f, q, s, t).matrix, rank_tol);
}

/// Diagram from the discrete multiplicity formula. For finite d,
///   mu^{b,d} = (beta^{b',d} - beta^{b,d}) - (beta^{b',d'} - beta^{b,d'}),
/// and mu^{b,inf} = beta^{b,inf} - beta^{b',inf}, where b', d' are the
/// predecessors in T and beta with b' below min T is 0.
inline PersistenceDiagram persistence_diagram(const Filtration& f, int q, double rank_tol = kDefaultRankTol) {
    detail::check_q(q);
    PersistenceDiagram out;
    out.q = q;
    const auto& levels = f.levels();
    const std::size_t n = levels.size();
    if (n == 0) return out;

    std::vector<SimplicialComplex> complexes;
    complexes.reserve(n + 1);
    for (double t : levels) complexes.push_back(f.complex_at(t));
    complexes.push_back(f.final_complex());

    // beta[s][t] for level indices s <= t, t == n meaning infinity.
    std::vector<std::vector<long>> beta(n, std::vector<long>(n + 1, -1));
    auto betti = [&](std::size_t s, std::size_t t) -> long {
        auto& slot = beta[s][t];
        if (slot < 0) {
            const auto& k = complexes[s];
            const auto& l = complexes[t];
            const auto m = up_persistent_laplacian(k, l, q) + down_laplacian(k, q);
            slot = static_cast<long>(nullity(m, rank_tol));
        }
        return slot;
    };
    auto beta_or_zero = [&](std::ptrdiff_t s, std::size_t t) -> long {
        return s < 0 ? 0 : betti(static_cast<std::size_t>(s), t);
    };

    for (std::size_t b = 0; b < n; ++b) {
        const auto bp = static_cast<std::ptrdiff_t>(b) - 1;
        for (std::size_t d = b + 1; d < n; ++d) {
            const std::size_t dp = d - 1;
            const long mu = (beta_or_zero(bp, d) - betti(b, d)) - (beta_or_zero(bp, dp) - betti(b, dp));
            if (mu > 0) out.points.push_back({levels[b], levels[d], static_cast<int>(mu)});
        }
        const long mu_inf = betti(b, n) - beta_or_zero(bp, n);
        if (mu_inf > 0) out.points.push_back({levels[b], kInfinity, static_cast<int>(mu_inf)});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Matching distances

namespace detail {

/// Min-cost perfect assignment on a square matrix (potentials / shortest
/// augmenting path). Returns the column assigned to each row.
inline std::vector<int> hungarian(const std::vector<std::vector<double>>& cost) {
    const int n = static_cast<int>(cost.size());
    if (n == 0) return {};
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    std::vector<char> used(n + 1);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> row_to_col(n);
    for (int j = 1; j <= n; ++j) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

inline double linf(const PlanePoint& a, const PlanePoint& b) {
    return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
}

/// l_inf distance to the diagonal.
inline double diagonal_distance(const PlanePoint& a) { return std::abs(a.y - a.x) / 2.0; }

struct SplitPoints {
    std::vector<PlanePoint> finite;
    std::vector<double> infinite_births;
};

inline SplitPoints split(std::span<const PlanePoint> pts) {
    SplitPoints out;
    for (const auto& p : pts) {
        if (!std::isfinite(p.x)) throw DomainError("diagram point with non-finite birth");
        if (std::isinf(p.y) && p.y > 0)
            out.infinite_births.push_back(p.x);
        else if (!std::isfinite(p.y))
            throw DomainError("diagram point with invalid death");
        else
            out.finite.push_back(p);
    }
    std::sort(out.infinite_births.begin(), out.infinite_births.end());
    return out;
}

/// Augmented (m+n) square cost matrix: real pairs top-left, each point's
/// diagonal projection in its off-diagonal block, diagonal-diagonal free.
inline std::vector<std::vector<double>> augmented_costs(const std::vector<PlanePoint>& a,
                                                        const std::vector<PlanePoint>& b, double p) {
    const std::size_t m = a.size();
    const std::size_t n = b.size();
    std::vector<std::vector<double>> c(m + n, std::vector<double>(m + n, 0.0));
    auto power = [p](double x) { return std::isinf(p) ? x : std::pow(x, p); };
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) c[i][j] = power(linf(a[i], b[j]));
        for (std::size_t j = n; j < m + n; ++j) c[i][j] = power(diagonal_distance(a[i]));
    }
    for (std::size_t i = m; i < m + n; ++i)
        for (std::size_t j = 0; j < n; ++j) c[i][j] = power(diagonal_distance(b[j]));
    return c;
}

/// Kuhn's augmenting-path test for a perfect matching on allowed edges.
inline bool has_perfect_matching(const std::vector<std::vector<char>>& allowed) {
    const std::size_t n = allowed.size();
    std::vector<int> match(n, -1);
    std::vector<char> seen(n);
    std::function<bool(std::size_t)> augment = [&](std::size_t row) {
        for (std::size_t col = 0; col < n; ++col) {
            if (!allowed[row][col] || seen[col]) continue;
            seen[col] = 1;
            if (match[col] < 0 || augment(static_cast<std::size_t>(match[col]))) {
                match[col] = static_cast<int>(row);
                return true;
            }
        }
        return false;
    };
    for (std::size_t row = 0; row < n; ++row) {
        std::fill(seen.begin(), seen.end(), 0);
        if (!augment(row)) return false;
    }
    return true;
}

} // namespace detail

inline double bottleneck(std::span<const PlanePoint> a, std::span<const PlanePoint> b) {
    const auto sa = detail::split(a);
    const auto sb = detail::split(b);
    if (sa.infinite_births.size() != sb.infinite_births.size()) return kInfinity;
    double best = 0.0;
    for (std::size_t i = 0; i < sa.infinite_births.size(); ++i)
        best = std::max(best, std::abs(sa.infinite_births[i] - sb.infinite_births[i]));

    const auto cost = detail::augmented_costs(sa.finite, sb.finite, kInfinity);
    if (cost.empty()) return best;
    std::vector<double> candidates;
    for (const auto& row : cost) candidates.insert(candidates.end(), row.begin(), row.end());
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    auto feasible = [&](double threshold) {
        std::vector<std::vector<char>> allowed(cost.size(), std::vector<char>(cost.size()));
        for (std::size_t i = 0; i < cost.size(); ++i)
            for (std::size_t j = 0; j < cost.size(); ++j) allowed[i][j] = cost[i][j] <= threshold;
        return detail::has_perfect_matching(allowed);
    };
    std::size_t lo = 0;
    std::size_t hi = candidates.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (feasible(candidates[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    return std::max(best, candidates[lo]);
}

/// p-Wasserstein distance with l_inf ground metric and diagonal augmentation.
/// Points at infinity only match each other (sorted by birth); unequal
/// counts give +inf. p = +inf is the bottleneck distance.
inline double wasserstein(std::span<const PlanePoint> a, std::span<const PlanePoint> b, double p) {
    if (std::isnan(p) || p < 1.0) throw DomainError("wasserstein: p must be >= 1");
    if (std::isinf(p)) return bottleneck(a, b);
    const auto sa = detail::split(a);
    const auto sb = detail::split(b);
    if (sa.infinite_births.size() != sb.infinite_births.size()) return kInfinity;

    double total = 0.0;
    for (std::size_t i = 0; i < sa.infinite_births.size(); ++i)
        total += std::pow(std::abs(sa.infinite_births[i] - sb.infinite_births[i]), p);

    const auto cost = detail::augmented_costs(sa.finite, sb.finite, p);
    const auto assignment = detail::hungarian(cost);
    for (std::size_t i = 0; i < assignment.size(); ++i) total += cost[i][static_cast<std::size_t>(assignment[i])];
    return std::pow(total, 1.0 / p);
}

inline double wasserstein(const PersistenceDiagram& a, const PersistenceDiagram& b, double p) {
    const auto ea = a.expanded();
    const auto eb = b.expanded();
    return wasserstein(ea, eb, p);
}

inline double bottleneck(const PersistenceDiagram& a, const PersistenceDiagram& b) {
    const auto ea = a.expanded();
    const auto eb = b.expanded();
    return bottleneck(ea, eb);
}

// ---------------------------------------------------------------------------
// CSV

/// Shortest round-trip decimal; +inf prints as "inf".
inline std::string format_real(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

inline double parse_real(std::string_view text, std::size_t line) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text == "inf" || text == "+inf" || text == "Inf" || text == "infinity") return kInfinity;
    if (text == "-inf") return -kInfinity;
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw ParseError("not a number: '" + std::string(text) + "'", line);
    return value;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

inline void write_diagram_csv(std::ostream& os, std::span<const PersistenceDiagram> diagrams) {
    os << "q,birth,death,multiplicity\n";
    for (const auto& d : diagrams)
        for (const auto& p : d.points)
            os << d.q << ',' << format_real(p.birth) << ',' << format_real(p.death) << ',' << p.multiplicity << '\n';
}

inline void write_diagram_csv(std::ostream& os, const PersistenceDiagram& d) {
    write_diagram_csv(os, std::span<const PersistenceDiagram>(&d, 1));
}

/// Diagrams grouped by q in ascending order.
inline std::vector<PersistenceDiagram> read_diagram_csv(std::istream& is) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(is, line)) throw ParseError("missing header", 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "q,birth,death,multiplicity") throw ParseError("unexpected header '" + line + "'", line_no);

    std::map<int, PersistenceDiagram> by_q;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != 4) throw ParseError("expected 4 fields", line_no);
        const double q = parse_real(fields[0], line_no);
        const double mult = parse_real(fields[3], line_no);
        if (q < 0 || q != std::floor(q)) throw ParseError("q must be a non-negative integer", line_no);
        if (mult < 1 || mult != std::floor(mult)) throw ParseError("multiplicity must be a positive integer", line_no);
        DiagramPoint p{parse_real(fields[1], line_no), parse_real(fields[2], line_no), static_cast<int>(mult)};
        if (!(p.birth < p.death)) throw ParseError("birth must precede death", line_no);
        auto& d = by_q[static_cast<int>(q)];
        d.q = static_cast<int>(q);
        d.points.push_back(p);
    }
    std::vector<PersistenceDiagram> out;
    for (auto& [q, d] : by_q) {
        std::sort(d.points.begin(), d.points.end(), [](const DiagramPoint& a, const DiagramPoint& b) {
            return std::tie(a.birth, a.death) < std::tie(b.birth, b.death);
        });
        out.push_back(std::move(d));
    }
    return out;
}

} // namespace perslap
