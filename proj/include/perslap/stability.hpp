#pragma once

#include "perslap/filtration.hpp"
#include "perslap/imaging.hpp"
#include "perslap/persistence.hpp"
#include "perslap/signatures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace perslap {

struct BoundReport {
    std::string case_id;
    std::string check;
    double lhs = 0.0;
    double rhs = 0.0;
    std::map<std::string, double> constants;
    bool holds = true;
    /// lhs / rhs; 0 when both sides vanish.
    double slack = 0.0;
};

inline constexpr double kBoundSlack = 1e-9;

namespace detail {

inline BoundReport make_report(std::string check, double lhs, double rhs, std::map<std::string, double> constants) {
    BoundReport r;
    r.check = std::move(check);
    r.lhs = lhs;
    r.rhs = rhs;
    r.constants = std::move(constants);
    r.holds = lhs <= rhs * (1.0 + kBoundSlack);
    r.slack = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? kInfinity : 0.0);
    return r;
}

inline PersistenceDiagram collapse(int q, std::vector<PlanePoint> pts) {
    std::sort(pts.begin(), pts.end());
    PersistenceDiagram d;
    d.q = q;
    for (const auto& p : pts) {
        if (!d.points.empty() && d.points.back().birth == p.x && d.points.back().death == p.y)
            ++d.points.back().multiplicity;
        else
            d.points.push_back({p.x, p.y, 1});
    }
    return d;
}

} // namespace detail

/// Moves every point (each copy of a repeated point independently) by an
/// offset of l_inf norm at most eps. A point whose death would not exceed
/// its birth is shifted rigidly instead; infinite deaths stay infinite.
inline PersistenceDiagram perturb_diagram(const PersistenceDiagram& d, double eps, std::uint64_t seed) {
    if (!(eps >= 0.0)) throw DomainError("perturbation magnitude must be non-negative");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<PlanePoint> out;
    for (const auto& p : d.expanded()) {
        const double db = eps * unit(rng);
        const double dd = eps * unit(rng);
        PlanePoint moved{p.x + db, std::isinf(p.y) ? p.y : p.y + dd};
        if (!(moved.y > moved.x)) moved = {p.x + db, p.y + db};
        out.push_back(moved);
    }
    return detail::collapse(d.q, std::move(out));
}

/// Same perturbation on PLD cell coordinates; values ride along.
inline PLDiagram perturb_pld(const PLDiagram& pld, double eps, std::uint64_t seed) {
    if (!(eps >= 0.0)) throw DomainError("perturbation magnitude must be non-negative");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    PLDiagram out = pld;
    for (auto& c : out.cells) {
        const double db = eps * unit(rng);
        const double dd = eps * unit(rng);
        PLDCell moved{c.birth + db, std::isinf(c.death) ? c.death : c.death + dd, c.value};
        if (!(moved.death > moved.birth)) moved = {c.birth + db, c.death + db, c.value};
        c = moved;
    }
    std::sort(out.cells.begin(), out.cells.end(), [](const PLDCell& a, const PLDCell& b) {
        return std::tie(a.birth, a.death, a.value) < std::tie(b.birth, b.death, b.value);
    });
    return out;
}

/// C_B: every (a, b) with a < b drawn from the births and deaths of B
/// (infinity included when present).
inline std::vector<PlanePoint> induced_grid(const PersistenceDiagram& d) {
    std::set<double> levels;
    for (const auto& p : d.points) {
        levels.insert(p.birth);
        levels.insert(p.death);
    }
    std::vector<PlanePoint> out;
    for (double a : levels)
        for (double b : levels)
            if (a < b) out.push_back({a, b});
    return out;
}

/// W_p(C_{B1}, C_{B2}) <= 4 max(|B1|, |B2|) W_p(B1, B2).
inline BoundReport check_pdpld(const PersistenceDiagram& b1, const PersistenceDiagram& b2, double p) {
    const auto c1 = induced_grid(b1);
    const auto c2 = induced_grid(b2);
    const double n = static_cast<double>(std::max(b1.size(), b2.size()));
    const double w_b = wasserstein(b1, b2, p);
    const double w_c = wasserstein(c1, c2, p);
    return detail::make_report("pdpld", w_c, 4.0 * n * w_b, {{"n", n}, {"p", p}, {"W_p_B", w_b}});
}

namespace detail {

struct SurfaceConstants {
    double s_sup = 0.0;
    double f_sup = 0.0;
    double f_grad = 0.0;
    double phi_sup = 0.0;
    double phi_grad = 0.0;
    double sigma = 0.0;
    double w1 = 0.0;

    std::map<std::string, double> as_map() const {
        return {{"S_sup", s_sup},     {"f_sup", f_sup},       {"f_grad", f_grad}, {"phi_sup", phi_sup},
                {"phi_grad", phi_grad}, {"sigma", sigma}, {"W1", w1}};
    }

    /// 2 sqrt(2) ||S|| (||f|| |grad phi| + ||phi|| |grad f|)
    double general() const { return 2.0 * std::numbers::sqrt2 * s_sup * (f_sup * phi_grad + phi_sup * f_grad); }

    /// ||S|| (sqrt(5) |grad f| + sqrt(10 / pi) ||f|| / sigma)
    double gaussian() const {
        return s_sup * (std::sqrt(5.0) * f_grad + std::sqrt(10.0 / std::numbers::pi) * f_sup / sigma);
    }
};

inline SurfaceConstants surface_constants(const PLDiagram& a, const PLDiagram& b, const ImagingConfig& cfg) {
    const GaussianKernel phi(cfg.sigma);
    SurfaceConstants k;
    k.s_sup = std::max(a.max_abs_value(), b.max_abs_value());
    k.f_sup = cfg.weight.sup_norm();
    k.f_grad = cfg.weight.gradient_bound();
    k.phi_sup = phi.sup_norm();
    k.phi_grad = phi.gradient_bound();
    k.sigma = cfg.sigma;
    k.w1 = pld_wasserstein(a, b, 1.0);
    return k;
}

/// Signed difference rho_a - rho_b as one weighted Gaussian mixture.
struct Mixture {
    std::vector<double> x, y, w;
    double sigma = 1.0;

    double value(double zx, double zy) const {
        double acc = 0.0;
        const double c = 1.0 / (2.0 * std::numbers::pi * sigma * sigma);
        for (std::size_t k = 0; k < w.size(); ++k) {
            const double dx = zx - x[k], dy = zy - y[k];
            acc += w[k] * c * std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
        }
        return acc;
    }

    /// Gradient and Hessian at z.
    void derivatives(double zx, double zy, double g[2], double h[3]) const {
        g[0] = g[1] = h[0] = h[1] = h[2] = 0.0;
        const double s2 = sigma * sigma;
        const double c = 1.0 / (2.0 * std::numbers::pi * s2);
        for (std::size_t k = 0; k < w.size(); ++k) {
            const double dx = zx - x[k], dy = zy - y[k];
            const double v = w[k] * c * std::exp(-(dx * dx + dy * dy) / (2.0 * s2));
            g[0] -= v * dx / s2;
            g[1] -= v * dy / s2;
            h[0] += v * (dx * dx / (s2 * s2) - 1.0 / s2);
            h[1] += v * dx * dy / (s2 * s2);
            h[2] += v * (dy * dy / (s2 * s2) - 1.0 / s2);
        }
    }
};

inline Mixture difference_mixture(const PLDiagram& a, const PLDiagram& b, const ImagingConfig& cfg) {
    Mixture m;
    m.sigma = cfg.sigma;
    auto add = [&](const PLDiagram& pld, double sign) {
        for (const auto& p : image_points(pld, cfg)) {
            m.x.push_back(p.x);
            m.y.push_back(p.y);
            m.w.push_back(sign * cfg.weight(p.x, p.y) * p.amplitude);
        }
    };
    add(a, 1.0);
    add(b, -1.0);
    // Merge coincident centres so identical inputs cancel exactly.
    std::map<std::pair<double, double>, double> merged;
    for (std::size_t k = 0; k < m.w.size(); ++k) merged[{m.x[k], m.y[k]}] += m.w[k];
    Mixture out;
    out.sigma = m.sigma;
    for (const auto& [xy, w] : merged) {
        if (w == 0.0) continue;
        out.x.push_back(xy.first);
        out.y.push_back(xy.second);
        out.w.push_back(w);
    }
    return out;
}

inline void mixture_box(const Mixture& m, double pad, double& x0, double& x1, double& y0, double& y1) {
    x0 = y0 = kInfinity;
    x1 = y1 = -kInfinity;
    for (std::size_t k = 0; k < m.w.size(); ++k) {
        x0 = std::min(x0, m.x[k]);
        x1 = std::max(x1, m.x[k]);
        y0 = std::min(y0, m.y[k]);
        y1 = std::max(y1, m.y[k]);
    }
    x0 -= pad;
    x1 += pad;
    y0 -= pad;
    y1 += pad;
}

/// sup |m| from a 201 x 201 sample followed by Newton polishing of the best
/// sample.
inline double mixture_sup(const Mixture& m) {
    if (m.w.empty()) return 0.0;
    double x0, x1, y0, y1;
    mixture_box(m, 4.0 * m.sigma, x0, x1, y0, y1);
    constexpr int kSamples = 201;
    double best = 0.0, bx = x0, by = y0;
    for (int j = 0; j < kSamples; ++j) {
        const double zy = y0 + (y1 - y0) * j / (kSamples - 1);
        for (int i = 0; i < kSamples; ++i) {
            const double zx = x0 + (x1 - x0) * i / (kSamples - 1);
            const double v = std::abs(m.value(zx, zy));
            if (v > best) {
                best = v;
                bx = zx;
                by = zy;
            }
        }
    }
    for (int it = 0; it < 8; ++it) {
        double g[2], h[3];
        m.derivatives(bx, by, g, h);
        const double det = h[0] * h[2] - h[1] * h[1];
        if (det == 0.0) break;
        const double sx = (h[2] * g[0] - h[1] * g[1]) / det;
        const double sy = (h[0] * g[1] - h[1] * g[0]) / det;
        const double v = std::abs(m.value(bx - sx, by - sy));
        if (!(v > best)) break;
        best = v;
        bx -= sx;
        by -= sy;
    }
    return best;
}

/// Integral of |m| over R^2 by a composite midpoint rule on the +-7 sigma box.
inline double mixture_l1(const Mixture& m) {
    if (m.w.empty()) return 0.0;
    double x0, x1, y0, y1;
    mixture_box(m, 7.0 * m.sigma, x0, x1, y0, y1);
    const double h = m.sigma / 10.0;
    const auto nx = static_cast<int>(std::ceil((x1 - x0) / h));
    const auto ny = static_cast<int>(std::ceil((y1 - y0) / h));
    const double hx = (x1 - x0) / nx, hy = (y1 - y0) / ny;
    double acc = 0.0;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) acc += std::abs(m.value(x0 + (i + 0.5) * hx, y0 + (j + 0.5) * hy));
    return acc * hx * hy;
}

} // namespace detail

/// ||rho_1 - rho_2||_inf <= 2 sqrt(2) ||S|| (||f|| |grad phi| + ||phi|| |grad f|) W_1.
inline BoundReport check_surface_bound(const PLDiagram& a, const PLDiagram& b, const ImagingConfig& cfg) {
    const auto k = detail::surface_constants(a, b, cfg);
    const double lhs = detail::mixture_sup(detail::difference_mixture(a, b, cfg));
    return detail::make_report("pls_surface_sup", lhs, k.general() * k.w1, k.as_map());
}

/// Pixel-image bounds in the inf, 1 and 2 norms with pixel area A, image
/// area A' and pixel count n.
inline std::vector<BoundReport> check_image_bounds(const PLDiagram& a, const PLDiagram& b, const ImagingConfig& cfg) {
    const auto k = detail::surface_constants(a, b, cfg);
    const auto ia = pl_image(a, cfg);
    const auto ib = pl_image(b, cfg);
    const auto diff = difference(ia.values, ib.values);
    const double area = cfg.grid.pixel_area();
    const double n = static_cast<double>(cfg.grid.nx * cfg.grid.ny);
    const double total_area = area * n;
    auto constants = k.as_map();
    constants["A"] = area;
    constants["A_total"] = total_area;
    constants["n_pixels"] = n;
    const double base = k.general() * k.w1;
    return {detail::make_report("pls_image_inf", norm_linf(diff), area * base, constants),
            detail::make_report("pls_image_l1", norm_l1(diff), total_area * base, constants),
            detail::make_report("pls_image_l2", norm_l2(diff), std::sqrt(n) * area * base, constants)};
}

/// Gaussian-specific bounds: the L1 surface bound, then the image bound in
/// the 1, 2 and inf norms.
inline std::vector<BoundReport> check_gauss_bounds(const PLDiagram& a, const PLDiagram& b, const ImagingConfig& cfg) {
    const auto k = detail::surface_constants(a, b, cfg);
    const double rhs = k.gaussian() * k.w1;
    const double surface_l1 = detail::mixture_l1(detail::difference_mixture(a, b, cfg));
    const auto diff = difference(pl_image(a, cfg).values, pl_image(b, cfg).values);
    const auto c = k.as_map();
    return {detail::make_report("gauss_surface_l1", surface_l1, rhs, c),
            detail::make_report("gauss_image_l1", norm_l1(diff), rhs, c),
            detail::make_report("gauss_image_l2", norm_l2(diff), rhs, c),
            detail::make_report("gauss_image_inf", norm_linf(diff), rhs, c)};
}

namespace detail {

inline BoundReport plipd_report(const PersistenceDiagram& d1, const PersistenceDiagram& d2, const PLDiagram& c1,
                                const PLDiagram& c2, const ImagingConfig& cfg) {
    const auto diff = difference(pl_image(c1, cfg).values, pl_image(c2, cfg).values);
    const auto k = surface_constants(c1, c2, cfg);
    const double n = static_cast<double>(std::max(d1.size(), d2.size()));
    const double w1 = wasserstein(d1, d2, 1.0);
    auto constants = k.as_map();
    constants.erase("W1");
    constants["W1_PD"] = w1;
    constants["n_q"] = n;
    return make_report("plipd", norm_l1(diff), 4.0 * n * k.gaussian() * w1, constants);
}

} // namespace detail

/// End to end: ||I - I'||_1 <= 4 n_q ||S|| (sqrt(5)|grad f| + sqrt(10/pi)||f||/sigma) W_1(B_q, B'_q),
/// with per-degree PLD grids and one imaging configuration for both sides.
/// An unset cfg.cap is fixed from both PLDs before imaging.
inline BoundReport check_plipd(const Filtration& f1, const Filtration& f2, int q, const SignatureSpec& spec,
                               ImagingConfig cfg) {
    const auto d1 = persistence_diagram(f1, q, spec.rank_tol);
    const auto d2 = persistence_diagram(f2, q, spec.rank_tol);
    const auto c1 = build_pld(f1, q, spec, GridMode::per_q, std::span<const PersistenceDiagram>(&d1, 1));
    const auto c2 = build_pld(f2, q, spec, GridMode::per_q, std::span<const PersistenceDiagram>(&d2, 1));
    if (!cfg.cap) {
        std::vector<PlanePoint> all = c1.points();
        const auto more = c2.points();
        all.insert(all.end(), more.begin(), more.end());
        cfg.cap = detail::default_cap(all);
    }
    return detail::plipd_report(d1, d2, c1, c2, cfg);
}

/// Same check with an automatic configuration shared by both PLDs.
inline BoundReport check_plipd(const Filtration& f1, const Filtration& f2, int q, const SignatureSpec& spec,
                               Index nx = 20, Index ny = 20) {
    const auto d1 = persistence_diagram(f1, q, spec.rank_tol);
    const auto d2 = persistence_diagram(f2, q, spec.rank_tol);
    const auto c1 = build_pld(f1, q, spec, GridMode::per_q, std::span<const PersistenceDiagram>(&d1, 1));
    const auto c2 = build_pld(f2, q, spec, GridMode::per_q, std::span<const PersistenceDiagram>(&d2, 1));
    const std::vector<PlanePoint> fams[2] = {c1.points(), c2.points()};
    return detail::plipd_report(d1, d2, c1, c2, auto_config(fams, nx, ny));
}

// ---------------------------------------------------------------------------
// Seeded generators and the default suite

/// Diagram with up to max_points points on continuous coordinates in
/// [0, 10]; roughly one in four deaths is infinite.
inline PersistenceDiagram random_diagram(std::mt19937_64& rng, int max_points, int q = 0) {
    std::uniform_int_distribution<int> count(1, max_points);
    std::uniform_real_distribution<double> birth(0.0, 8.0), life(0.05, 4.0), coin(0.0, 1.0);
    std::vector<PlanePoint> pts;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
        const double b = birth(rng);
        pts.push_back({b, coin(rng) < 0.25 ? kInfinity : b + life(rng)});
    }
    return detail::collapse(q, std::move(pts));
}

/// PLD with up to max_cells finite cells and values in [-2, 2].
inline PLDiagram random_pld(std::mt19937_64& rng, int max_cells) {
    std::uniform_int_distribution<int> count(1, max_cells);
    std::uniform_real_distribution<double> birth(0.0, 5.0), life(0.05, 3.0), value(-2.0, 2.0);
    PLDiagram pld;
    pld.signature = "random";
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
        const double b = birth(rng);
        pld.cells.push_back({b, b + life(rng), value(rng)});
    }
    std::sort(pld.cells.begin(), pld.cells.end(), [](const PLDCell& a, const PLDCell& b) {
        return std::tie(a.birth, a.death) < std::tie(b.birth, b.death);
    });
    return pld;
}

/// Sublevel filtration of a random graph on 3..max_vertices vertices with
/// continuous vertex values; edges enter with their later endpoint.
inline Filtration random_graph_filtration(std::mt19937_64& rng, int max_vertices, double edge_prob = 0.45) {
    std::uniform_int_distribution<int> count(3, max_vertices);
    std::uniform_real_distribution<double> value(0.0, 5.0), coin(0.0, 1.0);
    const int n = count(rng);
    std::vector<Simplex> gens;
    for (int v = 0; v < n; ++v) gens.push_back({v});
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (coin(rng) < edge_prob) gens.push_back({u, v});
    std::vector<double> vertex_value(static_cast<std::size_t>(n));
    for (auto& x : vertex_value) x = value(rng);
    return sublevel_filtration(build_complex(gens), [&](const Simplex& s) {
        double m = -kInfinity;
        for (Vertex v : s) m = std::max(m, vertex_value[static_cast<std::size_t>(v)]);
        return m;
    });
}

/// Vertex values moved by at most eps; edge values follow.
inline Filtration perturb_vertex_values(const Filtration& f, double eps, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::map<Vertex, double> vv;
    const auto& k = f.final_complex();
    for (std::size_t i = 0; i < k.count(0); ++i) vv[k.simplices(0)[i].front()] = f.value(0, i) + eps * unit(rng);
    return sublevel_filtration(k, [&](const Simplex& s) {
        double m = -kInfinity;
        for (Vertex v : s) m = std::max(m, vv.at(v));
        return m;
    });
}

struct SuiteSizes {
    int pdpld = 300;
    int surface = 150;
    int image = 150;
    int gauss = 150;
    int plipd = 250;

    int total() const { return pdpld + surface + image + gauss + plipd; }
};

namespace detail {

inline ImagingConfig suite_config(const PLDiagram& a, const PLDiagram& b, std::mt19937_64& rng) {
    const std::vector<PlanePoint> fams[2] = {a.points(), b.points()};
    std::uniform_int_distribution<Index> side(4, 24);
    std::uniform_real_distribution<double> sigma_scale(0.5, 2.0);
    auto cfg = auto_config(fams, side(rng), side(rng));
    cfg.sigma *= sigma_scale(rng);
    return cfg;
}

inline std::string case_name(const char* family, int i, double eps) {
    return std::string(family) + "-" + std::to_string(i) + "-eps" + format_real(eps);
}

} // namespace detail

/// Seeded certification sweep. Each case records its own id; perturbation
/// sizes cycle through 0.01, 0.1 and 0.5. Case 0 of every family is the
/// identity (eps = 0).
inline std::vector<BoundReport> run_stability_suite(std::uint64_t seed, const SuiteSizes& sizes = {},
                                                    const Filtration* fixture = nullptr) {
    constexpr double kEps[] = {0.01, 0.1, 0.5};
    std::vector<BoundReport> out;
    std::mt19937_64 rng(seed);
    auto eps_for = [&](int i) { return i == 0 ? 0.0 : kEps[i % 3]; };

    for (int i = 0; i < sizes.pdpld; ++i) {
        const double eps = eps_for(i);
        const auto b1 = random_diagram(rng, 6);
        const auto b2 = perturb_diagram(b1, eps, rng());
        auto r = check_pdpld(b1, b2, i % 2 == 0 ? 1.0 : 2.0);
        r.case_id = detail::case_name("pdpld", i, eps);
        out.push_back(std::move(r));
    }
    for (int i = 0; i < sizes.surface; ++i) {
        const double eps = eps_for(i);
        const auto a = random_pld(rng, 6);
        const auto b = perturb_pld(a, eps, rng());
        auto r = check_surface_bound(a, b, detail::suite_config(a, b, rng));
        r.case_id = detail::case_name("surface", i, eps);
        out.push_back(std::move(r));
    }
    for (int i = 0; i < sizes.image; ++i) {
        const double eps = eps_for(i);
        const auto a = random_pld(rng, 6);
        const auto b = perturb_pld(a, eps, rng());
        for (auto& r : check_image_bounds(a, b, detail::suite_config(a, b, rng))) {
            r.case_id = detail::case_name("image", i, eps);
            out.push_back(std::move(r));
        }
    }
    for (int i = 0; i < sizes.gauss; ++i) {
        const double eps = eps_for(i);
        const auto a = random_pld(rng, 6);
        const auto b = perturb_pld(a, eps, rng());
        for (auto& r : check_gauss_bounds(a, b, detail::suite_config(a, b, rng))) {
            r.case_id = detail::case_name("gauss", i, eps);
            out.push_back(std::move(r));
        }
    }
    for (int i = 0; i < sizes.plipd; ++i) {
        const double eps = eps_for(i);
        Filtration f1, f2;
        std::string family = "plipd";
        if (fixture && i < 2) {
            // Fixture cases: identity, then one edge raised by 0.1.
            f1 = *fixture;
            auto values = f1.values();
            if (i == 1 && !values.at(1).empty()) values[1][0] += 0.1;
            f2 = Filtration(f1.final_complex(), values);
            family = "plipd-fixture";
        } else {
            f1 = random_graph_filtration(rng, 8);
            f2 = perturb_vertex_values(f1, eps, rng);
        }
        const int q = i % 2;
        std::uniform_int_distribution<Index> side(8, 20);
        auto r = check_plipd(f1, f2, q, SignatureSpec::gap(), side(rng), side(rng));
        r.case_id = detail::case_name(family.c_str(), i, fixture && i < 2 ? 0.1 * i : eps);
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace perslap
