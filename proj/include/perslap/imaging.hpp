#pragma once

#include "perslap/persistence.hpp"
#include "perslap/signatures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace perslap {

/// Weight on the birth-persistence plane. linear_ramp is clamp(y / y_max, 0, 1);
/// constant_one exists for tests.
struct WeightFunction {
    enum class Kind { linear_ramp, constant_one };
    Kind kind = Kind::linear_ramp;
    double y_max = 1.0;

    static WeightFunction linear(double y_max) {
        if (!(y_max > 0.0) || !std::isfinite(y_max)) throw DomainError("weight ramp needs a positive finite y_max");
        return {Kind::linear_ramp, y_max};
    }
    static WeightFunction constant() { return {Kind::constant_one, 1.0}; }

    double operator()(double /*x*/, double y) const {
        if (kind == Kind::constant_one) return 1.0;
        return std::clamp(y / y_max, 0.0, 1.0);
    }

    double sup_norm() const { return 1.0; }
    double gradient_bound() const { return kind == Kind::constant_one ? 0.0 : 1.0 / y_max; }
    std::string name() const { return kind == Kind::constant_one ? "constant_one" : "linear_ramp"; }
};

/// Normalized isotropic Gaussian with standard deviation sigma.
struct GaussianKernel {
    double sigma = 1.0;

    explicit GaussianKernel(double s = 1.0) : sigma(s) {
        if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("Gaussian sigma must be positive and finite");
    }

    double operator()(double ux, double uy, double x, double y) const {
        const double r2 = (x - ux) * (x - ux) + (y - uy) * (y - uy);
        return std::exp(-r2 / (2.0 * sigma * sigma)) / (2.0 * std::numbers::pi * sigma * sigma);
    }

    double sup_norm() const { return 1.0 / (2.0 * std::numbers::pi * sigma * sigma); }

    /// Largest gradient norm, attained at radius sigma.
    double gradient_bound() const {
        return std::exp(-0.5) / (2.0 * std::numbers::pi * sigma * sigma * sigma);
    }

    /// Mass over [x0, x1] x [y0, y1], from error-function differences.
    double box_mass(double ux, double uy, double x0, double x1, double y0, double y1) const {
        const double s = std::sqrt(2.0) * sigma;
        const double mx = std::erf((x1 - ux) / s) - std::erf((x0 - ux) / s);
        const double my = std::erf((y1 - uy) / s) - std::erf((y0 - uy) / s);
        return 0.25 * mx * my;
    }
};

struct Grid {
    double x_min = 0.0;
    double x_max = 1.0;
    double y_min = 0.0;
    double y_max = 1.0;
    Index nx = 20;
    Index ny = 20;

    void validate() const {
        if (nx < 1 || ny < 1) throw DomainError("grid needs at least one pixel per axis");
        if (!(x_max > x_min) || !(y_max > y_min) || !std::isfinite(x_max - x_min) || !std::isfinite(y_max - y_min))
            throw DomainError("grid bounds must be finite with max > min");
    }

    double dx() const { return (x_max - x_min) / static_cast<double>(nx); }
    double dy() const { return (y_max - y_min) / static_cast<double>(ny); }
    double pixel_area() const { return dx() * dy(); }
    double x_edge(Index i) const { return x_min + (x_max - x_min) * static_cast<double>(i) / static_cast<double>(nx); }
    double y_edge(Index j) const { return y_min + (y_max - y_min) * static_cast<double>(j) / static_cast<double>(ny); }
};

/// cap: infinite deaths get persistence cap. dirac_top_row: their mass f * S
/// lands in one pixel at height cap (clamped into the grid), unsmoothed.
enum class InfinityHandling { cap, dirac_top_row };

struct ImagingConfig {
    double sigma = 0.05;
    Grid grid;
    WeightFunction weight;
    InfinityHandling infinity = InfinityHandling::cap;
    /// Persistence used for infinite deaths; unset means 1.05 * max finite
    /// persistence of the input (1 if there is none).
    std::optional<double> cap;

    void validate() const {
        GaussianKernel{sigma};
        grid.validate();
        if (weight.kind == WeightFunction::Kind::linear_ramp && !(weight.y_max > 0.0))
            throw DomainError("weight ramp needs y_max > 0");
        if (cap && !(*cap > 0.0)) throw DomainError("infinity cap must be positive");
    }
};

/// Point in birth-persistence coordinates with amplitude (signature value).
struct ImagePoint {
    double x = 0.0;
    double y = 0.0;
    double amplitude = 1.0;
    bool dirac = false;

    friend auto operator<=>(const ImagePoint&, const ImagePoint&) = default;
};

struct PixelImage {
    Grid grid;
    /// Row-major, bottom row (smallest y) first.
    std::vector<double> values;
    int q = 0;
    std::string signature;
    double sigma = 0.0;
    std::string weight;

    Index nx() const { return grid.nx; }
    Index ny() const { return grid.ny; }
    double pixel_area() const { return grid.pixel_area(); }

    double& at(Index row, Index col) { return values[static_cast<std::size_t>(row * grid.nx + col)]; }
    double at(Index row, Index col) const { return values[static_cast<std::size_t>(row * grid.nx + col)]; }

    double sum() const {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
};

inline double norm_l1(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
}

inline double norm_l2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

inline double norm_linf(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
}

inline std::vector<double> difference(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DomainError("image vectors differ in length");
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

/// Concatenation of flattened images (multi-degree / multi-signature features).
inline std::vector<double> concatenate(std::span<const PixelImage> images) {
    std::vector<double> out;
    for (const auto& im : images) out.insert(out.end(), im.values.begin(), im.values.end());
    return out;
}

namespace detail {

inline double max_finite_persistence(std::span<const PlanePoint> pts) {
    double m = 0.0;
    for (const auto& p : pts)
        if (std::isfinite(p.y)) m = std::max(m, p.y - p.x);
    return m;
}

inline double default_cap(std::span<const PlanePoint> pts) {
    const double m = max_finite_persistence(pts);
    return m > 0.0 ? 1.05 * m : 1.0;
}

} // namespace detail

/// Transforms (b, d, S) triples to birth-persistence points, sorted.
inline std::vector<ImagePoint> image_points(std::span<const PlanePoint> coords, std::span<const double> amplitudes,
                                            const ImagingConfig& cfg) {
    const double cap = cfg.cap ? *cfg.cap : detail::default_cap(coords);
    std::vector<ImagePoint> out;
    out.reserve(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i) {
        const auto& c = coords[i];
        const double s = amplitudes.empty() ? 1.0 : amplitudes[i];
        if (std::isinf(c.y))
            out.push_back({c.x, cap, s, cfg.infinity == InfinityHandling::dirac_top_row});
        else
            out.push_back({c.x, c.y - c.x, s, false});
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<ImagePoint> image_points(const PLDiagram& pld, const ImagingConfig& cfg) {
    const auto coords = pld.points();
    std::vector<double> amps;
    for (const auto& c : pld.cells) amps.push_back(c.value);
    return image_points(coords, amps, cfg);
}

inline std::vector<ImagePoint> image_points(const PersistenceDiagram& d, const ImagingConfig& cfg) {
    const auto coords = d.expanded();
    return image_points(coords, {}, cfg);
}

/// rho(x, y) = sum over smoothed points of f(u) S(u) phi_u(x, y). Dirac
/// points carry no density and are left out.
inline double surface_value(std::span<const ImagePoint> pts, const ImagingConfig& cfg, double x, double y) {
    const GaussianKernel phi(cfg.sigma);
    double acc = 0.0;
    for (const auto& p : pts) {
        if (p.dirac) continue;
        acc += cfg.weight(p.x, p.y) * p.amplitude * phi(p.x, p.y, x, y);
    }
    return acc;
}

inline PixelImage rasterize(std::span<const ImagePoint> pts, const ImagingConfig& cfg) {
    cfg.validate();
    const GaussianKernel phi(cfg.sigma);
    const Grid& g = cfg.grid;
    PixelImage img;
    img.grid = g;
    img.sigma = cfg.sigma;
    img.weight = cfg.weight.name();
    img.values.assign(static_cast<std::size_t>(g.nx * g.ny), 0.0);

    std::vector<double> xe(static_cast<std::size_t>(g.nx + 1)), ye(static_cast<std::size_t>(g.ny + 1));
    for (Index i = 0; i <= g.nx; ++i) xe[i] = g.x_edge(i);
    for (Index j = 0; j <= g.ny; ++j) ye[j] = g.y_edge(j);

    const double s = std::sqrt(2.0) * cfg.sigma;
    std::vector<double> mx(static_cast<std::size_t>(g.nx)), my(static_cast<std::size_t>(g.ny));
    for (const auto& p : pts) {
        const double amp = cfg.weight(p.x, p.y) * p.amplitude;
        if (p.dirac) {
            const auto col = std::clamp<Index>(static_cast<Index>(std::floor((p.x - g.x_min) / g.dx())), 0, g.nx - 1);
            const auto row = std::clamp<Index>(static_cast<Index>(std::floor((p.y - g.y_min) / g.dy())), 0, g.ny - 1);
            img.at(row, col) += amp;
            continue;
        }
        for (Index i = 0; i < g.nx; ++i) mx[i] = 0.5 * (std::erf((xe[i + 1] - p.x) / s) - std::erf((xe[i] - p.x) / s));
        for (Index j = 0; j < g.ny; ++j) my[j] = 0.5 * (std::erf((ye[j + 1] - p.y) / s) - std::erf((ye[j] - p.y) / s));
        for (Index j = 0; j < g.ny; ++j)
            for (Index i = 0; i < g.nx; ++i) img.at(j, i) += amp * mx[i] * my[j];
    }
    return img;
}

inline PixelImage pl_image(const PLDiagram& pld, const ImagingConfig& cfg) {
    auto img = rasterize(image_points(pld, cfg), cfg);
    img.q = pld.q;
    img.signature = pld.signature;
    return img;
}

inline PixelImage persistence_image(const PersistenceDiagram& d, const ImagingConfig& cfg) {
    auto img = rasterize(image_points(d, cfg), cfg);
    img.q = d.q;
    img.signature = "unit";
    return img;
}

/// Evaluator for rho_{C}(x, y) of a PLD under cfg.
inline auto pl_surface(const PLDiagram& pld, const ImagingConfig& cfg) {
    return [pts = image_points(pld, cfg), cfg](double x, double y) { return surface_value(pts, cfg, x, y); };
}

/// Shared configuration for a family of point sets: cap = 1.05 * max finite
/// persistence, y from 0 to 1.1 * max persistence, sigma = 5% of that height,
/// x covering the births with a 3 sigma margin, ramp saturating at the top
/// persistence.
inline ImagingConfig auto_config(std::span<const std::vector<PlanePoint>> families, Index nx = 20, Index ny = 20,
                                 InfinityHandling infinity = InfinityHandling::cap) {
    std::vector<PlanePoint> all;
    for (const auto& f : families) all.insert(all.end(), f.begin(), f.end());
    ImagingConfig cfg;
    cfg.infinity = infinity;
    cfg.cap = detail::default_cap(all);
    double top = *cfg.cap;
    double bmin = kInfinity, bmax = -kInfinity;
    for (const auto& p : all) {
        bmin = std::min(bmin, p.x);
        bmax = std::max(bmax, p.x);
        if (std::isfinite(p.y)) top = std::max(top, p.y - p.x);
    }
    if (all.empty()) bmin = bmax = 0.0;
    const double y_top = 1.1 * top;
    cfg.sigma = 0.05 * y_top;
    cfg.grid = {bmin - 3.0 * cfg.sigma, bmax + 3.0 * cfg.sigma, 0.0, y_top, nx, ny};
    cfg.weight = WeightFunction::linear(top);
    return cfg;
}

/// ny lines of nx values, bottom row first.
inline void write_image_csv(std::ostream& os, const PixelImage& img) {
    for (Index j = 0; j < img.ny(); ++j) {
        for (Index i = 0; i < img.nx(); ++i) {
            if (i) os << ',';
            os << format_real(img.at(j, i));
        }
        os << '\n';
    }
}

/// Plain PGM, min-max normalized to 0..255, top row first as viewers expect.
inline void write_pgm(std::ostream& os, const PixelImage& img) {
    double lo = kInfinity, hi = -kInfinity;
    for (double v : img.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = hi - lo;
    os << "P2\n" << img.nx() << ' ' << img.ny() << "\n255\n";
    for (Index j = img.ny() - 1; j >= 0; --j) {
        for (Index i = 0; i < img.nx(); ++i) {
            const int level = span > 0.0 ? static_cast<int>(std::lround(255.0 * (img.at(j, i) - lo) / span)) : 0;
            os << (i ? " " : "") << level;
        }
        os << '\n';
    }
}

/// 64-bit FNV-1a, used to tag outputs with their source.
inline std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace perslap
