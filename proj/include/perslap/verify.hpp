#pragma once

#include "perslap/fixtures.hpp"
#include "perslap/imaging.hpp"
#include "perslap/oracles.hpp"
#include "perslap/persistence.hpp"
#include "perslap/plaplacian.hpp"
#include "perslap/signatures.hpp"
#include "perslap/stability.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace perslap::verify {

struct CriterionResult {
    std::string id;
    std::string title;
    bool passed = false;
    std::string detail;
    /// Extra report lines (sweeps, localisation of mismatches).
    std::vector<std::string> notes;
};

struct Options {
    std::uint64_t seed = 0;
    /// Replace G2 by a copy with one edge removed (fault injection).
    bool corrupt = false;
    int random_instances = 200;
    SuiteSizes suite;
};

struct Summary {
    std::vector<CriterionResult> criteria;
    std::vector<BoundReport> stability;

    bool all_passed() const {
        for (const auto& c : criteria)
            if (!c.passed) return false;
        return true;
    }
};

namespace detail {

inline std::string fmt(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

inline Eigen::VectorXd graph_spectrum(const SimplicialComplex& g) {
    return sym_eigen(combinatorial_laplacian(g, 0)).eigenvalues;
}

inline std::vector<int> degree_sequence(const SimplicialComplex& g) {
    std::map<Vertex, int> deg;
    for (const auto& v : g.simplices(0)) deg[v.front()] = 0;
    for (const auto& e : g.simplices(1)) {
        ++deg[e[0]];
        ++deg[e[1]];
    }
    std::vector<int> out;
    for (const auto& [v, d] : deg) out.push_back(d);
    std::sort(out.begin(), out.end());
    return out;
}

inline double max_abs_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size()) return kInfinity;
    return a.size() ? (a - b).cwiseAbs().maxCoeff() : 0.0;
}

inline SimplicialComplex g2_fixture(bool corrupt) {
    if (!corrupt) return fixtures::g2();
    return fixtures::graph(6, {{0, 1}, {1, 2}, {3, 4}, {4, 5}, {0, 3}, {1, 4}});
}

} // namespace detail

inline CriterionResult criterion_spectra(bool corrupt) {
    CriterionResult r{"1", "Laplacian spectra of G1 and G2"};
    const double s17 = std::sqrt(17.0);
    Eigen::VectorXd e2(6), e1(6);
    e2 << 0, 1, 2, 3, 3, 5;
    e1 << 0, (5 - s17) / 2, 3, 3, 3, (5 + s17) / 2;
    const double d2 = detail::max_abs_diff(detail::graph_spectrum(detail::g2_fixture(corrupt)), e2);
    const double d1 = detail::max_abs_diff(detail::graph_spectrum(fixtures::g1()), e1);
    r.passed = d1 <= 1e-9 && d2 <= 1e-9;
    r.detail = "max error G2 " + detail::fmt(d2) + ", G1 " + detail::fmt(d1) + " (tol 1e-9)";
    return r;
}

inline CriterionResult criterion_codegree(bool corrupt) {
    CriterionResult r{"2", "Degree sequences and shared lambda_2 of G and H"};
    const std::vector<int> small{2, 2, 2, 2, 3, 3}, large{3, 4, 4, 4, 4, 4, 5};
    const bool seq = detail::degree_sequence(fixtures::g1()) == small &&
                     detail::degree_sequence(detail::g2_fixture(corrupt)) == small &&
                     detail::degree_sequence(fixtures::g()) == large && detail::degree_sequence(fixtures::h()) == large;
    const double target = 4.0 - std::sqrt(2.0);
    const double lg = s_gap(combinatorial_laplacian(fixtures::g(), 0));
    const double lh = s_gap(combinatorial_laplacian(fixtures::h(), 0));
    const double err = std::max(std::abs(lg - target), std::abs(lh - target));
    r.passed = seq && err <= 1e-9;
    r.detail = std::string("degree sequences ") + (seq ? "match" : "MISMATCH") + "; lambda_2 error " + detail::fmt(err);
    return r;
}

/// Shared imaging configuration for G and H feature vectors.
inline ImagingConfig shared_config(const std::vector<std::vector<PlanePoint>>& families) {
    return auto_config(families);
}

inline CriterionResult criterion_pd() {
    CriterionResult r{"3", "Degree-filtration diagrams of G and H, equal persistence images"};
    const auto fg = degree_filtration(fixtures::g());
    const auto fh = degree_filtration(fixtures::h());
    const PersistenceDiagram b0{0, {{3, kInfinity, 1}}};
    const PersistenceDiagram b1{1, {{4, kInfinity, 4}, {5, kInfinity, 4}}};
    const auto g0 = persistence_diagram(fg, 0), g1 = persistence_diagram(fg, 1);
    const auto h0 = persistence_diagram(fh, 0), h1 = persistence_diagram(fh, 1);
    const bool diagrams = g0 == b0 && g1 == b1 && h0 == b0 && h1 == b1;

    const auto cfg = shared_config({g0.expanded(), g1.expanded(), h0.expanded(), h1.expanded()});
    const std::vector<PixelImage> ig{persistence_image(g0, cfg), persistence_image(g1, cfg)};
    const std::vector<PixelImage> ih{persistence_image(h0, cfg), persistence_image(h1, cfg)};
    const bool images = concatenate(ig) == concatenate(ih);
    r.passed = diagrams && images;
    r.detail = std::string("diagrams ") + (diagrams ? "match" : "DIFFER") + ", PI vectors " +
               (images ? "identical" : "DIFFER");
    return r;
}

/// 4a: the reference s_gap values located on the pooled grid; 4b: PLI vectors differ.
inline std::vector<CriterionResult> criterion_separation() {
    const auto fg = degree_filtration(fixtures::g());
    const auto fh = degree_filtration(fixtures::h());
    const auto spec = SignatureSpec::gap();
    const auto dg = all_diagrams(fg), dh = all_diagrams(fh);
    std::vector<PLDiagram> pg, ph;
    for (int q = 0; q <= 1; ++q) {
        pg.push_back(build_pld(fg, q, spec, GridMode::pooled, dg));
        ph.push_back(build_pld(fh, q, spec, GridMode::pooled, dh));
    }
    const double vg = (9.0 - std::sqrt(5.0)) / 2.0;
    const double vh = (12.0 - std::sqrt(6.0)) / 3.0;
    auto hits = [](const std::vector<PLDiagram>& plds, double target, std::string& where) {
        int n = 0;
        for (const auto& pld : plds)
            for (const auto& c : pld.cells)
                if (std::abs(c.value - target) <= 1e-9) {
                    ++n;
                    where += " q=" + std::to_string(pld.q) + "(" + format_real(c.birth) + "," + format_real(c.death) + ")";
                }
        return n;
    };
    std::string wg, wh;
    const int ng = hits(pg, vg, wg), nh = hits(ph, vh, wh);

    CriterionResult a{"4a", "Reference s_gap values (9-sqrt5)/2 and (12-sqrt6)/3 on the pooled grid"};
    a.passed = ng == 1 && nh == 1;
    a.detail = "cells matching (9-sqrt5)/2 in G: " + std::to_string(ng) + wg + "; (12-sqrt6)/3 in H: " +
               std::to_string(nh) + wh;
    auto cell_dump = [](const char* name, const PLDiagram& pld) {
        std::string s = std::string(name) + " q=0 s_gap cells:";
        for (const auto& c : pld.cells)
            s += " (" + format_real(c.birth) + "," + format_real(c.death) + ")=" + detail::fmt(c.value);
        return s;
    };
    a.notes.push_back(cell_dump("G", pg[0]));
    a.notes.push_back(cell_dump("H", ph[0]));
    // Where the reference values do come from: Kron reduction of the full
    // Laplacian onto the vertices of degree >= 4.
    auto superlevel_gap = [](const SimplicialComplex& graph) {
        const auto deg = degree_filtration(graph);
        std::vector<Index> keep;
        for (std::size_t i = 0; i < graph.count(0); ++i)
            if (deg.value(0, i) >= 4) keep.push_back(static_cast<Index>(i));
        return s_gap(schur_complement(combinatorial_laplacian(graph, 0), keep));
    };
    const double sg = superlevel_gap(fixtures::g()), sh = superlevel_gap(fixtures::h());
    a.notes.push_back("lambda_2 of L/[deg<4] (superlevel pair deg>=4 in full graph): G " + detail::fmt(sg) +
                      " (err " + detail::fmt(std::abs(sg - vg)) + "), H " + detail::fmt(sh) + " (err " +
                      detail::fmt(std::abs(sh - vh)) + ")");

    CriterionResult b{"4b", "PLI(s_gap) vectors of G and H differ"};
    std::vector<std::vector<PlanePoint>> fams;
    for (const auto& p : pg) fams.push_back(p.points());
    for (const auto& p : ph) fams.push_back(p.points());
    const auto cfg = auto_config(fams);
    std::vector<PixelImage> ig, ih;
    for (const auto& p : pg) ig.push_back(pl_image(p, cfg));
    for (const auto& p : ph) ih.push_back(pl_image(p, cfg));
    const double gap = norm_linf(difference(concatenate(ig), concatenate(ih)));
    b.passed = gap > 1e-6;
    b.detail = "inf-norm difference " + detail::fmt(gap) + " (need > 1e-6)";
    return {a, b};
}

inline CriterionResult criterion_cospectral() {
    CriterionResult r{"5", "Shrikhande vs rook: counts, spectra, projector identity"};
    const auto gs = fixtures::shrikhande();
    const auto gr = fixtures::rook();
    const std::vector<int> six(16, 6);
    const bool counts = gs.count(0) == 16 && gs.count(1) == 48 && gr.count(0) == 16 && gr.count(1) == 48 &&
                        detail::degree_sequence(gs) == six && detail::degree_sequence(gr) == six;

    const auto ls = combinatorial_laplacian(gs, 0);
    const auto lr = combinatorial_laplacian(gr, 0);
    const auto es = sym_eigen(ls), er = sym_eigen(lr);
    Eigen::VectorXd expected(16);
    expected << 0, 4, 4, 4, 4, 4, 4, 8, 8, 8, 8, 8, 8, 8, 8, 8;
    const double spec_err = detail::max_abs_diff(es.eigenvalues, er.eigenvalues);
    const double oracle_err = std::max(detail::max_abs_diff(oracle::spectrum(ls.dense()), es.eigenvalues),
                                       detail::max_abs_diff(expected, es.eigenvalues));

    const Eigen::VectorXd e1 = Eigen::VectorXd::Unit(16, 0);
    double proj_err = 0.0;
    for (const auto* eig : {&es, &er})
        for (const auto& p : eigenspace_projections(*eig, e1))
            proj_err = std::max(proj_err, std::abs(p.projection.squaredNorm() - static_cast<double>(p.multiplicity) / 16.0));

    r.passed = counts && spec_err <= 1e-8 && oracle_err <= 1e-8 && proj_err <= 1e-8;
    r.detail = std::string("16/48/6-regular ") + (counts ? "ok" : "MISMATCH") + "; spectra differ by " +
               detail::fmt(spec_err) + ", oracle error " + detail::fmt(oracle_err) + "; projector identity error " +
               detail::fmt(proj_err);
    for (auto mode : {GeoMode::distinct_eigenspaces, GeoMode::multiplicity_weighted}) {
        for (double p : {1.0, 2.0, 3.0}) {
            const double a = s_geo(es, e1, p, mode), b = s_geo(er, e1, p, mode);
            r.notes.push_back(std::string("s_geo sweep mode=") +
                              (mode == GeoMode::distinct_eigenspaces ? "distinct" : "weighted") +
                              " p=" + format_real(p) + ": shrikhande " + detail::fmt(a) + ", rook " + detail::fmt(b) +
                              (std::abs(a - b) > 1e-8 ? " (separates)" : " (equal)"));
        }
    }
    return r;
}

/// Random instances for criteria 6 and 7: half filtered graphs on at most 8
/// vertices, half Vietoris-Rips on at most 6 planar points.
inline std::vector<Filtration> random_instances(std::uint64_t seed, int count) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<Filtration> out;
    for (int i = 0; i < count; ++i) {
        if (i % 2 == 0) {
            out.push_back(random_graph_filtration(rng, 8));
        } else {
            std::uniform_int_distribution<int> n(2, 6);
            std::uniform_real_distribution<double> coord(0.0, 1.0);
            std::vector<std::vector<double>> pts(static_cast<std::size_t>(n(rng)));
            for (auto& p : pts) p = {coord(rng), coord(rng)};
            out.push_back(vietoris_rips(pts, 2));
        }
    }
    return out;
}

struct EquivalenceStats {
    std::size_t checks = 0;
    std::size_t betti_mismatches = 0;
    double max_route_diff = 0.0;
    std::string first_failure;
};

inline EquivalenceStats equivalence_sweep(const std::vector<Filtration>& instances) {
    EquivalenceStats st;
    for (std::size_t n = 0; n < instances.size(); ++n) {
        const auto& f = instances[n];
        const auto& levels = f.levels();
        std::vector<SimplicialComplex> ks;
        for (double t : levels) ks.push_back(f.complex_at(t));
        ks.push_back(f.final_complex());
        for (int q = 0; q <= f.final_complex().dimension(); ++q) {
            for (std::size_t b = 0; b < levels.size(); ++b) {
                for (std::size_t d = b; d <= levels.size(); ++d) {
                    const double dv = d == levels.size() ? kInfinity : levels[d];
                    const auto up = up_persistent_laplacian(ks[b], ks[d], q);
                    const auto schur = up_persistent_laplacian_schur(ks[b], ks[d], q);
                    const auto beta = nullity(up + down_laplacian(ks[b], q));
                    const auto expect = oracle::persistent_betti(f, q, levels[b], dv);
                    ++st.checks;
                    const double diff = up.empty() ? 0.0 : (up.dense() - schur.dense()).cwiseAbs().maxCoeff();
                    st.max_route_diff = std::max(st.max_route_diff, diff);
                    if (beta != expect) {
                        ++st.betti_mismatches;
                        if (st.first_failure.empty())
                            st.first_failure = "instance " + std::to_string(n) + " q=" + std::to_string(q) + " (" +
                                               format_real(levels[b]) + "," + format_real(dv) + "): nullity " +
                                               std::to_string(beta) + " vs oracle " + std::to_string(expect);
                    }
                }
            }
        }
    }
    return st;
}

inline std::vector<CriterionResult> criteria_equivalence(std::uint64_t seed, int count) {
    const auto instances = random_instances(seed, count);
    const auto st = equivalence_sweep(instances);
    CriterionResult six{"6", "Persistent Betti numbers equal the rank oracle"};
    six.passed = st.betti_mismatches == 0 && st.checks > 0;
    six.detail = std::to_string(instances.size()) + " filtrations, " + std::to_string(st.checks) + " (q,b,d) triples, " +
                 std::to_string(st.betti_mismatches) + " mismatches";
    if (!st.first_failure.empty()) six.notes.push_back(st.first_failure);
    CriterionResult seven{"7", "Column-reduction and Schur routes agree"};
    seven.passed = st.max_route_diff <= 1e-8 && st.checks > 0;
    seven.detail = "max entrywise difference " + detail::fmt(st.max_route_diff) + " over " + std::to_string(st.checks) +
                   " pairs (tol 1e-8)";
    return {six, seven};
}

inline CriterionResult criterion_matcher(std::uint64_t seed, int count) {
    CriterionResult r{"8", "Wasserstein and bottleneck equal brute-force enumeration"};
    std::mt19937_64 rng(seed ^ 0x5851f42d4c957f2dULL);
    double worst = 0.0;
    int infinite_pairs = 0;
    auto compare = [&](double a, double b) {
        if (std::isinf(a) || std::isinf(b)) {
            if (a != b) worst = kInfinity;
            return;
        }
        worst = std::max(worst, std::abs(a - b));
    };
    for (int i = 0; i < count; ++i) {
        const auto da = random_diagram(rng, 5);
        const auto db = i % 3 == 0 ? perturb_diagram(da, 0.3, rng()) : random_diagram(rng, 5);
        const auto a = da.expanded();
        const auto b = db.expanded();
        if (std::isinf(wasserstein(a, b, 1.0))) ++infinite_pairs;
        compare(wasserstein(a, b, 1.0), oracle::brute_force_wasserstein(a, b, 1.0));
        compare(wasserstein(a, b, 2.0), oracle::brute_force_wasserstein(a, b, 2.0));
        compare(bottleneck(a, b), oracle::brute_force_bottleneck(a, b));
    }
    r.passed = worst <= 1e-12;
    r.detail = std::to_string(count) + " pairs (" + std::to_string(infinite_pairs) +
               " with unmatched infinite points), max deviation " + detail::fmt(worst) + " (tol 1e-12)";
    return r;
}

inline CriterionResult criterion_stability(const Options& opt, std::vector<BoundReport>& reports) {
    CriterionResult r{"9", "Stability inequalities on the seeded suite"};
    const auto fixture = degree_filtration(fixtures::g());
    reports = run_stability_suite(opt.seed, opt.suite, &fixture);
    std::size_t violations = 0;
    std::vector<double> slacks;
    for (const auto& b : reports) {
        if (!b.holds) {
            ++violations;
            if (r.notes.size() < 5)
                r.notes.push_back("violation " + b.case_id + " " + b.check + ": lhs " + detail::fmt(b.lhs) + " > rhs " +
                                  detail::fmt(b.rhs));
        }
        if (b.rhs > 0.0) slacks.push_back(b.slack);
    }
    std::sort(slacks.begin(), slacks.end());
    const double median = slacks.empty() ? 0.0 : slacks[slacks.size() / 2];
    r.passed = violations == 0 && opt.suite.total() >= 1000;
    r.detail = std::to_string(opt.suite.total()) + " cases, " + std::to_string(reports.size()) + " inequalities, " +
               std::to_string(violations) + " violations; median lhs/rhs " + detail::fmt(median);
    return r;
}

inline CriterionResult criterion_imaging(std::uint64_t seed) {
    CriterionResult r{"10", "Image mass, linearity and translation equivariance"};
    std::mt19937_64 rng(seed ^ 0xda942042e4dd58b5ULL);
    std::uniform_real_distribution<double> coord(0.0, 3.0), life(0.2, 2.0), amp(-2.0, 2.0), shift(-5.0, 5.0);
    double mass_err = 0.0, lin_err = 0.0, shift_err = 0.0, unit_err = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const double b = coord(rng), d = b + life(rng), s = amp(rng);
        PLDiagram one;
        one.cells = {{b, d, s}};
        ImagingConfig cfg;
        cfg.sigma = 0.1 + 0.05 * trial;
        cfg.weight = WeightFunction::linear(2.0);
        cfg.grid = {b - 6 * cfg.sigma, b + 6 * cfg.sigma, (d - b) - 6 * cfg.sigma, (d - b) + 6 * cfg.sigma, 30, 30};
        const double expected = cfg.weight(b, d - b) * s;
        mass_err = std::max(mass_err, std::abs(pl_image(one, cfg).sum() - expected));

        PLDiagram a = random_pld(rng, 4), c = random_pld(rng, 4), both = a;
        both.cells.insert(both.cells.end(), c.cells.begin(), c.cells.end());
        const std::vector<PlanePoint> fams[2] = {a.points(), c.points()};
        const auto shared = auto_config(fams, 16, 12);
        const auto ia = pl_image(a, shared), ic = pl_image(c, shared), iboth = pl_image(both, shared);
        for (std::size_t k = 0; k < ia.values.size(); ++k)
            lin_err = std::max(lin_err, std::abs(iboth.values[k] - ia.values[k] - ic.values[k]));

        const double dx = shift(rng);
        PLDiagram moved = a;
        for (auto& cell : moved.cells) {
            cell.birth += dx;
            cell.death += dx;
        }
        auto moved_cfg = shared;
        moved_cfg.grid.x_min += dx;
        moved_cfg.grid.x_max += dx;
        const auto im = pl_image(moved, moved_cfg);
        for (std::size_t k = 0; k < ia.values.size(); ++k)
            shift_err = std::max(shift_err, std::abs(im.values[k] - ia.values[k]));

        PersistenceDiagram pd;
        PLDiagram unit;
        for (const auto& cell : a.cells) {
            pd.points.push_back({cell.birth, cell.death, 1});
            unit.cells.push_back({cell.birth, cell.death, 1.0});
        }
        const auto pi = persistence_image(pd, shared), pli = pl_image(unit, shared);
        unit_err = std::max(unit_err, norm_linf(difference(pi.values, pli.values)));
    }
    r.passed = mass_err <= 1e-4 && lin_err <= 1e-12 && shift_err <= 1e-12 && unit_err == 0.0;
    r.detail = "mass error " + detail::fmt(mass_err) + " (tol 1e-4), linearity " + detail::fmt(lin_err) +
               ", translation " + detail::fmt(shift_err) + " (tol 1e-12), PI vs unit PLI " + detail::fmt(unit_err);
    return r;
}

inline Summary run_acceptance(const Options& opt = {}) {
    Summary s;
    s.criteria.push_back(criterion_spectra(opt.corrupt));
    s.criteria.push_back(criterion_codegree(opt.corrupt));
    s.criteria.push_back(criterion_pd());
    for (auto& c : criterion_separation()) s.criteria.push_back(std::move(c));
    s.criteria.push_back(criterion_cospectral());
    for (auto& c : criteria_equivalence(opt.seed, opt.random_instances)) s.criteria.push_back(std::move(c));
    s.criteria.push_back(criterion_matcher(opt.seed, opt.random_instances));
    s.criteria.push_back(criterion_stability(opt, s.stability));
    s.criteria.push_back(criterion_imaging(opt.seed));
    return s;
}

} // namespace perslap::verify
