#include "perslap/fixtures.hpp"
#include "perslap/oracles.hpp"
#include "perslap/plaplacian.hpp"
#include "perslap/verify.hpp"

#include <gtest/gtest.h>

using namespace perslap;

namespace {

double max_diff(const SymmetricMatrix& a, const SymmetricMatrix& b) {
    if (a.size() != b.size()) return kInfinity;
    return a.empty() ? 0.0 : (a.dense() - b.dense()).cwiseAbs().maxCoeff();
}

/// Schur route on the symmetrized up-Laplacian of L, keeping the K rows.
SymmetricMatrix schur_route(const SimplicialComplex& k, const SimplicialComplex& l, int q) {
    std::vector<Index> keep;
    for (const auto& s : k.simplices(q)) keep.push_back(static_cast<Index>(*l.index_of(s)));
    return schur_complement(up_laplacian(l, q), keep);
}

} // namespace

TEST(Laplacian, SingleEdge) {
    const auto l = combinatorial_laplacian(build_complex({{0, 1}}), 0).dense();
    Eigen::Matrix2d expected;
    expected << 1, -1, -1, 1;
    EXPECT_EQ(l, expected);
}

TEST(Laplacian, GraphLaplacianOfLadder) {
    const auto k = fixtures::g2();
    Eigen::MatrixXd dm = Eigen::MatrixXd::Zero(6, 6);
    for (const auto& e : k.simplices(1)) {
        dm(e[0], e[0]) += 1;
        dm(e[1], e[1]) += 1;
        dm(e[0], e[1]) -= 1;
        dm(e[1], e[0]) -= 1;
    }
    EXPECT_EQ(combinatorial_laplacian(k, 0).dense(), dm);
}

TEST(Laplacian, TriangleDegreeOne) {
    const auto k = build_complex({{0, 1, 2}});
    const auto l = combinatorial_laplacian(k, 1).dense();
    const auto b1 = boundary_matrix(k, 1).entries;
    const auto b2 = boundary_matrix(k, 2).entries;
    EXPECT_EQ(l, b2 * b2.transpose() + b1.transpose() * b1);
    EXPECT_LE((oracle::spectrum(l) - Eigen::Vector3d::Constant(3.0)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Laplacian, EmptyDegreeGivesEmptyMatrix) {
    const auto k = build_complex({{0, 1}});
    EXPECT_TRUE(combinatorial_laplacian(k, 2).empty());
    EXPECT_THROW(combinatorial_laplacian(k, -1), DomainError);
}

TEST(Laplacian, WeightedIsSymmetricAndSimilarToRawForm) {
    const auto k = build_complex({{0, 1, 2}, {2, 3}}, [](const Simplex& s) { return 0.5 + s.size() + s.back(); });
    for (int q = 0; q <= 1; ++q) {
        const auto sym = combinatorial_laplacian(k, q).dense();
        EXPECT_LE((sym - sym.transpose()).cwiseAbs().maxCoeff(), 1e-10);
        // Raw: B W B^T W^-1 (up) + W B^T W^-1 B (down).
        const Eigen::VectorXd wq = weight_vector(k, q);
        Eigen::MatrixXd raw = boundary_matrix(k, q + 1).entries * weight_vector(k, q + 1).asDiagonal() *
                              boundary_matrix(k, q + 1).entries.transpose() * wq.cwiseInverse().asDiagonal();
        if (q > 0)
            raw += wq.asDiagonal() * boundary_matrix(k, q).entries.transpose() *
                   weight_vector(k, q - 1).cwiseInverse().asDiagonal() * boundary_matrix(k, q).entries;
        const Eigen::MatrixXd conj =
            wq.cwiseSqrt().cwiseInverse().asDiagonal() * raw * wq.cwiseSqrt().asDiagonal();
        EXPECT_LE((conj - sym).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(PersistentLaplacian, EqualComplexesReduceToLaplacian) {
    const auto k = build_complex({{0, 1, 2}, {1, 3}});
    for (int q = 0; q <= 2; ++q) {
        const auto p = persistent_laplacian(k, k, q);
        EXPECT_LE(max_diff(p.matrix, combinatorial_laplacian(k, q)), 1e-12);
        EXPECT_LE(max_diff(up_persistent_laplacian(k, k, q), up_laplacian(k, q)), 1e-12);
    }
}

TEST(PersistentLaplacian, PathEndpointsKronReduction) {
    // K = endpoints {0, 1}; L = path 0-2-1.
    const auto l = fixtures::graph(3, {{0, 2}, {1, 2}});
    const auto k = l.filter([](int q, std::size_t i) { return q == 0 && i < 2; });
    const auto up = up_persistent_laplacian(k, l, 0).dense();
    Eigen::Matrix2d expected;
    expected << 0.5, -0.5, -0.5, 0.5;
    EXPECT_LE((up - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(PersistentLaplacian, FixtureGInfinitePair) {
    const auto f = degree_filtration(fixtures::g());
    const auto p = persistent_laplacian(f, 0, 3, kInfinity);
    EXPECT_EQ(p.matrix.size(), 1);
    EXPECT_EQ(sym_eigen(p.matrix).nullity(), 1u);
}

TEST(PersistentLaplacian, MatrixIsUpPlusDown) {
    const auto f = vietoris_rips(fixtures::square_cloud(), 2);
    for (int q = 0; q <= 2; ++q)
        for (double b : f.levels())
            for (double d : {b, std::sqrt(2.0), kInfinity}) {
                if (d < b) continue;
                const auto p = persistent_laplacian(f, q, b, d);
                EXPECT_LE(max_diff(p.matrix, p.up_part + p.down_part), 1e-14);
                if (!p.matrix.empty()) {
                    EXPECT_GE(oracle::spectrum(p.matrix.dense()).minCoeff(), -1e-9);
                }
            }
}

TEST(PersistentLaplacian, DomainErrors) {
    const auto f = degree_filtration(fixtures::g());
    EXPECT_THROW(persistent_laplacian(f, 0, 3.5, 4), DomainError);
    EXPECT_THROW(persistent_laplacian(f, 0, 5, 4), DomainError);
    EXPECT_THROW(persistent_laplacian(f, -1, 3, 4), DomainError);
}

TEST(PersistentLaplacian, RoutesAgreeOnWeightedComplexes) {
    const auto l = build_complex({{0, 1, 2}, {1, 2, 3}, {3, 4}, {0, 4}},
                                 [](const Simplex& s) { return 1.0 + 0.25 * s.size() + 0.1 * s.front(); });
    const auto k = l.filter([](int q, std::size_t i) { return q == 0 || (q == 1 && i % 2 == 0); });
    for (int q = 0; q <= 1; ++q)
        EXPECT_LE(max_diff(up_persistent_laplacian(k, l, q), schur_route(k, l, q)), 1e-9);
}

TEST(PersistentLaplacian, NullityMatchesOracleAndRoutesAgree) {
    const auto instances = verify::random_instances(21, 40);
    for (const auto& f : instances) {
        const auto& t = f.levels();
        for (int q = 0; q <= f.final_complex().dimension(); ++q)
            for (std::size_t i = 0; i < t.size(); ++i) {
                std::size_t prev = std::numeric_limits<std::size_t>::max();
                std::vector<double> deaths(t.begin() + static_cast<std::ptrdiff_t>(i), t.end());
                deaths.push_back(kInfinity);
                for (double d : deaths) {
                    const auto p = persistent_laplacian(f, q, t[i], d);
                    const auto n = sym_eigen(p.matrix).nullity();
                    EXPECT_EQ(n, oracle::persistent_betti(f, q, t[i], d));
                    EXPECT_LE(n, prev);
                    prev = n;
                    EXPECT_LE(max_diff(up_persistent_laplacian(f, q, t[i], d),
                                       schur_route(f.complex_at(t[i]), f.complex_at(d), q)),
                              1e-8);
                }
            }
    }
}
