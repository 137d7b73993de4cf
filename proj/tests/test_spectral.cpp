#include "perslap/fixtures.hpp"
#include "perslap/oracles.hpp"
#include "perslap/plaplacian.hpp"
#include "perslap/spectral.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace perslap;

namespace {

Eigen::MatrixXd random_symmetric(std::mt19937_64& rng, Index n) {
    std::normal_distribution<double> g;
    Eigen::MatrixXd a(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) a(i, j) = g(rng);
    return (a + a.transpose()) / 2.0;
}

} // namespace

TEST(SymEigen, Identity) {
    const auto e = sym_eigen(SymmetricMatrix::identity(3));
    EXPECT_EQ(e.eigenvalues, Eigen::Vector3d::Ones());
    EXPECT_EQ(e.clusters().size(), 1u);
}

TEST(SymEigen, LadderSpectrum) {
    const auto e = sym_eigen(combinatorial_laplacian(fixtures::g2(), 0));
    Eigen::VectorXd expected(6);
    expected << 0, 1, 2, 3, 3, 5;
    EXPECT_LE((e.eigenvalues - expected).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(SymEigen, G1Spectrum) {
    const auto e = sym_eigen(combinatorial_laplacian(fixtures::g1(), 0));
    const double r = std::sqrt(17.0);
    Eigen::VectorXd expected(6);
    expected << 0, (5 - r) / 2, 3, 3, 3, (5 + r) / 2;
    EXPECT_LE((e.eigenvalues - expected).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_NEAR(e.eigenvalues.sum(), 14.0, 1e-9);
}

TEST(SymEigen, ResidualAndOrthonormalityAgainstOracle) {
    std::mt19937_64 rng(11);
    for (Index n : {1, 2, 5, 9, 16}) {
        const Eigen::MatrixXd a = random_symmetric(rng, n);
        const auto e = sym_eigen(SymmetricMatrix(a));
        const double scale = std::max(1.0, a.operatorNorm());
        for (Index i = 1; i < n; ++i) EXPECT_LE(e.eigenvalues(i - 1), e.eigenvalues(i));
        EXPECT_LE((a * e.eigenvectors - e.eigenvectors * e.eigenvalues.asDiagonal()).cwiseAbs().maxCoeff(),
                  1e-8 * scale);
        EXPECT_LE((e.eigenvectors.transpose() * e.eigenvectors - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff(),
                  1e-10);
        EXPECT_LE((e.eigenvalues - oracle::spectrum(a)).cwiseAbs().maxCoeff(), 1e-9 * scale);
    }
}

TEST(SymEigen, RejectsNonFinite) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 2);
    a(0, 0) = std::numeric_limits<double>::infinity();
    EXPECT_THROW(sym_eigen(SymmetricMatrix(a)), NumericDomainError);
}

TEST(SymEigen, ClustersGroupDegenerateEigenvalues) {
    const auto e = sym_eigen(combinatorial_laplacian(fixtures::rook(), 0));
    const auto c = e.clusters();
    ASSERT_EQ(c.size(), 3u);
    EXPECT_EQ(c[0].second - c[0].first, 1);
    EXPECT_EQ(c[1].second - c[1].first, 6);
    EXPECT_EQ(c[2].second - c[2].first, 9);
}

TEST(PseudoInverse, Diagonal) {
    const auto p = pseudo_inverse(SymmetricMatrix(Eigen::Vector2d(2.0, 0.0).asDiagonal().toDenseMatrix()));
    EXPECT_NEAR(p(0, 0), 0.5, 1e-15);
    EXPECT_NEAR(p(1, 1), 0.0, 1e-15);
    EXPECT_NEAR(p(0, 1), 0.0, 1e-15);
}

TEST(PseudoInverse, ZeroMatrix) {
    EXPECT_EQ(pseudo_inverse(SymmetricMatrix::zero(3)).dense(), Eigen::MatrixXd::Zero(3, 3));
}

TEST(PseudoInverse, PathLaplacianIdentity) {
    const auto l = combinatorial_laplacian(fixtures::graph(3, {{0, 1}, {1, 2}}), 0).dense();
    const auto p = pseudo_inverse(SymmetricMatrix(l)).dense();
    EXPECT_LE((l * p * l - l).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(ColumnReduce, ZeroMatrix) {
    const auto r = column_reduce(Eigen::MatrixXd::Zero(2, 2));
    EXPECT_EQ(r.reduced, Eigen::MatrixXd::Zero(2, 2));
    EXPECT_EQ(r.transform, Eigen::MatrixXd::Identity(2, 2));
    EXPECT_EQ(r.zero_columns, (std::vector<Index>{0, 1}));
}

TEST(ColumnReduce, RankOne) {
    Eigen::MatrixXd m(2, 2);
    m << 1, 2, 2, 4;
    const auto r = column_reduce(m);
    EXPECT_EQ(r.zero_columns.size(), 1u);
    EXPECT_LE((m * r.transform - r.reduced).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ColumnReduce, FullRank) {
    EXPECT_TRUE(column_reduce(Eigen::MatrixXd::Identity(3, 3)).zero_columns.empty());
}

TEST(ColumnReduce, RandomRankDeficientProducts) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 50; ++trial) {
        const Index rows = 1 + trial % 5, cols = 2 + trial % 6, r = 1 + trial % 3;
        Eigen::MatrixXd a(rows, r), b(r, cols);
        for (Index i = 0; i < a.size(); ++i) a.data()[i] = g(rng);
        for (Index i = 0; i < b.size(); ++i) b.data()[i] = g(rng);
        const Eigen::MatrixXd m = a * b;
        const auto red = column_reduce(m);
        EXPECT_LE((m * red.transform - red.reduced).cwiseAbs().maxCoeff(), 1e-9);
        EXPECT_NEAR(red.transform.determinant(), red.transform_determinant(), 1e-9);
        EXPECT_EQ(static_cast<Index>(red.zero_columns.size()), cols - oracle::rank(m));
        for (Index c : red.zero_columns) EXPECT_LE((m * red.transform.col(c)).norm(), 1e-9);
    }
}

TEST(Schur, KeepAllIsIdentity) {
    const auto l = combinatorial_laplacian(fixtures::g2(), 0);
    EXPECT_EQ(schur_complement(l, {0, 1, 2, 3, 4, 5}).dense(), l.dense());
}

TEST(Schur, SeriesResistorKronReduction) {
    // Path a-c-b with c eliminated.
    const auto l = combinatorial_laplacian(fixtures::graph(3, {{0, 2}, {1, 2}}), 0);
    const auto s = schur_complement(l, {0, 1}).dense();
    Eigen::Matrix2d expected;
    expected << 0.5, -0.5, -0.5, 0.5;
    EXPECT_LE((s - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Schur, PreservesPositiveSemidefiniteness) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        const Index n = 3 + trial % 6;
        const Eigen::MatrixXd a = random_symmetric(rng, n);
        const Eigen::MatrixXd psd = a * a.transpose();
        std::vector<Index> keep;
        for (Index i = 0; i < n; i += 2) keep.push_back(i);
        const auto s = schur_complement(SymmetricMatrix(psd), keep);
        EXPECT_GE(oracle::spectrum(s.dense()).minCoeff(), -1e-9);
    }
}
