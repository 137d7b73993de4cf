#include "perslap/fixtures.hpp"
#include "perslap/plaplacian.hpp"
#include "perslap/signatures.hpp"
#include "perslap/verify.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace perslap;

namespace {

SymmetricMatrix diag(std::initializer_list<double> d) {
    Eigen::VectorXd v(static_cast<Index>(d.size()));
    Index i = 0;
    for (double x : d) v(i++) = x;
    return SymmetricMatrix(Eigen::MatrixXd(v.asDiagonal()));
}

/// Random orthogonal re-mixing inside every eigenvalue cluster.
EigenDecomposition remix(EigenDecomposition e, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    for (const auto& [b, end] : e.clusters()) {
        const Index m = end - b;
        Eigen::MatrixXd r(m, m);
        for (Index i = 0; i < r.size(); ++i) r.data()[i] = g(rng);
        const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(r).householderQ();
        e.eigenvectors.middleCols(b, m) = e.eigenvectors.middleCols(b, m) * q;
    }
    return e;
}

} // namespace

TEST(Gap, SingleEdge) { EXPECT_NEAR(s_gap(combinatorial_laplacian(build_complex({{0, 1}}), 0)), 2.0, 1e-12); }

TEST(Gap, FixtureGraphs) {
    const double expected = 4.0 - std::sqrt(2.0);
    EXPECT_NEAR(s_gap(combinatorial_laplacian(fixtures::g(), 0)), expected, 1e-9);
    EXPECT_NEAR(s_gap(combinatorial_laplacian(fixtures::h(), 0)), expected, 1e-9);
    EXPECT_NEAR(s_gap(combinatorial_laplacian(fixtures::g1(), 0)), (5.0 - std::sqrt(17.0)) / 2.0, 1e-9);
}

TEST(Gap, OneByOneReturnsSoleEigenvalue) { EXPECT_EQ(s_gap(diag({2.5})), 2.5); }

TEST(Gap, EmptyMatrixIsAnError) { EXPECT_THROW(s_gap(SymmetricMatrix::zero(0)), DomainError); }

TEST(Entropy, ZeroMatrixIsUniform) { EXPECT_NEAR(s_ent(SymmetricMatrix::zero(4)), std::log(4.0), 1e-15); }

TEST(Entropy, PointMass) { EXPECT_EQ(s_ent(diag({1, 0, 0})), 0.0); }

TEST(Entropy, SingleEdge) { EXPECT_NEAR(s_ent(combinatorial_laplacian(build_complex({{0, 1}}), 0)), 0.0, 1e-12); }

TEST(Entropy, RejectsIndefinite) { EXPECT_THROW(s_ent(diag({1, -0.5})), NumericDomainError); }

TEST(Entropy, ToleratesRoundoffNegatives) { EXPECT_EQ(s_ent(diag({1, -1e-13})), 0.0); }

TEST(Geo, IdentityFirstBasis) {
    EXPECT_NEAR(s_geo(SymmetricMatrix::identity(3), Eigen::Vector3d::UnitX(), 2.0), 1.0, 1e-12);
}

TEST(Geo, KernelEigenspaceContributesNorm) {
    // M = diag(0, 1): v = e1 lies in the kernel.
    EXPECT_NEAR(s_geo(diag({0, 1}), Eigen::Vector2d::UnitX(), 3.0), 1.0, 1e-12);
}

TEST(Geo, RookProjectorIdentity) {
    const double expected = 0.25 + std::sqrt(6.0 / 16.0) + std::sqrt(9.0 / 16.0);
    Eigen::VectorXd e1 = Eigen::VectorXd::Unit(16, 0);
    EXPECT_NEAR(s_geo(combinatorial_laplacian(fixtures::rook(), 0), e1, 2.0), expected, 1e-8);
    EXPECT_NEAR(s_geo(combinatorial_laplacian(fixtures::shrikhande(), 0), e1, 2.0), expected, 1e-8);
}

TEST(Geo, Errors) {
    EXPECT_THROW(s_geo(SymmetricMatrix::identity(3), Eigen::Vector2d::UnitX(), 2.0), DomainError);
    EXPECT_THROW(s_geo(SymmetricMatrix::identity(2), Eigen::Vector2d::Zero(), 2.0), DomainError);
    EXPECT_THROW(s_geo(SymmetricMatrix::identity(2), Eigen::Vector2d::UnitX(), 0.5), DomainError);
}

TEST(Geo, BasisInvariance) {
    std::mt19937_64 rng(13);
    for (const auto& k : {fixtures::rook(), fixtures::shrikhande(), fixtures::g1()}) {
        const auto eig = sym_eigen(combinatorial_laplacian(k, 0));
        const Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(eig.size(), 1.0, 2.0);
        for (auto mode : {GeoMode::distinct_eigenspaces, GeoMode::multiplicity_weighted})
            for (double p : {1.0, 2.0, 3.0}) {
                const double base = s_geo(eig, v, p, mode);
                for (int t = 0; t < 3; ++t) EXPECT_NEAR(s_geo(remix(eig, rng), v, p, mode), base, 1e-8);
            }
    }
}

TEST(Spectral, SimilarityInvariance) {
    const auto l = combinatorial_laplacian(fixtures::g(), 0).dense();
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g;
    Eigen::MatrixXd r(l.rows(), l.cols());
    for (Index i = 0; i < r.size(); ++i) r.data()[i] = g(rng);
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(r).householderQ();
    const SymmetricMatrix rotated(Eigen::MatrixXd(q * l * q.transpose()));
    EXPECT_NEAR(s_gap(rotated), s_gap(SymmetricMatrix(l)), 1e-9);
    EXPECT_NEAR(s_ent(rotated), s_ent(SymmetricMatrix(l)), 1e-9);
}

TEST(SignatureSpec, NamesAndBounds) {
    EXPECT_EQ(SignatureSpec::gap().name(), "s_gap");
    EXPECT_EQ(SignatureSpec::entropy().name(), "s_ent");
    EXPECT_EQ(SignatureSpec::geo(2).name(), "s_geo_p2_e1_distinct");
    EXPECT_EQ(SignatureSpec::geo(1, ReferenceVector::uniform(), GeoMode::multiplicity_weighted).name(),
              "s_geo_p1_ones_weighted");
    const auto l = combinatorial_laplacian(fixtures::g(), 0);
    EXPECT_DOUBLE_EQ(SignatureSpec::gap().bound(l), 10.0);
    EXPECT_DOUBLE_EQ(SignatureSpec::entropy().bound(l), std::log(7.0));
    EXPECT_DOUBLE_EQ(SignatureSpec::geo(2).bound(l), 7.0);
    EXPECT_THROW(SignatureSpec::gap().evaluate(SymmetricMatrix::zero(0)), DomainError);
    EXPECT_THROW(ReferenceVector::explicit_vector({1, 2}).resolve(3), DomainError);
}

TEST(SignatureSpec, AdmissibleOnRandomPersistentLaplacians) {
    const std::vector<SignatureSpec> specs{
        SignatureSpec::gap(), SignatureSpec::entropy(), SignatureSpec::geo(1),
        SignatureSpec::geo(2, ReferenceVector::uniform()),
        SignatureSpec::geo(3, ReferenceVector::uniform(), GeoMode::multiplicity_weighted)};
    for (const auto& f : verify::random_instances(8, 30)) {
        const auto& t = f.levels();
        for (int q = 0; q <= f.final_complex().dimension(); ++q)
            for (double b : t)
                for (double d : {b, t.back(), kInfinity}) {
                    const auto m = persistent_laplacian(f, q, b, d).matrix;
                    if (m.empty()) continue;
                    for (const auto& s : specs) {
                        const double v = s.evaluate(m);
                        EXPECT_LE(std::abs(v), s.bound(m) * (1 + 1e-9));
                    }
                }
    }
}

TEST(PLD, FixtureGridPooled) {
    const auto pld = build_pld(degree_filtration(fixtures::g()), 0, SignatureSpec::gap());
    std::vector<std::pair<double, double>> keys;
    for (const auto& c : pld.cells) keys.emplace_back(c.birth, c.death);
    EXPECT_EQ(keys, (std::vector<std::pair<double, double>>{
                        {3, 4}, {3, 5}, {3, kInfinity}, {4, 5}, {4, kInfinity}, {5, kInfinity}}));
}

TEST(PLD, FixtureGridPerDegree) {
    const auto pld = build_pld(degree_filtration(fixtures::g()), 0, SignatureSpec::gap(), GridMode::per_q);
    ASSERT_EQ(pld.size(), 1u);
    EXPECT_EQ(pld.cells[0].birth, 3.0);
    EXPECT_EQ(pld.cells[0].death, kInfinity);
}

TEST(PLD, CellValuesMatchDirectEvaluation) {
    const auto f = degree_filtration(fixtures::h());
    const auto spec = SignatureSpec::entropy();
    const auto pld = build_pld(f, 1, spec);
    for (const auto& c : pld.cells) {
        const auto m = persistent_laplacian(f, 1, c.birth, c.death).matrix;
        EXPECT_EQ(c.value, m.empty() ? 0.0 : spec.evaluate(m));
    }
}

TEST(PLD, EmptyDiagramGivesEmptyPLD) {
    EXPECT_TRUE(build_pld(degree_filtration(fixtures::g()), 2, SignatureSpec::gap(), GridMode::per_q).empty());
}

TEST(PLD, Deterministic) {
    const auto f = vietoris_rips(fixtures::square_cloud(), 2);
    const auto a = build_pld(f, 1, SignatureSpec::geo(2));
    const auto b = build_pld(f, 1, SignatureSpec::geo(2));
    EXPECT_EQ(a.cells, b.cells);
}

TEST(PLD, WassersteinOnCoordinates) {
    PLDiagram a, b;
    a.cells = {{1, 3, 0.7}};
    b.cells = {{1, 4, -2.0}};
    EXPECT_EQ(pld_wasserstein(a, a, 1), 0.0);
    EXPECT_DOUBLE_EQ(pld_wasserstein(a, b, 1), 1.0);
}

TEST(PLD, CsvRoundTrip) {
    const auto f = degree_filtration(fixtures::g());
    std::vector<PLDiagram> plds{build_pld(f, 0, SignatureSpec::gap()), build_pld(f, 1, SignatureSpec::entropy())};
    std::stringstream ss;
    write_pld_csv(ss, plds);
    const auto back = read_pld_csv(ss);
    ASSERT_EQ(back.size(), 2u);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_EQ(back[i].q, plds[i].q);
        EXPECT_EQ(back[i].signature, plds[i].signature);
        EXPECT_EQ(back[i].cells, plds[i].cells);
    }
}
