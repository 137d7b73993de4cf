#include "perslap/filtration.hpp"
#include "perslap/fixtures.hpp"

#include <gtest/gtest.h>

using namespace perslap;

TEST(Filtration, DimensionFunction) {
    const auto f = sublevel_filtration(build_complex({{0, 1, 2}}),
                                       [](const Simplex& s) { return static_cast<double>(simplex_dimension(s)); });
    EXPECT_EQ(f.levels(), (std::vector<double>{0, 1, 2}));
    const auto k0 = f.complex_at(0);
    EXPECT_EQ(k0.count(0), 3u);
    EXPECT_EQ(k0.count(1), 0u);
    EXPECT_EQ(f.repair_count(), 0u);
}

TEST(Filtration, ConstantFunctionIsSingleStep) {
    const auto k = build_complex({{0, 1, 2}});
    const auto f = sublevel_filtration(k, [](const Simplex&) { return 0.0; });
    EXPECT_EQ(f.levels(), std::vector<double>{0});
    EXPECT_EQ(f.complex_at(0).weighted_simplices(), k.weighted_simplices());
}

TEST(Filtration, MonotoneRepairIsCounted) {
    // The edge value 0 lies below its endpoint values and gets raised.
    const auto f = sublevel_filtration(build_complex({{0, 1}}),
                                       [](const Simplex& s) { return s.size() == 2 ? 0.0 : 1.0 + s[0]; });
    EXPECT_EQ(f.repair_count(), 1u);
    EXPECT_EQ(f.value({0, 1}), 2.0);
    EXPECT_EQ(f.levels(), (std::vector<double>{1, 2}));
}

TEST(Filtration, NestedComplexes) {
    const auto f = degree_filtration(fixtures::g());
    const auto& t = f.levels();
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        const auto a = f.complex_at(t[i]);
        const auto b = f.complex_at(t[i + 1]);
        for (const auto& [s, w] : a.weighted_simplices()) {
            ASSERT_TRUE(b.contains(s));
            EXPECT_EQ(b.weight(s), w);
        }
    }
}

TEST(DegreeFiltration, FixtureLevels) {
    EXPECT_EQ(degree_filtration(fixtures::g()).levels(), (std::vector<double>{3, 4, 5}));
    EXPECT_EQ(degree_filtration(fixtures::h()).levels(), (std::vector<double>{3, 4, 5}));
}

TEST(DegreeFiltration, InducedSubgraphSemantics) {
    // Path 0-1-2: degrees 1, 2, 1.
    const auto f = degree_filtration(fixtures::graph(3, {{0, 1}, {1, 2}}));
    const auto k1 = f.complex_at(1);
    EXPECT_EQ(k1.count(0), 2u);
    EXPECT_EQ(k1.count(1), 0u);
    EXPECT_EQ(f.complex_at(2).count(1), 2u);
}

TEST(DegreeFiltration, RejectsTriangles) {
    EXPECT_THROW(degree_filtration(build_complex({{0, 1, 2}})), DimensionError);
}

TEST(VietorisRips, UnitSquare) {
    const auto f = vietoris_rips(fixtures::square_cloud(), 2);
    ASSERT_EQ(f.levels().size(), 3u);
    EXPECT_DOUBLE_EQ(f.levels()[0], 0.0);
    EXPECT_DOUBLE_EQ(f.levels()[1], 1.0);
    EXPECT_DOUBLE_EQ(f.levels()[2], std::sqrt(2.0));
    const auto k1 = f.complex_at(1.0);
    EXPECT_EQ(k1.count(1), 4u);
    EXPECT_EQ(k1.count(2), 0u);
    EXPECT_EQ(f.final_complex().count(2), 4u);
}

TEST(VietorisRips, EpsGridSnapsAndTruncates) {
    const auto f = vietoris_rips(fixtures::square_cloud(), 1, std::vector<double>{0.5, 1.2});
    EXPECT_EQ(f.levels(), (std::vector<double>{0.5, 1.2}));
    // Diagonals exceed the last grid value and are left out.
    EXPECT_EQ(f.final_complex().count(1), 4u);
}

TEST(VietorisRips, Errors) {
    EXPECT_THROW(vietoris_rips({}, 1), DomainError);
    EXPECT_THROW(vietoris_rips({{0.0, 0.0}, {1.0}}, 1), DomainError);
    EXPECT_THROW(vietoris_rips({{0.0}}, -1), DomainError);
}

TEST(Filtration, LevelQueries) {
    const auto f = degree_filtration(fixtures::g());
    EXPECT_EQ(f.find_level(4.0 + 1e-14), 4.0);
    EXPECT_FALSE(f.find_level(4.5));
    EXPECT_FALSE(f.find_level(kInfinity));
    EXPECT_EQ(f.predecessor(4.0), 3.0);
    EXPECT_FALSE(f.predecessor(3.0));
    EXPECT_TRUE(f.complex_at(2.0).empty());
}

TEST(Filtration, RejectsMismatchedValues) {
    const auto k = build_complex({{0, 1}});
    EXPECT_THROW(Filtration(k, {{0.0, 0.0}}), DomainError);
    EXPECT_THROW(Filtration(k, {{0.0, std::nan("")}, {1.0}}), DomainError);
}
