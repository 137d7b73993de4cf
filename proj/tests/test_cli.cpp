#include "commands.hpp"

#include "perslap/fixtures.hpp"
#include "perslap/imaging.hpp"
#include "perslap/io.hpp"
#include "perslap/signatures.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace perslap;
using namespace perslap::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "perslap_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<double> read_vector(const fs::path& p) {
    std::istringstream in(read_file(p));
    return read_numeric_csv(in).at(0);
}

} // namespace

TEST(Cli, PdFixtureG) {
    RunConfig cfg;
    cfg.fixture = "G";
    std::ostringstream out;
    EXPECT_EQ(cmd_pd(cfg, out), kSuccess);
    EXPECT_EQ(out.str(), "q,birth,death,multiplicity\n0,3,inf,1\n1,4,inf,4\n1,5,inf,4\n");
}

TEST(Cli, PdEmptyEdgeList) {
    const auto path = scratch("empty.txt");
    write_file(path, "# no edges\n");
    RunConfig cfg;
    cfg.edges = path.string();
    std::ostringstream out;
    EXPECT_EQ(cmd_pd(cfg, out), kSuccess);
    EXPECT_EQ(out.str(), "q,birth,death,multiplicity\n");
}

TEST(Cli, PdSquareCloudMatchesLibrary) {
    RunConfig cfg;
    cfg.fixture = "square_cloud";
    std::ostringstream out;
    cmd_pd(cfg, out);
    std::istringstream in(out.str());
    const auto ds = read_diagram_csv(in);
    const auto f = vietoris_rips(fixtures::square_cloud(), 2);
    ASSERT_EQ(ds.size(), 3u);
    for (int q = 0; q < 3; ++q) EXPECT_EQ(ds[q], persistence_diagram(f, q));
}

TEST(Cli, SublevelFromValues) {
    const auto edges = scratch("path.txt");
    const auto values = scratch("values.csv");
    write_file(edges, "0 1\n1 2\n");
    write_file(values, "0,5\n1,2\n2,0\n");
    RunConfig cfg;
    cfg.edges = edges.string();
    cfg.filtration = "sublevel";
    cfg.values = values.string();
    cfg.column = 1;
    cfg.q = {0};
    std::ostringstream out;
    cmd_pd(cfg, out);
    // Vertices 1 and 0 enter together with the edge that merges them.
    EXPECT_EQ(out.str(), "q,birth,death,multiplicity\n0,0,inf,1\n");
}

TEST(Cli, PldMatchesLibrary) {
    RunConfig cfg;
    cfg.fixture = "H";
    cfg.signatures = {"gap", "geo"};
    cfg.q = {0};
    std::ostringstream out;
    EXPECT_EQ(cmd_pld(cfg, out), kSuccess);
    std::istringstream in(out.str());
    const auto plds = read_pld_csv(in);
    ASSERT_EQ(plds.size(), 2u);
    const auto f = degree_filtration(fixtures::h());
    EXPECT_EQ(plds[0].cells, build_pld(f, 0, SignatureSpec::gap()).cells);
    EXPECT_EQ(plds[1].signature, "s_geo_p2_e1_distinct");
}

TEST(Cli, PliSeparatesFixturesButNotTheirPersistenceImages) {
    RunConfig cfg;
    cfg.nx = 12;
    cfg.ny = 10;
    cfg.signatures = {"unit"};
    cfg.sigma = 0.2;
    cfg.bounds = {2, 6, 0, 3};
    cfg.cap = 2.0;
    std::ostringstream sink;
    for (const char* name : {"G", "H"}) {
        cfg.fixture = name;
        cfg.out = scratch(std::string("pi_") + name).string();
        EXPECT_EQ(cmd_pli(cfg, sink), kSuccess);
    }
    EXPECT_EQ(read_vector(scratch("pi_G_vector.csv")), read_vector(scratch("pi_H_vector.csv")));

    cfg.signatures = {"gap"};
    for (const char* name : {"G", "H"}) {
        cfg.fixture = name;
        cfg.out = scratch(std::string("pli_") + name).string();
        cmd_pli(cfg, sink);
    }
    const auto g = read_vector(scratch("pli_G_vector.csv"));
    const auto h = read_vector(scratch("pli_H_vector.csv"));
    EXPECT_GT(norm_linf(difference(g, h)), 1e-6);
    EXPECT_TRUE(fs::exists(scratch("pli_G_q0_s_gap.pgm")));
    EXPECT_NE(read_file(scratch("pli_G_q1_s_gap.json")).find("\"source_hash\""), std::string::npos);
}

TEST(Cli, PliZeroDiagramGivesZeroVector) {
    const auto path = scratch("none.txt");
    write_file(path, "");
    RunConfig cfg;
    cfg.edges = path.string();
    cfg.signatures = {"unit", "gap"};
    cfg.out = scratch("zero").string();
    cfg.nx = 4;
    cfg.ny = 4;
    std::ostringstream sink;
    EXPECT_EQ(cmd_pli(cfg, sink), kSuccess);
    const auto v = read_vector(scratch("zero_vector.csv"));
    EXPECT_EQ(v.size(), 32u);
    EXPECT_EQ(norm_linf(v), 0.0);
}

TEST(Cli, DistanceRoundTrip) {
    RunConfig cfg;
    cfg.fixture = "square_cloud";
    cfg.out = scratch("sq.csv").string();
    std::ostringstream sink;
    cmd_pd(cfg, sink);
    cfg.fixture = "G";
    cfg.out = scratch("g.csv").string();
    cmd_pd(cfg, sink);

    std::ostringstream self;
    cmd_distance(scratch("sq.csv").string(), scratch("sq.csv").string(), "pd", 2, self);
    EXPECT_EQ(self.str(), "q=0 0\nq=1 0\nq=2 0\n");

    // A file holding only degree 1 gives a single line.
    write_file(scratch("a1.csv"), "q,birth,death,multiplicity\n1,0,2,1\n");
    write_file(scratch("b1.csv"), "q,birth,death,multiplicity\n1,0,3,1\n1,0,4,1\n");
    std::ostringstream one, inf;
    cmd_distance(scratch("a1.csv").string(), scratch("b1.csv").string(), "pd", 1, one);
    EXPECT_EQ(one.str(), "3\n");
    cmd_distance(scratch("a1.csv").string(), scratch("b1.csv").string(), "pd", kInfinity, inf);
    EXPECT_EQ(inf.str(), "2\n");

    cfg.fixture = "G";
    cfg.out = scratch("g_pld.csv").string();
    cfg.q = {1};
    cmd_pld(cfg, sink);
    cfg.fixture = "square_cloud";
    cfg.out = scratch("sq_pld.csv").string();
    cmd_pld(cfg, sink);
    std::ostringstream pld;
    cmd_distance(scratch("g_pld.csv").string(), scratch("sq_pld.csv").string(), "pld", 1, pld);
    EXPECT_GT(std::stod(pld.str().substr(pld.str().rfind(' ') + 1)), 0.0);
    EXPECT_THROW(cmd_distance(cfg.out, cfg.out, "xyz", 1, pld), DomainError);
}

TEST(Cli, JsonConfigOverrides) {
    const auto path = scratch("cfg.json");
    write_file(path, R"({"fixture": "rook", "q": 0, "signature": ["entropy", "geo"], "p": 3, "nx": 7})");
    RunConfig cfg;
    apply_json_config(path.string(), cfg);
    EXPECT_EQ(cfg.fixture, "rook");
    EXPECT_EQ(cfg.q, std::vector<int>{0});
    EXPECT_EQ(cfg.signatures, (std::vector<std::string>{"entropy", "geo"}));
    EXPECT_EQ(cfg.p, 3.0);
    EXPECT_EQ(cfg.nx, 7);

    write_file(path, R"({"bogus": 1})");
    EXPECT_THROW(apply_json_config(path.string(), cfg), ParseError);
    write_file(path, "{not json");
    EXPECT_THROW(apply_json_config(path.string(), cfg), ParseError);
}

TEST(Cli, InputErrors) {
    RunConfig cfg;
    std::ostringstream out;
    EXPECT_THROW(cmd_pd(cfg, out), DomainError);
    cfg.fixture = "nope";
    EXPECT_THROW(cmd_pd(cfg, out), DomainError);
    cfg.fixture = "G";
    cfg.signatures = {"wat"};
    EXPECT_THROW(cmd_pld(cfg, out), DomainError);
    cfg.fixture = "";
    cfg.edges = scratch("missing-file.txt").string();
    EXPECT_THROW(cmd_pd(cfg, out), ParseError);
}

TEST(Cli, VerifyCorruptFails) {
    std::ostringstream out;
    EXPECT_EQ(cmd_verify(0, true, "", out), kVerificationFailure);
    EXPECT_NE(out.str().find("FAIL  criterion 1"), std::string::npos);
}
