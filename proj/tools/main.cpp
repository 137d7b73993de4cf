#include "commands.hpp"

#include "perslap/errors.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <limits>

namespace {

void add_input_options(CLI::App* cmd, perslap::cli::RunConfig& cfg) {
    cmd->add_option("--edges", cfg.edges, "edge list: 'u v [weight]' per line, '#' comments");
    cmd->add_option("--points", cfg.points, "point cloud CSV, one point per row");
    cmd->add_option("--fixture", cfg.fixture, "G1 | G2 | G | H | shrikhande | rook | square_cloud");
    cmd->add_option("--filtration", cfg.filtration, "auto | degree | vr | sublevel");
    cmd->add_option("--max-dim", cfg.max_dim, "largest simplex dimension for Vietoris-Rips");
    cmd->add_option("--eps", cfg.eps, "Vietoris-Rips scale grid")->delimiter(',');
    cmd->add_option("--values", cfg.values, "vertex value CSV for the sublevel filtration");
    cmd->add_option("--column", cfg.column, "column of --values to use");
    cmd->add_option("--q", cfg.q, "homological degrees (default: all)")->delimiter(',');
    cmd->add_option("--out", cfg.out, "output file (pli: output prefix)");
}

void add_signature_options(CLI::App* cmd, perslap::cli::RunConfig& cfg) {
    cmd->add_option("--signature", cfg.signatures, "gap | entropy | geo (pli also: unit)")->delimiter(',');
    cmd->add_option("--p", cfg.p, "p-norm for the geo signature");
    cmd->add_option("--geo-mode", cfg.geo_mode, "distinct | weighted");
    cmd->add_option("--reference", cfg.reference, "e1 | ones");
    cmd->add_option("--grid", cfg.grid_mode, "pooled | per_q");
}

double parse_p(const std::string& s) {
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    const double p = std::stod(s, &used);
    if (used != s.size()) throw perslap::DomainError("bad p '" + s + "'");
    return p;
}

} // namespace

int main(int argc, char** argv) {
    using namespace perslap::cli;
    CLI::App app{"Persistent Laplacian diagrams, images and stability checks"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;
    app.add_option("--config", config_path, "JSON file whose keys override the flags");
    app.add_option("--seed", cfg.seed, "random seed");

    auto* pd = app.add_subcommand("pd", "persistence diagrams as CSV");
    add_input_options(pd, cfg);

    auto* pld = app.add_subcommand("pld", "persistent Laplacian diagrams as CSV");
    add_input_options(pld, cfg);
    add_signature_options(pld, cfg);

    auto* pli = app.add_subcommand("pli", "persistent Laplacian images (CSV, JSON, PGM)");
    add_input_options(pli, cfg);
    add_signature_options(pli, cfg);
    pli->add_option("--nx", cfg.nx, "pixels along birth");
    pli->add_option("--ny", cfg.ny, "pixels along persistence");
    pli->add_option("--sigma", cfg.sigma, "Gaussian standard deviation");
    pli->add_option("--cap", cfg.cap, "persistence used for infinite deaths");
    pli->add_option("--infinity", cfg.infinity, "cap | dirac");
    pli->add_option("--bounds", cfg.bounds, "x_min,x_max,y_min,y_max")->delimiter(',');

    std::string file_a, file_b, kind = "pd", p_text = "1";
    auto* distance = app.add_subcommand("distance", "Wasserstein / bottleneck distance between two CSV files");
    distance->add_option("a", file_a)->required();
    distance->add_option("b", file_b)->required();
    distance->add_option("--kind", kind, "pd | pld");
    distance->add_option("--p", p_text, "order >= 1, or inf for bottleneck");

    bool corrupt = false;
    std::string json_path;
    auto* verify = app.add_subcommand("verify", "run the acceptance fixtures and the stability suite");
    verify->add_flag("--corrupt", corrupt, "inject a corrupted fixture");
    verify->add_option("--json", json_path, "write a JSON summary here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kSuccess : kInputError;
    }

    try {
        if (!config_path.empty()) apply_json_config(config_path, cfg);
        if (pd->parsed()) return cmd_pd(cfg, std::cout);
        if (pld->parsed()) return cmd_pld(cfg, std::cout);
        if (pli->parsed()) return cmd_pli(cfg, std::cout);
        if (distance->parsed()) return cmd_distance(file_a, file_b, kind, parse_p(p_text), std::cout);
        if (verify->parsed()) return cmd_verify(cfg.seed, corrupt, json_path, std::cout);
    } catch (const perslap::ParseError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    }
    return kInputError;
}
