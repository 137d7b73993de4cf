#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace perslap::cli {

enum ExitCode : int { kSuccess = 0, kVerificationFailure = 1, kInputError = 2 };

struct RunConfig {
    // Exactly one input source.
    std::string edges;
    std::string points;
    std::string fixture;

    /// auto picks degree for graphs and vr for point clouds.
    std::string filtration = "auto";
    int max_dim = 2;
    std::vector<double> eps;
    std::string values;
    int column = 0;

    /// Empty means every degree of the final complex.
    std::vector<int> q;

    std::vector<std::string> signatures{"gap"};
    double p = 2.0;
    std::string geo_mode = "distinct";
    std::string reference = "e1";
    std::string grid_mode = "pooled";

    int nx = 20;
    int ny = 20;
    std::optional<double> sigma;
    std::optional<double> cap;
    std::string infinity = "cap";
    /// x_min, x_max, y_min, y_max; empty means automatic.
    std::vector<double> bounds;

    std::string out;
    std::uint64_t seed = 0;
};

/// Overrides fields of cfg from a JSON object; keys use the flag names.
void apply_json_config(const std::string& path, RunConfig& cfg);

int cmd_pd(const RunConfig& cfg, std::ostream& out);
int cmd_pld(const RunConfig& cfg, std::ostream& out);
int cmd_pli(const RunConfig& cfg, std::ostream& out);
int cmd_distance(const std::string& a, const std::string& b, const std::string& kind, double p, std::ostream& out);
int cmd_verify(std::uint64_t seed, bool corrupt, const std::string& json_path, std::ostream& out);

} // namespace perslap::cli
