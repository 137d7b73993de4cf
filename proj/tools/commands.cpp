#include "commands.hpp"

#include "perslap/fixtures.hpp"
#include "perslap/imaging.hpp"
#include "perslap/io.hpp"
#include "perslap/persistence.hpp"
#include "perslap/signatures.hpp"
#include "perslap/verify.hpp"

#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace perslap::cli {

using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'", 0);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Output stream: the file at path, or fallback when path is empty.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) {
        if (path.empty()) {
            os_ = &fallback;
        } else {
            file_.open(path);
            if (!file_) throw ParseError("cannot write '" + path + "'", 0);
            os_ = &file_;
        }
    }
    std::ostream& stream() { return *os_; }

private:
    std::ofstream file_;
    std::ostream* os_ = nullptr;
};

struct Input {
    Filtration filtration;
    std::string source_tag;
};

Filtration graph_filtration(const SimplicialComplex& graph, const RunConfig& cfg) {
    const std::string kind = cfg.filtration == "auto" ? "degree" : cfg.filtration;
    if (kind == "degree") return degree_filtration(graph);
    if (kind == "sublevel") {
        if (cfg.values.empty()) throw DomainError("sublevel filtration needs --values");
        std::istringstream in(slurp(cfg.values));
        const auto vals = read_vertex_values(in, static_cast<std::size_t>(cfg.column));
        return sublevel_filtration(graph, [&](const Simplex& s) {
            double m = -kInfinity;
            for (Vertex v : s) {
                if (static_cast<std::size_t>(v) >= vals.size())
                    throw DomainError("no value for vertex " + std::to_string(v));
                m = std::max(m, vals[static_cast<std::size_t>(v)]);
            }
            return m;
        });
    }
    throw DomainError("filtration '" + kind + "' does not apply to a graph");
}

Filtration cloud_filtration(const std::vector<std::vector<double>>& pts, const RunConfig& cfg) {
    if (cfg.filtration != "auto" && cfg.filtration != "vr")
        throw DomainError("filtration '" + cfg.filtration + "' does not apply to a point cloud");
    if (cfg.eps.empty()) return vietoris_rips(pts, cfg.max_dim);
    return vietoris_rips(pts, cfg.max_dim, cfg.eps);
}

Input load_input(const RunConfig& cfg) {
    const int sources = !cfg.edges.empty() + !cfg.points.empty() + !cfg.fixture.empty();
    if (sources != 1) throw DomainError("give exactly one of --edges, --points, --fixture");
    Input in;
    if (!cfg.edges.empty()) {
        const auto text = slurp(cfg.edges);
        std::istringstream ss(text);
        in.filtration = graph_filtration(read_edge_list(ss).graph, cfg);
        in.source_tag = text;
    } else if (!cfg.points.empty()) {
        const auto text = slurp(cfg.points);
        std::istringstream ss(text);
        in.filtration = cloud_filtration(read_point_cloud(ss), cfg);
        in.source_tag = text;
    } else if (cfg.fixture == "square_cloud") {
        in.filtration = cloud_filtration(fixtures::square_cloud(), cfg);
        in.source_tag = "fixture:" + cfg.fixture;
    } else if (const auto g = fixtures::graph_by_name(cfg.fixture)) {
        in.filtration = graph_filtration(*g, cfg);
        in.source_tag = "fixture:" + cfg.fixture;
    } else {
        throw DomainError("unknown fixture '" + cfg.fixture + "'");
    }
    return in;
}

std::vector<int> degrees(const RunConfig& cfg, const Filtration& f) {
    if (!cfg.q.empty()) {
        for (int q : cfg.q)
            if (q < 0) throw DomainError("q must be non-negative");
        return cfg.q;
    }
    std::vector<int> out;
    for (int q = 0; q <= std::max(0, f.final_complex().dimension()); ++q) out.push_back(q);
    return out;
}

SignatureSpec parse_signature(const std::string& name, const RunConfig& cfg) {
    if (name == "gap") return SignatureSpec::gap();
    if (name == "entropy") return SignatureSpec::entropy();
    if (name == "geo") {
        ReferenceVector v;
        if (cfg.reference == "e1")
            v = ReferenceVector::first_basis();
        else if (cfg.reference == "ones")
            v = ReferenceVector::uniform();
        else
            throw DomainError("reference must be e1 or ones");
        GeoMode mode;
        if (cfg.geo_mode == "distinct")
            mode = GeoMode::distinct_eigenspaces;
        else if (cfg.geo_mode == "weighted")
            mode = GeoMode::multiplicity_weighted;
        else
            throw DomainError("geo mode must be distinct or weighted");
        return SignatureSpec::geo(cfg.p, v, mode);
    }
    throw DomainError("unknown signature '" + name + "'");
}

GridMode parse_grid(const std::string& s) {
    if (s == "pooled") return GridMode::pooled;
    if (s == "per_q") return GridMode::per_q;
    throw DomainError("grid mode must be pooled or per_q");
}

std::string hex(std::uint64_t h) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

ImagingConfig imaging_config(const RunConfig& cfg, const std::vector<std::vector<PlanePoint>>& families) {
    if (cfg.nx < 1 || cfg.ny < 1) throw DomainError("nx and ny must be positive");
    InfinityHandling inf;
    if (cfg.infinity == "cap")
        inf = InfinityHandling::cap;
    else if (cfg.infinity == "dirac")
        inf = InfinityHandling::dirac_top_row;
    else
        throw DomainError("infinity must be cap or dirac");
    auto ic = auto_config(families, cfg.nx, cfg.ny, inf);
    if (cfg.cap) ic.cap = *cfg.cap;
    if (cfg.sigma) ic.sigma = *cfg.sigma;
    if (!cfg.bounds.empty()) {
        if (cfg.bounds.size() != 4) throw DomainError("bounds needs x_min,x_max,y_min,y_max");
        ic.grid.x_min = cfg.bounds[0];
        ic.grid.x_max = cfg.bounds[1];
        ic.grid.y_min = cfg.bounds[2];
        ic.grid.y_max = cfg.bounds[3];
    }
    ic.validate();
    return ic;
}

json sidecar(const PixelImage& img, const ImagingConfig& ic, std::uint64_t source_hash) {
    return {{"q", img.q},
            {"signature", img.signature},
            {"bounds",
             {{"x_min", ic.grid.x_min},
              {"x_max", ic.grid.x_max},
              {"y_min", ic.grid.y_min},
              {"y_max", ic.grid.y_max},
              {"nx", ic.grid.nx},
              {"ny", ic.grid.ny}}},
            {"pixel_area", ic.grid.pixel_area()},
            {"sigma", ic.sigma},
            {"weight", {{"kind", ic.weight.name()}, {"y_max", ic.weight.y_max}}},
            {"infinity",
             {{"handling", ic.infinity == InfinityHandling::cap ? "cap" : "dirac"}, {"cap", ic.cap.value_or(0.0)}}},
            {"row_order", "bottom_first"},
            {"source_hash", hex(source_hash)}};
}

} // namespace

void apply_json_config(const std::string& path, RunConfig& cfg) {
    json j;
    try {
        j = json::parse(slurp(path));
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("config: ") + e.what(), e.byte);
    }
    if (!j.is_object()) throw ParseError("config must be a JSON object", 1);
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "edges") cfg.edges = value.get<std::string>();
            else if (key == "points") cfg.points = value.get<std::string>();
            else if (key == "fixture") cfg.fixture = value.get<std::string>();
            else if (key == "filtration") cfg.filtration = value.get<std::string>();
            else if (key == "max_dim") cfg.max_dim = value.get<int>();
            else if (key == "eps") cfg.eps = value.get<std::vector<double>>();
            else if (key == "values") cfg.values = value.get<std::string>();
            else if (key == "column") cfg.column = value.get<int>();
            else if (key == "q") cfg.q = value.is_array() ? value.get<std::vector<int>>() : std::vector<int>{value.get<int>()};
            else if (key == "signature")
                cfg.signatures = value.is_array() ? value.get<std::vector<std::string>>()
                                                  : std::vector<std::string>{value.get<std::string>()};
            else if (key == "p") cfg.p = value.get<double>();
            else if (key == "geo_mode") cfg.geo_mode = value.get<std::string>();
            else if (key == "reference") cfg.reference = value.get<std::string>();
            else if (key == "grid") cfg.grid_mode = value.get<std::string>();
            else if (key == "nx") cfg.nx = value.get<int>();
            else if (key == "ny") cfg.ny = value.get<int>();
            else if (key == "sigma") cfg.sigma = value.get<double>();
            else if (key == "cap") cfg.cap = value.get<double>();
            else if (key == "infinity") cfg.infinity = value.get<std::string>();
            else if (key == "bounds") cfg.bounds = value.get<std::vector<double>>();
            else if (key == "out") cfg.out = value.get<std::string>();
            else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
            else throw ParseError("config: unknown key '" + key + "'", 1);
        }
    } catch (const json::type_error& e) {
        throw ParseError(std::string("config: ") + e.what(), 1);
    }
}

int cmd_pd(const RunConfig& cfg, std::ostream& out) {
    const auto in = load_input(cfg);
    std::vector<PersistenceDiagram> diagrams;
    for (int q : degrees(cfg, in.filtration)) diagrams.push_back(persistence_diagram(in.filtration, q));
    Sink sink(cfg.out, out);
    write_diagram_csv(sink.stream(), diagrams);
    return kSuccess;
}

namespace {

std::vector<PLDiagram> build_plds(const RunConfig& cfg, const Filtration& f) {
    const auto mode = parse_grid(cfg.grid_mode);
    const auto diagrams = all_diagrams(f);
    std::vector<PLDiagram> out;
    for (const auto& sig : cfg.signatures) {
        const auto spec = parse_signature(sig, cfg);
        for (int q : degrees(cfg, f)) out.push_back(build_pld(f, q, spec, mode, diagrams));
    }
    return out;
}

} // namespace

int cmd_pld(const RunConfig& cfg, std::ostream& out) {
    const auto in = load_input(cfg);
    const auto plds = build_plds(cfg, in.filtration);
    Sink sink(cfg.out, out);
    write_pld_csv(sink.stream(), plds);
    return kSuccess;
}

int cmd_pli(const RunConfig& cfg, std::ostream& out) {
    if (cfg.out.empty()) throw DomainError("pli needs --out PREFIX");
    const auto in = load_input(cfg);
    const auto hash = fnv1a(in.source_tag);

    // "unit" requests the classical persistence image of each degree.
    RunConfig spectral = cfg;
    std::erase(spectral.signatures, std::string("unit"));
    const bool unit = spectral.signatures.size() != cfg.signatures.size();
    const auto plds = build_plds(spectral, in.filtration);
    std::vector<PersistenceDiagram> diagrams;
    if (unit)
        for (int q : degrees(cfg, in.filtration)) diagrams.push_back(persistence_diagram(in.filtration, q));

    std::vector<std::vector<PlanePoint>> families;
    for (const auto& p : plds) families.push_back(p.points());
    for (const auto& d : diagrams) families.push_back(d.expanded());
    const auto ic = imaging_config(cfg, families);

    std::vector<PixelImage> images;
    for (const auto& d : diagrams) images.push_back(persistence_image(d, ic));
    for (const auto& p : plds) images.push_back(pl_image(p, ic));

    for (const auto& img : images) {
        const std::string stem = cfg.out + "_q" + std::to_string(img.q) + "_" + img.signature;
        {
            Sink csv(stem + ".csv", out);
            write_image_csv(csv.stream(), img);
        }
        {
            Sink pgm(stem + ".pgm", out);
            write_pgm(pgm.stream(), img);
        }
        Sink meta(stem + ".json", out);
        meta.stream() << sidecar(img, ic, hash).dump(2) << '\n';
        out << stem << ".csv\n";
    }
    Sink vec(cfg.out + "_vector.csv", out);
    const auto v = concatenate(images);
    for (std::size_t i = 0; i < v.size(); ++i) vec.stream() << (i ? "," : "") << format_real(v[i]);
    vec.stream() << '\n';
    out << cfg.out << "_vector.csv\n";
    return kSuccess;
}

int cmd_distance(const std::string& a, const std::string& b, const std::string& kind, double p, std::ostream& out) {
    std::vector<std::pair<std::string, double>> rows;
    if (kind == "pd") {
        std::istringstream sa(slurp(a)), sb(slurp(b));
        const auto da = read_diagram_csv(sa), db = read_diagram_csv(sb);
        std::map<int, std::pair<PersistenceDiagram, PersistenceDiagram>> by_q;
        for (const auto& d : da) by_q[d.q].first = d;
        for (const auto& d : db) by_q[d.q].second = d;
        for (auto& [q, pair] : by_q) rows.emplace_back("q=" + std::to_string(q), wasserstein(pair.first, pair.second, p));
    } else if (kind == "pld") {
        std::istringstream sa(slurp(a)), sb(slurp(b));
        const auto pa = read_pld_csv(sa), pb = read_pld_csv(sb);
        std::map<std::pair<int, std::string>, std::pair<PLDiagram, PLDiagram>> by_key;
        for (const auto& d : pa) by_key[{d.q, d.signature}].first = d;
        for (const auto& d : pb) by_key[{d.q, d.signature}].second = d;
        for (auto& [key, pair] : by_key)
            rows.emplace_back("q=" + std::to_string(key.first) + " " + key.second,
                              pld_wasserstein(pair.first, pair.second, p));
    } else {
        throw DomainError("distance kind must be pd or pld");
    }
    if (rows.size() == 1) {
        out << format_real(rows.front().second) << '\n';
    } else {
        for (const auto& [label, d] : rows) out << label << ' ' << format_real(d) << '\n';
    }
    return kSuccess;
}

int cmd_verify(std::uint64_t seed, bool corrupt, const std::string& json_path, std::ostream& out) {
    verify::Options opt;
    opt.seed = seed;
    opt.corrupt = corrupt;
    const auto summary = verify::run_acceptance(opt);

    json criteria = json::array();
    for (const auto& c : summary.criteria) {
        out << (c.passed ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.title << " -- " << c.detail << '\n';
        for (const auto& n : c.notes) out << "      " << n << '\n';
        criteria.push_back({{"id", c.id}, {"title", c.title}, {"passed", c.passed}, {"detail", c.detail}, {"notes", c.notes}});
    }
    if (!json_path.empty()) {
        json reports = json::array();
        for (const auto& r : summary.stability) {
            json constants = json::object();
            for (const auto& [k, v] : r.constants) constants[k] = v;
            reports.push_back({{"case", r.case_id},
                               {"check", r.check},
                               {"lhs", r.lhs},
                               {"rhs", r.rhs},
                               {"holds", r.holds},
                               {"slack", std::isfinite(r.slack) ? json(r.slack) : json(nullptr)},
                               {"constants", constants}});
        }
        const json doc{{"seed", seed}, {"passed", summary.all_passed()}, {"criteria", criteria}, {"stability", reports}};
        Sink sink(json_path, out);
        sink.stream() << doc.dump(2) << '\n';
    }
    return summary.all_passed() ? kSuccess : kVerificationFailure;
}

} // namespace perslap::cli
