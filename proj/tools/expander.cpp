// expander: construct, verify, survey and regression-check Cayley expanders.
//
// Exit codes: 0 pass, 1 internal error or failed verdict, 2 unsupported
// configuration, 3 regression drift.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lieexp/error.hpp"
#include "lieexp/expanders.hpp"
#include "lieexp/io.hpp"

namespace fs = std::filesystem;
using namespace lieexp;
using nlohmann::json;

namespace {

constexpr int kPass = 0, kFail = 1, kUnsupported = 2, kDrift = 3;

struct RunConfig {
    std::string command;
    std::string family = "lsv";
    std::uint64_t q = 0, p = 0;
    unsigned d = 2, e = 1;
    std::uint64_t seed = 1;
    std::size_t cap = matgrp::kDefaultCap;
    std::size_t dense_cap = spectra::kDenseCap;
    double tol = 1e-8;
    double drift_tol = 1e-9;
    std::string out;
    std::string format = "json";

    json to_json() const {
        return {{"command", command}, {"family", family}, {"q", q}, {"p", p}, {"d", d}, {"e", e},
                {"seed", seed}, {"cap", cap}, {"dense_cap", dense_cap}, {"tol", tol},
                {"drift_tol", drift_tol}, {"out", out}, {"format", format}};
    }
    expanders::Options options() const {
        expanders::Options o;
        o.cap = cap;
        o.spectral.dense_cap = dense_cap;
        o.spectral.tol = tol;
        return o;
    }
};

std::uint64_t default_seed() {
    if (const char* s = std::getenv("EXPANDER_SEED")) {
        try {
            return std::stoull(s);
        } catch (const std::exception&) {
            throw InvalidArgument(std::string("EXPANDER_SEED is not an integer: ") + s);
        }
    }
    return 1;
}

json envelope(const RunConfig& cfg) {
    return {{"tool", {{"name", "expander"}, {"version", LIEEXP_VERSION}}}, {"run_config", cfg.to_json()}};
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write " + path.string());
    out << text;
}

void emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.out.empty())
        std::cout << text;
    else
        write_file(cfg.out, text);
}

json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot read " + path.string());
    return json::parse(in);
}

void summarize(const expanders::FamilyResult& r, std::ostream& os) {
    os << r.family << ": n=" << r.report.n << " k=" << r.report.k << " " << r.classification << " lambda="
       << io::format_double(r.report.lambda_x) << " (" << r.report.method << ")\n";
    auto line = [&](const spectra::Verdict& v) {
        os << "  " << (v.pass ? "pass " : "FAIL ") << v.name << " value=" << io::format_double(v.value)
           << " bound=" << io::format_double(v.bound) << "\n";
    };
    for (const auto& v : r.verdicts) line(v);
    for (const auto& v : r.report.verdicts) line(v);
}

std::string family_output(const RunConfig& cfg, const expanders::FamilyResult& r) {
    if (cfg.format == "csv") return expanders::FamilyResult::csv_header() + "\n" + r.csv_row() + "\n";
    auto j = envelope(cfg);
    j["result"] = r.to_json();
    return io::dump_json(j) + "\n";
}

// construct

int cmd_construct(const RunConfig& cfg) {
    const auto c = expanders::lsv_construct(cfg.q, cfg.d, cfg.e, cfg.seed, cfg.options());
    const fs::path dir = cfg.out.empty() ? fs::path("out") : fs::path(cfg.out);
    fs::create_directories(dir);

    auto spec = envelope(cfg);
    spec["spec"] = lsv::spec_to_json(c.spec, &c.genset);
    spec["classification"] = c.classification.name();
    spec["order"] = c.group.size();
    spec["n"] = c.graph.n;
    spec["k"] = c.graph.k;
    write_file(dir / "spec.json", io::dump_json(spec) + "\n");

    auto gens = envelope(cfg);
    gens["generators"] = json::array();
    for (const auto& s : c.genset.S) gens["generators"].push_back(matgrp::mat_to_json(s.mat()));
    write_file(dir / "generators.json", io::dump_json(gens) + "\n");

    std::ostringstream edges;
    spectra::write_edge_list(c.graph, edges);
    write_file(dir / "edges.txt", edges.str());

    std::cout << "constructed lsv q=" << cfg.q << " d=" << cfg.d << " e=" << cfg.e << " seed=" << c.spec.seed << ": "
              << c.classification.name() << " of order " << c.group.size() << ", " << c.graph.k << "-regular, "
              << c.graph.n * c.graph.k / 2 << " edges -> " << dir.string() << "\n";
    return kPass;
}

// verify

expanders::FamilyResult verify_graph(const spectra::CayleyGraph& g, const RunConfig& cfg) {
    expanders::FamilyResult r;
    r.family = "graph";
    r.q = cfg.q;
    r.d = cfg.d;
    r.order = g.n;
    r.report = spectra::analyze(g, spectra::trivial_eigendata(g), cfg.options().spectral);
    r.verdicts.push_back({"connected", 1.0, 1.0, g.connected()});
    if (cfg.q > 1) spectra::add_bound_verdicts(r.report, cfg.q, cfg.d);
    return r;
}

spectra::CayleyGraph read_edges(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot read " + path.string());
    return spectra::CayleyGraph::from_edge_list(in);
}

int cmd_verify(const RunConfig& cfg, const std::string& path, const std::string& spectrum_csv) {
    expanders::FamilyResult r;
    if (path.empty()) {
        r = expanders::lsv_family(cfg.q, cfg.d, cfg.e, cfg.seed, cfg.options());
    } else if (fs::is_directory(path)) {
        const auto spec = read_json(fs::path(path) / "spec.json");
        auto c = expanders::lsv_construct(lsv::spec_from_json(spec.at("spec")), cfg.options());
        const auto edges = fs::path(path) / "edges.txt";
        if (fs::exists(edges)) {
            const auto g = read_edges(edges);
            if (g.n != c.graph.n || g.k != c.graph.k || g.adj != c.graph.adj)
                throw InvalidArgument("edges: " + edges.string() + " differs from the graph rebuilt from spec.json");
        }
        r = expanders::lsv_analyze(std::move(c), cfg.options());
    } else {
        r = verify_graph(read_edges(path), cfg);
    }
    summarize(r, std::cerr);
    emit(cfg, family_output(cfg, r));
    if (!spectrum_csv.empty()) {
        std::ofstream s(spectrum_csv);
        spectra::write_spectrum_csv(r.report, s);
    }
    return r.all_pass() ? kPass : kFail;
}

// survey

int cmd_survey(const RunConfig& cfg, const std::string& config_path, unsigned jobs) {
    const auto rows = expanders::survey_rows(read_json(config_path));
    const auto entries = expanders::survey(rows, cfg.options(), jobs);
    int code = kPass;
    std::ostringstream text;
    json table = json::array();
    if (cfg.format == "csv") text << expanders::FamilyResult::csv_header() << "\n";
    for (const auto& e : entries) {
        const auto& row = e.row;
        if (!e.result) {
            std::cerr << row.family << " p=" << row.p << " q=" << row.q << " d=" << row.d << " e=" << row.e
                      << ": " << e.error << "\n";
            if (!e.unsupported) code = kFail;
            text << row.family << "," << row.p << "," << row.q << "," << row.d << "," << row.e << "," << row.seed
                 << ",,,,,," << (e.unsupported ? "unsupported" : "error") << ",\n";
            table.push_back({{"family", row.family}, {"p", row.p}, {"q", row.q}, {"d", row.d}, {"e", row.e},
                             {"seed", row.seed}, {"error", e.error}, {"unsupported", e.unsupported}});
            continue;
        }
        if (!e.result->all_pass()) code = kFail;
        text << e.result->csv_row() << "\n";
        table.push_back(e.result->to_json());
    }
    if (cfg.format == "csv") {
        emit(cfg, text.str());
    } else {
        auto j = envelope(cfg);
        j["rows"] = table;
        emit(cfg, io::dump_json(j) + "\n");
    }
    return code;
}

// regress

json regress_config(const RunConfig& cfg) {
    return {{"cap", cfg.cap}, {"dense_cap", cfg.dense_cap}, {"tol", cfg.tol}, {"drift_tol", cfg.drift_tol}};
}

json row_record(const expanders::SurveyEntry& e) {
    json j = {{"family", e.row.family}, {"p", e.row.p}, {"q", e.row.q}, {"d", e.row.d}, {"e", e.row.e},
              {"seed", e.row.seed}};
    if (!e.result) {
        j["error"] = e.error;
        return j;
    }
    j["n"] = e.result->report.n;
    j["lambda"] = e.result->report.lambda_x;
    j["pass"] = e.result->all_pass();
    return j;
}

std::vector<expanders::SurveyRow> rows_of(const json& records) {
    std::vector<expanders::SurveyRow> rows;
    for (const auto& r : records)
        rows.push_back({r.at("family"), r.at("p"), r.at("q"), r.at("d"), r.at("e"), r.at("seed")});
    return rows;
}

int cmd_regress(const RunConfig& cfg, const std::string& dir, bool update, const std::string& config_path,
                unsigned jobs) {
    const fs::path file = fs::path(dir) / "regress.json";
    if (update) {
        const auto rows = config_path.empty() ? rows_of(read_json(file).at("rows"))
                                              : expanders::survey_rows(read_json(config_path));
        json golden = {{"tool", {{"name", "expander"}, {"version", LIEEXP_VERSION}}},
                       {"run_config", regress_config(cfg)},
                       {"rows", json::array()}};
        for (const auto& e : expanders::survey(rows, cfg.options(), jobs)) golden["rows"].push_back(row_record(e));
        fs::create_directories(dir);
        write_file(file, io::dump_json(golden) + "\n");
        std::cout << "wrote " << golden["rows"].size() << " rows to " << file.string() << "\n";
        return kPass;
    }

    const auto golden = read_json(file);
    const auto want = golden.at("run_config"), have = regress_config(cfg);
    if (want != have) {
        for (auto it = want.begin(); it != want.end(); ++it)
            if (!have.contains(it.key()) || have[it.key()] != it.value())
                std::cout << "config drift: " << it.key() << " golden=" << it.value().dump()
                          << " current=" << (have.contains(it.key()) ? have[it.key()].dump() : "missing") << "\n";
        for (auto it = have.begin(); it != have.end(); ++it)
            if (!want.contains(it.key())) std::cout << "config drift: " << it.key() << " not in golden\n";
        return kDrift;
    }

    const auto& records = golden.at("rows");
    const auto entries = expanders::survey(rows_of(records), cfg.options(), jobs);
    std::size_t drifted = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto now = row_record(entries[i]);
        const auto& old = records[i];
        std::ostringstream diff;
        if (old.contains("error") || now.contains("error")) {
            if (old.value("error", "") != now.value("error", ""))
                diff << " error golden=\"" << old.value("error", "") << "\" current=\"" << now.value("error", "")
                     << "\"";
        } else {
            const double a = old.at("lambda"), b = now.at("lambda");
            if (old.at("n") != now.at("n")) diff << " n golden=" << old.at("n") << " current=" << now.at("n");
            if (!(std::abs(a - b) <= cfg.drift_tol))
                diff << " lambda golden=" << io::format_double(a) << " current=" << io::format_double(b)
                     << " diff=" << io::format_double(b - a);
            if (old.at("pass") != now.at("pass"))
                diff << " pass golden=" << old.at("pass") << " current=" << now.at("pass");
        }
        if (!diff.str().empty()) {
            ++drifted;
            std::cout << "value drift: " << old.at("family").get<std::string>() << " p=" << old.at("p")
                      << " q=" << old.at("q") << " d=" << old.at("d") << " e=" << old.at("e")
                      << " seed=" << old.at("seed") << ":" << diff.str() << "\n";
        }
    }
    std::cout << entries.size() - drifted << "/" << entries.size() << " rows match " << file.string() << "\n";
    return drifted ? kDrift : kPass;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--cap", cfg.cap, "group enumeration cap");
    sub->add_option("--dense-cap", cfg.dense_cap, "largest n for the dense eigensolver");
    sub->add_option("--tol", cfg.tol, "eigenvalue comparison tolerance");
}

void add_params(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--q", cfg.q, "prime power q");
    sub->add_option("--d", cfg.d, "dimension d");
    sub->add_option("--e", cfg.e, "residue degree e");
    sub->add_option("--p", cfg.p, "prime p");
    sub->add_option("--seed", cfg.seed, "ideal seed (default $EXPANDER_SEED or 1)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cayley expanders from cyclic algebras over function fields"};
    app.set_version_flag("--version", std::string("expander ") + LIEEXP_VERSION);
    app.require_subcommand(1);

    RunConfig cfg;
    try {
        cfg.seed = default_seed();
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kFail;
    }
    std::string path, config_path, spectrum_csv;
    unsigned jobs = 1;
    bool update = false;

    auto* construct = app.add_subcommand("construct", "write spec.json, generators.json and edges.txt");
    add_params(construct, cfg);
    add_common(construct, cfg);
    construct->add_option("--out", cfg.out, "output directory (default out)");

    auto* verify = app.add_subcommand("verify", "spectral report of an artifact directory, an edge list or parameters");
    verify->add_option("path", path, "artifact directory or edge-list file");
    add_params(verify, cfg);
    add_common(verify, cfg);
    verify->add_option("--out", cfg.out, "report file (default stdout)");
    verify->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    verify->add_option("--spectrum", spectrum_csv, "write the dense spectrum as CSV");

    auto* survey = app.add_subcommand("survey", "run a table of instances from a JSON config");
    survey->add_option("config", config_path, "survey config")->required();
    add_common(survey, cfg);
    survey->add_option("--out", cfg.out, "table file (default stdout)");
    survey->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    survey->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

    auto* regress = app.add_subcommand("regress", "compare against regress.json in a golden directory");
    regress->add_option("golden", path, "golden directory")->required();
    add_common(regress, cfg);
    regress->add_option("--drift-tol", cfg.drift_tol, "allowed |lambda| change");
    regress->add_flag("--update", update, "recompute and rewrite regress.json");
    regress->add_option("--config", config_path, "survey config seeding the rows on --update");
    regress->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);
    cfg.command = app.get_subcommands().front()->get_name();

    try {
        if (*construct || (*verify && path.empty())) {
            if (cfg.q == 0) throw InvalidArgument("--q is required");
        }
        if (*construct) return cmd_construct(cfg);
        if (*verify) return cmd_verify(cfg, path, spectrum_csv);
        if (*survey) return cmd_survey(cfg, config_path, jobs);
        return cmd_regress(cfg, path, update, config_path, jobs);
    } catch (const UnsupportedConfig& err) {
        std::cerr << "unsupported: " << err.what() << "\n";
        return kUnsupported;
    } catch (const InvalidArgument& err) {
        std::cerr << "invariant violated: " << err.what() << "\n";
        return kFail;
    } catch (const NonConvergence& err) {
        std::cerr << "no convergence: " << err.what() << " (residual " << err.residual() << ")\n";
        return kFail;
    } catch (const std::exception& err) {
        std::cerr << "internal error: " << err.what() << "\n";
        return kFail;
    }
}
