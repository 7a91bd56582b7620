#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wpsdo/harness.hpp"

namespace fs = std::filesystem;
using namespace wpsdo;

namespace {

struct Overrides {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::size_t> grid_n;
    std::optional<double> grid_l;
};

void add_common(CLI::App* app, Overrides& o) {
    app->add_option("--config", o.config, "key=value config file")->check(CLI::ExistingFile);
    app->add_option("--seed", o.seed, "corpus seed");
    app->add_option("--out", o.out, "output directory");
    app->add_option("--grid-n", o.grid_n, "points per axis (power of two)");
    app->add_option("--grid-l", o.grid_l, "box half-length");
}

ExperimentConfig resolve(const Overrides& o) {
    ExperimentConfig cfg = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
    if (o.seed) cfg.seed = *o.seed;
    if (o.out) cfg.out_dir = *o.out;
    if (o.grid_n) cfg.grid_n = *o.grid_n;
    if (o.grid_l) cfg.grid_l = *o.grid_l;
    return cfg;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

void emit(const std::vector<VerificationReport>& reports, const ExperimentConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    for (const auto& r : reports) {
        write_file(fs::path(cfg.out_dir) / (r.experiment + ".json"), report_json(r));
        write_file(fs::path(cfg.out_dir) / (r.experiment + ".csv"), report_csv(r));
        std::cout << r.experiment << ": " << to_string(r.verdict) << " (" << r.note << ")\n";
    }
}

bool all_pass(const std::vector<VerificationReport>& reports) {
    for (const auto& r : reports)
        if (!r.passed()) return false;
    return !reports.empty();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weighted pseudo-differential operator experiments"};
    app.require_subcommand(1);

    Overrides verify_opts, report_opts;
    auto* verify = app.add_subcommand("verify", "run one experiment");
    std::string experiment;
    verify->add_option("experiment", experiment, "experiment name")
        ->required()
        ->check(CLI::IsMember(experiment_names()));
    add_common(verify, verify_opts);

    auto* report = app.add_subcommand("report", "run every experiment");
    std::string scope;
    report->add_option("scope", scope, "only 'all'")->required()->check(CLI::IsMember({"all"}));
    add_common(report, report_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) {
            const auto cfg = resolve(verify_opts);
            const auto reports = run_experiment(experiment, cfg);
            emit(reports, cfg);
            if (experiment == "maximal" || experiment == "fs")
                write_file(fs::path(cfg.out_dir) / "cover.json", cover_json(build_critical_cover(config_grid(cfg))));
            return all_pass(reports) ? 0 : 1;
        }
        const auto cfg = resolve(report_opts);
        std::vector<VerificationReport> all;
        for (const auto& name : experiment_names()) {
            std::vector<VerificationReport> reports;
            try {
                reports = run_experiment(name, cfg);
            } catch (const std::exception& e) {
                VerificationReport failed;
                failed.experiment = name;
                failed.verdict = Verdict::fail;
                failed.note = std::string("error: ") + e.what();
                failed.config_hash = cfg.hash();
                failed.seed = cfg.seed;
                reports.push_back(failed);
            }
            emit(reports, cfg);
            all.insert(all.end(), reports.begin(), reports.end());
        }
        write_file(fs::path(cfg.out_dir) / "summary.json", summary_json(all, cfg));
        return all_pass(all) ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
