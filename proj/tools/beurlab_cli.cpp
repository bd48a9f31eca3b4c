// Command-line driver for the beurlab experiment runners.  Each subcommand
// maps to one experiment id; flags given on the command line override the
// values read from --config.

#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "beurlab/experiments.hpp"

namespace {

void print_report(const beurlab::ExperimentReport& rep, const std::string& out_dir) {
    std::printf("experiment: %s\n", rep.id.c_str());
    std::printf("config:     %016llx\n", static_cast<unsigned long long>(rep.config_hash));
    std::printf("summary:    %s/%s_summary.json\n", out_dir.c_str(), rep.id.c_str());
    for (const std::string& p : rep.csv_paths) std::printf("csv:        %s\n", p.c_str());
    std::printf("%-28s %22s %8s  %s\n", "scalar", "value", "flag", "method");
    for (const auto& s : rep.scalars)
        std::printf("%-28s %22.12g %8s  %s\n", s.name.c_str(), s.value,
                    s.flagged ? "FLAGGED" : "", s.method.c_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"beurlab experiment driver"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    int depth = -1;
    int threads = 0;

    for (const std::string& id : beurlab::experiment_ids()) {
        CLI::App* sub = app.add_subcommand(id, "run the '" + id + "' experiment");
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "RNG seed");
        sub->add_option("--depth", depth, "resolution depth (0-6)");
        sub->add_option("--threads", threads, "worker threads (provenance only)");
    }

    CLI11_PARSE(app, argc, argv);

    const CLI::App* sub = app.get_subcommands().front();
    try {
        beurlab::ExperimentConfig cfg;
        if (sub->count("--config"))
            cfg = beurlab::ExperimentConfig::from_file(config_path);
        cfg.id = sub->get_name();
        if (sub->count("--out")) cfg.out_dir = out_dir;
        if (sub->count("--seed")) cfg.seed = seed;
        if (sub->count("--depth")) cfg.depth = depth;
        if (sub->count("--threads")) cfg.threads = threads;
        cfg.validate();

        const beurlab::ExperimentReport rep = beurlab::run_experiment(cfg);
        print_report(rep, cfg.out_dir);
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
