// quorum: label a stream of items by adaptively querying a coalition of
// experts of unknown reliability, and benchmark the adaptive policy against
// fixed-budget baselines.

#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "quorum/experiment.hpp"

namespace {

struct FlagOverrides {
    std::string config_path;
    std::string seed, out, strategy, mode, tau, q, replicas, stream_length;
    std::string annotations, truth, class_count, workers;
    std::vector<std::string> raw_sets; // generic key=value overrides

    void apply(quorum::ConfigMap& map) const {
        for (const std::string& entry : raw_sets) {
            const auto eq = entry.find('=');
            if (eq == std::string::npos || eq == 0) {
                throw quorum::ConfigError("--set expects key=value, got '" + entry + "'");
            }
            map[entry.substr(0, eq)] = entry.substr(eq + 1);
        }
        // flags override both spellings of the grid keys
        const auto set = [&map](const std::string& key, const std::string& value,
                                const std::string& alias = "") {
            if (value.empty()) return;
            map[key] = value;
            if (!alias.empty()) map.erase(alias);
        };
        set("seed", seed);
        set("out", out);
        set("strategies", strategy, "strategy");
        set("modes", mode, "mode");
        set("tau_grid", tau, "tau");
        set("q_grid", q, "q");
        set("replicas", replicas);
        set("stream_length", stream_length);
        set("annotations", annotations);
        set("truth", truth);
        set("class_count", class_count);
        set("workers", workers);
    }
};

void add_common_flags(CLI::App* cmd, FlagOverrides& flags) {
    cmd->add_option("--config", flags.config_path, "key = value configuration file");
    cmd->add_option("--seed", flags.seed, "master random seed");
    cmd->add_option("--out", flags.out, "output directory");
    cmd->add_option("--set", flags.raw_sets, "override any config key (key=value)");
}

quorum::ExperimentConfig load_config(const FlagOverrides& flags) {
    quorum::ConfigMap map;
    if (!flags.config_path.empty()) {
        map = quorum::parse_config_file(flags.config_path);
    }
    flags.apply(map);
    return quorum::config_from_map(map);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive multi-expert stream labeling benchmark"};
    app.require_subcommand(1);

    FlagOverrides run_flags;
    CLI::App* run_cmd = app.add_subcommand(
        "run", "run the full policy sweep and write results.csv / summary.csv");
    add_common_flags(run_cmd, run_flags);
    run_cmd->add_option("--strategy", run_flags.strategy,
                        "comma list of strategies (auer,greedy,random)");
    run_cmd->add_option("--mode", run_flags.mode, "comma list of modes (adaptive,baseline)");
    run_cmd->add_option("--tau", run_flags.tau, "comma list of confidence thresholds");
    run_cmd->add_option("--q", run_flags.q, "comma list of baseline query counts");
    run_cmd->add_option("--replicas", run_flags.replicas, "bootstrap replica count");
    run_cmd->add_option("--stream-length", run_flags.stream_length,
                        "items per replica stream (default: two thirds of the data)");
    run_cmd->add_option("--annotations", run_flags.annotations, "annotations csv path");
    run_cmd->add_option("--truth", run_flags.truth, "ground truth csv path");
    run_cmd->add_option("--class-count", run_flags.class_count,
                        "number of classes for file datasets");
    run_cmd->add_option("--workers", run_flags.workers, "worker thread count");

    FlagOverrides synth_flags;
    CLI::App* synth_cmd = app.add_subcommand(
        "synth", "write annotations.csv / truth.csv for a synthetic coalition");
    add_common_flags(synth_cmd, synth_flags);

    std::string report_results;
    std::string report_config;
    std::string report_out = "report";
    int report_window = -1;
    double report_tau = -1.0;
    CLI::App* report_cmd =
        app.add_subcommand("report", "aggregate a results file and render charts");
    report_cmd->add_option("results", report_results, "path to results.csv")->required();
    report_cmd->add_option("--config", report_config,
                           "configuration file (for report.window / report.tau)");
    report_cmd->add_option("--out", report_out, "output directory");
    report_cmd->add_option("--window", report_window,
                           "smoothing window for the time plot (default max(5, N/50))");
    report_cmd->add_option("--tau", report_tau,
                           "threshold highlighted in the time plot");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run_cmd->parsed()) {
            quorum::cmd_run(load_config(run_flags));
        } else if (synth_cmd->parsed()) {
            quorum::cmd_synth(load_config(synth_flags));
        } else if (report_cmd->parsed()) {
            int window = report_window;
            double tau = report_tau;
            if (!report_config.empty()) {
                const auto map = quorum::parse_config_file(report_config);
                if (window < 0) {
                    window = static_cast<int>(quorum::config_int(map, "report.window", 0));
                }
                if (tau < 0) tau = quorum::config_double(map, "report.tau", 0.9);
            }
            quorum::cmd_report(report_results, report_out, window < 0 ? 0 : window,
                               tau < 0 ? 0.9 : tau);
        }
    } catch (const quorum::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
