#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "quorum/config.hpp"
#include "quorum/data.hpp"
#include "quorum/engine.hpp"

namespace quorum {

/// One point of the benchmark sweep: a strategy, a mode and the mode's
/// parameter (the confidence threshold for adaptive, the query count for
/// baseline).
struct PolicySpec {
    Strategy strategy = Strategy::Auer;
    Mode mode = Mode::Adaptive;
    double param = 0.0;
};

/// Everything a benchmark invocation needs. Values come from the flat config
/// file, overridden by command-line flags.
struct ExperimentConfig {
    // dataset source: annotation files, or a synthetic coalition
    std::string annotations_path;
    std::string truth_path;
    std::optional<SyntheticSpec> synthetic;
    int class_count = 0; // required for file sources

    int replicas = 100;
    std::int64_t stream_length = 0; // 0 = two thirds of the dataset
    std::vector<double> tau_grid;   // empty = default grid
    std::vector<int> q_grid;        // empty = 1..K
    std::vector<Strategy> strategies{Strategy::Auer, Strategy::Greedy, Strategy::Random};
    std::vector<Mode> modes{Mode::Adaptive, Mode::Baseline};

    EmConfig em;
    double auer_exploration = 2.0;
    PriorMode class_prior = PriorMode::Uniform;
    std::uint64_t seed = 0;
    int workers = 0; // 0 = hardware concurrency
    std::string out_dir = "results";
    int report_window = 0;   // 0 = max(5, positions / 50)
    double report_tau = 0.9; // threshold highlighted in the time plot
};

/// The benchmark threshold grid: {0.1,...,0.9}, {1 - 10^-n : n = 2..15},
/// and 1.1 to force exhaustion of the coalition.
std::vector<double> default_tau_grid();

/// Builds ExperimentConfig from parsed key=value pairs; unknown keys are
/// rejected so typos fail fast.
ExperimentConfig config_from_map(const ConfigMap& map);

/// Loads the annotation files or generates the synthetic coalition.
Dataset resolve_dataset(const ExperimentConfig& config);

/// The sweep's policy list in deterministic order.
std::vector<PolicySpec> build_policies(const ExperimentConfig& config, int coalition_size);

struct RunStats {
    double accuracy = 0.0; // NaN when the dataset has no ground truth
    double cost = 0.0;
    double gini = 0.0;
    std::vector<int> query_trace; // per-position query counts
};

struct ExperimentResults {
    std::vector<PolicySpec> policies;
    int replicas = 0;
    std::int64_t stream_length = 0;
    std::vector<RunStats> runs; // policy-major: runs[p * replicas + r]

    const RunStats& run(std::size_t policy, int replica) const {
        return runs[policy * static_cast<std::size_t>(replicas) +
                    static_cast<std::size_t>(replica)];
    }
};

/// Runs every policy on every bootstrap replica. Replica streams are shared
/// across policies and each run's rng stream is derived from (seed, replica),
/// so the output is identical for any worker count.
ExperimentResults run_experiment(const Dataset& dataset, const ExperimentConfig& config);

/// One row of results.csv.
struct ResultRow {
    std::string strategy;
    std::string mode;
    double param = 0.0;
    int replica = 0;
    double accuracy = 0.0;
    double cost = 0.0;
    double gini = 0.0;
};

std::vector<ResultRow> result_rows(const ExperimentResults& results);
void write_results_csv(const std::string& path, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_results_csv(const std::string& path);

/// Per-policy aggregate with 95% bootstrap intervals, ordered by mean cost.
struct SummaryRow {
    std::string strategy;
    std::string mode;
    double param = 0.0;
    double accuracy_mean = 0.0, accuracy_low = 0.0, accuracy_high = 0.0;
    double cost_mean = 0.0, cost_low = 0.0, cost_high = 0.0;
    double gini_mean = 0.0, gini_low = 0.0, gini_high = 0.0;
};

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);
void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows);

/// Replica-averaged query counts per stream position, one row per
/// (policy, position).
void write_queries_csv(const std::string& path, const ExperimentResults& results);

/// Full benchmark: resolve the dataset, run the sweep, write results.csv,
/// summary.csv and queries.csv under config.out_dir.
void cmd_run(const ExperimentConfig& config);

/// Writes annotations.csv and truth.csv for the configured synthetic
/// coalition under config.out_dir.
void cmd_synth(const ExperimentConfig& config);

/// Re-aggregates a results file into summary.csv and renders
/// accuracy_vs_cost.svg (plus queries_over_time.svg when a queries.csv
/// sibling exists) under out_dir.
void cmd_report(const std::string& results_path, const std::string& out_dir,
                int window = 0, double report_tau = 0.9);

/// Shortest round-trip decimal formatting, used everywhere results are
/// written so files are byte-stable.
std::string format_double(double value);

} // namespace quorum
