#include "quorum/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "quorum/metrics.hpp"
#include "quorum/rng.hpp"
#include "quorum/svg_plot.hpp"

namespace quorum {

namespace {

constexpr std::uint64_t kStreamDomain = 0x7ea5ULL; // bootstrap sampling
constexpr std::uint64_t kEngineDomain = 0xe41eULL; // per-replica engine rng
constexpr std::uint64_t kAccuracyDomain = 0xaccULL; // synthetic accuracy draws

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "annotations", "truth", "class_count", "replicas", "stream_length",
        "tau_grid", "q_grid", "strategies", "modes", "auer_exploration",
        "class_prior", "seed", "workers", "out",
        "em.tolerance", "em.max_iterations", "em.warm_start", "em.warm_max_iterations",
        "report.window", "report.tau",
        "synthetic.experts", "synthetic.items", "synthetic.classes",
        "synthetic.accuracies", "synthetic.accuracy_range", "synthetic.availability",
        "synthetic.easy_fraction", "synthetic.difficulty_delta",
        "synthetic.class_prior", "synthetic.seed",
    };
    return keys;
}

// Singular spellings are accepted as aliases for the grid keys, with the
// same comma-list values.
ConfigMap canonicalize(ConfigMap map) {
    static const std::map<std::string, std::string> aliases = {
        {"tau", "tau_grid"}, {"q", "q_grid"}, {"strategy", "strategies"}, {"mode", "modes"},
    };
    for (const auto& [alias, canonical] : aliases) {
        const auto it = map.find(alias);
        if (it == map.end()) continue;
        if (map.count(canonical)) {
            throw ConfigError("both '" + alias + "' and '" + canonical + "' are set");
        }
        map[canonical] = it->second;
        map.erase(alias);
    }
    return map;
}

void run_workers(std::size_t task_count, int workers,
                 const std::function<void(std::size_t)>& task) {
    if (workers <= 0) {
        workers = static_cast<int>(std::thread::hardware_concurrency());
        if (workers <= 0) workers = 2;
    }
    workers = std::min<int>(workers, static_cast<int>(task_count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < task_count; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= task_count) return;
                try {
                    task(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next.store(task_count);
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

} // namespace

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    char buf[64];
    const auto result = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, result.ptr);
}

std::vector<double> default_tau_grid() {
    std::vector<double> grid;
    for (int i = 1; i <= 9; ++i) {
        grid.push_back(static_cast<double>(i) / 10.0);
    }
    for (int n = 2; n <= 15; ++n) {
        grid.push_back(1.0 - std::pow(10.0, -n));
    }
    grid.push_back(1.1);
    return grid;
}

ExperimentConfig config_from_map(const ConfigMap& raw_map) {
    const ConfigMap map = canonicalize(raw_map);
    for (const auto& [key, value] : map) {
        if (!known_keys().count(key)) {
            throw ConfigError("unknown config key: " + key);
        }
    }

    ExperimentConfig config;
    config.annotations_path = config_string(map, "annotations", "");
    config.truth_path = config_string(map, "truth", "");
    config.class_count = static_cast<int>(config_int(map, "class_count", 0));
    config.replicas = static_cast<int>(config_int(map, "replicas", 100));
    config.stream_length = config_int(map, "stream_length", 0);
    config.seed = static_cast<std::uint64_t>(config_int(map, "seed", 0));
    config.workers = static_cast<int>(config_int(map, "workers", 0));
    config.out_dir = config_string(map, "out", "results");
    config.auer_exploration = config_double(map, "auer_exploration", 2.0);
    try {
        config.class_prior =
            prior_mode_from_name(config_string(map, "class_prior", "uniform"));
    } catch (const std::invalid_argument& err) {
        throw ConfigError(err.what());
    }

    config.em.tolerance = config_double(map, "em.tolerance", 1e-6);
    config.em.max_iterations =
        static_cast<int>(config_int(map, "em.max_iterations", 100));
    config.em.warm_start = config_bool(map, "em.warm_start", true);
    config.em.warm_max_iterations =
        static_cast<int>(config_int(map, "em.warm_max_iterations", 10));
    config.report_window = static_cast<int>(config_int(map, "report.window", 0));
    config.report_tau = config_double(map, "report.tau", 0.9);

    if (map.count("tau_grid")) {
        config.tau_grid = parse_double_list(map.at("tau_grid"), "tau_grid");
    }
    if (map.count("q_grid")) {
        for (long long q : parse_int_list(map.at("q_grid"), "q_grid")) {
            if (q < 1) throw ConfigError("q_grid: entries must be >= 1");
            config.q_grid.push_back(static_cast<int>(q));
        }
    }
    if (map.count("strategies")) {
        config.strategies.clear();
        std::stringstream ss(map.at("strategies"));
        std::string name;
        while (std::getline(ss, name, ',')) {
            try {
                config.strategies.push_back(strategy_from_name(name));
            } catch (const std::invalid_argument& err) {
                throw ConfigError(err.what());
            }
        }
        if (config.strategies.empty()) throw ConfigError("strategies: empty list");
    }
    if (map.count("modes")) {
        config.modes.clear();
        std::stringstream ss(map.at("modes"));
        std::string name;
        while (std::getline(ss, name, ',')) {
            try {
                config.modes.push_back(mode_from_name(name));
            } catch (const std::invalid_argument& err) {
                throw ConfigError(err.what());
            }
        }
        if (config.modes.empty()) throw ConfigError("modes: empty list");
    }

    if (map.count("synthetic.experts")) {
        SyntheticSpec spec;
        spec.experts = static_cast<int>(config_int(map, "synthetic.experts", 0));
        spec.items = config_int(map, "synthetic.items", 0);
        spec.class_count = static_cast<int>(config_int(map, "synthetic.classes", 0));
        spec.easy_fraction = config_double(map, "synthetic.easy_fraction", 0.5);
        spec.difficulty_delta = config_double(map, "synthetic.difficulty_delta", 0.0);
        spec.seed = static_cast<std::uint64_t>(
            config_int(map, "synthetic.seed", static_cast<long long>(config.seed)));

        if (map.count("synthetic.accuracies")) {
            spec.accuracies =
                parse_double_list(map.at("synthetic.accuracies"), "synthetic.accuracies");
        } else if (map.count("synthetic.accuracy_range")) {
            const auto [lo, hi] =
                parse_range(map.at("synthetic.accuracy_range"), "synthetic.accuracy_range");
            Rng rng(mix_seed(spec.seed, kAccuracyDomain));
            spec.accuracies.resize(static_cast<std::size_t>(std::max(spec.experts, 0)));
            for (double& a : spec.accuracies) a = rng.uniform(lo, hi);
        } else {
            throw ConfigError(
                "synthetic source needs synthetic.accuracies or synthetic.accuracy_range");
        }
        if (map.count("synthetic.availability")) {
            spec.availability =
                parse_double_list(map.at("synthetic.availability"), "synthetic.availability");
            if (spec.availability.size() == 1) {
                spec.availability.assign(static_cast<std::size_t>(std::max(spec.experts, 0)),
                                         spec.availability[0]);
            }
        } else {
            spec.availability.assign(static_cast<std::size_t>(std::max(spec.experts, 0)), 1.0);
        }
        if (map.count("synthetic.class_prior")) {
            spec.class_prior =
                parse_double_list(map.at("synthetic.class_prior"), "synthetic.class_prior");
        } else if (spec.class_count > 0) {
            spec.class_prior.assign(static_cast<std::size_t>(spec.class_count),
                                    1.0 / static_cast<double>(spec.class_count));
        }
        config.synthetic = std::move(spec);
        config.class_count = config.synthetic->class_count;
    }

    if (config.replicas < 1) throw ConfigError("replicas must be >= 1");
    if (config.auer_exploration < 0.0) {
        throw ConfigError("auer_exploration must be >= 0");
    }
    if (!config.synthetic && config.annotations_path.empty()) {
        throw ConfigError("no dataset source: set 'annotations' or the synthetic.* keys");
    }
    if (!config.synthetic && config.class_count < 2) {
        throw ConfigError("file datasets require class_count >= 2");
    }
    for (double tau : config.tau_grid) {
        if (tau <= 0.0) throw ConfigError("tau_grid: thresholds must be positive");
    }
    return config;
}

Dataset resolve_dataset(const ExperimentConfig& config) {
    if (config.synthetic) {
        try {
            return generate_synthetic(*config.synthetic);
        } catch (const std::invalid_argument& err) {
            throw ConfigError(err.what());
        }
    }
    return load_dataset(config.annotations_path,
                        config.truth_path.empty()
                            ? std::nullopt
                            : std::optional<std::string>(config.truth_path),
                        config.class_count);
}

std::vector<PolicySpec> build_policies(const ExperimentConfig& config, int coalition_size) {
    std::vector<double> taus = config.tau_grid.empty() ? default_tau_grid() : config.tau_grid;
    std::sort(taus.begin(), taus.end());
    std::vector<int> qs = config.q_grid;
    if (qs.empty()) {
        for (int q = 1; q <= coalition_size; ++q) qs.push_back(q);
    }
    std::sort(qs.begin(), qs.end());

    std::vector<PolicySpec> policies;
    for (Strategy strategy : config.strategies) {
        for (Mode mode : config.modes) {
            if (mode == Mode::Adaptive) {
                for (double tau : taus) {
                    policies.push_back({strategy, mode, tau});
                }
            } else {
                for (int q : qs) {
                    if (q > coalition_size) continue;
                    policies.push_back({strategy, mode, static_cast<double>(q)});
                }
            }
        }
    }
    return policies;
}

ExperimentResults run_experiment(const Dataset& dataset, const ExperimentConfig& config) {
    const DatasetOracle oracle(dataset);
    const std::int64_t stream_length =
        config.stream_length > 0 ? config.stream_length
                                 : std::max<std::int64_t>(1, dataset.item_count() * 2 / 3);

    ExperimentResults results;
    results.policies = build_policies(config, dataset.expert_count());
    results.replicas = config.replicas;
    results.stream_length = stream_length;
    results.runs.resize(results.policies.size() * static_cast<std::size_t>(config.replicas));

    const auto streams =
        bootstrap_streams(dataset, config.replicas, stream_length,
                          mix_seed(config.seed, kStreamDomain));

    const std::size_t task_count = results.runs.size();
    run_workers(task_count, config.workers, [&](std::size_t task) {
        const std::size_t policy_index = task / static_cast<std::size_t>(config.replicas);
        const int replica = static_cast<int>(task % static_cast<std::size_t>(config.replicas));
        const PolicySpec& policy = results.policies[policy_index];

        PolicyConfig engine_policy;
        engine_policy.mode = policy.mode;
        engine_policy.ranking.kind = policy.strategy;
        engine_policy.ranking.auer_exploration = config.auer_exploration;
        engine_policy.class_prior = config.class_prior;
        if (policy.mode == Mode::Adaptive) {
            engine_policy.tau = policy.param;
        } else {
            engine_policy.fixed_queries = static_cast<int>(policy.param);
        }

        const StreamResult stream_result =
            process_stream(oracle, streams[static_cast<std::size_t>(replica)], engine_policy,
                           config.em, mix_seed(config.seed, kEngineDomain,
                                               static_cast<std::uint64_t>(replica)));

        RunStats stats;
        stats.cost = stream_result.mean_cost;
        stats.accuracy = dataset.has_truth()
                             ? accuracy(stream_result.decisions, dataset.ground_truth)
                             : std::numeric_limits<double>::quiet_NaN();
        stats.gini = gini(query_counts(stream_result.decisions, dataset.expert_count()));
        stats.query_trace.reserve(stream_result.decisions.size());
        for (const Decision& d : stream_result.decisions) {
            stats.query_trace.push_back(d.cost());
        }
        results.runs[task] = std::move(stats);
    });
    return results;
}

std::vector<ResultRow> result_rows(const ExperimentResults& results) {
    std::vector<ResultRow> rows;
    rows.reserve(results.runs.size());
    for (std::size_t p = 0; p < results.policies.size(); ++p) {
        const PolicySpec& policy = results.policies[p];
        for (int r = 0; r < results.replicas; ++r) {
            const RunStats& stats = results.run(p, r);
            rows.push_back({strategy_name(policy.strategy), mode_name(policy.mode),
                            policy.param, r, stats.accuracy, stats.cost, stats.gini});
        }
    }
    return rows;
}

namespace {

std::string format_param(const std::string& mode, double param) {
    if (mode == "baseline") {
        return std::to_string(static_cast<long long>(param));
    }
    return format_double(param);
}

} // namespace

void write_results_csv(const std::string& path, const std::vector<ResultRow>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write results file: " + path);
    out << "strategy,mode,param,replica,accuracy,mean_cost,gini\n";
    for (const ResultRow& row : rows) {
        out << row.strategy << ',' << row.mode << ',' << format_param(row.mode, row.param)
            << ',' << row.replica << ',' << format_double(row.accuracy) << ','
            << format_double(row.cost) << ',' << format_double(row.gini) << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<ResultRow> read_results_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open results file: " + path);
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line) ||
        line != "strategy,mode,param,replica,accuracy,mean_cost,gini") {
        throw std::runtime_error(path + ":1: expected results header");
    }
    ++line_no;

    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 7) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected 7 fields");
        }
        try {
            ResultRow row;
            row.strategy = fields[0];
            row.mode = fields[1];
            row.param = std::stod(fields[2]);
            row.replica = std::stoi(fields[3]);
            row.accuracy = std::stod(fields[4]);
            row.cost = std::stod(fields[5]);
            row.gini = std::stod(fields[6]);
            rows.push_back(std::move(row));
        } catch (const std::exception&) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": malformed numeric field");
        }
    }
    if (rows.empty()) {
        throw std::runtime_error(path + ": no result rows");
    }
    return rows;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
    // Group rows per policy, preserving first-appearance order before the
    // final cost sort so ties stay deterministic.
    struct Group {
        std::string strategy, mode;
        double param;
        std::vector<double> accuracy, cost, gini;
    };
    std::vector<Group> groups;
    for (const ResultRow& row : rows) {
        auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
            return g.strategy == row.strategy && g.mode == row.mode && g.param == row.param;
        });
        if (it == groups.end()) {
            groups.push_back({row.strategy, row.mode, row.param, {}, {}, {}});
            it = std::prev(groups.end());
        }
        it->accuracy.push_back(row.accuracy);
        it->cost.push_back(row.cost);
        it->gini.push_back(row.gini);
    }

    const auto mean = [](const std::vector<double>& v) {
        double total = 0.0;
        for (double x : v) total += x;
        return total / static_cast<double>(v.size());
    };
    const auto interval = [](const std::vector<double>& v) -> std::pair<double, double> {
        // accuracy is NaN throughout when the dataset has no ground truth
        for (double x : v) {
            if (std::isnan(x)) {
                return {std::numeric_limits<double>::quiet_NaN(),
                        std::numeric_limits<double>::quiet_NaN()};
            }
        }
        if (v.size() < 2) return {v.front(), v.front()};
        return ci95(v);
    };

    std::vector<SummaryRow> summary;
    summary.reserve(groups.size());
    for (const Group& g : groups) {
        SummaryRow row;
        row.strategy = g.strategy;
        row.mode = g.mode;
        row.param = g.param;
        row.accuracy_mean = mean(g.accuracy);
        std::tie(row.accuracy_low, row.accuracy_high) = interval(g.accuracy);
        row.cost_mean = mean(g.cost);
        std::tie(row.cost_low, row.cost_high) = interval(g.cost);
        row.gini_mean = mean(g.gini);
        std::tie(row.gini_low, row.gini_high) = interval(g.gini);
        summary.push_back(std::move(row));
    }
    std::stable_sort(summary.begin(), summary.end(),
                     [](const SummaryRow& a, const SummaryRow& b) {
                         if (a.cost_mean != b.cost_mean) return a.cost_mean < b.cost_mean;
                         if (a.strategy != b.strategy) return a.strategy < b.strategy;
                         if (a.mode != b.mode) return a.mode < b.mode;
                         return a.param < b.param;
                     });
    return summary;
}

void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write summary file: " + path);
    out << "strategy,mode,param,accuracy_mean,accuracy_low,accuracy_high,"
        << "cost_mean,cost_low,cost_high,gini_mean,gini_low,gini_high\n";
    for (const SummaryRow& row : rows) {
        out << row.strategy << ',' << row.mode << ',' << format_param(row.mode, row.param)
            << ',' << format_double(row.accuracy_mean) << ','
            << format_double(row.accuracy_low) << ',' << format_double(row.accuracy_high)
            << ',' << format_double(row.cost_mean) << ',' << format_double(row.cost_low)
            << ',' << format_double(row.cost_high) << ',' << format_double(row.gini_mean)
            << ',' << format_double(row.gini_low) << ',' << format_double(row.gini_high)
            << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_queries_csv(const std::string& path, const ExperimentResults& results) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write queries file: " + path);
    out << "strategy,mode,param,position,mean_queries\n";
    for (std::size_t p = 0; p < results.policies.size(); ++p) {
        const PolicySpec& policy = results.policies[p];
        for (std::int64_t pos = 0; pos < results.stream_length; ++pos) {
            double total = 0.0;
            for (int r = 0; r < results.replicas; ++r) {
                total += results.run(p, r).query_trace[static_cast<std::size_t>(pos)];
            }
            out << strategy_name(policy.strategy) << ',' << mode_name(policy.mode) << ','
                << format_param(mode_name(policy.mode), policy.param) << ',' << pos + 1
                << ',' << format_double(total / results.replicas) << '\n';
        }
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

void cmd_run(const ExperimentConfig& config) {
    const Dataset dataset = resolve_dataset(config);
    const ExperimentResults results = run_experiment(dataset, config);

    std::filesystem::create_directories(config.out_dir);
    const auto rows = result_rows(results);
    write_results_csv(config.out_dir + "/results.csv", rows);
    write_summary_csv(config.out_dir + "/summary.csv", summarize(rows));
    write_queries_csv(config.out_dir + "/queries.csv", results);
}

void cmd_synth(const ExperimentConfig& config) {
    if (!config.synthetic) {
        throw ConfigError("synth needs the synthetic.* keys");
    }
    const Dataset dataset = resolve_dataset(config);
    std::filesystem::create_directories(config.out_dir);
    save_dataset(dataset, config.out_dir + "/annotations.csv",
                 config.out_dir + "/truth.csv");
}

void cmd_report(const std::string& results_path, const std::string& out_dir, int window,
                double report_tau) {
    const auto rows = read_results_csv(results_path);
    const auto summary = summarize(rows);
    std::filesystem::create_directories(out_dir);
    write_summary_csv(out_dir + "/summary.csv", summary);

    // Accuracy against cost, one curve per strategy x mode.
    std::vector<Series> curves;
    for (const SummaryRow& row : summary) {
        const std::string name = row.strategy + " " + row.mode;
        auto it = std::find_if(curves.begin(), curves.end(),
                               [&](const Series& s) { return s.name == name; });
        if (it == curves.end()) {
            curves.push_back({name, {}, {}, {}, {}, true});
            it = std::prev(curves.end());
        }
        it->x.push_back(row.cost_mean);
        it->y.push_back(row.accuracy_mean);
        it->band_low.push_back(row.accuracy_low);
        it->band_high.push_back(row.accuracy_high);
    }
    std::sort(curves.begin(), curves.end(),
              [](const Series& a, const Series& b) { return a.name < b.name; });
    const bool have_accuracy =
        !rows.empty() && std::none_of(rows.begin(), rows.end(), [](const ResultRow& r) {
            return std::isnan(r.accuracy);
        });
    if (have_accuracy) {
        write_line_chart(out_dir + "/accuracy_vs_cost.svg",
                         {"Labeling accuracy against mean queries per item",
                          "mean expert queries per item", "accuracy"},
                         curves);
    }

    // Queries over time, read from the sibling queries.csv when present.
    const auto queries_path =
        std::filesystem::path(results_path).parent_path() / "queries.csv";
    if (std::filesystem::exists(queries_path)) {
        std::ifstream in(queries_path);
        std::string line;
        std::getline(in, line); // header
        struct Trace {
            std::string strategy;
            double param;
            std::vector<double> values;
        };
        std::vector<Trace> traces;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::stringstream ss(line);
            std::string strategy, mode, param, pos, value;
            std::getline(ss, strategy, ',');
            std::getline(ss, mode, ',');
            std::getline(ss, param, ',');
            std::getline(ss, pos, ',');
            std::getline(ss, value, ',');
            if (mode != "adaptive") continue;
            const double tau = std::stod(param);
            auto it = std::find_if(traces.begin(), traces.end(), [&](const Trace& t) {
                return t.strategy == strategy && t.param == tau;
            });
            if (it == traces.end()) {
                traces.push_back({strategy, tau, {}});
                it = std::prev(traces.end());
            }
            it->values.push_back(std::stod(value));
        }

        std::vector<Series> time_series;
        for (const std::string strategy : {"auer", "greedy", "random"}) {
            const Trace* best = nullptr;
            for (const Trace& t : traces) {
                if (t.strategy != strategy) continue;
                if (!best ||
                    std::abs(t.param - report_tau) < std::abs(best->param - report_tau)) {
                    best = &t;
                }
            }
            if (!best || best->values.empty()) continue;
            const int n = static_cast<int>(best->values.size());
            int w = window > 0 ? window : std::max(5, n / 50);
            w = std::min(w, n);
            const auto smoothed = moving_average(best->values, w);
            Series series;
            series.name = strategy + " tau=" + format_double(best->param);
            series.markers = false;
            for (std::size_t i = 0; i < smoothed.size(); ++i) {
                series.x.push_back(static_cast<double>(i + 1));
                series.y.push_back(smoothed[i]);
            }
            time_series.push_back(std::move(series));
        }
        if (!time_series.empty()) {
            write_line_chart(out_dir + "/queries_over_time.svg",
                             {"Mean expert queries over the stream", "stream position",
                              "mean queries (moving average)"},
                             time_series);
        }
    }
}

} // namespace quorum
