#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gpbt/config.hpp"

namespace gpbt {

struct SummaryRow {
    std::string optimizer;
    std::uint64_t seed = 0;
    double best_mean_reward = 0.0;
    AgentId best_agent = 0;
    std::uint64_t updates_applied = 0;
    double wall_seconds = 0.0;
};

// Mean of the best agent's last `window` recorded scores, the best agent
// being the one maximizing that same mean. Fewer records than the window
// means averaging what exists. Throws std::domain_error on an empty run.
double best_mean_reward(const std::vector<std::vector<PerfRecord>>& series,
                        std::size_t window = 10);
AgentId best_agent_by_metric(const std::vector<std::vector<PerfRecord>>& series,
                             std::size_t window = 10);

struct ExperimentResult {
    std::filesystem::path run_dir;
    std::vector<SummaryRow> rows;
};

// Executes every (optimizer x seed) cell into a fresh timestamped
// subdirectory of the output dir: per cell an event log, a time-series CSV
// and a meta file, plus one summary CSV for the grid. Prior outputs are
// never touched.
ExperimentResult run_experiment(
    const ExperimentConfig& cfg,
    const std::optional<std::filesystem::path>& out_override = std::nullopt,
    const std::optional<std::vector<std::uint64_t>>& seeds_override =
        std::nullopt);

struct OptimizerStats {
    std::string optimizer;
    std::size_t seeds = 0;
    double max = 0.0;
    double median = 0.0;
    double mean = 0.0;
    double stddev = 0.0;  // population std across seeds
};

struct PairwiseDiff {
    std::string a;
    std::string b;
    double pct = 0.0;     // 100 * (max_a - max_b) / |max_b|
    std::string display;  // "+24%", "-5%", or the approx sign below 1%
};

struct Comparison {
    std::vector<OptimizerStats> stats;
    std::vector<PairwiseDiff> diffs;  // all ordered pairs
};

Comparison compare_rows(const std::vector<SummaryRow>& rows);
Comparison compare_summaries(
    const std::vector<std::filesystem::path>& summary_csvs);
void write_comparison_csv(const std::filesystem::path& path,
                          const Comparison& cmp);

// Percentage rendering used by the comparison table: differences below 1%
// collapse to the approx sign.
std::string format_pct(double pct);

// Summary CSV round-trip.
void write_summary_csv(const std::filesystem::path& path,
                       const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> read_summary_csv(const std::filesystem::path& path);

// One completed run directory (meta + per-agent series) as read back for
// plot-data.
struct RunDirData {
    std::string optimizer;
    std::uint64_t seed = 0;
    std::int64_t granularity = 1;
    std::vector<std::vector<PerfRecord>> series;
};

RunDirData read_run_dir(const std::filesystem::path& cell_dir);

// Per optimizer, a columnar file step,mean_best_score,std_best_score where
// the per-seed curves are the running best-mean metric resampled onto a
// uniform step grid by last-observation-carried-forward.
void emit_plot_data(const std::vector<RunDirData>& runs,
                    const std::filesystem::path& out_dir,
                    std::size_t window = 10);

}  // namespace gpbt
