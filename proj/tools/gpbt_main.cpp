#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "gpbt/config.hpp"
#include "gpbt/errors.hpp"
#include "gpbt/harness.hpp"

namespace {

// Exit codes: 0 ok, 2 configuration/validation, 3 I/O, 4 malformed data,
// 1 anything else.
int run_guarded(const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const gpbt::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const gpbt::IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return 3;
    } catch (const gpbt::SerializationError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Population-based hyperparameter training harness"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::vector<std::uint64_t> seeds;
    std::vector<std::string> inputs;
    std::string out_path;

    auto* run_cmd = app.add_subcommand(
        "run", "Run every configured (optimizer, seed) cell");
    run_cmd->add_option("--config", config_path, "experiment config file")
        ->required();
    run_cmd->add_option("--out", out_dir, "output directory override");
    run_cmd->add_option("--seeds", seeds, "seed list override")
        ->delimiter(',');

    auto* compare_cmd = app.add_subcommand(
        "compare", "Compare optimizers across summary files");
    compare_cmd->add_option("--inputs", inputs, "summary.csv files")
        ->required()
        ->expected(-1);
    compare_cmd->add_option("--out", out_path, "comparison table output")
        ->required();

    auto* plot_cmd = app.add_subcommand(
        "plot-data", "Emit per-optimizer mean/std training curves");
    plot_cmd->add_option("--inputs", inputs, "run cell directories")
        ->required()
        ->expected(-1);
    plot_cmd->add_option("--out", out_path, "output directory")->required();

    auto* validate_cmd =
        app.add_subcommand("validate", "Schema-check a config file");
    validate_cmd->add_option("--config", config_path, "experiment config file")
        ->required();

    CLI11_PARSE(app, argc, argv);

    if (run_cmd->parsed()) {
        return run_guarded([&] {
            const auto cfg = gpbt::load_config(config_path);
            std::optional<std::filesystem::path> out;
            if (!out_dir.empty()) {
                out = out_dir;
            }
            std::optional<std::vector<std::uint64_t>> seed_override;
            if (!seeds.empty()) {
                seed_override = seeds;
            }
            const auto result = gpbt::run_experiment(cfg, out, seed_override);
            std::cout << "run directory: " << result.run_dir.string() << '\n';
            for (const auto& row : result.rows) {
                std::cout << row.optimizer << " seed " << row.seed
                          << ": best_mean_reward " << row.best_mean_reward
                          << " (agent " << row.best_agent << ", "
                          << row.updates_applied << " updates)\n";
            }
        });
    }
    if (compare_cmd->parsed()) {
        return run_guarded([&] {
            std::vector<std::filesystem::path> paths(inputs.begin(),
                                                     inputs.end());
            const auto cmp = gpbt::compare_summaries(paths);
            gpbt::write_comparison_csv(out_path, cmp);
            for (const auto& st : cmp.stats) {
                std::cout << st.optimizer << ": max " << st.max << ", median "
                          << st.median << ", mean " << st.mean << " +- "
                          << st.stddev << " (" << st.seeds << " seeds)\n";
            }
            for (const auto& d : cmp.diffs) {
                std::cout << d.a << " vs " << d.b << ": " << d.display << '\n';
            }
        });
    }
    if (plot_cmd->parsed()) {
        return run_guarded([&] {
            std::vector<gpbt::RunDirData> runs;
            runs.reserve(inputs.size());
            for (const auto& dir : inputs) {
                runs.push_back(gpbt::read_run_dir(dir));
            }
            gpbt::emit_plot_data(runs, out_path);
            std::cout << "plot data written to " << out_path << '\n';
        });
    }
    // validate
    return run_guarded([&] {
        gpbt::load_config(config_path);
        std::cout << "config ok: " << config_path << '\n';
    });
}
