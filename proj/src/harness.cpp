#include "gpbt/harness.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "gpbt/errors.hpp"

namespace gpbt {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double agent_metric(const std::vector<PerfRecord>& history,
                    std::size_t window) {
    const std::size_t take = std::min(window, history.size());
    double sum = 0.0;
    for (std::size_t i = history.size() - take; i < history.size(); ++i) {
        sum += history[i].score;
    }
    return sum / static_cast<double>(take);
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    return out;
}

std::string utc_stamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y%m%dT%H%M%SZ", &tm);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

void write_event_log(const std::filesystem::path& path,
                     const std::vector<SchedulerEvent>& events) {
    auto out = open_out(path);
    for (const auto& e : events) {
        out << format_event_line(e) << '\n';
    }
}

void write_series_csv(const std::filesystem::path& path,
                      const RunArtifacts& artifacts,
                      const SearchSpace& space) {
    auto out = open_out(path);
    out << "wall_order,agent,step,score";
    for (const auto& d : space.dims()) {
        out << ",hp_" << d.name;
    }
    out << ",event\n";

    // Decision kind and post-decision vector per (agent, step). on_result
    // appends its events consecutively, so the last decision event wins.
    std::map<std::pair<AgentId, std::int64_t>,
             std::pair<std::string, std::vector<double>>>
        decisions;
    for (const auto& e : artifacts.events) {
        if (e.kind == EventKind::Continue || e.kind == EventKind::ExploitLearn ||
            e.kind == EventKind::Resample) {
            decisions[{e.agent, e.step}] = {event_kind_name(e.kind),
                                            e.hp_natural};
        }
    }

    struct Row {
        std::uint64_t wall_order;
        AgentId agent;
        const PerfRecord* rec;
    };
    std::vector<Row> rows;
    for (AgentId a = 0; a < artifacts.series.size(); ++a) {
        for (const auto& rec : artifacts.series[a]) {
            rows.push_back(Row{rec.wall_order, a, &rec});
        }
    }
    std::sort(rows.begin(), rows.end(),
              [](const Row& x, const Row& y) {
                  return x.wall_order < y.wall_order;
              });

    for (const auto& row : rows) {
        out << row.wall_order << ',' << row.agent << ',' << row.rec->step << ','
            << fmt_double(row.rec->score);
        const auto it = decisions.find({row.agent, row.rec->step});
        if (it != decisions.end()) {
            for (double h : it->second.second) {
                out << ',' << fmt_double(h);
            }
            out << ',' << it->second.first << '\n';
        } else {
            for (std::size_t i = 0; i < space.size(); ++i) {
                out << ',';
            }
            out << ",report\n";
        }
    }
}

void write_meta(const std::filesystem::path& path, const std::string& name,
                OptimizerKind opt, std::uint64_t seed,
                std::int64_t granularity) {
    auto out = open_out(path);
    out << "experiment: " << name << '\n'
        << "optimizer: " << optimizer_name(opt) << '\n'
        << "seed: " << seed << '\n'
        << "report_granularity: " << granularity << '\n';
}

}  // namespace

double best_mean_reward(const std::vector<std::vector<PerfRecord>>& series,
                        std::size_t window) {
    double best = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (const auto& history : series) {
        if (history.empty()) {
            continue;
        }
        best = std::max(best, agent_metric(history, window));
        any = true;
    }
    if (!any) {
        throw std::domain_error("best_mean_reward: run recorded no results");
    }
    return best;
}

AgentId best_agent_by_metric(const std::vector<std::vector<PerfRecord>>& series,
                             std::size_t window) {
    AgentId best = 0;
    double best_metric = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (AgentId a = 0; a < series.size(); ++a) {
        if (series[a].empty()) {
            continue;
        }
        const double m = agent_metric(series[a], window);
        if (!any || m > best_metric) {
            best = a;
            best_metric = m;
            any = true;
        }
    }
    if (!any) {
        throw std::domain_error("best_agent_by_metric: run recorded no results");
    }
    return best;
}

ExperimentResult run_experiment(
    const ExperimentConfig& cfg,
    const std::optional<std::filesystem::path>& out_override,
    const std::optional<std::vector<std::uint64_t>>& seeds_override) {
    validate_config(cfg);
    const std::vector<std::uint64_t>& seeds =
        seeds_override ? *seeds_override : cfg.seeds;
    if (seeds.empty()) {
        throw ConfigError("seeds: must be non-empty");
    }

    const SearchSpace space = space_from(cfg);
    const TrainableFactory factory = trainable_factory(cfg);

    const std::filesystem::path root =
        out_override ? *out_override : std::filesystem::path(cfg.output_dir);
    std::filesystem::path run_dir = root / (cfg.name + "-" + utc_stamp());
    for (int k = 1; std::filesystem::exists(run_dir); ++k) {
        run_dir = root / (cfg.name + "-" + utc_stamp() + "-" +
                          std::to_string(k));
    }
    std::error_code ec;
    std::filesystem::create_directories(run_dir, ec);
    if (ec) {
        throw IoError("cannot create " + run_dir.string() + ": " +
                      ec.message());
    }

    ExperimentResult result;
    result.run_dir = run_dir;
    for (OptimizerKind opt : cfg.optimizers) {
        for (std::uint64_t seed : seeds) {
            RunSpec spec{space,      scheduler_for(cfg, opt),
                         cfg.exec,   seed,
                         cfg.report_granularity, factory,
                         std::nullopt};
            const std::filesystem::path cell =
                run_dir / (std::string(optimizer_name(opt)) + "_seed" +
                           std::to_string(seed));
            std::filesystem::create_directories(cell, ec);
            if (ec) {
                throw IoError("cannot create " + cell.string() + ": " +
                              ec.message());
            }
            if (cfg.write_checkpoints) {
                spec.checkpoint_dir = cell / "checkpoints";
            }

            const RunArtifacts artifacts = run(spec);
            write_event_log(cell / "events.log", artifacts.events);
            write_series_csv(cell / "series.csv", artifacts, space);
            write_meta(cell / "meta.yaml", cfg.name, opt, seed,
                       cfg.report_granularity);

            SummaryRow row;
            row.optimizer = optimizer_name(opt);
            row.seed = seed;
            row.best_mean_reward = best_mean_reward(artifacts.series);
            row.best_agent = best_agent_by_metric(artifacts.series);
            row.updates_applied = artifacts.updates_applied;
            row.wall_seconds = artifacts.wall_seconds;
            result.rows.push_back(std::move(row));
        }
    }
    write_summary_csv(run_dir / "summary.csv", result.rows);
    return result;
}

std::string format_pct(double pct) {
    if (!std::isfinite(pct)) {
        return "n/a";
    }
    if (std::abs(pct) < 1.0) {
        return "≈";
    }
    const long long rounded = std::llround(pct);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%+lld%%", rounded);
    return buf;
}

Comparison compare_rows(const std::vector<SummaryRow>& rows) {
    std::vector<std::string> order;
    std::map<std::string, std::vector<const SummaryRow*>> groups;
    for (const auto& row : rows) {
        if (!groups.count(row.optimizer)) {
            order.push_back(row.optimizer);
        }
        groups[row.optimizer].push_back(&row);
    }
    if (order.size() < 2) {
        throw ConfigError(
            "comparison requires summaries from at least two optimizers");
    }
    std::optional<std::vector<std::uint64_t>> reference_seeds;
    for (const auto& name : order) {
        std::vector<std::uint64_t> seeds;
        for (const auto* r : groups[name]) {
            seeds.push_back(r->seed);
        }
        std::sort(seeds.begin(), seeds.end());
        if (!reference_seeds) {
            reference_seeds = seeds;
        } else if (*reference_seeds != seeds) {
            throw ConfigError("comparison requires identical seed sets; '" +
                              name + "' differs");
        }
    }

    Comparison cmp;
    std::map<std::string, double> maxima;
    for (const auto& name : order) {
        std::vector<double> vals;
        for (const auto* r : groups[name]) {
            vals.push_back(r->best_mean_reward);
        }
        std::sort(vals.begin(), vals.end());
        OptimizerStats st;
        st.optimizer = name;
        st.seeds = vals.size();
        st.max = vals.back();
        const std::size_t n = vals.size();
        st.median = n % 2 == 1 ? vals[n / 2]
                               : 0.5 * (vals[n / 2 - 1] + vals[n / 2]);
        st.mean = std::accumulate(vals.begin(), vals.end(), 0.0) /
                  static_cast<double>(n);
        double acc = 0.0;
        for (double v : vals) {
            acc += (v - st.mean) * (v - st.mean);
        }
        st.stddev = std::sqrt(acc / static_cast<double>(n));
        maxima[name] = st.max;
        cmp.stats.push_back(std::move(st));
    }
    for (const auto& a : order) {
        for (const auto& b : order) {
            if (a == b) {
                continue;
            }
            PairwiseDiff d;
            d.a = a;
            d.b = b;
            d.pct = 100.0 * (maxima[a] - maxima[b]) / std::abs(maxima[b]);
            d.display = format_pct(d.pct);
            cmp.diffs.push_back(std::move(d));
        }
    }
    return cmp;
}

Comparison compare_summaries(
    const std::vector<std::filesystem::path>& summary_csvs) {
    std::vector<SummaryRow> rows;
    for (const auto& path : summary_csvs) {
        auto part = read_summary_csv(path);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    return compare_rows(rows);
}

void write_comparison_csv(const std::filesystem::path& path,
                          const Comparison& cmp) {
    auto out = open_out(path);
    out << "optimizer,seeds,max,median,mean,std\n";
    for (const auto& st : cmp.stats) {
        out << st.optimizer << ',' << st.seeds << ',' << fmt_double(st.max)
            << ',' << fmt_double(st.median) << ',' << fmt_double(st.mean)
            << ',' << fmt_double(st.stddev) << '\n';
    }
    out << "\na,b,pct_of_maxima,display\n";
    for (const auto& d : cmp.diffs) {
        out << d.a << ',' << d.b << ',' << fmt_double(d.pct) << ','
            << d.display << '\n';
    }
}

void write_summary_csv(const std::filesystem::path& path,
                       const std::vector<SummaryRow>& rows) {
    auto out = open_out(path);
    out << "optimizer,seed,best_mean_reward,best_agent,updates_applied,"
           "wall_seconds\n";
    for (const auto& r : rows) {
        out << r.optimizer << ',' << r.seed << ','
            << fmt_double(r.best_mean_reward) << ',' << r.best_agent << ','
            << r.updates_applied << ',' << fmt_double(r.wall_seconds) << '\n';
    }
}

std::vector<SummaryRow> read_summary_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read " + path.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw SerializationError(path.string() + ": empty summary file");
    }
    std::vector<SummaryRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto f = split_csv_line(line);
        if (f.size() != 6) {
            throw SerializationError(path.string() +
                                     ": malformed summary row '" + line + "'");
        }
        SummaryRow r;
        try {
            r.optimizer = f[0];
            r.seed = std::stoull(f[1]);
            r.best_mean_reward = std::stod(f[2]);
            r.best_agent = std::stoull(f[3]);
            r.updates_applied = std::stoull(f[4]);
            r.wall_seconds = std::stod(f[5]);
        } catch (const std::exception&) {
            throw SerializationError(path.string() +
                                     ": malformed summary row '" + line + "'");
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

RunDirData read_run_dir(const std::filesystem::path& cell_dir) {
    RunDirData data;
    const auto meta_path = cell_dir / "meta.yaml";
    YAML::Node meta;
    try {
        meta = YAML::LoadFile(meta_path.string());
    } catch (const YAML::Exception&) {
        throw IoError("cannot read " + meta_path.string());
    }
    data.optimizer = meta["optimizer"].as<std::string>("");
    data.seed = meta["seed"].as<std::uint64_t>(0);
    data.granularity = meta["report_granularity"].as<std::int64_t>(1);
    if (data.optimizer.empty()) {
        throw SerializationError(meta_path.string() + ": missing optimizer");
    }

    std::ifstream in(cell_dir / "series.csv");
    if (!in) {
        throw IoError("cannot read " + (cell_dir / "series.csv").string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw SerializationError("empty series file in " + cell_dir.string());
    }
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto f = split_csv_line(line);
        if (f.size() < 5) {
            throw SerializationError(cell_dir.string() +
                                     ": malformed series row '" + line + "'");
        }
        PerfRecord rec;
        AgentId agent = 0;
        try {
            rec.wall_order = std::stoull(f[0]);
            agent = std::stoull(f[1]);
            rec.step = std::stoll(f[2]);
            rec.score = std::stod(f[3]);
        } catch (const std::exception&) {
            throw SerializationError(cell_dir.string() +
                                     ": malformed series row '" + line + "'");
        }
        if (agent >= data.series.size()) {
            data.series.resize(agent + 1);
        }
        data.series[agent].push_back(rec);
    }
    return data;
}

namespace {

// Running value of the summary metric at a step bound: per agent the mean
// of its last <=window scores recorded at steps <= bound, maximized over
// agents. NaN when nothing is recorded yet.
double running_best_mean(const std::vector<std::vector<PerfRecord>>& series,
                         std::int64_t bound, std::size_t window) {
    double best = std::numeric_limits<double>::quiet_NaN();
    for (const auto& history : series) {
        std::size_t end = 0;
        while (end < history.size() && history[end].step <= bound) {
            ++end;
        }
        if (end == 0) {
            continue;
        }
        const std::size_t take = std::min(window, end);
        double sum = 0.0;
        for (std::size_t i = end - take; i < end; ++i) {
            sum += history[i].score;
        }
        const double metric = sum / static_cast<double>(take);
        if (std::isnan(best) || metric > best) {
            best = metric;
        }
    }
    return best;
}

}  // namespace

void emit_plot_data(const std::vector<RunDirData>& runs,
                    const std::filesystem::path& out_dir, std::size_t window) {
    if (runs.empty()) {
        throw ConfigError("plot-data: no input runs");
    }
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw IoError("cannot create " + out_dir.string() + ": " +
                      ec.message());
    }

    std::vector<std::string> order;
    std::map<std::string, std::vector<const RunDirData*>> groups;
    for (const auto& run : runs) {
        if (!groups.count(run.optimizer)) {
            order.push_back(run.optimizer);
        }
        groups[run.optimizer].push_back(&run);
    }

    for (const auto& name : order) {
        const auto& group = groups[name];
        std::int64_t g = group.front()->granularity;
        std::int64_t max_step = 0;
        for (const auto* run : group) {
            g = std::min(g, run->granularity);
            for (const auto& history : run->series) {
                if (!history.empty()) {
                    max_step = std::max(max_step, history.back().step);
                }
            }
        }
        if (g <= 0 || max_step <= 0) {
            throw ConfigError("plot-data: runs for '" + name +
                              "' contain no records");
        }

        // Per-seed curves on the uniform grid; LOCF happens naturally since
        // each point aggregates all records up to it, and an empty head is
        // backfilled from the first defined point.
        std::vector<std::vector<double>> curves;
        const std::size_t points =
            static_cast<std::size_t>((max_step + g - 1) / g);
        for (const auto* run : group) {
            std::vector<double> curve(points);
            for (std::size_t i = 0; i < points; ++i) {
                curve[i] = running_best_mean(
                    run->series, static_cast<std::int64_t>(i + 1) * g, window);
            }
            double first_defined = std::numeric_limits<double>::quiet_NaN();
            for (double v : curve) {
                if (!std::isnan(v)) {
                    first_defined = v;
                    break;
                }
            }
            for (auto& v : curve) {
                if (std::isnan(v)) {
                    v = first_defined;
                } else {
                    break;
                }
            }
            curves.push_back(std::move(curve));
        }

        auto out = open_out(out_dir / ("plot_" + name + ".csv"));
        out << "step,mean_best_score,std_best_score\n";
        for (std::size_t i = 0; i < points; ++i) {
            double mean = 0.0;
            for (const auto& c : curves) {
                mean += c[i];
            }
            mean /= static_cast<double>(curves.size());
            double acc = 0.0;
            for (const auto& c : curves) {
                acc += (c[i] - mean) * (c[i] - mean);
            }
            const double stddev =
                std::sqrt(acc / static_cast<double>(curves.size()));
            char buf[96];
            std::snprintf(buf, sizeof(buf), "%lld,%.10g,%.10g\n",
                          static_cast<long long>((i + 1) *
                                                 static_cast<std::size_t>(g)),
                          mean, stddev);
            out << buf;
        }
    }
}

}  // namespace gpbt
