#include "tarsim/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "tarsim/error.hpp"

namespace tarsim {
namespace {

std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(
        std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string timestamp_dir() {
    const std::time_t now = std::chrono::system_clock::to_time_t(
        std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y%m%d-%H%M%S", &tm);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_double(const std::string& cell) {
    return std::strtod(cell.c_str(), nullptr);
}

nlohmann::ordered_json summary_json(const std::vector<CsvRun>& runs,
                                    const std::vector<SummaryRow>& rows) {
    nlohmann::ordered_json j;
    j["experiment"] =
        runs.front().experiment == ExperimentKind::TypeOne ? "type1" : "type2";
    j["recall_targets_pct"] = nlohmann::json::array();
    for (const std::string& label : runs.front().target_labels)
        j["recall_targets_pct"].push_back(parse_double(label));
    j["optimum_performance"] = nlohmann::json::array();
    for (const SummaryRow& row : rows) {
        nlohmann::ordered_json entry;
        entry["strategy"] = row.strategy;
        entry["recall_target_pct"] = parse_double(row.target_label);
        entry["round"] = row.round;
        entry["training_set_recall_pct"] = row.training_set_recall;
        entry["pct_requiring_review"] = row.pct_requiring_review;
        j["optimum_performance"].push_back(entry);
    }
    return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(ErrorCode::IoFailure, "failed writing " + path.string());
}

std::string markdown_report(const std::vector<CsvRun>& runs,
                            const std::vector<SummaryRow>& rows) {
    std::ostringstream md;
    md << "# Optimum performance\n";
    for (const std::string& label : runs.front().target_labels) {
        md << "\n## " << label << "% recall\n\n";
        md << "| Strategy | Optimum Performance Round | Training Set Recall | % of "
              "Documents Requiring Review |\n";
        md << "|---|---|---|---|\n";
        for (const SummaryRow& row : rows) {
            if (row.target_label != label) continue;
            md << "| " << row.strategy << " | " << row.round << " | "
               << format_pct(row.training_set_recall) << " | "
               << format_pct(row.pct_requiring_review) << " |\n";
        }
    }
    return md.str();
}

std::string tidy_report(const std::vector<CsvRun>& runs) {
    std::ostringstream csv;
    csv << "strategy,round,target,metric,value\n";
    for (const CsvRun& run : runs) {
        for (const CsvRun::Row& row : run.rows) {
            for (std::size_t k = 0; k < run.target_labels.size(); ++k) {
                const std::string prefix = run.strategy + "," +
                                           std::to_string(row.round) + "," +
                                           run.target_labels[k] + ",";
                csv << prefix << "training_recall_pct," << row.training_recall_pct
                    << "\n";
                if (run.experiment == ExperimentKind::TypeTwo) {
                    csv << prefix << "cutoff," << row.per_target[k].cutoff << "\n";
                    csv << prefix << "docs_above_cutoff,"
                        << row.per_target[k].docs_above << "\n";
                    csv << prefix << "pct_review," << row.per_target[k].pct << "\n";
                } else {
                    csv << prefix << "validation_review_pct," << row.validation_pct[k]
                        << "\n";
                }
            }
        }
    }
    return csv.str();
}

} // namespace

std::string format_pct(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.1f", value);
    return buf;
}

std::string format_full(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::string target_label(double target) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", 100.0 * target);
    return buf;
}

double round_pct(double value) {
    return parse_double(format_pct(value));
}

std::string fnv1a64_hex(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + file.string());
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const std::streamsize n = in.gcount();
        for (std::streamsize i = 0; i < n; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
        if (!in) break;
    }
    char out[17];
    std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
    return out;
}

CsvRun csv_run_from_result(const RunResult& result) {
    CsvRun run;
    run.experiment = result.experiment;
    run.strategy = std::string(strategy_name(result.strategy));
    for (double t : result.targets) run.target_labels.push_back(target_label(t));

    for (const RoundRecord& record : result.rounds) {
        CsvRun::Row row;
        row.round = record.round;
        row.training_size = record.training_size;
        row.training_positives = record.training_positives;
        row.training_recall_pct = format_pct(record.training_recall_pct);
        if (result.experiment == ExperimentKind::TypeTwo) {
            for (const ReviewStats& stats : record.stats) {
                CsvRun::TargetCells cells;
                cells.cutoff = stats.cutoff ? format_full(*stats.cutoff) : "";
                cells.docs_above = std::to_string(stats.docs_at_or_above_cutoff);
                cells.pct = format_pct(stats.pct_requiring_review);
                row.per_target.push_back(std::move(cells));
            }
        } else {
            for (double pct : record.validation_pct)
                row.validation_pct.push_back(format_pct(pct));
        }
        run.rows.push_back(std::move(row));
    }
    return run;
}

void write_rounds_csv(const CsvRun& run, const std::filesystem::path& path) {
    std::ostringstream csv;
    csv << "round,strategy,training_size,training_positives,training_recall_pct";
    for (const std::string& label : run.target_labels) {
        if (run.experiment == ExperimentKind::TypeTwo)
            csv << ",cutoff_" << label << ",docs_above_cutoff_" << label
                << ",pct_review_" << label;
        else
            csv << ",validation_review_pct_" << label;
    }
    csv << "\n";
    for (const CsvRun::Row& row : run.rows) {
        csv << row.round << ',' << run.strategy << ',' << row.training_size << ','
            << row.training_positives << ',' << row.training_recall_pct;
        if (run.experiment == ExperimentKind::TypeTwo)
            for (const CsvRun::TargetCells& cells : row.per_target)
                csv << ',' << cells.cutoff << ',' << cells.docs_above << ','
                    << cells.pct;
        else
            for (const std::string& pct : row.validation_pct) csv << ',' << pct;
        csv << "\n";
    }
    write_text(path, csv.str());
}

CsvRun read_rounds_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line))
        throw Error(ErrorCode::MalformedRecord, "empty rounds file " + path.string());

    const std::vector<std::string> header = split_csv_line(line);
    CsvRun run;
    constexpr std::size_t kFixed = 5;
    if (header.size() < kFixed + 1)
        throw Error(ErrorCode::MalformedRecord, "unrecognized header in " + path.string());
    if (header[kFixed].rfind("validation_review_pct_", 0) == 0) {
        run.experiment = ExperimentKind::TypeOne;
        for (std::size_t c = kFixed; c < header.size(); ++c)
            run.target_labels.push_back(
                header[c].substr(std::string("validation_review_pct_").size()));
    } else {
        run.experiment = ExperimentKind::TypeTwo;
        if ((header.size() - kFixed) % 3 != 0)
            throw Error(ErrorCode::MalformedRecord,
                        "unrecognized header in " + path.string());
        for (std::size_t c = kFixed; c < header.size(); c += 3)
            run.target_labels.push_back(header[c].substr(std::string("cutoff_").size()));
    }

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw Error(ErrorCode::MalformedRecord,
                        "row width mismatch in " + path.string());
        CsvRun::Row row;
        row.round = std::atoi(cells[0].c_str());
        if (run.strategy.empty()) run.strategy = cells[1];
        row.training_size = std::atoll(cells[2].c_str());
        row.training_positives = std::atoll(cells[3].c_str());
        row.training_recall_pct = cells[4];
        if (run.experiment == ExperimentKind::TypeTwo) {
            for (std::size_t c = kFixed; c < cells.size(); c += 3)
                row.per_target.push_back({cells[c], cells[c + 1], cells[c + 2]});
        } else {
            for (std::size_t c = kFixed; c < cells.size(); ++c)
                row.validation_pct.push_back(cells[c]);
        }
        run.rows.push_back(std::move(row));
    }
    if (run.rows.empty())
        throw Error(ErrorCode::MalformedRecord, "no rounds in " + path.string());
    return run;
}

std::vector<SummaryRow> summarize(const std::vector<CsvRun>& runs) {
    std::vector<SummaryRow> rows;
    for (const CsvRun& run : runs) {
        for (std::size_t k = 0; k < run.target_labels.size(); ++k) {
            const CsvRun::Row* best = nullptr;
            double best_pct = 0.0;
            for (const CsvRun::Row& row : run.rows) {
                const double pct =
                    parse_double(run.experiment == ExperimentKind::TypeTwo
                                     ? row.per_target[k].pct
                                     : row.validation_pct[k]);
                if (best == nullptr || pct < best_pct) {
                    best = &row;
                    best_pct = pct;
                }
            }
            rows.push_back(SummaryRow{run.strategy, run.target_labels[k], best->round,
                                      parse_double(best->training_recall_pct),
                                      best_pct});
        }
    }
    return rows;
}

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err) {
    try {
        const std::string started = utc_now();
        const LabeledCorpus corpus = load_corpus(options.corpus);

        std::vector<StrategyKind> strategies;
        if (options.strategy == "all") {
            strategies = {StrategyKind::TopRanked, StrategyKind::Uncertain,
                          StrategyKind::Random};
        } else if (auto kind = parse_strategy(options.strategy)) {
            strategies = {*kind};
        } else {
            err << "unknown strategy: " << options.strategy << "\n";
            return 2;
        }
        if (options.experiment != "type1" && options.experiment != "type2") {
            err << "unknown experiment: " << options.experiment << "\n";
            return 2;
        }

        SimulationConfig config;
        config.experiment = options.experiment == "type1" ? ExperimentKind::TypeOne
                                                          : ExperimentKind::TypeTwo;
        config.batch_size = options.batch_size;
        config.seed_size = options.seed_size;
        config.validation_fraction = options.validation_fraction;
        config.recall_targets = options.recall_targets;
        config.master_seed = options.seed;
        config.max_rounds = options.max_rounds;
        config.vocab_capacity = options.vocab_capacity;
        config.cold_start = options.cold_start;
        config.score_threads = options.threads;

        const std::filesystem::path out_dir =
            options.out.empty() ? std::filesystem::path("runs") / timestamp_dir()
                                : options.out;
        std::filesystem::create_directories(out_dir);

        const MatrixResult matrix =
            run_matrix(corpus, config, strategies, config.recall_targets);

        std::vector<CsvRun> csv_runs;
        std::vector<std::string> outputs;
        nlohmann::ordered_json wall;
        for (const RunResult& run : matrix.runs) {
            const std::string name(strategy_name(run.strategy));
            std::filesystem::create_directories(out_dir / name);
            CsvRun csv = csv_run_from_result(run);
            write_rounds_csv(csv, out_dir / name / "rounds.csv");
            outputs.push_back(name + "/rounds.csv");
            std::vector<double> ms;
            ms.reserve(run.rounds.size());
            for (const RoundRecord& r : run.rounds) ms.push_back(r.wall_ms);
            wall[name] = ms;
            csv_runs.push_back(std::move(csv));
        }

        const std::vector<SummaryRow> rows = summarize(csv_runs);
        write_text(out_dir / "summary.json", summary_json(csv_runs, rows).dump(2) + "\n");
        outputs.push_back("summary.json");

        if (!options.dump_vocab.empty()) {
            // Debug aid; always computed over the full corpus.
            Vocabulary::build(corpus, options.vocab_capacity)
                .save_tsv(options.dump_vocab);
        }

        nlohmann::ordered_json manifest;
        manifest["tool"] = kToolName;
        manifest["version"] = kToolVersion;
        manifest["started_utc"] = started;
        manifest["corpus"] = {{"path", options.corpus.string()},
                              {"fnv1a64", fnv1a64_hex(options.corpus)},
                              {"documents", corpus.size()},
                              {"positives", corpus.positives()}};
        nlohmann::ordered_json cfg;
        cfg["experiment"] = options.experiment;
        cfg["strategy"] = options.strategy;
        cfg["batch_size"] = options.batch_size;
        cfg["seed_size"] = options.seed_size;
        cfg["validation_fraction"] = options.validation_fraction;
        cfg["recall_targets"] = options.recall_targets;
        cfg["seed"] = options.seed;
        cfg["max_rounds"] = options.max_rounds;
        cfg["vocab_capacity"] = options.vocab_capacity;
        cfg["cold_start"] = options.cold_start;
        cfg["threads"] = options.threads;
        manifest["config"] = cfg;
        outputs.push_back("manifest.json");
        manifest["outputs"] = outputs;
        manifest["round_wall_ms"] = wall;
        manifest["finished_utc"] = utc_now();
        write_text(out_dir / "manifest.json", manifest.dump(2) + "\n");

        for (const SummaryRow& row : rows)
            out << row.strategy << " @" << row.target_label
                << "%: optimum round " << row.round << ", training recall "
                << format_pct(row.training_set_recall) << "%, review "
                << format_pct(row.pct_requiring_review) << "%\n";
        out << "wrote " << out_dir.string() << "\n";
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_synth(const SynthOptions& options, std::ostream& out, std::ostream& err) {
    try {
        const LabeledCorpus corpus = generate_corpus(options.config);
        save_corpus(corpus, options.out);
        out << "wrote " << options.out.string() << ": " << corpus.size()
            << " documents, " << corpus.positives() << " positive\n";
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_report(const ReportOptions& options, std::ostream& out, std::ostream& err) {
    try {
        std::string checksum;
        std::vector<std::filesystem::path> csv_paths;
        for (const std::filesystem::path& dir : options.run_dirs) {
            const auto manifest_path = dir / "manifest.json";
            std::ifstream in(manifest_path);
            if (!in)
                throw Error(ErrorCode::IoFailure,
                            "cannot open " + manifest_path.string());
            const auto manifest = nlohmann::json::parse(in);
            const std::string sum = manifest.at("corpus").at("fnv1a64");
            if (checksum.empty()) checksum = sum;
            if (sum != checksum) {
                err << "error: run directories use different corpora\n";
                return 1;
            }
            std::vector<std::filesystem::path> local;
            for (const auto& entry : std::filesystem::directory_iterator(dir))
                if (entry.is_directory() &&
                    std::filesystem::exists(entry.path() / "rounds.csv"))
                    local.push_back(entry.path() / "rounds.csv");
            std::sort(local.begin(), local.end());
            csv_paths.insert(csv_paths.end(), local.begin(), local.end());
        }
        if (csv_paths.empty())
            throw Error(ErrorCode::IoFailure, "no rounds.csv found in run directories");

        std::vector<CsvRun> runs;
        for (const std::filesystem::path& path : csv_paths)
            runs.push_back(read_rounds_csv(path));
        for (const CsvRun& run : runs)
            if (run.experiment != runs.front().experiment ||
                run.target_labels != runs.front().target_labels)
                throw Error(ErrorCode::MalformedRecord,
                            "run directories mix experiments or recall targets");

        std::filesystem::create_directories(options.out);
        write_text(options.out / "report.csv", tidy_report(runs));
        const std::vector<SummaryRow> rows = summarize(runs);
        write_text(options.out / "report.md", markdown_report(runs, rows));
        out << "wrote " << (options.out / "report.csv").string() << " and "
            << (options.out / "report.md").string() << "\n";
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace tarsim
