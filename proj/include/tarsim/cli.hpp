#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "tarsim/engine.hpp"
#include "tarsim/synth.hpp"

namespace tarsim {

inline constexpr const char* kToolName = "tarsim";
inline constexpr const char* kToolVersion = "0.1.0";

struct RunOptions {
    std::filesystem::path corpus;
    std::string experiment = "type2";   // type1 | type2
    std::string strategy = "all";       // top-ranked | uncertain | random | all
    int batch_size = 1000;
    int seed_size = 1000;
    double validation_fraction = 0.10;
    std::vector<double> recall_targets{0.75, 0.90};
    std::uint64_t seed = 0;
    int max_rounds = 0;
    std::size_t vocab_capacity = 20000;
    bool cold_start = false;
    int threads = 1;
    std::filesystem::path out;          // empty -> ./runs/<timestamp>
    std::filesystem::path dump_vocab;   // optional TSV dump
};

struct SynthOptions {
    SynthConfig config;
    std::filesystem::path out;
};

struct ReportOptions {
    std::vector<std::filesystem::path> run_dirs;
    std::filesystem::path out = ".";
};

/// Command entry points; return process exit codes (0 ok, 1 run/data error).
int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err);
int cmd_synth(const SynthOptions& options, std::ostream& out, std::ostream& err);
int cmd_report(const ReportOptions& options, std::ostream& out, std::ostream& err);

// --- formatting and file helpers shared with the report reader and tests ---

/// Percentage cell: one decimal place.
std::string format_pct(double value);
/// Cutoff cell: round-trippable full precision.
std::string format_full(double value);
/// "0.75" -> "75", "0.9" -> "90", "0.825" -> "82.5".
std::string target_label(double target);
/// The value a percentage cell parses back to (the canonical rounded value
/// that rounds.csv, summary.json and report.md all share).
double round_pct(double value);

std::string fnv1a64_hex(const std::filesystem::path& file);

/// Parsed rounds.csv contents; cells are kept verbatim so rewriting them
/// preserves precision byte for byte.
struct CsvRun {
    ExperimentKind experiment = ExperimentKind::TypeTwo;
    std::string strategy;
    std::vector<std::string> target_labels;

    struct TargetCells {
        std::string cutoff; // empty when no remaining review was needed
        std::string docs_above;
        std::string pct;
    };
    struct Row {
        int round = 0;
        std::int64_t training_size = 0;
        std::int64_t training_positives = 0;
        std::string training_recall_pct;
        std::vector<TargetCells> per_target; // Type Two
        std::vector<std::string> validation_pct; // Type One
    };
    std::vector<Row> rows;
};

CsvRun csv_run_from_result(const RunResult& result);
void write_rounds_csv(const CsvRun& run, const std::filesystem::path& path);
CsvRun read_rounds_csv(const std::filesystem::path& path);

/// Per-(strategy, target) optimum row computed from CSV cell values, so the
/// summary is recomputable from rounds.csv alone.
struct SummaryRow {
    std::string strategy;
    std::string target_label;
    int round = 0;
    double training_set_recall = 0.0;
    double pct_requiring_review = 0.0;
};

std::vector<SummaryRow> summarize(const std::vector<CsvRun>& runs);

} // namespace tarsim
