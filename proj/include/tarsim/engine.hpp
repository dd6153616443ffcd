#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tarsim/corpus.hpp"
#include "tarsim/metrics.hpp"
#include "tarsim/model.hpp"
#include "tarsim/selection.hpp"

namespace tarsim {

enum class ExperimentKind { TypeOne, TypeTwo };

struct SimulationConfig {
    ExperimentKind experiment = ExperimentKind::TypeTwo;
    StrategyKind strategy = StrategyKind::TopRanked;
    int batch_size = 1000;
    int seed_size = 1000;
    double validation_fraction = 0.10;          // Type One only
    std::vector<double> recall_targets{0.75, 0.90};
    std::uint64_t master_seed = 0;
    int max_rounds = 0;                         // 0 = ceil(total/batch) + 1
    std::size_t vocab_capacity = 20000;
    TrainConfig train;
    bool cold_start = false;   // retrain from zero weights each round
    bool keep_scores = false;  // snapshot remaining-document scores per round
    int score_threads = 1;
};

/// One simulation round: the model trained on the cumulative training set,
/// its evaluation, and the batch selected afterwards (empty on the terminal
/// round). Rounds are numbered from 1, so with seed_size == batch_size the
/// round-r model is trained on r * batch_size documents.
struct RoundRecord {
    int round = 0;
    std::vector<int> batch;
    std::int64_t training_size = 0;
    std::int64_t training_positives = 0;
    double training_recall_pct = 0.0;
    bool fallback = false; // single-class training set: flat 0.5 scores, random batch
    std::vector<ReviewStats> stats;          // per recall target (Type Two)
    std::vector<double> validation_pct;      // per recall target (Type One)
    double wall_ms = 0.0;
    std::vector<ScoredDoc> remaining_scores; // populated when keep_scores
};

struct RunResult {
    ExperimentKind experiment = ExperimentKind::TypeTwo;
    StrategyKind strategy = StrategyKind::TopRanked;
    std::vector<double> targets;
    std::vector<int> seed_ordinals; // round-1 training set
    std::vector<RoundRecord> rounds;
};

/// Type One: split off a validation set, then run the active-learning loop
/// over the pool, evaluating each round's model on the validation set, until
/// the pool is exhausted (or max_rounds). Ordinals in the result are
/// pool-relative.
RunResult run_type_one(const LabeledCorpus& corpus, const SimulationConfig& config);

/// Type Two: run the loop over the whole corpus, evaluating each round on
/// training + remaining documents, until the training set holds every
/// positive document (or max_rounds).
RunResult run_type_two(const LabeledCorpus& corpus, const SimulationConfig& config);

struct RunSummary {
    std::vector<OptimumPerformance> rows; // strategy-major, then target order
};

struct MatrixResult {
    std::vector<RunResult> runs;
    RunSummary summary;
};

/// Runs every strategy under the same master seed (identical round-1
/// training sets) and aggregates per-(strategy, target) optimum rows.
MatrixResult run_matrix(const LabeledCorpus& corpus, const SimulationConfig& base,
                        std::span<const StrategyKind> strategies,
                        std::span<const double> targets);

} // namespace tarsim
