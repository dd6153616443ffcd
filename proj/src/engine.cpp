#include "tarsim/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "tarsim/batch_scorer.hpp"
#include "tarsim/error.hpp"
#include "tarsim/features.hpp"
#include "tarsim/rng.hpp"

namespace tarsim {
namespace {

void validate(const SimulationConfig& config) {
    if (config.batch_size < 1)
        throw Error(ErrorCode::InfeasibleParameters, "batch_size must be >= 1");
    if (config.seed_size < 1)
        throw Error(ErrorCode::InfeasibleParameters, "seed_size must be >= 1");
    if (config.recall_targets.empty())
        throw Error(ErrorCode::InfeasibleParameters, "at least one recall target");
    for (double t : config.recall_targets)
        if (!(t > 0.0 && t <= 1.0))
            throw Error(ErrorCode::InfeasibleParameters,
                        "recall targets must lie in (0,1]");
    if (config.experiment == ExperimentKind::TypeOne &&
        !(config.validation_fraction > 0.0 && config.validation_fraction < 1.0))
        throw Error(ErrorCode::InfeasibleParameters,
                    "validation_fraction must lie in (0,1)");
}

int default_max_rounds(std::size_t total, int batch) {
    return static_cast<int>((total + static_cast<std::size_t>(batch) - 1) /
                            static_cast<std::size_t>(batch)) +
           1;
}

struct Universe {
    const LabeledCorpus* corpus;
    Vocabulary vocab;
    std::vector<SparseVec> vectors;
    InvertedIndex index;
    std::int64_t positives;
};

Universe prepare(const LabeledCorpus& corpus, std::size_t vocab_capacity) {
    Universe u;
    u.corpus = &corpus;
    u.vocab = Vocabulary::build(corpus, vocab_capacity);
    u.vectors = vectorize_corpus(corpus, u.vocab);
    u.index = InvertedIndex::build(u.vectors, u.vocab.size());
    u.positives = corpus.positives();
    return u;
}

// The Type One evaluator scores the held-out validation set; Type Two
// evaluates on training + remaining documents via recall-targeted cutoffs.
class Evaluator {
public:
    virtual ~Evaluator() = default;
    virtual void evaluate(const LinearModel& model, const ScoreTable& remaining,
                          RoundRecord& record, const SimulationConfig& config,
                          const Universe& universe, std::int64_t corpus_total) = 0;
};

class TypeTwoEvaluator : public Evaluator {
public:
    void evaluate(const LinearModel&, const ScoreTable& remaining, RoundRecord& record,
                  const SimulationConfig& config, const Universe& universe,
                  std::int64_t corpus_total) override {
        std::vector<ScoredDoc> scored;
        scored.reserve(remaining.size());
        for (std::size_t i = 0; i < remaining.size(); ++i)
            scored.push_back({remaining.ordinals[i],
                              remaining.scores[static_cast<Eigen::Index>(i)],
                              universe.corpus->positive(
                                  static_cast<std::size_t>(remaining.ordinals[i]))});
        for (double target : config.recall_targets) {
            const std::int64_t needed = needed_positives(
                target, universe.positives, record.training_positives);
            const CutoffResult cut = find_cutoff(scored, needed);
            ReviewStats stats;
            stats.round = record.round;
            stats.recall_target = target;
            stats.cutoff = cut.cutoff;
            stats.docs_at_or_above_cutoff = cut.docs_at_or_above;
            stats.training_docs_reviewed = record.training_size;
            stats.pct_requiring_review = pct_requiring_review(
                cut.docs_at_or_above, record.training_size, corpus_total);
            stats.training_set_recall = record.training_recall_pct;
            record.stats.push_back(stats);
        }
    }
};

class TypeOneEvaluator : public Evaluator {
public:
    TypeOneEvaluator(const LabeledCorpus& validation, const Vocabulary& vocab) {
        vectors_ = vectorize_corpus(validation, vocab);
        labels_.reserve(validation.size());
        for (std::size_t i = 0; i < validation.size(); ++i)
            labels_.push_back(validation.positive(i));
    }

    void evaluate(const LinearModel& model, const ScoreTable&, RoundRecord& record,
                  const SimulationConfig& config, const Universe&,
                  std::int64_t) override {
        std::vector<ScoredDoc> scored;
        scored.reserve(vectors_.size());
        for (std::size_t i = 0; i < vectors_.size(); ++i)
            scored.push_back({static_cast<int>(i), score(model, vectors_[i]),
                              labels_[i] != 0});
        for (double target : config.recall_targets)
            record.validation_pct.push_back(validation_review_pct(scored, target));
    }

private:
    std::vector<SparseVec> vectors_;
    std::vector<std::uint8_t> labels_;
};

// Shared round loop; `corpus_total` is the denominator of
// pct_requiring_review (the full data set in Type Two).
RunResult run_loop(const Universe& universe, const SimulationConfig& config,
                   Evaluator& evaluator, std::int64_t corpus_total) {
    const auto total = universe.corpus->size();
    const auto dim = static_cast<Eigen::Index>(universe.vocab.size());
    const int max_rounds = config.max_rounds > 0
                               ? config.max_rounds
                               : default_max_rounds(total, config.batch_size);

    RunResult result;
    result.experiment = config.experiment;
    result.strategy = config.strategy;
    result.targets = config.recall_targets;

    std::vector<int> all(total);
    std::iota(all.begin(), all.end(), 0);
    // Seed batches are drawn per experiment kind (but not per strategy, so
    // strategies stay comparable under one master seed).
    const char* seed_stream = config.experiment == ExperimentKind::TypeOne
                                  ? "seed-batch-type1"
                                  : "seed-batch-type2";
    std::vector<int> training = sample_without_replacement(
        std::span<const int>(all), static_cast<std::size_t>(config.seed_size),
        derive_seed(config.master_seed, seed_stream));
    result.seed_ordinals = training;

    std::vector<std::uint8_t> in_training(total, 0);
    std::int64_t training_positives = 0;
    auto absorb = [&](std::span<const int> batch) {
        for (int d : batch) {
            in_training[static_cast<std::size_t>(d)] = 1;
            training_positives +=
                universe.corpus->positive(static_cast<std::size_t>(d)) ? 1 : 0;
        }
    };
    absorb(training);

    LinearModel previous;
    bool have_previous = false;

    for (int round = 1;; ++round) {
        const auto start = std::chrono::steady_clock::now();

        RoundRecord record;
        record.round = round;
        record.training_size = static_cast<std::int64_t>(training.size());
        record.training_positives = training_positives;
        record.training_recall_pct =
            training_set_recall(training_positives, universe.positives);
        record.fallback = (training_positives == 0 ||
                           training_positives == record.training_size);

        LinearModel model;
        if (record.fallback) {
            // Single-class training set: no model can be fit; every document
            // scores sigmoid(0) = 0.5 and the next batch is drawn at random.
            model.weights = Eigen::VectorXd::Zero(dim);
        } else {
            std::vector<const SparseVec*> xs;
            std::vector<int> ys;
            xs.reserve(training.size());
            ys.reserve(training.size());
            for (int d : training) {
                xs.push_back(&universe.vectors[static_cast<std::size_t>(d)]);
                ys.push_back(universe.corpus->positive(static_cast<std::size_t>(d)) ? 1
                                                                                    : 0);
            }
            const LinearModel* init =
                (have_previous && !config.cold_start) ? &previous : nullptr;
            model = train(xs, ys, dim, config.train, init).model;
        }

        std::vector<int> remaining;
        remaining.reserve(total - training.size());
        for (std::size_t d = 0; d < total; ++d)
            if (!in_training[d]) remaining.push_back(static_cast<int>(d));

        ScoreTable scores;
        if (!remaining.empty())
            scores = score_all(model, universe.index, remaining, config.score_threads);
        scores.round = round;

        evaluator.evaluate(model, scores, record, config, universe, corpus_total);

        if (config.keep_scores) {
            record.remaining_scores.reserve(scores.size());
            for (std::size_t i = 0; i < scores.size(); ++i)
                record.remaining_scores.push_back(
                    {scores.ordinals[i], scores.scores[static_cast<Eigen::Index>(i)],
                     universe.corpus->positive(
                         static_cast<std::size_t>(scores.ordinals[i]))});
        }

        const bool type_two_done = config.experiment == ExperimentKind::TypeTwo &&
                                   training_positives == universe.positives;
        const bool exhausted = remaining.empty();
        if (type_two_done || exhausted || round >= max_rounds) {
            record.wall_ms = std::chrono::duration<double, std::milli>(
                                 std::chrono::steady_clock::now() - start)
                                 .count();
            result.rounds.push_back(std::move(record));
            break;
        }

        Batch batch;
        if (record.fallback || config.strategy == StrategyKind::Random) {
            batch = select_random(remaining, config.batch_size,
                                  derive_seed(config.master_seed, "select-random"),
                                  round);
        } else if (config.strategy == StrategyKind::TopRanked) {
            batch = select_top_ranked(scores, config.batch_size);
        } else {
            batch = select_uncertain(scores, config.batch_size);
        }

        record.batch = batch.ordinals;
        record.wall_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - start)
                             .count();
        result.rounds.push_back(record);

        absorb(batch.ordinals);
        training.insert(training.end(), batch.ordinals.begin(), batch.ordinals.end());
        previous = std::move(model);
        have_previous = true;
    }
    return result;
}

} // namespace

RunResult run_type_one(const LabeledCorpus& corpus, const SimulationConfig& config) {
    validate(config);
    if (config.experiment != ExperimentKind::TypeOne)
        throw Error(ErrorCode::InfeasibleParameters, "config is not Type One");

    const SplitResult split = split_validation(
        corpus, config.validation_fraction, derive_seed(config.master_seed, "split"));
    Universe universe = prepare(split.pool, config.vocab_capacity);
    TypeOneEvaluator evaluator(split.validation, universe.vocab);
    return run_loop(universe, config, evaluator,
                    static_cast<std::int64_t>(corpus.size()));
}

RunResult run_type_two(const LabeledCorpus& corpus, const SimulationConfig& config) {
    validate(config);
    if (config.experiment != ExperimentKind::TypeTwo)
        throw Error(ErrorCode::InfeasibleParameters, "config is not Type Two");

    Universe universe = prepare(corpus, config.vocab_capacity);
    TypeTwoEvaluator evaluator;
    return run_loop(universe, config, evaluator,
                    static_cast<std::int64_t>(corpus.size()));
}

MatrixResult run_matrix(const LabeledCorpus& corpus, const SimulationConfig& base,
                        std::span<const StrategyKind> strategies,
                        std::span<const double> targets) {
    if (strategies.empty())
        throw Error(ErrorCode::InfeasibleParameters, "at least one strategy");
    if (targets.empty())
        throw Error(ErrorCode::InfeasibleParameters, "at least one recall target");

    MatrixResult result;
    for (StrategyKind strategy : strategies) {
        SimulationConfig config = base;
        config.strategy = strategy;
        config.recall_targets.assign(targets.begin(), targets.end());
        RunResult run = config.experiment == ExperimentKind::TypeOne
                            ? run_type_one(corpus, config)
                            : run_type_two(corpus, config);

        for (std::size_t k = 0; k < targets.size(); ++k) {
            if (config.experiment == ExperimentKind::TypeTwo) {
                std::vector<ReviewStats> per_target;
                per_target.reserve(run.rounds.size());
                for (const RoundRecord& r : run.rounds) per_target.push_back(r.stats[k]);
                result.summary.rows.push_back(
                    optimum_performance(per_target, strategy, targets[k]));
            } else {
                const RoundRecord* best = &run.rounds.front();
                for (const RoundRecord& r : run.rounds)
                    if (r.validation_pct[k] < best->validation_pct[k]) best = &r;
                result.summary.rows.push_back(OptimumPerformance{
                    strategy, targets[k], best->round, best->training_recall_pct,
                    best->validation_pct[k]});
            }
        }
        result.runs.push_back(std::move(run));
    }
    return result;
}

} // namespace tarsim
