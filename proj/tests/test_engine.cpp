#include <doctest.h>

#include <algorithm>
#include <set>

#include "helpers.hpp"
#include "tarsim/engine.hpp"
#include "tarsim/error.hpp"
#include "tarsim/synth.hpp"

using namespace tarsim;

namespace {

SimulationConfig small_config(ExperimentKind kind, StrategyKind strategy,
                              int batch, int seed_size, std::uint64_t seed) {
    SimulationConfig config;
    config.experiment = kind;
    config.strategy = strategy;
    config.batch_size = batch;
    config.seed_size = seed_size;
    config.master_seed = seed;
    config.vocab_capacity = 500;
    return config;
}

bool same_rounds(const RunResult& a, const RunResult& b) {
    if (a.rounds.size() != b.rounds.size()) return false;
    for (std::size_t r = 0; r < a.rounds.size(); ++r) {
        const RoundRecord& x = a.rounds[r];
        const RoundRecord& y = b.rounds[r];
        if (x.batch != y.batch || x.training_size != y.training_size ||
            x.training_positives != y.training_positives ||
            x.fallback != y.fallback ||
            x.training_recall_pct != y.training_recall_pct)
            return false;
        if (x.validation_pct != y.validation_pct) return false;
        if (x.stats.size() != y.stats.size()) return false;
        for (std::size_t k = 0; k < x.stats.size(); ++k) {
            if (x.stats[k].cutoff != y.stats[k].cutoff ||
                x.stats[k].docs_at_or_above_cutoff != y.stats[k].docs_at_or_above_cutoff ||
                x.stats[k].pct_requiring_review != y.stats[k].pct_requiring_review)
                return false;
        }
    }
    return true;
}

} // namespace

TEST_CASE("type one runs until the pool is exhausted") {
    SynthConfig synth;
    synth.total = 2778; // 10% validation of 2778 rounds to 278, leaving 2500
    synth.richness = 0.3;
    synth.vocab_size = 400;
    synth.separation = 0.5;
    synth.avg_doc_len = 15;
    synth.seed = 5;
    const LabeledCorpus corpus = generate_corpus(synth);

    const SimulationConfig config =
        small_config(ExperimentKind::TypeOne, StrategyKind::Uncertain, 1000, 1000, 77);
    const RunResult result = run_type_one(corpus, config);

    REQUIRE(result.rounds.size() == 3);
    CHECK(result.rounds[0].training_size == 1000);
    CHECK(result.rounds[1].training_size == 2000);
    CHECK(result.rounds[2].training_size == 2500);
    CHECK(result.rounds[0].batch.size() == 1000);
    CHECK(result.rounds[1].batch.size() == 500);
    CHECK(result.rounds[2].batch.empty());
    for (const RoundRecord& r : result.rounds) {
        REQUIRE(r.validation_pct.size() == 2);
        CHECK(r.stats.empty());
        for (double pct : r.validation_pct) {
            CHECK(pct > 0.0);
            CHECK(pct <= 100.0);
        }
    }
    CHECK(result.rounds[0].round == 1);
    CHECK(result.rounds[2].round == 3);
}

TEST_CASE("runs are deterministic in config and master seed") {
    const LabeledCorpus corpus = testutil::random_corpus(400, 150, 0.3, 99);
    for (ExperimentKind kind : {ExperimentKind::TypeOne, ExperimentKind::TypeTwo}) {
        SimulationConfig config =
            small_config(kind, StrategyKind::TopRanked, 50, 50, 1234);
        const RunResult a = kind == ExperimentKind::TypeOne
                                ? run_type_one(corpus, config)
                                : run_type_two(corpus, config);
        const RunResult b = kind == ExperimentKind::TypeOne
                                ? run_type_one(corpus, config)
                                : run_type_two(corpus, config);
        CHECK(same_rounds(a, b));
    }
}

TEST_CASE("type two maintains the training/remaining partition") {
    const LabeledCorpus corpus = testutil::random_corpus(150, 80, 0.3, 3);
    SimulationConfig config =
        small_config(ExperimentKind::TypeTwo, StrategyKind::Uncertain, 15, 15, 9);
    config.keep_scores = true;
    const RunResult result = run_type_two(corpus, config);
    REQUIRE(!result.rounds.empty());

    std::set<int> training(result.seed_ordinals.begin(), result.seed_ordinals.end());
    CHECK(training.size() == 15);
    std::int64_t previous_recall = -1;
    for (std::size_t r = 0; r < result.rounds.size(); ++r) {
        const RoundRecord& record = result.rounds[r];
        CHECK(record.round == static_cast<int>(r) + 1);
        CHECK(record.training_size == static_cast<std::int64_t>(training.size()));
        // capped arithmetic progression
        CHECK(record.training_size ==
              std::min<std::int64_t>(15 + static_cast<std::int64_t>(r) * 15,
                                     static_cast<std::int64_t>(corpus.size())));

        // remaining = corpus \ training, and the snapshot covers exactly it
        CHECK(record.remaining_scores.size() == corpus.size() - training.size());
        for (const ScoredDoc& d : record.remaining_scores)
            CHECK(training.count(d.ordinal) == 0);

        // batches never revisit training documents
        for (int d : record.batch) CHECK(training.insert(d).second);

        CHECK(record.training_positives >= previous_recall);
        previous_recall = record.training_positives;
    }
    // Termination: every positive reviewed (the corpus is small enough that
    // max_rounds never binds here).
    CHECK(result.rounds.back().training_positives +
              [&] {
                  std::int64_t missed = 0;
                  for (const ScoredDoc& d : result.rounds.back().remaining_scores)
                      missed += d.positive ? 1 : 0;
                  return missed;
              }() ==
          corpus.positives());
    CHECK(result.rounds.back().training_recall_pct == 100.0);
}

TEST_CASE("type two stops once the seed holds every positive") {
    // 10 documents, 2 positives, seed of 5: some master seeds catch both.
    const LabeledCorpus corpus = testutil::make_corpus({
        {"alpha sun", 0}, {"beta moon", 0}, {"gamma sun", 0},
        {"delta star win", 1}, {"epsilon moon", 0}, {"zeta sun", 0},
        {"eta moon rise", 0}, {"theta star win", 1}, {"iota sun", 0},
        {"kappa moon", 0},
    });
    bool saw_immediate = false, saw_longer = false;
    for (std::uint64_t seed = 0; seed < 100 && !(saw_immediate && saw_longer); ++seed) {
        const SimulationConfig config =
            small_config(ExperimentKind::TypeTwo, StrategyKind::Random, 2, 5, seed);
        const RunResult result = run_type_two(corpus, config);
        if (result.rounds.size() == 1) {
            CHECK(result.rounds[0].training_recall_pct == 100.0);
            CHECK(result.rounds[0].batch.empty());
            saw_immediate = true;
        } else {
            CHECK(result.rounds[0].training_recall_pct < 100.0);
            saw_longer = true;
        }
    }
    CHECK(saw_immediate);
    CHECK(saw_longer);
}

TEST_CASE("single-class seed falls back to flat scores and random batches") {
    std::vector<std::pair<std::string, int>> docs;
    for (int i = 0; i < 400; ++i)
        docs.emplace_back("filler token" + std::to_string(i % 37), 0);
    docs[42] = {"смысл positive signal", 1};
    docs[301] = {"positive signal here", 1};
    const LabeledCorpus corpus = testutil::make_corpus(docs);

    // Seed batches of 20 almost never include one of the 2 positives; find a
    // master seed where the first round is single-class.
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        SimulationConfig config = small_config(ExperimentKind::TypeTwo,
                                               StrategyKind::TopRanked, 20, 20, seed);
        config.keep_scores = true;
        const RunResult result = run_type_two(corpus, config);
        if (!result.rounds.front().fallback) continue;

        bool saw_real_model = false;
        for (const RoundRecord& record : result.rounds) {
            if (record.fallback) {
                CHECK_FALSE(saw_real_model); // fallback only before both classes appear
                for (const ScoredDoc& d : record.remaining_scores)
                    CHECK(d.score == 0.5);
            } else {
                saw_real_model = true;
            }
        }
        CHECK(saw_real_model);
        return;
    }
    FAIL("no master seed produced a single-class seed batch");
}

TEST_CASE("max_rounds caps the loop") {
    const LabeledCorpus corpus = testutil::random_corpus(300, 100, 0.3, 8);
    SimulationConfig config =
        small_config(ExperimentKind::TypeTwo, StrategyKind::Random, 20, 20, 4);
    config.max_rounds = 3;
    const RunResult result = run_type_two(corpus, config);
    CHECK(result.rounds.size() == 3);
    CHECK(result.rounds.back().round == 3);
}

TEST_CASE("run_matrix shares the seed batch across strategies") {
    const LabeledCorpus corpus = testutil::random_corpus(250, 100, 0.3, 15);
    const SimulationConfig base =
        small_config(ExperimentKind::TypeTwo, StrategyKind::TopRanked, 25, 25, 777);
    const std::vector<StrategyKind> strategies{
        StrategyKind::TopRanked, StrategyKind::Uncertain, StrategyKind::Random};
    const std::vector<double> targets{0.75, 0.90};
    const MatrixResult matrix = run_matrix(corpus, base, strategies, targets);

    REQUIRE(matrix.runs.size() == 3);
    CHECK(matrix.runs[0].seed_ordinals == matrix.runs[1].seed_ordinals);
    CHECK(matrix.runs[0].seed_ordinals == matrix.runs[2].seed_ordinals);
    REQUIRE(matrix.summary.rows.size() == 6);

    // Summary rows agree with optimum_performance over each run's stats.
    std::size_t row = 0;
    for (std::size_t s = 0; s < strategies.size(); ++s) {
        for (std::size_t k = 0; k < targets.size(); ++k, ++row) {
            std::vector<ReviewStats> per_target;
            for (const RoundRecord& r : matrix.runs[s].rounds)
                per_target.push_back(r.stats[k]);
            const OptimumPerformance expected =
                optimum_performance(per_target, strategies[s], targets[k]);
            CHECK(matrix.summary.rows[row].round == expected.round);
            CHECK(matrix.summary.rows[row].pct_requiring_review ==
                  expected.pct_requiring_review);
            CHECK(matrix.summary.rows[row].strategy == strategies[s]);
            CHECK(matrix.summary.rows[row].recall_target == targets[k]);
        }
    }
}

TEST_CASE("type two per-round stats match an independent recomputation") {
    SynthConfig synth;
    synth.total = 120;
    synth.richness = 0.25;
    synth.vocab_size = 200;
    synth.separation = 0.7;
    synth.avg_doc_len = 12;
    synth.seed = 44;
    const LabeledCorpus corpus = generate_corpus(synth);

    SimulationConfig config =
        small_config(ExperimentKind::TypeTwo, StrategyKind::Uncertain, 10, 10, 21);
    config.keep_scores = true;
    const RunResult result = run_type_two(corpus, config);
    REQUIRE(!result.rounds.empty());

    std::set<int> training(result.seed_ordinals.begin(), result.seed_ordinals.end());
    for (const RoundRecord& record : result.rounds) {
        std::int64_t tp = 0;
        for (int d : training) tp += corpus.positive(static_cast<std::size_t>(d)) ? 1 : 0;
        CHECK(tp == record.training_positives);
        CHECK(record.training_recall_pct ==
              100.0 * static_cast<double>(tp) /
                  static_cast<double>(corpus.positives()));

        for (std::size_t k = 0; k < config.recall_targets.size(); ++k) {
            const ReviewStats& stats = record.stats[k];
            const double target = config.recall_targets[k];
            const auto needed = static_cast<std::int64_t>(std::ceil(
                target * static_cast<double>(corpus.positives()) - 1e-9)) - tp;
            if (needed <= 0) {
                CHECK_FALSE(stats.cutoff.has_value());
                CHECK(stats.docs_at_or_above_cutoff == 0);
            } else {
                // largest feasible distinct score, by exhaustive scan
                std::set<double> candidates;
                for (const ScoredDoc& d : record.remaining_scores)
                    candidates.insert(d.score);
                bool found = false;
                double best = 0.0;
                std::int64_t best_above = 0;
                for (double c : candidates) {
                    std::int64_t above = 0, pos = 0;
                    for (const ScoredDoc& d : record.remaining_scores)
                        if (d.score >= c) {
                            ++above;
                            pos += d.positive ? 1 : 0;
                        }
                    if (pos >= needed && (!found || c > best)) {
                        found = true;
                        best = c;
                        best_above = above;
                    }
                }
                REQUIRE(found);
                REQUIRE(stats.cutoff.has_value());
                CHECK(*stats.cutoff == best);
                CHECK(stats.docs_at_or_above_cutoff == best_above);
            }
            CHECK(stats.training_docs_reviewed == record.training_size);
            CHECK(stats.pct_requiring_review ==
                  100.0 *
                      static_cast<double>(stats.docs_at_or_above_cutoff +
                                          record.training_size) /
                      static_cast<double>(corpus.size()));
        }
        for (int d : record.batch) training.insert(d);
    }
}

TEST_CASE("type one validation review pct trends down for the random strategy") {
    // Scaled-down replication: across seeds, the per-round validation review
    // percentage at the 75% target should correlate negatively with round.
    SynthConfig synth;
    synth.total = 2000;
    synth.richness = 0.3;
    synth.vocab_size = 2500; // wide marker vocabulary, so learning is gradual
    synth.separation = 0.12;
    synth.avg_doc_len = 12;
    synth.seed = 10;
    const LabeledCorpus corpus = generate_corpus(synth);

    std::vector<double> rhos;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        SimulationConfig config =
            small_config(ExperimentKind::TypeOne, StrategyKind::Random, 200, 200, seed);
        config.vocab_capacity = 2500;
        const RunResult result = run_type_one(corpus, config);
        std::vector<double> rounds, pcts;
        for (const RoundRecord& r : result.rounds) {
            rounds.push_back(r.round);
            pcts.push_back(r.validation_pct[0]);
        }
        rhos.push_back(testutil::spearman(rounds, pcts));
    }
    std::sort(rhos.begin(), rhos.end());
    const double median = rhos[rhos.size() / 2];
    CHECK(median < 0.0);
}

TEST_CASE("engine validates its configuration") {
    const LabeledCorpus corpus = testutil::random_corpus(50, 30, 0.3, 1);
    SimulationConfig config =
        small_config(ExperimentKind::TypeTwo, StrategyKind::Random, 0, 10, 1);
    CHECK_THROWS_AS(run_type_two(corpus, config), Error);
    config.batch_size = 10;
    config.recall_targets = {1.5};
    CHECK_THROWS_AS(run_type_two(corpus, config), Error);
    config.recall_targets = {0.75};
    config.experiment = ExperimentKind::TypeOne;
    config.validation_fraction = 0.0;
    CHECK_THROWS_AS(run_type_one(corpus, config), Error);
}
