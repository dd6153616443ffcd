#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tarsim/selection.hpp"

namespace tarsim {

/// One remaining document as seen by the cutoff search.
struct ScoredDoc {
    int ordinal;
    double score;
    bool positive;
};

struct CutoffResult {
    std::optional<double> cutoff;         // absent when no remaining review is needed
    std::int64_t docs_at_or_above = 0;    // documents requiring review
    std::int64_t positives_at_or_above = 0;
};

/// 100 * training_positives / total_positives.
double training_set_recall(std::int64_t training_positives, std::int64_t total_positives);

/// Positives a cutoff still has to capture: max(0, ceil(target * total) -
/// training). The ceiling tolerates the binary representation error of
/// decimal targets (0.9 * 30 = 27.000000000000004 must need 27, not 28).
std::int64_t needed_positives(double target, std::int64_t total_positives,
                              std::int64_t training_positives);

/// The largest score c such that at least `needed` positive remaining
/// documents score >= c; every remaining document scoring >= c requires
/// review (negatives tied at the cutoff included). needed == 0 yields no
/// cutoff and an empty review set. Throws InfeasibleTarget if fewer than
/// `needed` positives remain.
CutoffResult find_cutoff(std::span<const ScoredDoc> remaining, std::int64_t needed);

/// 100 * (docs_at_or_above_cutoff + training_docs_reviewed) / corpus_total.
double pct_requiring_review(std::int64_t docs_at_or_above_cutoff,
                            std::int64_t training_docs_reviewed,
                            std::int64_t corpus_total);

/// Review burden on a validation set: the share of validation documents at
/// or above the largest cutoff that captures `target` recall of the
/// validation positives.
double validation_review_pct(std::span<const ScoredDoc> validation, double target);

/// Per-round review statistics for one recall target.
struct ReviewStats {
    int round = 0;
    double recall_target = 0.0;
    std::optional<double> cutoff;
    std::int64_t docs_at_or_above_cutoff = 0;
    std::int64_t training_docs_reviewed = 0;
    double pct_requiring_review = 0.0;
    double training_set_recall = 0.0;
};

/// The round where a strategy needs the least review for a target.
struct OptimumPerformance {
    StrategyKind strategy = StrategyKind::TopRanked;
    double recall_target = 0.0;
    int round = 0;
    double training_set_recall = 0.0;
    double pct_requiring_review = 0.0;
};

/// Earliest round attaining the minimum pct_requiring_review.
OptimumPerformance optimum_performance(std::span<const ReviewStats> rounds,
                                       StrategyKind strategy, double target);

} // namespace tarsim
