#include "tarsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tarsim/error.hpp"

namespace tarsim {

double training_set_recall(std::int64_t training_positives,
                           std::int64_t total_positives) {
    if (total_positives < 1)
        throw Error(ErrorCode::InfeasibleParameters, "total_positives must be >= 1");
    if (training_positives < 0 || training_positives > total_positives)
        throw Error(ErrorCode::InfeasibleParameters,
                    "training_positives outside [0, total_positives]");
    return 100.0 * static_cast<double>(training_positives) /
           static_cast<double>(total_positives);
}

std::int64_t needed_positives(double target, std::int64_t total_positives,
                              std::int64_t training_positives) {
    const double product = target * static_cast<double>(total_positives);
    const double rounded = std::nearbyint(product);
    std::int64_t required;
    if (std::fabs(product - rounded) <= 1e-9 * std::max(1.0, std::fabs(product)))
        required = static_cast<std::int64_t>(rounded);
    else
        required = static_cast<std::int64_t>(std::ceil(product));
    return std::max<std::int64_t>(0, required - training_positives);
}

CutoffResult find_cutoff(std::span<const ScoredDoc> remaining, std::int64_t needed) {
    if (needed < 0)
        throw Error(ErrorCode::InfeasibleParameters, "needed_positives must be >= 0");
    if (needed == 0) return {};

    std::vector<std::pair<double, bool>> docs; // (score, positive)
    docs.reserve(remaining.size());
    std::int64_t positives_total = 0;
    for (const ScoredDoc& d : remaining) {
        docs.emplace_back(d.score, d.positive);
        positives_total += d.positive ? 1 : 0;
    }
    if (positives_total < needed)
        throw Error(ErrorCode::InfeasibleTarget,
                    "need " + std::to_string(needed) + " positives but only " +
                        std::to_string(positives_total) + " remain");

    std::sort(docs.begin(), docs.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });

    // Candidate cutoffs are the distinct scores, highest first; the count of
    // positives at/above is non-decreasing as the cutoff drops, so the first
    // feasible candidate is the largest one. Tie blocks are consumed whole
    // because "score >= c" captures every document tied at c.
    std::int64_t docs_above = 0, positives_above = 0;
    std::size_t i = 0;
    while (i < docs.size()) {
        const double cutoff = docs[i].first;
        std::size_t j = i;
        while (j < docs.size() && docs[j].first == cutoff) {
            ++docs_above;
            positives_above += docs[j].second ? 1 : 0;
            ++j;
        }
        if (positives_above >= needed)
            return {cutoff, docs_above, positives_above};
        i = j;
    }
    throw Error(ErrorCode::InfeasibleTarget, "unreachable: feasibility checked above");
}

double pct_requiring_review(std::int64_t docs_at_or_above_cutoff,
                            std::int64_t training_docs_reviewed,
                            std::int64_t corpus_total) {
    if (corpus_total < 1)
        throw Error(ErrorCode::InfeasibleParameters, "corpus_total must be >= 1");
    return 100.0 *
           static_cast<double>(docs_at_or_above_cutoff + training_docs_reviewed) /
           static_cast<double>(corpus_total);
}

double validation_review_pct(std::span<const ScoredDoc> validation, double target) {
    if (!(target > 0.0 && target <= 1.0))
        throw Error(ErrorCode::InfeasibleParameters, "recall target must lie in (0,1]");
    std::int64_t positives = 0;
    for (const ScoredDoc& d : validation) positives += d.positive ? 1 : 0;
    if (positives < 1)
        throw Error(ErrorCode::InfeasibleParameters,
                    "validation set has no positive documents");
    const std::int64_t needed = std::max<std::int64_t>(
        1, needed_positives(target, positives, 0));
    const CutoffResult cut = find_cutoff(validation, needed);
    return 100.0 * static_cast<double>(cut.docs_at_or_above) /
           static_cast<double>(validation.size());
}

OptimumPerformance optimum_performance(std::span<const ReviewStats> rounds,
                                       StrategyKind strategy, double target) {
    if (rounds.empty())
        throw Error(ErrorCode::InfeasibleParameters, "no rounds recorded");
    const ReviewStats* best = &rounds.front();
    for (const ReviewStats& r : rounds)
        if (r.pct_requiring_review < best->pct_requiring_review) best = &r;
    return OptimumPerformance{strategy, target, best->round, best->training_set_recall,
                              best->pct_requiring_review};
}

} // namespace tarsim
