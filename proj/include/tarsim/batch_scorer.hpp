#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "tarsim/features.hpp"
#include "tarsim/model.hpp"

namespace tarsim {

/// Probability scores for one round's remaining documents. Ordinals are
/// ascending; scores[i] belongs to ordinals[i].
struct ScoreTable {
    std::vector<int> ordinals;
    Eigen::VectorXd scores;
    int round = 0;

    std::size_t size() const noexcept { return ordinals.size(); }
};

struct ScoreStats {
    std::uint64_t postings_touched = 0;
};

/// Scores every target document in one term-at-a-time pass over the inverted
/// index: features are visited in ascending order and each posting adds
/// weights[f] * posting.weight into a dense margin accumulator, then the
/// sigmoid is applied. Matches per-document scoring to within 1e-9 (the
/// accumulation order per document is identical, so in practice exactly).
/// Documents with empty vectors receive sigmoid(bias).
///
/// `num_threads > 1` shards the accumulator by document-ordinal range; the
/// result is bit-identical to the single-threaded pass.
ScoreTable score_all(const LinearModel& model, const InvertedIndex& index,
                     std::span<const int> targets, int num_threads = 1,
                     ScoreStats* stats = nullptr);

} // namespace tarsim
