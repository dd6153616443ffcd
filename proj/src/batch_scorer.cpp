#include "tarsim/batch_scorer.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "tarsim/error.hpp"

namespace tarsim {
namespace {

// Accumulates postings whose document ordinal lies in [doc_lo, doc_hi).
// Each document's contributions still arrive in ascending feature order,
// so sums are bit-identical regardless of the sharding.
std::uint64_t accumulate_range(const LinearModel& model, const InvertedIndex& index,
                               const std::vector<std::uint8_t>& is_target,
                               Eigen::VectorXd& margins, int doc_lo, int doc_hi) {
    std::uint64_t touched = 0;
    const std::size_t num_features = index.num_features();
    for (std::size_t f = 0; f < num_features; ++f) {
        const double weight = model.weights[static_cast<Eigen::Index>(f)];
        const std::vector<Posting>& postings = index.postings(f);
        auto first = std::lower_bound(
            postings.begin(), postings.end(), doc_lo,
            [](const Posting& p, int doc) { return p.doc < doc; });
        for (auto it = first; it != postings.end() && it->doc < doc_hi; ++it) {
            ++touched;
            if (is_target[static_cast<std::size_t>(it->doc)])
                margins[it->doc] += weight * it->weight;
        }
    }
    return touched;
}

} // namespace

ScoreTable score_all(const LinearModel& model, const InvertedIndex& index,
                     std::span<const int> targets, int num_threads,
                     ScoreStats* stats) {
    const auto num_docs = static_cast<int>(index.num_documents());
    if (model.weights.size() != static_cast<Eigen::Index>(index.num_features()))
        throw Error(ErrorCode::DimensionMismatch,
                    "model dimension does not match index feature count");

    std::vector<std::uint8_t> is_target(static_cast<std::size_t>(num_docs), 0);
    for (int d : targets) {
        if (d < 0 || d >= num_docs)
            throw Error(ErrorCode::UnknownDocument,
                        "target ordinal " + std::to_string(d) +
                            " is outside the index universe of " +
                            std::to_string(num_docs) + " documents");
        is_target[static_cast<std::size_t>(d)] = 1;
    }

    Eigen::VectorXd margins = Eigen::VectorXd::Zero(num_docs);
    std::uint64_t touched = 0;
    if (num_threads <= 1 || num_docs == 0) {
        touched = accumulate_range(model, index, is_target, margins, 0, num_docs);
    } else {
        const int shards = std::min(num_threads, num_docs);
        std::vector<std::uint64_t> shard_touched(static_cast<std::size_t>(shards), 0);
        std::vector<std::thread> workers;
        workers.reserve(static_cast<std::size_t>(shards));
        for (int s = 0; s < shards; ++s) {
            const int lo = static_cast<int>(static_cast<std::int64_t>(num_docs) * s / shards);
            const int hi =
                static_cast<int>(static_cast<std::int64_t>(num_docs) * (s + 1) / shards);
            workers.emplace_back([&, s, lo, hi] {
                shard_touched[static_cast<std::size_t>(s)] =
                    accumulate_range(model, index, is_target, margins, lo, hi);
            });
        }
        for (std::thread& w : workers) w.join();
        for (std::uint64_t t : shard_touched) touched += t;
    }
    if (stats != nullptr) stats->postings_touched = touched;

    ScoreTable table;
    table.ordinals.reserve(targets.size());
    for (int d = 0; d < num_docs; ++d)
        if (is_target[static_cast<std::size_t>(d)]) table.ordinals.push_back(d);
    table.scores.resize(static_cast<Eigen::Index>(table.ordinals.size()));
    for (std::size_t i = 0; i < table.ordinals.size(); ++i)
        table.scores[static_cast<Eigen::Index>(i)] =
            sigmoid(model.bias + margins[table.ordinals[i]]);
    return table;
}

} // namespace tarsim
