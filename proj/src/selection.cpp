#include "tarsim/selection.hpp"

#include <algorithm>
#include <cmath>

#include "tarsim/rng.hpp"

namespace tarsim {
namespace {

struct Scored {
    int ordinal;
    double score;
};

std::vector<Scored> gather(const ScoreTable& table) {
    std::vector<Scored> items;
    items.reserve(table.size());
    for (std::size_t i = 0; i < table.size(); ++i)
        items.push_back({table.ordinals[i], table.scores[static_cast<Eigen::Index>(i)]});
    return items;
}

template <typename Less>
Batch take_n(std::vector<Scored> items, int n, int round, Less less) {
    const auto count = std::min<std::size_t>(static_cast<std::size_t>(n), items.size());
    std::partial_sort(items.begin(), items.begin() + static_cast<std::ptrdiff_t>(count),
                      items.end(), less);
    Batch batch;
    batch.round = round;
    batch.ordinals.reserve(count);
    for (std::size_t i = 0; i < count; ++i) batch.ordinals.push_back(items[i].ordinal);
    return batch;
}

} // namespace

std::string_view strategy_name(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::TopRanked: return "top-ranked";
        case StrategyKind::Uncertain: return "uncertain";
        case StrategyKind::Random: return "random";
    }
    return "?";
}

std::optional<StrategyKind> parse_strategy(std::string_view name) {
    if (name == "top-ranked") return StrategyKind::TopRanked;
    if (name == "uncertain") return StrategyKind::Uncertain;
    if (name == "random") return StrategyKind::Random;
    return std::nullopt;
}

Batch select_top_ranked(const ScoreTable& scores, int n) {
    return take_n(gather(scores), n, scores.round, [](const Scored& a, const Scored& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.ordinal < b.ordinal;
    });
}

Batch select_uncertain(const ScoreTable& scores, int n) {
    return take_n(gather(scores), n, scores.round, [](const Scored& a, const Scored& b) {
        const double da = std::fabs(a.score - 0.5);
        const double db = std::fabs(b.score - 0.5);
        if (da != db) return da < db;
        if (a.score != b.score) return a.score < b.score;
        return a.ordinal < b.ordinal;
    });
}

Batch select_random(std::span<const int> pool, int n, std::uint64_t rng_seed,
                    int round) {
    Batch batch;
    batch.round = round;
    batch.ordinals = sample_without_replacement(
        pool, static_cast<std::size_t>(std::max(n, 0)),
        splitmix64(rng_seed ^ splitmix64(static_cast<std::uint64_t>(round))));
    return batch;
}

} // namespace tarsim
