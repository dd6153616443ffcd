#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tarsim/batch_scorer.hpp"

namespace tarsim {

enum class StrategyKind { TopRanked, Uncertain, Random };

std::string_view strategy_name(StrategyKind kind);
std::optional<StrategyKind> parse_strategy(std::string_view name);

/// The next training batch: document ordinals in selection order.
struct Batch {
    std::vector<int> ordinals;
    int round = 0;
};

/// The n highest-scoring documents; ties broken by ascending ordinal.
/// Returns the whole table if fewer than n remain.
Batch select_top_ranked(const ScoreTable& scores, int n);

/// The n documents with scores closest to 0.5; distance ties broken by
/// lower score, then ascending ordinal.
Batch select_uncertain(const ScoreTable& scores, int n);

/// Uniform sample without replacement of min(n, |pool|) documents, fully
/// determined by (rng_seed, round).
Batch select_random(std::span<const int> pool, int n, std::uint64_t rng_seed,
                    int round);

} // namespace tarsim
