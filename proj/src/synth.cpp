#include "tarsim/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "tarsim/error.hpp"
#include "tarsim/rng.hpp"

namespace tarsim {
namespace {

// Zipf-like cumulative distribution over [first, first+count).
class TokenBlock {
public:
    TokenBlock(int first, int count, double exponent) : first_(first) {
        cumulative_.reserve(static_cast<std::size_t>(count));
        double total = 0.0;
        for (int r = 1; r <= count; ++r) {
            total += 1.0 / std::pow(static_cast<double>(r), exponent);
            cumulative_.push_back(total);
        }
        for (double& c : cumulative_) c /= total;
    }

    int draw(std::mt19937_64& gen) const {
        const double u = uniform01(gen);
        const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
        return first_ + static_cast<int>(it - cumulative_.begin());
    }

private:
    int first_;
    std::vector<double> cumulative_;
};

std::string token_name(int index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "w%06d", index);
    return buf;
}

} // namespace

LabeledCorpus generate_corpus(const SynthConfig& config) {
    if (config.total < 2)
        throw Error(ErrorCode::InfeasibleParameters, "total must be >= 2");
    if (!(config.richness > 0.0 && config.richness < 1.0))
        throw Error(ErrorCode::InfeasibleParameters, "richness must lie in (0,1)");
    if (config.vocab_size < 30)
        throw Error(ErrorCode::InfeasibleParameters, "vocab_size must be >= 30");
    if (config.separation < 0.0 || config.separation > 1.0)
        throw Error(ErrorCode::InfeasibleParameters, "separation must lie in [0,1]");
    if (config.avg_doc_len <= 0.0)
        throw Error(ErrorCode::InfeasibleParameters, "avg_doc_len must be positive");

    const auto positives =
        static_cast<std::int64_t>(std::llround(config.richness *
                                               static_cast<double>(config.total)));
    if (positives < 1)
        throw Error(ErrorCode::InfeasibleParameters,
                    "richness * total < 1: no positive documents possible");
    if (positives >= config.total)
        throw Error(ErrorCode::InfeasibleParameters,
                    "richness * total leaves no negative documents");

    // First tenth of the vocabulary marks positives, second tenth negatives,
    // the rest is shared background.
    const int block = std::max(1, config.vocab_size / 10);
    const TokenBlock positive_block(0, block, 1.05);
    const TokenBlock negative_block(block, block, 1.05);
    const TokenBlock shared_block(2 * block, config.vocab_size - 2 * block, 1.05);

    std::mt19937_64 gen(derive_seed(config.seed, "synth"));

    // Exact class counts, order shuffled so labels are not clustered.
    std::vector<std::uint8_t> labels(static_cast<std::size_t>(config.total), 0);
    std::fill_n(labels.begin(), static_cast<std::size_t>(positives), std::uint8_t{1});
    for (std::size_t i = labels.size() - 1; i > 0; --i) {
        const std::size_t j = static_cast<std::size_t>(bounded_uint(gen, i + 1));
        std::swap(labels[i], labels[j]);
    }

    std::vector<Document> documents;
    documents.reserve(static_cast<std::size_t>(config.total));
    std::string text;
    for (std::int64_t d = 0; d < config.total; ++d) {
        const bool positive = labels[static_cast<std::size_t>(d)] != 0;
        const int length = std::max(1, poisson(gen, config.avg_doc_len));
        text.clear();
        for (int t = 0; t < length; ++t) {
            const bool from_class = uniform01(gen) < config.separation;
            const TokenBlock& source =
                from_class ? (positive ? positive_block : negative_block) : shared_block;
            if (t > 0) text.push_back(' ');
            text += token_name(source.draw(gen));
        }
        char id[24];
        std::snprintf(id, sizeof(id), "doc-%08lld", static_cast<long long>(d));
        documents.push_back({id, text});
    }
    return LabeledCorpus(std::move(documents), std::move(labels));
}

} // namespace tarsim
