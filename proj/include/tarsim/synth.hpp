#pragma once

#include <cstdint>

#include "tarsim/corpus.hpp"

namespace tarsim {

/// Parameters for the synthetic labeled corpus generator. Positive and
/// negative documents draw tokens from two multinomials whose overlap is
/// controlled by `separation`: 0 makes text label-independent, 1 gives the
/// classes disjoint marker vocabularies.
struct SynthConfig {
    std::int64_t total = 0;
    double richness = 0.0;      // positives = round(richness * total), exact
    int vocab_size = 2000;
    double separation = 0.5;    // probability a token comes from the class block
    double avg_doc_len = 40.0;  // Poisson mean token count
    std::uint64_t seed = 0;
};

LabeledCorpus generate_corpus(const SynthConfig& config);

} // namespace tarsim
