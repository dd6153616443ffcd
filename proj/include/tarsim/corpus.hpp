#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace tarsim {

struct Document {
    std::string id;
    std::string text;
};

/// An immutable collection of documents with binary oracle labels
/// (1 = positive). Construction validates: non-empty unique ids, at least
/// two documents, and at least one document of each class, so richness
/// always lies strictly inside (0,1).
class LabeledCorpus {
public:
    LabeledCorpus(std::vector<Document> documents, std::vector<std::uint8_t> labels);

    std::size_t size() const noexcept { return documents_.size(); }
    std::int64_t positives() const noexcept { return positives_; }
    std::int64_t negatives() const noexcept {
        return static_cast<std::int64_t>(size()) - positives_;
    }

    const Document& document(std::size_t ordinal) const { return documents_.at(ordinal); }
    bool positive(std::size_t ordinal) const { return labels_.at(ordinal) != 0; }
    const std::vector<Document>& documents() const noexcept { return documents_; }
    const std::vector<std::uint8_t>& labels() const noexcept { return labels_; }

private:
    std::vector<Document> documents_;
    std::vector<std::uint8_t> labels_; // by ordinal, 0 or 1
    std::int64_t positives_ = 0;
};

/// Reads a JSONL corpus: one object per line with exactly the keys
/// `id` (string), `text` (string) and `label` (integer 0 or 1).
/// Unknown keys are rejected. Document order is file order.
LabeledCorpus load_corpus(const std::filesystem::path& path);

/// Writes the corpus in the same JSONL format load_corpus reads, preserving
/// document order, so load -> save -> load round-trips.
void save_corpus(const LabeledCorpus& corpus, const std::filesystem::path& path);

/// positives / total.
double richness(const LabeledCorpus& corpus);

struct SplitResult {
    LabeledCorpus validation;
    LabeledCorpus pool;
};

/// Uniformly samples round(fraction * total) documents (half-up) into a
/// validation set; the rest form the pool. Fully determined by rng_seed.
/// Throws DegenerateSplit if either side ends up without both classes.
SplitResult split_validation(const LabeledCorpus& corpus, double fraction,
                             std::uint64_t rng_seed);

} // namespace tarsim
