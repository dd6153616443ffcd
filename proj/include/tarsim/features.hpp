#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tarsim/corpus.hpp"

namespace tarsim {

/// Splits text into lowercased maximal runs of letter/digit code points.
/// Length-1 and pure-digit tokens are kept; everything else separates.
std::vector<std::string> tokenize(std::string_view text);

/// Token -> dense feature index map, capped at `capacity` tokens. Tokens are
/// ranked by document frequency (ties by lexicographic token order) and
/// indices are assigned in that rank order.
class Vocabulary {
public:
    static constexpr std::size_t kDefaultCapacity = 20000;

    static Vocabulary build(const LabeledCorpus& corpus,
                            std::size_t capacity = kDefaultCapacity);

    std::size_t size() const noexcept { return tokens_.size(); }
    std::size_t capacity() const noexcept { return capacity_; }
    std::optional<int> index_of(std::string_view token) const;
    const std::string& token(int index) const { return tokens_.at(index); }
    std::int64_t document_frequency(int index) const { return df_.at(index); }

    /// Debug dump, one `token <TAB> index <TAB> df` line per feature.
    void save_tsv(const std::filesystem::path& path) const;

private:
    std::vector<std::string> tokens_;            // index -> token
    std::vector<std::int64_t> df_;               // index -> document frequency
    std::unordered_map<std::string, int> index_; // token -> index
    std::size_t capacity_ = kDefaultCapacity;
};

/// Sparse L2-normalized term-frequency vector: strictly increasing feature
/// indices, no stored zeros. Empty for documents with no in-vocabulary token.
struct SparseVec {
    std::vector<int> idx;
    std::vector<double> val;

    std::size_t nnz() const noexcept { return idx.size(); }
    bool empty() const noexcept { return idx.empty(); }
};

SparseVec vectorize(const Document& doc, const Vocabulary& vocab);

/// Vectorizes every document of a corpus; result is indexed by ordinal.
std::vector<SparseVec> vectorize_corpus(const LabeledCorpus& corpus,
                                        const Vocabulary& vocab);

struct Posting {
    int doc;       // document ordinal
    double weight; // the document vector entry for this feature
};

/// Feature-major transpose of the document vectors: postings[f] holds the
/// (ordinal, weight) pairs of every document whose vector has feature f,
/// sorted by ordinal.
class InvertedIndex {
public:
    static InvertedIndex build(std::span<const SparseVec> vectors,
                               std::size_t num_features);

    std::size_t num_features() const noexcept { return postings_.size(); }
    std::size_t num_documents() const noexcept { return num_documents_; }
    const std::vector<Posting>& postings(std::size_t feature) const {
        return postings_.at(feature);
    }
    std::uint64_t total_postings() const noexcept { return total_postings_; }

private:
    std::vector<std::vector<Posting>> postings_;
    std::size_t num_documents_ = 0;
    std::uint64_t total_postings_ = 0;
};

} // namespace tarsim
