#include "tarsim/features.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>

#include "tarsim/error.hpp"

namespace tarsim {
namespace {

// Letter/digit code point ranges for the major scripts, inclusive. Word
// characters are exactly the code points inside one of these ranges; this
// keeps tokenization deterministic with no locale dependency. Combining
// marks of Indic blocks count as word characters since they are part of
// the written word.
struct Range {
    char32_t lo, hi;
};

constexpr std::array<Range, 45> kWordRanges{{
    {0x0030, 0x0039}, // digits
    {0x0041, 0x005A}, // A-Z
    {0x0061, 0x007A}, // a-z
    {0x00AA, 0x00AA},
    {0x00B5, 0x00B5},
    {0x00BA, 0x00BA},
    {0x00C0, 0x00D6},
    {0x00D8, 0x00F6},
    {0x00F8, 0x02C1}, // Latin-1 .. Latin Extended-B, IPA
    {0x0370, 0x0374},
    {0x0376, 0x0377},
    {0x037A, 0x037D},
    {0x037F, 0x037F},
    {0x0386, 0x0386},
    {0x0388, 0x03FF}, // Greek
    {0x0400, 0x052F}, // Cyrillic + supplement
    {0x0531, 0x0556},
    {0x0561, 0x0587}, // Armenian
    {0x05D0, 0x05EA}, // Hebrew
    {0x0620, 0x064A},
    {0x0660, 0x0669},
    {0x066E, 0x06D3},
    {0x06F0, 0x06F9}, // Arabic letters and digits
    {0x0710, 0x072F}, // Syriac
    {0x0750, 0x077F}, // Arabic supplement
    {0x0900, 0x0963},
    {0x0966, 0x096F}, // Devanagari
    {0x0980, 0x09FF}, // Bengali
    {0x0E01, 0x0E3A},
    {0x0E40, 0x0E4E}, // Thai
    {0x10A0, 0x10FF}, // Georgian
    {0x1100, 0x11FF}, // Hangul Jamo
    {0x1E00, 0x1FFF}, // Latin Extended Additional, Greek Extended
    {0x2C60, 0x2C7F}, // Latin Extended-C
    {0x3041, 0x3096}, // Hiragana
    {0x30A1, 0x30FA},
    {0x30FC, 0x30FE}, // Katakana
    {0x3400, 0x4DBF}, // CJK Extension A
    {0x4E00, 0x9FFF}, // CJK Unified
    {0xAC00, 0xD7A3}, // Hangul syllables
    {0xF900, 0xFAFF}, // CJK Compatibility
    {0xFF10, 0xFF19},
    {0xFF21, 0xFF3A},
    {0xFF41, 0xFF5A},   // fullwidth digits/Latin
    {0x20000, 0x2A6DF}, // CJK Extension B
}};

bool is_word_cp(char32_t cp) {
    auto it = std::upper_bound(
        kWordRanges.begin(), kWordRanges.end(), cp,
        [](char32_t value, const Range& r) { return value < r.lo; });
    if (it == kWordRanges.begin()) return false;
    --it;
    return cp <= it->hi;
}

// Simple case folding: ASCII, Latin-1, Latin Extended-A, Greek, Cyrillic
// and fullwidth Latin. Other scripts pass through unchanged.
char32_t lower_cp(char32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
    if (cp >= 0x00C0 && cp <= 0x00DE && cp != 0x00D7) return cp + 0x20;
    if ((cp >= 0x0100 && cp <= 0x0137) || (cp >= 0x014A && cp <= 0x0177))
        return (cp % 2 == 0) ? cp + 1 : cp;
    if ((cp >= 0x0139 && cp <= 0x0148) || (cp >= 0x0179 && cp <= 0x017E))
        return (cp % 2 == 1) ? cp + 1 : cp;
    if (cp == 0x0178) return 0x00FF;
    if (cp >= 0x0391 && cp <= 0x03A9 && cp != 0x03A2) return cp + 0x20;
    if (cp >= 0x0410 && cp <= 0x042F) return cp + 0x20;
    if (cp >= 0x0400 && cp <= 0x040F) return cp + 0x50;
    if (cp >= 0xFF21 && cp <= 0xFF3A) return cp + 0x20;
    return cp;
}

// Decodes one UTF-8 code point at `pos`; advances `pos`. Invalid sequences
// yield U+FFFD (a non-word character) and advance one byte.
char32_t decode_utf8(std::string_view text, std::size_t& pos) {
    const auto byte = [&](std::size_t i) {
        return static_cast<unsigned char>(text[i]);
    };
    const unsigned char lead = byte(pos);
    auto continuation = [&](std::size_t i) {
        return i < text.size() && (byte(i) & 0xC0) == 0x80;
    };

    if (lead < 0x80) {
        ++pos;
        return lead;
    }
    if ((lead & 0xE0) == 0xC0 && continuation(pos + 1)) {
        char32_t cp = ((lead & 0x1Fu) << 6) | (byte(pos + 1) & 0x3Fu);
        pos += 2;
        return cp >= 0x80 ? cp : 0xFFFD;
    }
    if ((lead & 0xF0) == 0xE0 && continuation(pos + 1) && continuation(pos + 2)) {
        char32_t cp = ((lead & 0x0Fu) << 12) | ((byte(pos + 1) & 0x3Fu) << 6) |
                      (byte(pos + 2) & 0x3Fu);
        pos += 3;
        return cp >= 0x800 ? cp : 0xFFFD;
    }
    if ((lead & 0xF8) == 0xF0 && continuation(pos + 1) && continuation(pos + 2) &&
        continuation(pos + 3)) {
        char32_t cp = ((lead & 0x07u) << 18) | ((byte(pos + 1) & 0x3Fu) << 12) |
                      ((byte(pos + 2) & 0x3Fu) << 6) | (byte(pos + 3) & 0x3Fu);
        pos += 4;
        return (cp >= 0x10000 && cp <= 0x10FFFF) ? cp : 0xFFFD;
    }
    ++pos;
    return 0xFFFD;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

} // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const char32_t cp = decode_utf8(text, pos);
        if (is_word_cp(cp)) {
            append_utf8(current, lower_cp(cp));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

Vocabulary Vocabulary::build(const LabeledCorpus& corpus, std::size_t capacity) {
    if (capacity < 1)
        throw Error(ErrorCode::InfeasibleParameters, "vocabulary capacity must be >= 1");

    std::unordered_map<std::string, std::int64_t> df;
    std::vector<std::string> doc_tokens;
    for (const Document& doc : corpus.documents()) {
        doc_tokens = tokenize(doc.text);
        std::sort(doc_tokens.begin(), doc_tokens.end());
        doc_tokens.erase(std::unique(doc_tokens.begin(), doc_tokens.end()),
                         doc_tokens.end());
        for (std::string& token : doc_tokens) ++df[std::move(token)];
    }
    if (df.empty())
        throw Error(ErrorCode::EmptyVocabulary, "corpus contains no tokens");

    std::vector<std::pair<std::string, std::int64_t>> ranked;
    ranked.reserve(df.size());
    for (auto& [token, count] : df) ranked.emplace_back(token, count);
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (ranked.size() > capacity) ranked.resize(capacity);

    Vocabulary vocab;
    vocab.capacity_ = capacity;
    vocab.tokens_.reserve(ranked.size());
    vocab.df_.reserve(ranked.size());
    vocab.index_.reserve(ranked.size());
    for (auto& [token, count] : ranked) {
        vocab.index_.emplace(token, static_cast<int>(vocab.tokens_.size()));
        vocab.tokens_.push_back(std::move(token));
        vocab.df_.push_back(count);
    }
    return vocab;
}

std::optional<int> Vocabulary::index_of(std::string_view token) const {
    auto it = index_.find(std::string(token));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

void Vocabulary::save_tsv(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorCode::IoFailure, "cannot write vocabulary dump: " + path.string());
    for (std::size_t i = 0; i < tokens_.size(); ++i)
        out << tokens_[i] << '\t' << i << '\t' << df_[i] << '\n';
}

SparseVec vectorize(const Document& doc, const Vocabulary& vocab) {
    std::vector<int> hits;
    for (const std::string& token : tokenize(doc.text))
        if (auto index = vocab.index_of(token)) hits.push_back(*index);
    std::sort(hits.begin(), hits.end());

    SparseVec v;
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < hits.size();) {
        std::size_t j = i;
        while (j < hits.size() && hits[j] == hits[i]) ++j;
        const double count = static_cast<double>(j - i);
        v.idx.push_back(hits[i]);
        v.val.push_back(count);
        norm_sq += count * count;
        i = j;
    }
    if (!v.empty()) {
        const double inv_norm = 1.0 / std::sqrt(norm_sq);
        for (double& w : v.val) w *= inv_norm;
    }
    return v;
}

std::vector<SparseVec> vectorize_corpus(const LabeledCorpus& corpus,
                                        const Vocabulary& vocab) {
    std::vector<SparseVec> vectors;
    vectors.reserve(corpus.size());
    for (const Document& doc : corpus.documents())
        vectors.push_back(vectorize(doc, vocab));
    return vectors;
}

InvertedIndex InvertedIndex::build(std::span<const SparseVec> vectors,
                                   std::size_t num_features) {
    InvertedIndex index;
    index.postings_.resize(num_features);
    index.num_documents_ = vectors.size();

    std::vector<std::size_t> lengths(num_features, 0);
    for (const SparseVec& v : vectors)
        for (int f : v.idx) lengths.at(static_cast<std::size_t>(f))++;
    for (std::size_t f = 0; f < num_features; ++f)
        index.postings_[f].reserve(lengths[f]);

    // Documents visited in ordinal order, so each postings list comes out
    // sorted by ordinal.
    for (std::size_t d = 0; d < vectors.size(); ++d) {
        const SparseVec& v = vectors[d];
        for (std::size_t k = 0; k < v.nnz(); ++k) {
            index.postings_[static_cast<std::size_t>(v.idx[k])].push_back(
                Posting{static_cast<int>(d), v.val[k]});
            ++index.total_postings_;
        }
    }
    return index;
}

} // namespace tarsim
