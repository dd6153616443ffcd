#include "tarsim/corpus.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <unordered_set>

#include <json.hpp>

#include "tarsim/error.hpp"
#include "tarsim/rng.hpp"

namespace tarsim {

LabeledCorpus::LabeledCorpus(std::vector<Document> documents,
                             std::vector<std::uint8_t> labels)
    : documents_(std::move(documents)), labels_(std::move(labels)) {
    if (documents_.size() != labels_.size())
        throw Error(ErrorCode::MalformedRecord, "document/label count mismatch");
    if (documents_.size() < 2)
        throw Error(ErrorCode::TooFewDocuments,
                    "corpus needs at least 2 documents, got " +
                        std::to_string(documents_.size()));

    std::unordered_set<std::string_view> seen;
    seen.reserve(documents_.size());
    for (const Document& doc : documents_) {
        if (doc.id.empty())
            throw Error(ErrorCode::MalformedRecord, "empty document id");
        if (!seen.insert(doc.id).second)
            throw Error(ErrorCode::DuplicateId, "duplicate document id: " + doc.id);
    }
    for (std::uint8_t label : labels_) positives_ += label;
    if (positives_ == 0)
        throw Error(ErrorCode::NoPositives, "corpus has no positive documents");
    if (positives_ == static_cast<std::int64_t>(documents_.size()))
        throw Error(ErrorCode::NoNegatives, "corpus has no negative documents");
}

LabeledCorpus load_corpus(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::IoFailure, "cannot open corpus file: " + path.string());

    std::vector<Document> documents;
    std::vector<std::uint8_t> labels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json record;
        try {
            record = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::MalformedRecord,
                        "line " + std::to_string(line_no) + ": " + e.what());
        }
        auto malformed = [&](const std::string& why) {
            return Error(ErrorCode::MalformedRecord,
                         "line " + std::to_string(line_no) + ": " + why);
        };
        if (!record.is_object()) throw malformed("not a JSON object");
        if (record.size() != 3 || !record.contains("id") ||
            !record.contains("text") || !record.contains("label"))
            throw malformed("expected exactly the keys id, text, label");
        if (!record["id"].is_string()) throw malformed("id must be a string");
        if (!record["text"].is_string()) throw malformed("text must be a string");
        if (!record["label"].is_number_integer())
            throw malformed("label must be an integer");
        const std::int64_t label = record["label"].get<std::int64_t>();
        if (label != 0 && label != 1) throw malformed("label must be 0 or 1");

        documents.push_back({record["id"].get<std::string>(),
                             record["text"].get<std::string>()});
        labels.push_back(static_cast<std::uint8_t>(label));
    }
    return LabeledCorpus(std::move(documents), std::move(labels));
}

void save_corpus(const LabeledCorpus& corpus, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorCode::IoFailure, "cannot write corpus file: " + path.string());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        nlohmann::ordered_json record;
        record["id"] = corpus.document(i).id;
        record["text"] = corpus.document(i).text;
        record["label"] = corpus.positive(i) ? 1 : 0;
        out << record.dump() << '\n';
    }
    if (!out)
        throw Error(ErrorCode::IoFailure, "failed writing corpus file: " + path.string());
}

double richness(const LabeledCorpus& corpus) {
    return static_cast<double>(corpus.positives()) / static_cast<double>(corpus.size());
}

SplitResult split_validation(const LabeledCorpus& corpus, double fraction,
                             std::uint64_t rng_seed) {
    const std::size_t total = corpus.size();
    if (!(fraction > 0.0 && fraction < 1.0))
        throw Error(ErrorCode::InfeasibleParameters,
                    "validation fraction must lie in (0,1)");
    const auto validation_size = static_cast<std::size_t>(
        std::floor(fraction * static_cast<double>(total) + 0.5));
    if (validation_size < 1)
        throw Error(ErrorCode::DegenerateSplit, "validation set would be empty");
    if (total - validation_size < 2)
        throw Error(ErrorCode::DegenerateSplit, "pool would have fewer than 2 documents");

    std::vector<std::size_t> ordinals(total);
    std::iota(ordinals.begin(), ordinals.end(), std::size_t{0});
    std::vector<std::size_t> picked = sample_without_replacement(
        std::span<const std::size_t>(ordinals), validation_size, rng_seed);

    std::vector<std::uint8_t> in_validation(total, 0);
    for (std::size_t ordinal : picked) in_validation[ordinal] = 1;

    std::vector<Document> val_docs, pool_docs;
    std::vector<std::uint8_t> val_labels, pool_labels;
    val_docs.reserve(validation_size);
    pool_docs.reserve(total - validation_size);
    std::int64_t val_pos = 0, pool_pos = 0;
    for (std::size_t i = 0; i < total; ++i) {
        const std::uint8_t label = corpus.positive(i) ? 1 : 0;
        if (in_validation[i]) {
            val_docs.push_back(corpus.document(i));
            val_labels.push_back(label);
            val_pos += label;
        } else {
            pool_docs.push_back(corpus.document(i));
            pool_labels.push_back(label);
            pool_pos += label;
        }
    }

    auto degenerate = [&](const char* side) {
        return Error(ErrorCode::DegenerateSplit,
                     std::string(side) +
                         " set lacks one of the classes; retry with another seed");
    };
    if (val_pos == 0 || val_pos == static_cast<std::int64_t>(val_docs.size()))
        throw degenerate("validation");
    if (pool_pos == 0 || pool_pos == static_cast<std::int64_t>(pool_docs.size()))
        throw degenerate("pool");

    return SplitResult{
        LabeledCorpus(std::move(val_docs), std::move(val_labels)),
        LabeledCorpus(std::move(pool_docs), std::move(pool_labels)),
    };
}

} // namespace tarsim
