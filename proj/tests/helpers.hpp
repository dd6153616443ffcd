#pragma once

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <utility>
#include <vector>

#include "tarsim/corpus.hpp"
#include "tarsim/rng.hpp"

namespace testutil {

/// Unique scratch directory, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("tarsim-" + tag + "-" + std::to_string(::getpid()) + "-" +
                 std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path file(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline tarsim::LabeledCorpus make_corpus(
    const std::vector<std::pair<std::string, int>>& docs) {
    std::vector<tarsim::Document> documents;
    std::vector<std::uint8_t> labels;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        documents.push_back({"d" + std::to_string(i), docs[i].first});
        labels.push_back(static_cast<std::uint8_t>(docs[i].second));
    }
    return tarsim::LabeledCorpus(std::move(documents), std::move(labels));
}

/// Random token-soup corpus for oracle comparisons; label signal optional.
inline tarsim::LabeledCorpus random_corpus(std::size_t docs, std::size_t vocab,
                                           double richness, std::uint64_t seed,
                                           int min_len = 3, int max_len = 40) {
    std::mt19937_64 gen(seed);
    std::vector<std::pair<std::string, int>> out;
    std::size_t positives = 0;
    for (std::size_t d = 0; d < docs; ++d) {
        const bool positive =
            (d + 1 == docs && positives == 0) ? true : tarsim::uniform01(gen) < richness;
        positives += positive ? 1 : 0;
        const int len =
            min_len + static_cast<int>(tarsim::bounded_uint(
                          gen, static_cast<std::uint64_t>(max_len - min_len + 1)));
        std::string text;
        for (int t = 0; t < len; ++t) {
            if (t) text.push_back(' ');
            char buf[16];
            std::snprintf(buf, sizeof(buf), "tok%04llu",
                          static_cast<unsigned long long>(
                              tarsim::bounded_uint(gen, vocab)));
            text += buf;
        }
        out.emplace_back(std::move(text), positive ? 1 : 0);
    }
    if (positives == docs) out.back().second = 0; // keep both classes present
    return make_corpus(out);
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

/// Spearman rank correlation; average ranks for ties.
inline double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
    auto ranks = [](const std::vector<double>& v) {
        std::vector<std::size_t> order(v.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
        std::vector<double> rank(v.size());
        std::size_t i = 0;
        while (i < order.size()) {
            std::size_t j = i;
            while (j < order.size() && v[order[j]] == v[order[i]]) ++j;
            const double avg = (static_cast<double>(i) + static_cast<double>(j - 1)) / 2.0;
            for (std::size_t k = i; k < j; ++k) rank[order[k]] = avg;
            i = j;
        }
        return rank;
    };
    const std::vector<double> rx = ranks(xs), ry = ranks(ys);
    const double n = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0 || syy == 0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

} // namespace testutil
