#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "helpers.hpp"
#include "tarsim/error.hpp"
#include "tarsim/features.hpp"

using namespace tarsim;

TEST_CASE("tokenize") {
    CHECK(tokenize("Review the E-mail") ==
          std::vector<std::string>{"review", "the", "e", "mail"});
    CHECK(tokenize("") == std::vector<std::string>{});
    CHECK(tokenize("AT&T 2016") == std::vector<std::string>{"at", "t", "2016"});
    CHECK(tokenize("  spaces\t\nand,punct!  ") ==
          std::vector<std::string>{"spaces", "and", "punct"});

    SUBCASE("unicode letters and case folding") {
        CHECK(tokenize("Über Café") == std::vector<std::string>{"über", "café"});
        CHECK(tokenize("МОСКВА 2020") == std::vector<std::string>{"москва", "2020"});
        CHECK(tokenize("ΑΘΗΝΑ") == std::vector<std::string>{"αθηνα"});
    }
    SUBCASE("invalid UTF-8 bytes separate tokens") {
        CHECK(tokenize("ab\xFF""cd") == std::vector<std::string>{"ab", "cd"});
    }
    SUBCASE("deterministic") {
        const std::string text = "The AT&T review, 2nd E-mail (была)\n";
        CHECK(tokenize(text) == tokenize(text));
    }
}

TEST_CASE("build_vocabulary ranks by document frequency then token") {
    const LabeledCorpus corpus =
        testutil::make_corpus({{"a b", 1}, {"a c", 0}, {"a", 0}});

    SUBCASE("capacity cuts ties lexicographically") {
        const Vocabulary vocab = Vocabulary::build(corpus, 2);
        REQUIRE(vocab.size() == 2);
        CHECK(vocab.index_of("a") == 0);
        CHECK(vocab.index_of("b") == 1); // df(b)=df(c)=1, "b" < "c"
        CHECK_FALSE(vocab.index_of("c").has_value());
        CHECK(vocab.document_frequency(0) == 3);
        CHECK(vocab.document_frequency(1) == 1);
    }
    SUBCASE("capacity beyond distinct tokens keeps everything") {
        const Vocabulary vocab = Vocabulary::build(corpus, 100);
        CHECK(vocab.size() == 3);
        CHECK(vocab.index_of("c") == 2);
    }
    SUBCASE("token-free corpus is an error") {
        const LabeledCorpus empty = testutil::make_corpus({{"!!!", 1}, {"...", 0}});
        CHECK_THROWS_AS(Vocabulary::build(empty, 10), Error);
    }
    SUBCASE("independent of document order") {
        const LabeledCorpus shuffled =
            testutil::make_corpus({{"a", 0}, {"a b", 1}, {"a c", 0}});
        const Vocabulary v1 = Vocabulary::build(corpus, 2);
        const Vocabulary v2 = Vocabulary::build(shuffled, 2);
        REQUIRE(v1.size() == v2.size());
        for (int i = 0; i < static_cast<int>(v1.size()); ++i)
            CHECK(v1.token(i) == v2.token(i));
    }
}

TEST_CASE("build_vocabulary equals a brute-force df scan") {
    // Independent oracle: count document frequency with per-document token
    // sets, sort by (df desc, token asc), truncate.
    const LabeledCorpus corpus = testutil::random_corpus(500, 120, 0.3, 1234, 1, 30);
    const std::size_t capacity = 80;

    std::map<std::string, std::int64_t> df;
    for (const Document& doc : corpus.documents()) {
        std::set<std::string> uniq;
        for (const std::string& token : tokenize(doc.text)) uniq.insert(token);
        for (const std::string& token : uniq) df[token]++;
    }
    std::vector<std::pair<std::string, std::int64_t>> expected(df.begin(), df.end());
    std::stable_sort(expected.begin(), expected.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    if (expected.size() > capacity) expected.resize(capacity);

    const Vocabulary vocab = Vocabulary::build(corpus, capacity);
    REQUIRE(vocab.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(vocab.token(static_cast<int>(i)) == expected[i].first);
        CHECK(vocab.document_frequency(static_cast<int>(i)) == expected[i].second);
    }
}

TEST_CASE("vectorize produces unit-norm term frequencies") {
    const LabeledCorpus corpus = testutil::make_corpus({{"a b", 1}, {"a c", 0}});
    const Vocabulary vocab = Vocabulary::build(corpus, 10);

    SUBCASE("a a b") {
        const SparseVec v = vectorize({"x", "a a b"}, vocab);
        REQUIRE(v.nnz() == 2);
        CHECK(v.idx[0] == *vocab.index_of("a"));
        CHECK(v.idx[1] == *vocab.index_of("b"));
        CHECK(v.val[0] == doctest::Approx(0.8944271909999159).epsilon(1e-15));
        CHECK(v.val[1] == doctest::Approx(0.4472135954999579).epsilon(1e-15));
    }
    SUBCASE("out-of-vocabulary only") {
        CHECK(vectorize({"x", "zz yy"}, vocab).empty());
        CHECK(vectorize({"x", ""}, vocab).empty());
    }
    SUBCASE("unit L2 norm and strictly increasing indices") {
        const LabeledCorpus random = testutil::random_corpus(60, 40, 0.3, 5);
        const Vocabulary rv = Vocabulary::build(random, 30);
        for (const Document& doc : random.documents()) {
            const SparseVec v = vectorize(doc, rv);
            if (v.empty()) continue;
            double norm_sq = 0.0;
            for (std::size_t k = 0; k < v.nnz(); ++k) {
                norm_sq += v.val[k] * v.val[k];
                CHECK(v.val[k] > 0.0);
                if (k > 0) CHECK(v.idx[k] > v.idx[k - 1]);
            }
            CHECK(std::fabs(std::sqrt(norm_sq) - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("build_index is the transpose of the vectors") {
    SUBCASE("worked example") {
        std::vector<SparseVec> vectors(2);
        vectors[0].idx = {0};
        vectors[0].val = {1.0};
        vectors[1].idx = {0, 1};
        vectors[1].val = {0.6, 0.8};
        const InvertedIndex index = InvertedIndex::build(vectors, 2);
        REQUIRE(index.postings(0).size() == 2);
        CHECK(index.postings(0)[0].doc == 0);
        CHECK(index.postings(0)[0].weight == 1.0);
        CHECK(index.postings(0)[1].doc == 1);
        CHECK(index.postings(0)[1].weight == 0.6);
        REQUIRE(index.postings(1).size() == 1);
        CHECK(index.postings(1)[0].doc == 1);
        CHECK(index.postings(1)[0].weight == 0.8);
        CHECK(index.total_postings() == 3);
    }
    SUBCASE("empty slice") {
        const InvertedIndex index = InvertedIndex::build({}, 4);
        for (std::size_t f = 0; f < 4; ++f) CHECK(index.postings(f).empty());
        CHECK(index.num_documents() == 0);
    }
    SUBCASE("transpose round-trip reproduces the vectors exactly") {
        const LabeledCorpus corpus = testutil::random_corpus(200, 80, 0.3, 77);
        const Vocabulary vocab = Vocabulary::build(corpus, 60);
        const std::vector<SparseVec> vectors = vectorize_corpus(corpus, vocab);
        const InvertedIndex index = InvertedIndex::build(vectors, vocab.size());

        std::vector<SparseVec> rebuilt(vectors.size());
        for (std::size_t f = 0; f < index.num_features(); ++f) {
            int last_doc = -1;
            for (const Posting& p : index.postings(f)) {
                CHECK(p.doc > last_doc); // sorted by ordinal
                last_doc = p.doc;
                rebuilt[static_cast<std::size_t>(p.doc)].idx.push_back(
                    static_cast<int>(f));
                rebuilt[static_cast<std::size_t>(p.doc)].val.push_back(p.weight);
            }
        }
        for (std::size_t d = 0; d < vectors.size(); ++d) {
            CHECK(rebuilt[d].idx == vectors[d].idx);
            CHECK(rebuilt[d].val == vectors[d].val);
        }
    }
}

TEST_CASE("vocabulary TSV dump") {
    testutil::TempDir tmp("vocab");
    const LabeledCorpus corpus = testutil::make_corpus({{"a b", 1}, {"a c", 0}});
    const Vocabulary vocab = Vocabulary::build(corpus, 10);
    vocab.save_tsv(tmp.file("v.tsv"));
    const std::string dump = testutil::read_file(tmp.file("v.tsv"));
    CHECK(dump == "a\t0\t2\nb\t1\t1\nc\t2\t1\n");
}
