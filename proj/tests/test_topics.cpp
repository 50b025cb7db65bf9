#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "test_util.hpp"
#include "xlsim/error.hpp"
#include "xlsim/log.hpp"
#include "xlsim/topics.hpp"

using namespace xlsim;

namespace {

Vocabulary numbered_vocab(std::size_t v) {
    std::vector<std::string> terms;
    for (std::size_t i = 0; i < v; ++i) terms.push_back("w" + std::string(i < 10 ? "0" : "") + std::to_string(i));
    return Vocabulary(terms, std::vector<std::size_t>(v, 1), 1);
}

BagOfWords bow_of(std::initializer_list<std::pair<TermId, std::uint32_t>> counts) { return BagOfWords{counts}; }

std::vector<BagOfWords> random_bows(std::mt19937_64& rng, std::size_t docs, std::size_t v, std::size_t max_len) {
    std::vector<BagOfWords> out(docs);
    for (auto& b : out) {
        std::map<TermId, std::uint32_t> c;
        for (auto len = 1 + rng() % max_len; len > 0; --len) ++c[static_cast<TermId>(rng() % v)];
        b.counts.assign(c.begin(), c.end());
    }
    return out;
}

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

TEST_CASE("published preset") {
    const auto p = LdaParams::published_preset();
    CHECK(p.num_topics == 500);
    CHECK(p.alpha == 0.1);
    CHECK(p.beta == 0.01);
    CHECK(p.iterations == 1000);
}

TEST_CASE("count conservation after every sweep") {
    std::mt19937_64 rng(1);
    const auto bows = random_bows(rng, 30, 25, 40);
    std::uint64_t tokens = 0;
    for (const auto& b : bows) tokens += b.total();
    GibbsSampler s(bows, 25, 5, 0.1, 0.01, 99);
    for (int i = 0; i < 20; ++i) {
        s.sweep();
        CHECK(std::accumulate(s.topic_totals().begin(), s.topic_totals().end(), std::uint64_t{0}) == tokens);
        for (TopicId k = 0; k < 5; ++k) {
            std::uint64_t row = 0;
            for (TermId w = 0; w < 25; ++w) row += s.topic_word(k, w);
            CHECK(row == s.topic_totals()[k]);
        }
        for (std::size_t d = 0; d < bows.size(); ++d) {
            const auto dt = s.doc_topic_counts(d);
            CHECK(std::accumulate(dt.begin(), dt.end(), std::uint64_t{0}) == bows[d].total());
        }
    }
    CHECK(s.sweeps_done() == 20);
}

TEST_CASE("identical one-word documents concentrate on one topic") {
    // With a single vocabulary word the word factor of the Gibbs conditional is
    // the same for every topic, so each document's split n between the two
    // topics follows the Polya law C(50,n) B(n+a, 50-n+a) / B(a,a). For a=0.1,
    // P(max share >= 45/50) = 0.82204 (exact sum of that law).
    std::vector<BagOfWords> bows(400, bow_of({{0, 50}}));
    const Vocabulary vocab({"solo"}, {400}, 400);
    LdaParams p;
    p.num_topics = 2;
    p.iterations = 300;
    p.seed = 3;
    double concentrated = 0;
    std::size_t snapshots = 0;
    const auto model = train_lda(bows, vocab, p, "en", [&](const GibbsSampler& s) {
        if (s.sweeps_done() <= 200) return;
        ++snapshots;
        for (std::size_t d = 0; d < s.num_docs(); ++d) {
            const auto c = s.doc_topic_counts(d);
            concentrated += std::max(c[0], c[1]) >= 45;
        }
    });
    const double fraction = concentrated / static_cast<double>(snapshots * bows.size());
    CHECK(fraction == doctest::Approx(0.82204).epsilon(0.08));
    CHECK(model.total_tokens() == 20000);

    // a document already sitting on one topic keeps it during fold-in
    const Vocabulary two({"solo", "other"}, {400, 1}, 400);
    const TopicModel fixed("en", two, 2, 0.1, 0.01, 1, 1, {20000, 0, 0, 20000});
    const auto theta = infer(fixed, bows[0]);
    CHECK(theta.weights[0] > 0.9);
}

TEST_CASE("training is deterministic for a fixed seed") {
    std::mt19937_64 rng(2);
    const auto bows = random_bows(rng, 40, 30, 30);
    const auto vocab = numbered_vocab(30);
    LdaParams p;
    p.num_topics = 6;
    p.iterations = 30;
    p.seed = 17;
    const auto a = train_lda(bows, vocab, p);
    const auto b = train_lda(bows, vocab, p);
    CHECK(a.topic_word_counts() == b.topic_word_counts());
    CHECK(a.to_json().dump() == b.to_json().dump());
    p.seed = 18;
    CHECK(train_lda(bows, vocab, p).topic_word_counts() != a.topic_word_counts());
}

TEST_CASE("training input errors") {
    const auto vocab = numbered_vocab(3);
    LdaParams p;
    p.num_topics = 2;
    p.iterations = 2;
    std::vector<BagOfWords> empty_docs(3);
    CHECK_THROWS_AS(train_lda(empty_docs, vocab, p), InvalidArgument);
    std::vector<BagOfWords> tiny = {bow_of({{0, 1}})};
    CHECK_THROWS_AS(train_lda(tiny, vocab, p), InvalidArgument);
    p.num_topics = 1;
    CHECK_THROWS_AS(train_lda(std::vector<BagOfWords>{bow_of({{0, 5}})}, vocab, p), InvalidArgument);
}

TEST_CASE("empty documents are skipped with a warning") {
    set_warnings_enabled(false);
    const auto vocab = numbered_vocab(3);
    LdaParams p;
    p.num_topics = 2;
    p.iterations = 5;
    std::vector<BagOfWords> bows = {bow_of({{0, 3}, {1, 2}}), {}, bow_of({{2, 4}})};
    const auto m = train_lda(bows, vocab, p);
    CHECK(m.total_tokens() == 9);
    set_warnings_enabled(true);
}

TEST_CASE("single-label LabeledLDA puts every token on that label") {
    std::mt19937_64 rng(4);
    const auto bows = random_bows(rng, 20, 10, 15);
    const std::vector<std::set<std::string>> labels(20, {"L"});
    const auto vocab = numbered_vocab(10);
    LdaParams p;
    p.iterations = 10;
    const auto m = train_labeled_lda(bows, labels, {"L", "M"}, vocab, p);
    REQUIRE(m.is_labeled());
    CHECK(m.topic_labels() == std::vector<std::string>{"L", "M"});
    CHECK(m.topic_totals()[1] == 0);
    std::vector<std::uint64_t> unigram(10, 0);
    for (const auto& b : bows)
        for (auto [w, c] : b.counts) unigram[w] += c;
    for (TermId w = 0; w < 10; ++w) {
        CHECK(m.count(0, w) == unigram[w]);
        CHECK(m.word_prob(0, w) ==
              doctest::Approx((unigram[w] + 0.01) / (static_cast<double>(m.topic_totals()[0]) + 10 * 0.01)));
    }
}

TEST_CASE("LabeledLDA never assigns a topic outside the document's labels") {
    std::mt19937_64 rng(6);
    const auto bows = random_bows(rng, 40, 20, 20);
    const std::vector<std::string> universe = {"a", "b", "c", "d", "e"};
    std::vector<std::set<std::string>> labels(40);
    for (auto& l : labels) {
        l.insert(universe[rng() % 5]);
        if (rng() % 2) l.insert(universe[rng() % 5]);
    }
    std::size_t checked = 0;
    LdaParams p;
    p.iterations = 15;
    train_labeled_lda(bows, labels, universe, numbered_vocab(20), p, "en", [&](const GibbsSampler& s) {
        REQUIRE(s.num_docs() == labels.size());
        for (std::size_t d = 0; d < s.num_docs(); ++d) {
            for (TopicId k : s.assignments(d)) {
                CHECK(labels[d].count(universe[k]) == 1);
                ++checked;
            }
        }
    });
    CHECK(checked > 0);
}

TEST_CASE("LabeledLDA with disjoint label groups keeps top words in the group vocabulary") {
    std::mt19937_64 rng(8);
    std::vector<BagOfWords> bows;
    std::vector<std::set<std::string>> labels;
    for (int d = 0; d < 30; ++d) {
        const bool first = d % 2 == 0;
        std::map<TermId, std::uint32_t> c;
        for (int i = 0; i < 20; ++i) ++c[static_cast<TermId>((first ? 0 : 5) + rng() % 5)];
        bows.push_back(BagOfWords{{c.begin(), c.end()}});
        labels.push_back({first ? "G1" : "G2"});
    }
    LdaParams p;
    p.iterations = 20;
    const auto vocab = numbered_vocab(10);
    const auto m = train_labeled_lda(bows, labels, {"G1", "G2"}, vocab, p);
    for (const auto& [w, prob] : top_words(m, 0, 5)) CHECK(*vocab.find(w) < 5);
    for (const auto& [w, prob] : top_words(m, 1, 5)) CHECK(*vocab.find(w) >= 5);
}

TEST_CASE("LabeledLDA input errors") {
    const auto vocab = numbered_vocab(3);
    const std::vector<BagOfWords> bows = {bow_of({{0, 1}})};
    LdaParams p;
    p.iterations = 2;
    const std::vector<std::set<std::string>> unknown = {{"zzz"}};
    CHECK_THROWS_AS(train_labeled_lda(bows, unknown, {"a", "b"}, vocab, p), InvalidArgument);
    const std::vector<std::set<std::string>> ok = {{"a"}};
    CHECK_THROWS_AS(train_labeled_lda(bows, ok, {"a"}, vocab, p), InvalidArgument);
    CHECK_THROWS_AS(train_labeled_lda(bows, ok, {"a", "a"}, vocab, p), InvalidArgument);
}

TEST_CASE("infer on an empty document is uniform") {
    const auto vocab = numbered_vocab(4);
    const TopicModel m("en", vocab, 4, 0.1, 0.01, 1, 1, std::vector<std::uint32_t>(16, 1));
    const auto theta = infer(m, {});
    for (double w : theta.weights) CHECK(w == doctest::Approx(0.25));
}

TEST_CASE("infer recovers the topic owning the document's words") {
    // topic k owns words 3k..3k+2
    const std::size_t K = 4, V = 12;
    std::vector<std::uint32_t> counts(K * V, 0);
    for (std::size_t k = 0; k < K; ++k)
        for (std::size_t j = 0; j < 3; ++j) counts[k * V + 3 * k + j] = 100;
    const TopicModel m("en", numbered_vocab(V), K, 0.1, 0.01, 1, 1, counts);
    const auto bow = bow_of({{6, 4}, {7, 3}, {8, 5}});
    const auto theta = infer(m, bow);
    CHECK(theta.weights[2] > 0.9);
    CHECK(sum(theta.weights) == doctest::Approx(1.0).epsilon(1e-12));
    InferParams ip;
    ip.seed = 5;
    CHECK(infer(m, bow, ip).weights == infer(m, bow, ip).weights);
    ip.burn_in = ip.iterations;
    CHECK_THROWS_AS(infer(m, bow, ip), InvalidArgument);
}

TEST_CASE("inferred distributions sum to one") {
    std::mt19937_64 rng(9);
    const auto bows = random_bows(rng, 30, 15, 25);
    LdaParams p;
    p.num_topics = 5;
    p.iterations = 20;
    const auto m = train_lda(bows, numbered_vocab(15), p);
    InferParams ip;
    ip.iterations = 20;
    ip.burn_in = 5;
    for (const auto& b : bows) {
        const auto theta = infer(m, b, ip);
        CHECK(theta.size() == 5);
        CHECK(std::abs(sum(theta.weights) - 1.0) < 1e-9);
    }
}

TEST_CASE("top_words ordering") {
    const auto vocab = Vocabulary({"delta", "alpha", "charlie", "bravo"}, {1, 1, 1, 1}, 1);
    const TopicModel uniform("en", vocab, 2, 0.1, 0.01, 1, 1, std::vector<std::uint32_t>(8, 2));
    const auto tw = top_words(uniform, 0, 3);
    REQUIRE(tw.size() == 3);
    CHECK(tw[0].first == "alpha");
    CHECK(tw[1].first == "bravo");
    CHECK(tw[2].first == "charlie");
    const TopicModel skewed("en", vocab, 2, 0.1, 0.01, 1, 1, {1, 0, 5, 0, 0, 0, 0, 0});
    CHECK(top_words(skewed, 0, 2)[0].first == "charlie");
    CHECK(top_words(skewed, 0, 2)[1].first == "delta");
    CHECK(top_words(skewed, 0, 10).size() == 4);
}

TEST_CASE("topic model serialization round trip and validation") {
    const auto vocab = numbered_vocab(3);
    const TopicModel m("es", vocab, 2, 0.1, 0.01, 42, 7, {1, 0, 2, 0, 3, 0}, {"x", "y"});
    const auto j = m.to_json();
    const auto back = TopicModel::from_json(j);
    CHECK(back.topic_word_counts() == m.topic_word_counts());
    CHECK(back.topic_labels() == m.topic_labels());
    CHECK(back.lang() == "es");
    CHECK(back.seed() == 42);
    CHECK(back.to_json().dump() == j.dump());

    xlsim::testing::TempDir dir;
    m.save(dir / "m.json");
    CHECK(TopicModel::load(dir / "m.json").to_json() == j);

    auto broken = j;
    broken["topic_totals"][0] = 99;
    CHECK_THROWS_AS(TopicModel::from_json(broken), FormatError);
    CHECK_THROWS_AS(TopicModel("en", vocab, 1, 0.1, 0.01, 1, 1, {1, 1, 1}), InvalidArgument);
    CHECK_THROWS_AS(TopicModel("en", vocab, 2, 0.0, 0.01, 1, 1, std::vector<std::uint32_t>(6)), InvalidArgument);
    CHECK_THROWS_AS(TopicModel("en", vocab, 2, 0.1, 0.01, 1, 1, std::vector<std::uint32_t>(5)), InvalidArgument);
}
