#include "xlsim/topics.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "xlsim/error.hpp"
#include "xlsim/io.hpp"
#include "xlsim/log.hpp"

namespace xlsim {

using json = nlohmann::json;

namespace {

constexpr const char* kModelFormat = "xlsim.topic_model";
constexpr int kModelVersion = 1;

// Index of the first cumulative weight exceeding u; the last slot absorbs rounding.
std::size_t pick(const std::vector<double>& cumulative, std::size_t n, double u) {
    auto it = std::upper_bound(cumulative.begin(), cumulative.begin() + static_cast<std::ptrdiff_t>(n), u);
    auto idx = static_cast<std::size_t>(it - cumulative.begin());
    return idx < n ? idx : n - 1;
}

}  // namespace

// ---------------------------------------------------------------- TopicModel

TopicModel::TopicModel(std::string lang, Vocabulary vocab, std::size_t num_topics, double alpha, double beta,
                       std::uint64_t seed, std::size_t iterations, std::vector<std::uint32_t> topic_word_counts,
                       std::vector<std::string> topic_labels)
    : lang_(std::move(lang)),
      vocab_(std::move(vocab)),
      num_topics_(num_topics),
      alpha_(alpha),
      beta_(beta),
      seed_(seed),
      iterations_(iterations),
      topic_word_counts_(std::move(topic_word_counts)),
      topic_labels_(std::move(topic_labels)) {
    if (num_topics_ < 2) throw InvalidArgument("topic model: K must be >= 2");
    if (!(alpha_ > 0.0) || !(beta_ > 0.0)) throw InvalidArgument("topic model: alpha and beta must be > 0");
    if (topic_word_counts_.size() != num_topics_ * vocab_.size()) {
        throw InvalidArgument("topic model: count matrix is not K x V");
    }
    if (!topic_labels_.empty() && topic_labels_.size() != num_topics_) {
        throw InvalidArgument("topic model: topic label count differs from K");
    }
    topic_totals_.assign(num_topics_, 0);
    const std::size_t v = vocab_.size();
    for (std::size_t k = 0; k < num_topics_; ++k) {
        for (std::size_t w = 0; w < v; ++w) topic_totals_[k] += topic_word_counts_[k * v + w];
    }
}

std::uint64_t TopicModel::total_tokens() const {
    return std::accumulate(topic_totals_.begin(), topic_totals_.end(), std::uint64_t{0});
}

double TopicModel::word_prob(TopicId k, TermId w) const {
    const double v = static_cast<double>(vocab_.size());
    return (count(k, w) + beta_) / (static_cast<double>(topic_totals_[k]) + v * beta_);
}

json TopicModel::to_json() const {
    json rows = json::array();
    const std::size_t v = vocab_.size();
    for (std::size_t k = 0; k < num_topics_; ++k) {
        json row = json::array();
        for (std::size_t w = 0; w < v; ++w) {
            if (auto c = topic_word_counts_[k * v + w]) row.push_back({w, c});
        }
        rows.push_back(std::move(row));
    }
    json j = {{"format", kModelFormat},
              {"version", kModelVersion},
              {"lang", lang_},
              {"num_topics", num_topics_},
              {"alpha", alpha_},
              {"beta", beta_},
              {"seed", seed_},
              {"iterations", iterations_},
              {"vocabulary", vocab_.to_json()},
              {"topic_totals", topic_totals_},
              {"topic_word_counts", std::move(rows)}};
    if (!topic_labels_.empty()) j["topic_labels"] = topic_labels_;
    return j;
}

TopicModel TopicModel::from_json(const json& j) {
    try {
        if (j.at("format") != kModelFormat) throw FormatError("not a topic model document");
        if (j.at("version") != kModelVersion) throw FormatError("unsupported topic model version");
        auto vocab = Vocabulary::from_json(j.at("vocabulary"));
        const auto k = j.at("num_topics").get<std::size_t>();
        const std::size_t v = vocab.size();
        const auto& rows = j.at("topic_word_counts");
        if (!rows.is_array() || rows.size() != k) throw FormatError("topic model: expected one count row per topic");
        std::vector<std::uint32_t> counts(k * v, 0);
        for (std::size_t t = 0; t < k; ++t) {
            for (const auto& pair : rows[t]) {
                const auto w = pair.at(0).get<std::size_t>();
                if (w >= v) throw FormatError("topic model: term id out of range");
                counts[t * v + w] = pair.at(1).get<std::uint32_t>();
            }
        }
        std::vector<std::string> labels;
        if (j.contains("topic_labels")) labels = j["topic_labels"].get<std::vector<std::string>>();
        TopicModel model(j.at("lang").get<std::string>(), std::move(vocab), k, j.at("alpha").get<double>(),
                         j.at("beta").get<double>(), j.at("seed").get<std::uint64_t>(),
                         j.at("iterations").get<std::size_t>(), std::move(counts), std::move(labels));
        if (j.at("topic_totals").get<std::vector<std::uint64_t>>() != model.topic_totals()) {
            throw FormatError("topic model: topic totals do not match topic-word counts");
        }
        return model;
    } catch (const json::exception& e) {
        throw FormatError(std::string("topic model: ") + e.what());
    } catch (const InvalidArgument& e) {
        throw FormatError(e.what());
    }
}

void TopicModel::save(const std::filesystem::path& path) const { io::write_file(path, to_json().dump() + "\n"); }

TopicModel TopicModel::load(const std::filesystem::path& path) {
    try {
        return from_json(json::parse(io::read_file(path)));
    } catch (const json::parse_error& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

// -------------------------------------------------------------- GibbsSampler

GibbsSampler::GibbsSampler(std::span<const BagOfWords> docs, std::size_t vocab_size, std::size_t num_topics,
                           double alpha, double beta, std::uint64_t seed,
                           std::vector<std::vector<TopicId>> admissible)
    : vocab_size_(vocab_size),
      num_topics_(num_topics),
      alpha_(alpha),
      beta_(beta),
      rng_(seed),
      admissible_(std::move(admissible)),
      word_topic_(vocab_size * num_topics, 0),
      doc_topic_(docs.size() * num_topics, 0),
      topic_totals_(num_topics, 0),
      weights_(num_topics, 0.0) {
    if (!admissible_.empty() && admissible_.size() != docs.size()) {
        throw InvalidArgument("sampler: admissible topic lists must match the document count");
    }
    doc_words_.resize(docs.size());
    doc_topics_.resize(docs.size());
    for (std::size_t d = 0; d < docs.size(); ++d) {
        auto& words = doc_words_[d];
        for (const auto& [w, c] : docs[d].counts) {
            if (w >= vocab_size_) throw InvalidArgument("sampler: term id outside vocabulary");
            words.insert(words.end(), c, w);
        }
        if (!admissible_.empty()) {
            const auto& allowed = admissible_[d];
            if (allowed.empty() && !words.empty()) throw InvalidArgument("sampler: document without admissible topics");
            for (TopicId k : allowed) {
                if (k >= num_topics_) throw InvalidArgument("sampler: admissible topic out of range");
            }
        }
        auto& z = doc_topics_[d];
        z.resize(words.size());
        for (std::size_t i = 0; i < words.size(); ++i) {
            TopicId k;
            if (admissible_.empty()) {
                k = static_cast<TopicId>(rng_.below(num_topics_));
            } else {
                const auto& allowed = admissible_[d];
                k = allowed[rng_.below(allowed.size())];
            }
            z[i] = k;
            ++word_topic_[words[i] * num_topics_ + k];
            ++doc_topic_[d * num_topics_ + k];
            ++topic_totals_[k];
        }
        total_tokens_ += words.size();
    }
}

void GibbsSampler::sweep() {
    const std::size_t kk = num_topics_;
    const double vbeta = static_cast<double>(vocab_size_) * beta_;
    for (std::size_t d = 0; d < doc_words_.size(); ++d) {
        const auto& words = doc_words_[d];
        auto& z = doc_topics_[d];
        std::uint32_t* dt = doc_topic_.data() + d * kk;
        for (std::size_t i = 0; i < words.size(); ++i) {
            const TermId w = words[i];
            std::uint32_t* wt = word_topic_.data() + w * kk;
            TopicId k = z[i];
            --wt[k];
            --dt[k];
            --topic_totals_[k];

            double total = 0.0;
            if (admissible_.empty()) {
                for (std::size_t t = 0; t < kk; ++t) {
                    total += (dt[t] + alpha_) * (wt[t] + beta_) / (static_cast<double>(topic_totals_[t]) + vbeta);
                    weights_[t] = total;
                }
                k = static_cast<TopicId>(pick(weights_, kk, rng_.uniform() * total));
            } else {
                const auto& allowed = admissible_[d];
                for (std::size_t j = 0; j < allowed.size(); ++j) {
                    const TopicId t = allowed[j];
                    total += (dt[t] + alpha_) * (wt[t] + beta_) / (static_cast<double>(topic_totals_[t]) + vbeta);
                    weights_[j] = total;
                }
                k = allowed[pick(weights_, allowed.size(), rng_.uniform() * total)];
            }

            z[i] = k;
            ++wt[k];
            ++dt[k];
            ++topic_totals_[k];
        }
    }
    ++sweeps_;
}

std::vector<std::uint32_t> GibbsSampler::topic_word_counts() const {
    std::vector<std::uint32_t> out(num_topics_ * vocab_size_, 0);
    for (std::size_t w = 0; w < vocab_size_; ++w) {
        for (std::size_t k = 0; k < num_topics_; ++k) out[k * vocab_size_ + w] = word_topic_[w * num_topics_ + k];
    }
    return out;
}

// ------------------------------------------------------------------ training

namespace {

void check_params(const LdaParams& p) {
    if (p.iterations < 1) throw InvalidArgument("training: iterations must be >= 1");
    if (!(p.alpha > 0.0) || !(p.beta > 0.0)) throw InvalidArgument("training: alpha and beta must be > 0");
}

TopicModel run_sampler(GibbsSampler& sampler, const Vocabulary& vocab, const LdaParams& params, std::string lang,
                       std::size_t num_topics, std::vector<std::string> labels, const SweepObserver& observer) {
    for (std::size_t it = 0; it < params.iterations; ++it) {
        sampler.sweep();
        if (observer) observer(sampler);
    }
    return TopicModel(std::move(lang), vocab, num_topics, params.alpha, params.beta, params.seed, params.iterations,
                      sampler.topic_word_counts(), std::move(labels));
}

}  // namespace

TopicModel train_lda(std::span<const BagOfWords> bows, const Vocabulary& vocab, const LdaParams& params,
                     std::string lang, const SweepObserver& observer) {
    check_params(params);
    if (params.num_topics < 2) throw InvalidArgument("train_lda: K must be >= 2");

    std::vector<BagOfWords> docs;
    docs.reserve(bows.size());
    std::size_t tokens = 0;
    for (const auto& b : bows) {
        if (b.empty()) continue;
        tokens += b.total();
        docs.push_back(b);
    }
    if (docs.empty()) throw InvalidArgument("train_lda: every document is empty");
    if (docs.size() < bows.size()) {
        warn("train_lda: skipped " + std::to_string(bows.size() - docs.size()) + " empty document(s)");
    }
    if (params.num_topics > tokens) {
        throw InvalidArgument("train_lda: K=" + std::to_string(params.num_topics) + " exceeds the token count " +
                              std::to_string(tokens));
    }

    GibbsSampler sampler(docs, vocab.size(), params.num_topics, params.alpha, params.beta, params.seed);
    return run_sampler(sampler, vocab, params, std::move(lang), params.num_topics, {}, observer);
}

TopicModel train_labeled_lda(std::span<const BagOfWords> bows, std::span<const std::set<std::string>> doc_labels,
                             const std::vector<std::string>& label_universe, const Vocabulary& vocab,
                             const LdaParams& params, std::string lang, const SweepObserver& observer) {
    check_params(params);
    if (bows.size() != doc_labels.size()) throw InvalidArgument("train_labeled_lda: one label set per document");
    if (label_universe.size() < 2) throw InvalidArgument("train_labeled_lda: label universe needs >= 2 labels");

    std::unordered_map<std::string, TopicId> topic_of;
    for (std::size_t k = 0; k < label_universe.size(); ++k) {
        if (!topic_of.emplace(label_universe[k], static_cast<TopicId>(k)).second) {
            throw InvalidArgument("train_labeled_lda: duplicate label '" + label_universe[k] + "' in universe");
        }
    }

    std::vector<BagOfWords> docs;
    std::vector<std::vector<TopicId>> admissible;
    std::size_t skipped = 0;
    for (std::size_t d = 0; d < bows.size(); ++d) {
        std::vector<TopicId> allowed;
        for (const auto& label : doc_labels[d]) {
            auto it = topic_of.find(label);
            if (it == topic_of.end()) throw InvalidArgument("train_labeled_lda: label '" + label + "' not in universe");
            allowed.push_back(it->second);
        }
        std::sort(allowed.begin(), allowed.end());
        if (allowed.empty() || bows[d].empty()) {
            ++skipped;
            continue;
        }
        docs.push_back(bows[d]);
        admissible.push_back(std::move(allowed));
    }
    if (docs.empty()) throw InvalidArgument("train_labeled_lda: no labeled, nonempty documents");
    if (skipped) warn("train_labeled_lda: skipped " + std::to_string(skipped) + " unlabeled or empty document(s)");

    GibbsSampler sampler(docs, vocab.size(), label_universe.size(), params.alpha, params.beta, params.seed,
                         std::move(admissible));
    return run_sampler(sampler, vocab, params, std::move(lang), label_universe.size(), label_universe, observer);
}

// ----------------------------------------------------------------- inference

TopicDistribution infer(const TopicModel& model, const BagOfWords& bow, const InferParams& params) {
    if (params.iterations <= params.burn_in) throw InvalidArgument("infer: iterations must exceed burn_in");
    const std::size_t kk = model.num_topics();
    const std::size_t v = model.vocab_size();

    // phi columns for the distinct in-vocabulary words, tokens point into them
    std::vector<double> phi;
    std::vector<std::size_t> token_col;
    for (const auto& [w, c] : bow.counts) {
        if (w >= v) continue;
        const std::size_t col = phi.size() / kk;
        for (std::size_t k = 0; k < kk; ++k) phi.push_back(model.word_prob(static_cast<TopicId>(k), w));
        token_col.insert(token_col.end(), c, col);
    }

    TopicDistribution out;
    if (token_col.empty()) {
        out.weights.assign(kk, 1.0 / static_cast<double>(kk));
        return out;
    }

    Rng rng(params.seed);
    const std::size_t n = token_col.size();
    std::vector<TopicId> z(n);
    std::vector<std::uint32_t> ndk(kk, 0);
    for (std::size_t i = 0; i < n; ++i) {
        z[i] = static_cast<TopicId>(rng.below(kk));
        ++ndk[z[i]];
    }

    std::vector<double> cumulative(kk);
    std::vector<double> acc(kk, 0.0);
    const double denom = static_cast<double>(n) + static_cast<double>(kk) * model.alpha();
    for (std::size_t it = 0; it < params.iterations; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            --ndk[z[i]];
            const double* col = phi.data() + token_col[i] * kk;
            double total = 0.0;
            for (std::size_t k = 0; k < kk; ++k) {
                total += (ndk[k] + model.alpha()) * col[k];
                cumulative[k] = total;
            }
            z[i] = static_cast<TopicId>(pick(cumulative, kk, rng.uniform() * total));
            ++ndk[z[i]];
        }
        if (it >= params.burn_in) {
            for (std::size_t k = 0; k < kk; ++k) acc[k] += (ndk[k] + model.alpha()) / denom;
        }
    }

    const double sum = std::accumulate(acc.begin(), acc.end(), 0.0);
    for (auto& a : acc) a /= sum;
    out.weights = std::move(acc);
    return out;
}

std::vector<std::pair<std::string, double>> top_words(const TopicModel& model, TopicId topic, std::size_t n) {
    if (topic >= model.num_topics()) throw InvalidArgument("top_words: topic out of range");
    if (n < 1) throw InvalidArgument("top_words: n must be >= 1");
    const auto row = model.topic_row(topic);
    const auto& vocab = model.vocabulary();
    std::vector<TermId> ids(row.size());
    std::iota(ids.begin(), ids.end(), TermId{0});
    const std::size_t m = std::min(n, ids.size());
    // probabilities within a topic share the denominator, so counts order them exactly
    std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(m), ids.end(), [&](TermId a, TermId b) {
        if (row[a] != row[b]) return row[a] > row[b];
        return vocab.term(a) < vocab.term(b);
    });
    std::vector<std::pair<std::string, double>> out;
    out.reserve(m);
    for (std::size_t i = 0; i < m; ++i) out.emplace_back(vocab.term(ids[i]), model.word_prob(topic, ids[i]));
    return out;
}

}  // namespace xlsim
