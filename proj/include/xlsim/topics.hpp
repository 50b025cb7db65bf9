#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "xlsim/rng.hpp"
#include "xlsim/vocabulary.hpp"

namespace xlsim {

using TopicId = std::uint32_t;

struct LdaParams {
    std::size_t num_topics = 500;
    double alpha = 0.1;
    double beta = 0.01;
    std::size_t iterations = 1000;
    std::uint64_t seed = 1;

    /// K=500, alpha=0.1, beta=0.01, 1000 sweeps.
    static LdaParams published_preset() { return {}; }
};

struct InferParams {
    std::size_t iterations = 100;
    std::size_t burn_in = 50;
    std::uint64_t seed = 1;
};

/// Trained topic-word statistics for one language. Immutable once built.
///
/// Counts are stored topic-major: count(k, w) is the number of tokens of term w
/// assigned to topic k in the final sampler state. A model with topic labels is
/// a LabeledLDA model whose topic k stands for topic_labels()[k].
class TopicModel {
public:
    TopicModel(std::string lang, Vocabulary vocab, std::size_t num_topics, double alpha, double beta,
               std::uint64_t seed, std::size_t iterations, std::vector<std::uint32_t> topic_word_counts,
               std::vector<std::string> topic_labels = {});

    const std::string& lang() const { return lang_; }
    const Vocabulary& vocabulary() const { return vocab_; }
    std::size_t num_topics() const { return num_topics_; }
    std::size_t vocab_size() const { return vocab_.size(); }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    std::uint64_t seed() const { return seed_; }
    std::size_t iterations() const { return iterations_; }

    std::uint32_t count(TopicId k, TermId w) const { return topic_word_counts_[k * vocab_.size() + w]; }
    std::span<const std::uint32_t> topic_row(TopicId k) const {
        return {topic_word_counts_.data() + k * vocab_.size(), vocab_.size()};
    }
    const std::vector<std::uint32_t>& topic_word_counts() const { return topic_word_counts_; }
    const std::vector<std::uint64_t>& topic_totals() const { return topic_totals_; }
    std::uint64_t total_tokens() const;

    bool is_labeled() const { return !topic_labels_.empty(); }
    const std::vector<std::string>& topic_labels() const { return topic_labels_; }

    /// Smoothed topic-word probability (n_kw + beta) / (n_k + V beta).
    double word_prob(TopicId k, TermId w) const;

    nlohmann::json to_json() const;
    /// Validates shape, priors and that stored topic totals match the row sums.
    static TopicModel from_json(const nlohmann::json& j);

    void save(const std::filesystem::path& path) const;
    static TopicModel load(const std::filesystem::path& path);

private:
    std::string lang_;
    Vocabulary vocab_;
    std::size_t num_topics_;
    double alpha_;
    double beta_;
    std::uint64_t seed_;
    std::size_t iterations_;
    std::vector<std::uint32_t> topic_word_counts_;
    std::vector<std::uint64_t> topic_totals_;
    std::vector<std::string> topic_labels_;
};

/// Doc-topic proportions; weights sum to 1.
struct TopicDistribution {
    std::vector<double> weights;

    std::size_t size() const { return weights.size(); }
};

/// Collapsed Gibbs sampler state over a fixed set of documents.
///
/// Each token's topic is resampled from
///   p(z = k) ∝ (n_dk + alpha) (n_kw + beta) / (n_k + V beta)
/// with the token's own assignment removed from the counts. When `admissible`
/// is nonempty, document d may only use the topics listed in admissible[d].
class GibbsSampler {
public:
    GibbsSampler(std::span<const BagOfWords> docs, std::size_t vocab_size, std::size_t num_topics, double alpha,
                 double beta, std::uint64_t seed, std::vector<std::vector<TopicId>> admissible = {});

    void sweep();

    std::size_t sweeps_done() const { return sweeps_; }
    std::size_t num_docs() const { return doc_words_.size(); }
    std::size_t num_topics() const { return num_topics_; }
    std::uint64_t total_tokens() const { return total_tokens_; }

    const std::vector<std::uint64_t>& topic_totals() const { return topic_totals_; }
    std::uint32_t topic_word(TopicId k, TermId w) const { return word_topic_[w * num_topics_ + k]; }
    std::span<const TopicId> assignments(std::size_t doc) const { return doc_topics_[doc]; }
    std::span<const TermId> words(std::size_t doc) const { return doc_words_[doc]; }
    std::span<const std::uint32_t> doc_topic_counts(std::size_t doc) const {
        return {doc_topic_.data() + doc * num_topics_, num_topics_};
    }

    /// Topic-major K x V copy of the current topic-word counts.
    std::vector<std::uint32_t> topic_word_counts() const;

private:
    std::size_t vocab_size_;
    std::size_t num_topics_;
    double alpha_;
    double beta_;
    Rng rng_;
    std::vector<std::vector<TopicId>> admissible_;  // empty: every topic allowed
    std::vector<std::vector<TermId>> doc_words_;
    std::vector<std::vector<TopicId>> doc_topics_;
    std::vector<std::uint32_t> word_topic_;  // V x K
    std::vector<std::uint32_t> doc_topic_;   // D x K
    std::vector<std::uint64_t> topic_totals_;
    std::vector<double> weights_;
    std::uint64_t total_tokens_ = 0;
    std::size_t sweeps_ = 0;
};

/// Called after every completed sweep.
using SweepObserver = std::function<void(const GibbsSampler&)>;

/// Unsupervised LDA by collapsed Gibbs sampling. Empty bags of words are skipped.
/// Deterministic for a fixed seed.
TopicModel train_lda(std::span<const BagOfWords> bows, const Vocabulary& vocab, const LdaParams& params,
                     std::string lang = {}, const SweepObserver& observer = {});

/// LabeledLDA: one topic per entry of `label_universe`, each document restricted
/// to the topics of its own labels. Documents without labels or without
/// in-vocabulary words are skipped. params.num_topics is ignored.
TopicModel train_labeled_lda(std::span<const BagOfWords> bows, std::span<const std::set<std::string>> doc_labels,
                             const std::vector<std::string>& label_universe, const Vocabulary& vocab,
                             const LdaParams& params, std::string lang = {}, const SweepObserver& observer = {});

/// Fold-in Gibbs with the model's counts frozen; returns post-burn-in averaged,
/// alpha-smoothed proportions. Term ids outside the vocabulary are ignored and an
/// empty document yields the uniform distribution.
TopicDistribution infer(const TopicModel& model, const BagOfWords& bow, const InferParams& params = {});

/// The n most probable words of a topic, ties broken lexicographically.
std::vector<std::pair<std::string, double>> top_words(const TopicModel& model, TopicId topic, std::size_t n);

}  // namespace xlsim
