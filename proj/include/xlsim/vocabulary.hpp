#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "xlsim/corpus.hpp"

namespace xlsim {

using TermId = std::uint32_t;

/// Retained lemmas ordered by descending document frequency, then lexicographically.
class Vocabulary {
public:
    static constexpr double kDefaultMaxDf = 0.90;
    static constexpr double kDefaultMinDf = 0.005;

    Vocabulary() = default;

    /// `doc_counts[i]` is the number of documents containing `terms[i]` out of `num_docs`.
    Vocabulary(std::vector<std::string> terms, std::vector<std::size_t> doc_counts, std::size_t num_docs);

    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }

    const std::vector<std::string>& terms() const { return terms_; }
    const std::string& term(TermId id) const { return terms_.at(id); }
    std::optional<TermId> find(std::string_view lemma) const;

    /// Fraction of training documents containing the term.
    double doc_freq(TermId id) const { return static_cast<double>(doc_counts_.at(id)) / static_cast<double>(num_docs_); }
    std::size_t doc_count(TermId id) const { return doc_counts_.at(id); }
    std::size_t num_docs() const { return num_docs_; }

    nlohmann::json to_json() const;
    static Vocabulary from_json(const nlohmann::json& j);

    void save(const std::filesystem::path& path) const;
    static Vocabulary load(const std::filesystem::path& path);

    bool operator==(const Vocabulary& other) const {
        return terms_ == other.terms_ && doc_counts_ == other.doc_counts_ && num_docs_ == other.num_docs_;
    }

private:
    std::vector<std::string> terms_;
    std::vector<std::size_t> doc_counts_;
    std::size_t num_docs_ = 0;
    std::unordered_map<std::string, TermId> index_;
};

/// Keeps a term iff min_df <= df <= max_df (both bounds inclusive).
Vocabulary build_vocabulary(const std::vector<TokenList>& corpus, double max_df = Vocabulary::kDefaultMaxDf,
                            double min_df = Vocabulary::kDefaultMinDf);

/// Sparse term counts, sorted by term id; every count >= 1.
struct BagOfWords {
    std::vector<std::pair<TermId, std::uint32_t>> counts;

    bool empty() const { return counts.empty(); }
    std::size_t total() const;
    std::uint32_t count(TermId id) const;

    bool operator==(const BagOfWords&) const = default;
};

BagOfWords to_bow(const TokenList& tokens, const Vocabulary& vocab);

}  // namespace xlsim
