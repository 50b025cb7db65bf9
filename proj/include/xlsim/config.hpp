#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "xlsim/evaluation.hpp"
#include "xlsim/hashing.hpp"
#include "xlsim/search.hpp"
#include "xlsim/topics.hpp"
#include "xlsim/vocabulary.hpp"

namespace xlsim {

/// Settings of one pipeline run. Defaults are the published configuration
/// (K=500, alpha=0.1, beta=0.01, 1000 sweeps, top-5 annotation words, 3 levels,
/// df band [0.005, 0.90], 100-character minimum).
///
/// File format: one `key = value` per line, '#' comments. Per-language keys
/// take the language as suffix (`corpus.en = data/en.jsonl`). Relative paths
/// are resolved against the config file's directory.
///
///   languages          comma-separated language codes
///   corpus.<lang>      training corpus (JSON Lines)
///   collection.<lang>  held-out documents to hash, index and evaluate
///   lexicon.<lang>     synset lexicon TSV
///   lemmas.<lang>      optional precomputed lemma file
///   lemmatizer.<lang>  optional form/lemma/POS table; fallback lemmatizer otherwise
///   taxonomy           optional child/parent TSV (or .json SKOS subset)
///   workdir            output directory
///   K alpha beta iterations seed topn levels cap max_df min_df min_chars
///   infer_iterations infer_burn_in eval_sample cluster_rule gold_rule
struct RunConfig {
    std::vector<std::string> languages;
    std::map<std::string, std::filesystem::path> corpus;
    std::map<std::string, std::filesystem::path> collection;
    std::map<std::string, std::filesystem::path> lexicon;
    std::map<std::string, std::filesystem::path> lemmas;
    std::map<std::string, std::filesystem::path> lemmatizer;
    std::filesystem::path taxonomy;
    std::filesystem::path workdir = "xlsim-out";

    LdaParams lda = LdaParams::published_preset();
    std::size_t topn = kDefaultTopN;
    std::size_t levels = kDefaultLevels;
    std::size_t cap = kDefaultCap;
    double max_df = Vocabulary::kDefaultMaxDf;
    double min_df = Vocabulary::kDefaultMinDf;
    std::size_t min_chars = 100;
    std::size_t infer_iterations = 100;
    std::size_t infer_burn_in = 50;
    std::size_t eval_sample = 1000;
    ClusterRule cluster_rule = ClusterRule::ExactLevel0;
    GoldRule gold_rule = GoldRule::ExactLabelSet;

    static RunConfig load(const std::filesystem::path& path);

    /// Applies one `key=value` setting. Paths are resolved against `base`.
    void set(std::string_view key, std::string_view value, const std::filesystem::path& base = {});

    /// Throws InvalidArgument on inconsistent settings.
    void validate() const;

    bool has_language(std::string_view lang) const;

    /// Sorted `key=value` lines of every setting except workdir.
    std::string canonical() const;
    std::uint64_t hash() const;
};

}  // namespace xlsim
