#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "xlsim/config.hpp"
#include "xlsim/corpus.hpp"
#include "xlsim/evaluation.hpp"

namespace xlsim::pipeline {

/// Concept space used for hashing: WordNet synsets of unsupervised topics, or
/// category labels of a LabeledLDA model.
enum class Mode { Syn, Cat };
enum class Task { Classification, Ir };

Mode parse_mode(std::string_view s);
Task parse_task(std::string_view s);
std::string_view to_string(Mode m);
std::string_view to_string(Task t);

// Artifact layout under cfg.workdir.
std::filesystem::path lang_dir(const RunConfig& cfg, std::string_view lang);
std::filesystem::path model_path(const RunConfig& cfg, std::string_view lang, bool labeled);
std::filesystem::path annotations_path(const RunConfig& cfg, std::string_view lang);
std::filesystem::path hashes_path(const RunConfig& cfg, std::string_view lang);
std::filesystem::path index_path(const RunConfig& cfg, Mode mode);
std::filesystem::path manifest_path(const RunConfig& cfg, bool labeled);

/// `requested` is a comma-separated subset of cfg.languages; empty selects all.
std::vector<std::string> select_languages(const RunConfig& cfg, std::string_view requested);

/// Document id qualified by language, unique across a multilingual collection.
std::string qualified_id(std::string_view lang, std::string_view id);

struct PreparedCorpus {
    Corpus docs;                   // after the minimum-length filter
    std::vector<TokenList> tokens;  // parallel to docs
};

/// Reads, length-filters and tokenizes one corpus file of `lang`.
PreparedCorpus prepare_corpus(const RunConfig& cfg, std::string_view lang, const std::filesystem::path& path);

/// Writes <lang>/corpus.jsonl, <lang>/tokens.jsonl and <lang>/vocab.json.
void cmd_ingest(const RunConfig& cfg, const std::vector<std::string>& langs);

/// Trains one model per language, independently, plus a run manifest.
/// Returns the written model paths.
std::vector<std::filesystem::path> cmd_train(const RunConfig& cfg, const std::vector<std::string>& langs, bool labeled);

/// Writes <lang>/annotations.json from the unsupervised model and the lexicon.
void cmd_annotate(const RunConfig& cfg, const std::vector<std::string>& langs);

/// Hashes the held-out collection (the training corpus when none is configured)
/// into <lang>/hashes.jsonl. Label hashes are added when a LabeledLDA model exists.
void cmd_hash(const RunConfig& cfg, const std::vector<std::string>& langs);

/// Builds the similarity index of the selected languages' hashes.
void cmd_index(const RunConfig& cfg, const std::vector<std::string>& langs, Mode mode);

struct QueryResult {
    std::size_t rank = 0;
    std::string id;
    double distance = 0.0;
    std::string lang;
};

std::vector<QueryResult> cmd_query(const RunConfig& cfg, std::string_view text, std::string_view lang, std::size_t k,
                                   Mode mode);

struct EvalOutcome {
    EvalReport report;
    std::filesystem::path tsv_path;
    std::filesystem::path json_path;
};

/// Classification (B-Cubed over a seeded sample) or retrieval (p@3/5/10 over
/// seeded sample queries) on the held-out collections of `langs`.
EvalOutcome cmd_evaluate(const RunConfig& cfg, Task task, Mode mode, const std::vector<std::string>& langs);

}  // namespace xlsim::pipeline
