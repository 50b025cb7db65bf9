#pragma once

#include <iosfwd>
#include <filesystem>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace xlsim {

struct Document {
    std::string id;
    std::string lang;
    std::string text;
    std::set<std::string> labels;

    bool operator==(const Document&) const = default;
};

using Corpus = std::vector<Document>;

/// Lemma stream of one document. Tokens are nonempty, lowercase, whitespace-free.
struct TokenList {
    std::vector<std::string> tokens;

    bool operator==(const TokenList&) const = default;
};

enum class Pos { Noun, Verb, Adjective, Other, Unknown };

Pos parse_pos(std::string_view tag);

struct AnalyzedToken {
    std::string lemma;
    Pos pos = Pos::Unknown;
};

/// Pluggable analysis step: text in one language to (lemma, coarse POS) pairs.
class Lemmatizer {
public:
    virtual ~Lemmatizer() = default;
    virtual bool supports(std::string_view lang) const = 0;
    virtual std::vector<AnalyzedToken> analyze(std::string_view text, std::string_view lang) const = 0;
};

/// Splits on non-letters and lowercases. No stemming, no POS (every token Unknown).
class FallbackLemmatizer final : public Lemmatizer {
public:
    bool supports(std::string_view) const override { return true; }
    std::vector<AnalyzedToken> analyze(std::string_view text, std::string_view lang) const override;
};

/// Form table lemmatizer for one language. The table is a TSV of
/// `form<TAB>lemma<TAB>POS` lines; forms missing from the table pass through
/// lowercased with Unknown POS.
class DictionaryLemmatizer final : public Lemmatizer {
public:
    explicit DictionaryLemmatizer(std::string lang) : lang_(std::move(lang)) {}

    static DictionaryLemmatizer load(const std::filesystem::path& path, std::string lang);

    void add(std::string_view form, std::string_view lemma, Pos pos);

    bool supports(std::string_view lang) const override { return lang == lang_; }
    std::vector<AnalyzedToken> analyze(std::string_view text, std::string_view lang) const override;

private:
    std::string lang_;
    std::unordered_map<std::string, AnalyzedToken> table_;
};

/// Reads a JSON Lines corpus. Lines without `lang` take `lang`; a line whose
/// `lang` differs is rejected. Blank lines are skipped.
Corpus ingest_corpus(const std::filesystem::path& path, std::string_view lang);

Corpus parse_corpus(std::istream& in, std::string_view lang, const std::string& source = "<stream>");

void write_corpus(std::ostream& out, const Corpus& corpus);

void write_corpus(const std::filesystem::path& path, const Corpus& corpus);

/// Lemmas of content words. With POS available only nouns, verbs and adjectives
/// survive; Unknown-POS tokens survive when alphabetic and at least 2 characters.
TokenList tokenize(std::string_view text, std::string_view lang, const Lemmatizer& lemmatizer);

/// Documents with at least `min_chars` Unicode scalars of text, order preserved.
Corpus filter_short(const Corpus& corpus, std::size_t min_chars = 100);

/// Precomputed lemma streams keyed by document id (JSON Lines of `id`, `tokens`).
using LemmaOverrides = std::unordered_map<std::string, TokenList>;

LemmaOverrides load_lemma_file(const std::filesystem::path& path);

std::vector<TokenList> tokenize_corpus(const Corpus& corpus, const Lemmatizer& lemmatizer,
                                       const LemmaOverrides* overrides = nullptr);

}  // namespace xlsim
