#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "xlsim/topics.hpp"

namespace xlsim {

/// Opaque sense identifier such as "radio.n.01" or "04044119-n".
using SynsetId = std::string;
using SynsetSet = std::set<SynsetId>;

/// Lemma to synset mapping for one language. Lookups are case-insensitive and
/// treat runs of spaces/underscores in multi-word lemmas as one '_'.
class SynsetLexicon {
public:
    explicit SynsetLexicon(std::string lang = {}) : lang_(std::move(lang)) {}

    /// Two-column TSV `synset_id<TAB>lemma`; '#' lines are comments.
    static SynsetLexicon load(const std::filesystem::path& path, std::string lang);
    static SynsetLexicon parse(std::istream& in, std::string lang, const std::string& source = "<stream>");

    /// Open Multilingual WordNet `.tab` export (`offset-pos<TAB>lang:lemma<TAB>lemma`).
    /// Rows of other types are ignored.
    static SynsetLexicon import_omw_tab(const std::filesystem::path& path, std::string lang);

    void add(std::string_view synset, std::string_view lemma);

    /// Entry for `lemma`, or the empty set.
    const SynsetSet& synsets_of(std::string_view lemma) const;

    const std::string& lang() const { return lang_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    /// Normalized TSV, lemmas and synsets sorted.
    void write_tsv(std::ostream& out) const;

private:
    std::string lang_;
    std::unordered_map<std::string, SynsetSet> entries_;
};

struct TopicAnnotation {
    TopicId topic = 0;
    SynsetSet synsets;

    bool operator==(const TopicAnnotation&) const = default;
};

inline constexpr std::size_t kDefaultTopN = 5;

/// Union of the synsets of the topic's top-n words.
TopicAnnotation annotate_topic(const TopicModel& model, TopicId topic, const SynsetLexicon& lexicon,
                               std::size_t n = kDefaultTopN);

/// Annotations for every topic, indexed by topic id.
std::vector<TopicAnnotation> annotate_model(const TopicModel& model, const SynsetLexicon& lexicon,
                                            std::size_t n = kDefaultTopN);

nlohmann::json annotations_to_json(const std::vector<TopicAnnotation>& annotations, const std::string& lang,
                                   std::size_t top_n);
std::vector<TopicAnnotation> annotations_from_json(const nlohmann::json& j);

}  // namespace xlsim
