#include "xlsim/lexicon.hpp"

#include <istream>
#include <ostream>

#include "xlsim/error.hpp"
#include "xlsim/io.hpp"
#include "xlsim/log.hpp"
#include "xlsim/text.hpp"

namespace xlsim {

using json = nlohmann::json;

namespace {
constexpr const char* kAnnotationFormat = "xlsim.annotations";
constexpr int kAnnotationVersion = 1;

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}
}  // namespace

void SynsetLexicon::add(std::string_view synset, std::string_view lemma) {
    auto key = text::normalize_lemma(lemma);
    const auto id = text::trim(synset);
    if (key.empty() || id.empty()) throw InvalidArgument("lexicon: empty lemma or synset id");
    entries_[std::move(key)].emplace(id);
}

SynsetLexicon SynsetLexicon::parse(std::istream& in, std::string lang, const std::string& source) {
    SynsetLexicon lex(std::move(lang));
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(std::move(line));
        if (text::trim(line).empty() || line[0] == '#') continue;
        auto cols = text::split(line, '\t');
        if (cols.size() != 2 || text::trim(cols[0]).empty() || text::normalize_lemma(cols[1]).empty()) {
            throw ParseError(source, lineno, "expected synset_id<TAB>lemma");
        }
        lex.add(cols[0], cols[1]);
    }
    if (lex.empty()) warn("lexicon " + source + " is empty");
    return lex;
}

SynsetLexicon SynsetLexicon::load(const std::filesystem::path& path, std::string lang) {
    auto in = io::open_input(path);
    return parse(in, std::move(lang), path.string());
}

SynsetLexicon SynsetLexicon::import_omw_tab(const std::filesystem::path& path, std::string lang) {
    auto in = io::open_input(path);
    SynsetLexicon lex(std::move(lang));
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(std::move(line));
        if (text::trim(line).empty() || line[0] == '#') continue;
        auto cols = text::split(line, '\t');
        if (cols.size() < 3) throw ParseError(path.string(), lineno, "expected offset-pos<TAB>type<TAB>value");
        const auto& type = cols[1];
        if (type.size() < 6 || type.compare(type.size() - 6, 6, ":lemma") != 0) continue;
        if (text::normalize_lemma(cols[2]).empty()) continue;
        lex.add(cols[0], cols[2]);
    }
    if (lex.empty()) warn("lexicon " + path.string() + " is empty");
    return lex;
}

const SynsetSet& SynsetLexicon::synsets_of(std::string_view lemma) const {
    static const SynsetSet kEmpty;
    auto it = entries_.find(text::normalize_lemma(lemma));
    return it == entries_.end() ? kEmpty : it->second;
}

void SynsetLexicon::write_tsv(std::ostream& out) const {
    std::map<std::string, const SynsetSet*> sorted;
    for (const auto& [lemma, ids] : entries_) sorted.emplace(lemma, &ids);
    for (const auto& [lemma, ids] : sorted) {
        for (const auto& id : *ids) out << id << '\t' << lemma << '\n';
    }
}

TopicAnnotation annotate_topic(const TopicModel& model, TopicId topic, const SynsetLexicon& lexicon, std::size_t n) {
    if (!model.lang().empty() && !lexicon.lang().empty() && model.lang() != lexicon.lang()) {
        throw InvalidArgument("annotate_topic: lexicon language '" + lexicon.lang() + "' differs from model language '" +
                              model.lang() + "'");
    }
    TopicAnnotation ann{topic, {}};
    for (const auto& [lemma, prob] : top_words(model, topic, n)) {
        const auto& ids = lexicon.synsets_of(lemma);
        ann.synsets.insert(ids.begin(), ids.end());
    }
    return ann;
}

std::vector<TopicAnnotation> annotate_model(const TopicModel& model, const SynsetLexicon& lexicon, std::size_t n) {
    std::vector<TopicAnnotation> out;
    out.reserve(model.num_topics());
    for (std::size_t k = 0; k < model.num_topics(); ++k) {
        out.push_back(annotate_topic(model, static_cast<TopicId>(k), lexicon, n));
    }
    return out;
}

json annotations_to_json(const std::vector<TopicAnnotation>& annotations, const std::string& lang, std::size_t top_n) {
    json topics = json::array();
    std::size_t empty = 0;
    for (const auto& a : annotations) {
        if (a.synsets.empty()) ++empty;
        topics.push_back({{"topic", a.topic}, {"synsets", a.synsets}});
    }
    return {{"format", kAnnotationFormat}, {"version", kAnnotationVersion}, {"lang", lang},
            {"top_n", top_n},              {"empty_topics", empty},        {"topics", std::move(topics)}};
}

std::vector<TopicAnnotation> annotations_from_json(const json& j) {
    try {
        if (j.at("format") != kAnnotationFormat) throw FormatError("not an annotation document");
        if (j.at("version") != kAnnotationVersion) throw FormatError("unsupported annotation version");
        std::vector<TopicAnnotation> out;
        for (const auto& t : j.at("topics")) {
            TopicAnnotation a;
            a.topic = t.at("topic").get<TopicId>();
            if (a.topic != out.size()) throw FormatError("annotations: topics must be listed in id order");
            a.synsets = t.at("synsets").get<SynsetSet>();
            out.push_back(std::move(a));
        }
        return out;
    } catch (const json::exception& e) {
        throw FormatError(std::string("annotations: ") + e.what());
    }
}

}  // namespace xlsim
