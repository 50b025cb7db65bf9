#include "xlsim/corpus.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "xlsim/error.hpp"
#include "xlsim/io.hpp"
#include "xlsim/text.hpp"

namespace xlsim {

using json = nlohmann::json;

Pos parse_pos(std::string_view tag) {
    const std::string t = text::to_lower(tag);
    if (t == "noun" || t == "n" || t == "propn" || t.rfind("nn", 0) == 0) return Pos::Noun;
    if (t == "verb" || t == "v" || t.rfind("vb", 0) == 0) return Pos::Verb;
    if (t == "adj" || t == "a" || t == "s" || t.rfind("jj", 0) == 0) return Pos::Adjective;
    if (t.empty() || t == "unknown" || t == "x") return Pos::Unknown;
    return Pos::Other;
}

namespace {

// Maximal runs of letters, in original case.
std::vector<std::string> letter_runs(std::string_view s) {
    std::vector<std::string> runs;
    std::string current;
    for (char32_t cp : text::decode_utf8(s)) {
        if (text::is_letter(cp)) {
            text::append_utf8(current, cp);
        } else if (!current.empty()) {
            runs.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) runs.push_back(std::move(current));
    return runs;
}

bool is_alphabetic(std::string_view s) {
    const auto cps = text::decode_utf8(s);
    if (cps.empty()) return false;
    for (char32_t cp : cps) {
        if (!text::is_letter(cp) && cp != '_') return false;
    }
    return true;
}

}  // namespace

std::vector<AnalyzedToken> FallbackLemmatizer::analyze(std::string_view text, std::string_view) const {
    std::vector<AnalyzedToken> out;
    for (auto& run : letter_runs(text)) out.push_back({text::to_lower(run), Pos::Unknown});
    return out;
}

void DictionaryLemmatizer::add(std::string_view form, std::string_view lemma, Pos pos) {
    table_[text::to_lower(form)] = AnalyzedToken{text::normalize_lemma(lemma), pos};
}

DictionaryLemmatizer DictionaryLemmatizer::load(const std::filesystem::path& path, std::string lang) {
    auto in = io::open_input(path);
    DictionaryLemmatizer lem(std::move(lang));
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (text::trim(line).empty() || line[0] == '#') continue;
        auto cols = text::split(line, '\t');
        if (cols.size() != 3 || cols[0].empty() || cols[1].empty()) {
            throw ParseError(path.string(), lineno, "expected form<TAB>lemma<TAB>pos");
        }
        lem.add(cols[0], cols[1], parse_pos(cols[2]));
    }
    return lem;
}

std::vector<AnalyzedToken> DictionaryLemmatizer::analyze(std::string_view text, std::string_view) const {
    std::vector<AnalyzedToken> out;
    for (auto& run : letter_runs(text)) {
        auto form = text::to_lower(run);
        if (auto it = table_.find(form); it != table_.end()) {
            out.push_back(it->second);
        } else {
            out.push_back({std::move(form), Pos::Unknown});
        }
    }
    return out;
}

Corpus parse_corpus(std::istream& in, std::string_view lang, const std::string& source) {
    Corpus corpus;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(source, lineno, std::string("invalid JSON: ") + e.what());
        }
        if (!obj.is_object()) throw ParseError(source, lineno, "expected a JSON object");

        Document doc;
        auto id = obj.find("id");
        if (id == obj.end() || !id->is_string()) throw ParseError(source, lineno, "missing string field \"id\"");
        doc.id = id->get<std::string>();
        if (doc.id.empty()) throw ParseError(source, lineno, "empty \"id\"");

        auto txt = obj.find("text");
        if (txt == obj.end() || !txt->is_string()) throw ParseError(source, lineno, "missing string field \"text\"");
        doc.text = txt->get<std::string>();

        if (auto l = obj.find("lang"); l != obj.end()) {
            if (!l->is_string()) throw ParseError(source, lineno, "\"lang\" must be a string");
            doc.lang = l->get<std::string>();
            if (!lang.empty() && doc.lang != lang) {
                throw ParseError(source, lineno, "document language '" + doc.lang + "' where '" +
                                                     std::string(lang) + "' was expected");
            }
        } else {
            doc.lang = std::string(lang);
        }

        if (auto labels = obj.find("labels"); labels != obj.end()) {
            if (!labels->is_array()) throw ParseError(source, lineno, "\"labels\" must be an array");
            for (const auto& l : *labels) {
                if (!l.is_string()) throw ParseError(source, lineno, "label must be a string");
                doc.labels.insert(l.get<std::string>());
            }
        }
        if (!seen.insert(doc.id).second) {
            throw DuplicateError(source + ":" + std::to_string(lineno) + ": duplicate document id '" + doc.id + "'");
        }
        corpus.push_back(std::move(doc));
    }
    return corpus;
}

Corpus ingest_corpus(const std::filesystem::path& path, std::string_view lang) {
    auto in = io::open_input(path);
    return parse_corpus(in, lang, path.string());
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
    for (const auto& doc : corpus) {
        json obj = {{"id", doc.id}, {"lang", doc.lang}, {"text", doc.text}};
        if (!doc.labels.empty()) obj["labels"] = doc.labels;
        out << obj.dump() << '\n';
    }
}

void write_corpus(const std::filesystem::path& path, const Corpus& corpus) {
    std::ostringstream out;
    write_corpus(out, corpus);
    io::write_file(path, out.str());
}

TokenList tokenize(std::string_view text, std::string_view lang, const Lemmatizer& lemmatizer) {
    if (!lemmatizer.supports(lang)) {
        throw InvalidArgument("no lemmatizer registered for language '" + std::string(lang) + "'");
    }
    TokenList out;
    for (auto& tok : lemmatizer.analyze(text, lang)) {
        auto lemma = text::normalize_lemma(tok.lemma);
        if (lemma.empty()) continue;
        switch (tok.pos) {
            case Pos::Noun:
            case Pos::Verb:
            case Pos::Adjective:
                out.tokens.push_back(std::move(lemma));
                break;
            case Pos::Unknown:
                if (is_alphabetic(lemma) && text::scalar_count(lemma) >= 2) out.tokens.push_back(std::move(lemma));
                break;
            case Pos::Other:
                break;
        }
    }
    return out;
}

Corpus filter_short(const Corpus& corpus, std::size_t min_chars) {
    Corpus out;
    for (const auto& doc : corpus) {
        if (text::scalar_count(doc.text) >= min_chars) out.push_back(doc);
    }
    return out;
}

LemmaOverrides load_lemma_file(const std::filesystem::path& path) {
    auto in = io::open_input(path);
    LemmaOverrides out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(path.string(), lineno, std::string("invalid JSON: ") + e.what());
        }
        if (!obj.is_object() || !obj.contains("id") || !obj["id"].is_string() || !obj.contains("tokens") ||
            !obj["tokens"].is_array()) {
            throw ParseError(path.string(), lineno, "expected {\"id\": string, \"tokens\": [string]}");
        }
        TokenList toks;
        for (const auto& t : obj["tokens"]) {
            if (!t.is_string()) throw ParseError(path.string(), lineno, "token must be a string");
            auto lemma = text::normalize_lemma(t.get<std::string>());
            if (!lemma.empty()) toks.tokens.push_back(std::move(lemma));
        }
        auto id = obj["id"].get<std::string>();
        if (!out.emplace(id, std::move(toks)).second) {
            throw DuplicateError(path.string() + ":" + std::to_string(lineno) + ": duplicate id '" + id + "'");
        }
    }
    return out;
}

std::vector<TokenList> tokenize_corpus(const Corpus& corpus, const Lemmatizer& lemmatizer,
                                       const LemmaOverrides* overrides) {
    std::vector<TokenList> out;
    out.reserve(corpus.size());
    for (const auto& doc : corpus) {
        if (overrides) {
            if (auto it = overrides->find(doc.id); it != overrides->end()) {
                out.push_back(it->second);
                continue;
            }
        }
        out.push_back(tokenize(doc.text, doc.lang, lemmatizer));
    }
    return out;
}

}  // namespace xlsim
