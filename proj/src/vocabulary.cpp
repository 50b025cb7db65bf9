#include "xlsim/vocabulary.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

#include "xlsim/error.hpp"
#include "xlsim/io.hpp"

namespace xlsim {

using json = nlohmann::json;

namespace {
constexpr const char* kFormat = "xlsim.vocabulary";
constexpr int kVersion = 1;
}  // namespace

Vocabulary::Vocabulary(std::vector<std::string> terms, std::vector<std::size_t> doc_counts, std::size_t num_docs)
    : terms_(std::move(terms)), doc_counts_(std::move(doc_counts)), num_docs_(num_docs) {
    if (terms_.size() != doc_counts_.size()) throw InvalidArgument("vocabulary: terms and doc counts differ in length");
    if (num_docs_ == 0 && !terms_.empty()) throw InvalidArgument("vocabulary: terms without documents");
    index_.reserve(terms_.size());
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (terms_[i].empty()) throw InvalidArgument("vocabulary: empty term");
        if (doc_counts_[i] > num_docs_) throw InvalidArgument("vocabulary: doc count exceeds corpus size");
        if (!index_.emplace(terms_[i], static_cast<TermId>(i)).second) {
            throw InvalidArgument("vocabulary: duplicate term '" + terms_[i] + "'");
        }
    }
}

std::optional<TermId> Vocabulary::find(std::string_view lemma) const {
    auto it = index_.find(std::string(lemma));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

json Vocabulary::to_json() const {
    json df = json::array();
    for (std::size_t i = 0; i < terms_.size(); ++i) df.push_back(doc_freq(static_cast<TermId>(i)));
    return json{{"format", kFormat},  {"version", kVersion},        {"num_docs", num_docs_},
                {"terms", terms_},    {"doc_counts", doc_counts_}, {"df", std::move(df)}};
}

Vocabulary Vocabulary::from_json(const json& j) {
    try {
        if (j.at("format") != kFormat) throw FormatError("not a vocabulary document");
        if (j.at("version") != kVersion) throw FormatError("unsupported vocabulary version");
        return Vocabulary(j.at("terms").get<std::vector<std::string>>(),
                          j.at("doc_counts").get<std::vector<std::size_t>>(), j.at("num_docs").get<std::size_t>());
    } catch (const json::exception& e) {
        throw FormatError(std::string("vocabulary: ") + e.what());
    } catch (const InvalidArgument& e) {
        throw FormatError(e.what());
    }
}

void Vocabulary::save(const std::filesystem::path& path) const { io::write_file(path, to_json().dump() + "\n"); }

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
    try {
        return from_json(json::parse(io::read_file(path)));
    } catch (const json::parse_error& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

Vocabulary build_vocabulary(const std::vector<TokenList>& corpus, double max_df, double min_df) {
    if (!(min_df >= 0.0 && min_df <= max_df && max_df <= 1.0)) {
        throw InvalidArgument("build_vocabulary: require 0 <= min_df <= max_df <= 1");
    }
    if (corpus.empty()) throw InvalidArgument("build_vocabulary: empty corpus");

    std::map<std::string, std::size_t> counts;
    std::unordered_set<std::string_view> seen;
    for (const auto& doc : corpus) {
        seen.clear();
        for (const auto& tok : doc.tokens) {
            if (seen.insert(tok).second) ++counts[tok];
        }
    }

    const auto n = static_cast<double>(corpus.size());
    std::vector<std::pair<std::string, std::size_t>> kept;
    for (auto& [term, c] : counts) {
        const double df = static_cast<double>(c) / n;
        if (df >= min_df && df <= max_df) kept.emplace_back(term, c);
    }
    // map iteration is already lexicographic; stable sort keeps that as the tie-break
    std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) { return a.second > b.second; });

    std::vector<std::string> terms;
    std::vector<std::size_t> dcs;
    terms.reserve(kept.size());
    dcs.reserve(kept.size());
    for (auto& [t, c] : kept) {
        terms.push_back(std::move(t));
        dcs.push_back(c);
    }
    return Vocabulary(std::move(terms), std::move(dcs), corpus.size());
}

std::size_t BagOfWords::total() const {
    std::size_t t = 0;
    for (const auto& [id, c] : counts) t += c;
    return t;
}

std::uint32_t BagOfWords::count(TermId id) const {
    auto it = std::lower_bound(counts.begin(), counts.end(), id, [](const auto& p, TermId v) { return p.first < v; });
    return (it != counts.end() && it->first == id) ? it->second : 0;
}

BagOfWords to_bow(const TokenList& tokens, const Vocabulary& vocab) {
    std::map<TermId, std::uint32_t> counts;
    for (const auto& tok : tokens.tokens) {
        if (auto id = vocab.find(tok)) ++counts[*id];
    }
    BagOfWords bow;
    bow.counts.assign(counts.begin(), counts.end());
    return bow;
}

}  // namespace xlsim
