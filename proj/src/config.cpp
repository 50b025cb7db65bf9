#include "xlsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <iomanip>
#include <sstream>

#include "xlsim/error.hpp"
#include "xlsim/io.hpp"
#include "xlsim/text.hpp"

namespace xlsim {

namespace {

template <class T>
T parse_number(std::string_view key, std::string_view value) {
    T out{};
    const auto* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end) {
        throw InvalidArgument("config: bad value '" + std::string(value) + "' for " + std::string(key));
    }
    return out;
}

double parse_real(std::string_view key, std::string_view value) {
    try {
        std::size_t used = 0;
        const std::string s(value);
        const double d = std::stod(s, &used);
        if (used == s.size()) return d;
    } catch (const std::exception&) {
    }
    throw InvalidArgument("config: bad value '" + std::string(value) + "' for " + std::string(key));
}

std::filesystem::path resolve(std::string_view value, const std::filesystem::path& base) {
    std::filesystem::path p{std::string(value)};
    if (p.is_relative() && !base.empty()) p = base / p;
    return p.lexically_normal();
}

std::string fmt_real(double d) {
    std::ostringstream out;
    out << std::setprecision(17) << d;
    return out.str();
}

}  // namespace

RunConfig RunConfig::load(const std::filesystem::path& path) {
    auto in = io::open_input(path);
    RunConfig cfg;
    const auto base = path.parent_path();
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = text::trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string_view::npos) throw ParseError(path.string(), lineno, "expected key = value");
        try {
            cfg.set(text::trim(t.substr(0, eq)), text::trim(t.substr(eq + 1)), base);
        } catch (const InvalidArgument& e) {
            throw ParseError(path.string(), lineno, e.what());
        }
    }
    return cfg;
}

void RunConfig::set(std::string_view key, std::string_view value, const std::filesystem::path& base) {
    const auto dot = key.find('.');
    if (dot != std::string_view::npos) {
        const std::string prefix(key.substr(0, dot));
        const std::string lang(key.substr(dot + 1));
        if (lang.empty()) throw InvalidArgument("config: missing language in key '" + std::string(key) + "'");
        std::map<std::string, std::filesystem::path>* target = nullptr;
        if (prefix == "corpus") target = &corpus;
        else if (prefix == "collection") target = &collection;
        else if (prefix == "lexicon") target = &lexicon;
        else if (prefix == "lemmas") target = &lemmas;
        else if (prefix == "lemmatizer") target = &lemmatizer;
        if (!target) throw InvalidArgument("config: unknown key '" + std::string(key) + "'");
        (*target)[lang] = resolve(value, base);
        return;
    }

    const std::string k(key);
    if (k == "languages") {
        languages.clear();
        for (auto& part : text::split(value, ',')) {
            const std::string lang(text::trim(part));
            if (lang.empty()) continue;
            if (std::find(languages.begin(), languages.end(), lang) != languages.end()) {
                throw InvalidArgument("config: language '" + lang + "' listed twice");
            }
            languages.push_back(lang);
        }
    } else if (k == "taxonomy") {
        taxonomy = resolve(value, base);
    } else if (k == "workdir") {
        workdir = resolve(value, base);
    } else if (k == "K") {
        lda.num_topics = parse_number<std::size_t>(k, value);
    } else if (k == "alpha") {
        lda.alpha = parse_real(k, value);
    } else if (k == "beta") {
        lda.beta = parse_real(k, value);
    } else if (k == "iterations") {
        lda.iterations = parse_number<std::size_t>(k, value);
    } else if (k == "seed") {
        lda.seed = parse_number<std::uint64_t>(k, value);
    } else if (k == "topn") {
        topn = parse_number<std::size_t>(k, value);
    } else if (k == "levels" || k == "L") {
        levels = parse_number<std::size_t>(k, value);
    } else if (k == "cap") {
        cap = parse_number<std::size_t>(k, value);
    } else if (k == "max_df") {
        max_df = parse_real(k, value);
    } else if (k == "min_df") {
        min_df = parse_real(k, value);
    } else if (k == "min_chars") {
        min_chars = parse_number<std::size_t>(k, value);
    } else if (k == "infer_iterations") {
        infer_iterations = parse_number<std::size_t>(k, value);
    } else if (k == "infer_burn_in") {
        infer_burn_in = parse_number<std::size_t>(k, value);
    } else if (k == "eval_sample") {
        eval_sample = parse_number<std::size_t>(k, value);
    } else if (k == "cluster_rule") {
        cluster_rule = parse_cluster_rule(value);
    } else if (k == "gold_rule") {
        gold_rule = parse_gold_rule(value);
    } else {
        throw InvalidArgument("config: unknown key '" + k + "'");
    }
}

void RunConfig::validate() const {
    if (languages.empty()) throw InvalidArgument("config: no languages configured");
    if (lda.num_topics < 2) throw InvalidArgument("config: K must be >= 2");
    if (!(lda.alpha > 0.0) || !(lda.beta > 0.0)) throw InvalidArgument("config: alpha and beta must be > 0");
    if (lda.iterations < 1) throw InvalidArgument("config: iterations must be >= 1");
    if (topn < 1) throw InvalidArgument("config: topn must be >= 1");
    if (levels < 1) throw InvalidArgument("config: levels must be >= 1");
    if (cap < levels) throw InvalidArgument("config: cap must be >= levels");
    if (!(min_df >= 0.0 && min_df <= max_df && max_df <= 1.0)) {
        throw InvalidArgument("config: require 0 <= min_df <= max_df <= 1");
    }
    if (infer_iterations <= infer_burn_in) throw InvalidArgument("config: infer_iterations must exceed infer_burn_in");
    if (eval_sample < 1) throw InvalidArgument("config: eval_sample must be >= 1");
}

bool RunConfig::has_language(std::string_view lang) const {
    return std::find(languages.begin(), languages.end(), lang) != languages.end();
}

std::string RunConfig::canonical() const {
    std::map<std::string, std::string> kv;
    std::string langs;
    for (const auto& l : languages) langs += (langs.empty() ? "" : ",") + l;
    kv["languages"] = langs;
    auto add_paths = [&](const char* prefix, const std::map<std::string, std::filesystem::path>& m) {
        for (const auto& [lang, p] : m) kv[std::string(prefix) + "." + lang] = p.generic_string();
    };
    add_paths("corpus", corpus);
    add_paths("collection", collection);
    add_paths("lexicon", lexicon);
    add_paths("lemmas", lemmas);
    add_paths("lemmatizer", lemmatizer);
    if (!taxonomy.empty()) kv["taxonomy"] = taxonomy.generic_string();
    kv["K"] = std::to_string(lda.num_topics);
    kv["alpha"] = fmt_real(lda.alpha);
    kv["beta"] = fmt_real(lda.beta);
    kv["iterations"] = std::to_string(lda.iterations);
    kv["seed"] = std::to_string(lda.seed);
    kv["topn"] = std::to_string(topn);
    kv["levels"] = std::to_string(levels);
    kv["cap"] = std::to_string(cap);
    kv["max_df"] = fmt_real(max_df);
    kv["min_df"] = fmt_real(min_df);
    kv["min_chars"] = std::to_string(min_chars);
    kv["infer_iterations"] = std::to_string(infer_iterations);
    kv["infer_burn_in"] = std::to_string(infer_burn_in);
    kv["eval_sample"] = std::to_string(eval_sample);
    kv["cluster_rule"] = cluster_rule == ClusterRule::ExactLevel0 ? "exact" : "overlap";
    kv["gold_rule"] = gold_rule == GoldRule::ExactLabelSet ? "exact" : "overlap";
    std::string out;
    for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
    return out;
}

std::uint64_t RunConfig::hash() const { return text::fnv1a64(canonical()); }

}  // namespace xlsim
