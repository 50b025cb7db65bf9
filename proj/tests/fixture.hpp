#pragma once

#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "test_util.hpp"

namespace xlsim::testing {

/// Comparable multilingual corpus over `concepts` latent concepts. Every
/// language has its own letter-only vocabulary (disjoint across languages), and
/// its lexicon maps each word to the shared synset of its concept. A document
/// is about one dominant concept, which also names its category label.
struct FixtureOptions {
    std::vector<std::string> languages = {"en", "es"};
    std::size_t concepts = 8;
    std::size_t words_per_concept = 6;
    std::size_t train_docs = 120;   // per language
    std::size_t heldout_docs = 60;  // per language
    std::size_t tokens_per_doc = 40;
    double dominant_mass = 0.7;
    std::size_t concepts_per_group = 2;  // taxonomy: concept labels roll up into groups
    std::uint64_t seed = 7;
};

inline std::string letters(std::size_t n, std::size_t width) {
    std::string s(width, 'a');
    for (std::size_t i = width; i-- > 0; n /= 26) s[i] = static_cast<char>('a' + n % 26);
    return s;
}

inline std::string fixture_word(const std::string& lang, std::size_t concept_id, std::size_t j) {
    return lang + letters(concept_id, 2) + letters(j, 2);
}

inline std::string concept_label(std::size_t c) { return "C" + std::to_string(c); }
inline std::string group_label(std::size_t c, std::size_t per_group) { return "G" + std::to_string(c / per_group); }

struct FixtureFiles {
    std::filesystem::path config;
    std::filesystem::path workdir;
};

/// Writes corpora, held-out collections, lexicons, a taxonomy and a run config
/// into `dir`. `extra_config` lines are appended to the config file.
inline FixtureFiles write_fixture(const std::filesystem::path& dir, const FixtureOptions& opts,
                                  const std::string& extra_config = {}) {
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::string config = "languages = ";
    for (std::size_t i = 0; i < opts.languages.size(); ++i) config += (i ? "," : "") + opts.languages[i];
    config += "\ntaxonomy = taxonomy.tsv\nworkdir = out\n";

    std::string taxonomy;
    for (std::size_t c = 0; c < opts.concepts; ++c) {
        taxonomy += concept_label(c) + "\t" + group_label(c, opts.concepts_per_group) + "\n";
    }
    write_text(dir / "taxonomy.tsv", taxonomy);

    for (const auto& lang : opts.languages) {
        std::string lexicon;
        for (std::size_t c = 0; c < opts.concepts; ++c) {
            for (std::size_t j = 0; j < opts.words_per_concept; ++j) {
                lexicon += "concept" + std::to_string(c) + ".n.01\t" + fixture_word(lang, c, j) + "\n";
            }
        }
        write_text(dir / ("lexicon." + lang + ".tsv"), lexicon);

        auto make_docs = [&](const std::string& prefix, std::size_t n) {
            std::string out;
            for (std::size_t d = 0; d < n; ++d) {
                const std::size_t dominant = d % opts.concepts;
                std::string text;
                for (std::size_t t = 0; t < opts.tokens_per_doc; ++t) {
                    const std::size_t c = unit(rng) < opts.dominant_mass ? dominant : rng() % opts.concepts;
                    text += (t ? " " : "") + fixture_word(lang, c, rng() % opts.words_per_concept);
                }
                nlohmann::json j = {{"id", prefix + std::to_string(d)},
                                    {"lang", lang},
                                    {"text", text},
                                    {"labels", {concept_label(dominant)}}};
                out += j.dump() + "\n";
            }
            return out;
        };
        write_text(dir / ("train." + lang + ".jsonl"), make_docs("t", opts.train_docs));
        write_text(dir / ("heldout." + lang + ".jsonl"), make_docs("h", opts.heldout_docs));
        config += "corpus." + lang + " = train." + lang + ".jsonl\n";
        config += "collection." + lang + " = heldout." + lang + ".jsonl\n";
        config += "lexicon." + lang + " = lexicon." + lang + ".tsv\n";
    }
    config += extra_config;
    write_text(dir / "run.cfg", config);
    return {dir / "run.cfg", dir / "out"};
}

}  // namespace xlsim::testing
