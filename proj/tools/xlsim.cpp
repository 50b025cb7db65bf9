// xlsim: cross-lingual document similarity over synset hash codes.
//
//   xlsim --config run.cfg train [--labeled]
//   xlsim --config run.cfg annotate
//   xlsim --config run.cfg hash
//   xlsim --config run.cfg index [--mode syn|cat]
//   xlsim --config run.cfg query --lang es --k 10 "texto de la consulta"
//   xlsim --config run.cfg evaluate --task classification|ir --mode cat|syn [--lang en,es]
//
// Errors print one line, `xlsim: error[<kind>]: <message>`, and exit 1.

#include <cstdio>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "xlsim/config.hpp"
#include "xlsim/error.hpp"
#include "xlsim/lexicon.hpp"
#include "xlsim/log.hpp"
#include "xlsim/pipeline.hpp"

namespace {

std::string one_line(std::string s) {
    for (auto& c : s) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    return s;
}

int fail(const char* kind, const std::string& msg) {
    std::cerr << "xlsim: error[" << kind << "]: " << one_line(msg) << '\n';
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace xlsim;
    namespace pl = xlsim::pipeline;

    CLI::App app{"Cross-lingual document similarity via synset hash codes"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string langs;
    std::uint64_t seed = 0;
    bool quiet = false;
    app.add_option("--config", config_path, "Run configuration (key = value file)");
    app.add_option("--set", overrides, "Override a config key, key=value (repeatable)");
    auto* seed_opt = app.add_option("--seed", seed, "Run seed (overrides config)");
    app.add_flag("--quiet", quiet, "Suppress warnings");
    // --lang is accepted both globally and per subcommand
    app.add_option("--lang", langs, "Language or comma-separated languages");

    auto* ingest = app.add_subcommand("ingest", "Filter and tokenize corpora, build vocabularies");
    ingest->add_option("--lang", langs);

    bool labeled = false;
    auto* train = app.add_subcommand("train", "Train one topic model per language");
    train->add_option("--lang", langs);
    train->add_flag("--labeled", labeled, "Train LabeledLDA on (root-reduced) category labels");

    auto* annotate = app.add_subcommand("annotate", "Annotate topics with synsets of their top words");
    annotate->add_option("--lang", langs);

    auto* hash = app.add_subcommand("hash", "Infer and hash the held-out collections");
    hash->add_option("--lang", langs);

    std::string mode = "syn";
    auto* index = app.add_subcommand("index", "Build the similarity index");
    index->add_option("--lang", langs);
    index->add_option("--mode", mode, "syn or cat")->check(CLI::IsMember({"syn", "cat"}));

    std::string query_text;
    std::size_t k = 10;
    auto* query = app.add_subcommand("query", "Rank indexed documents against a text");
    query->add_option("--lang", langs, "Language of the query text")->required();
    query->add_option("--k", k, "Number of results");
    query->add_option("--mode", mode, "syn or cat")->check(CLI::IsMember({"syn", "cat"}));
    query->add_option("--text,text", query_text, "Query text")->required();

    std::string task;
    auto* evaluate = app.add_subcommand("evaluate", "Classification or retrieval evaluation");
    evaluate->add_option("--lang", langs, "Collection languages, e.g. en,es");
    evaluate->add_option("--task", task, "classification or ir")
        ->required()
        ->check(CLI::IsMember({"classification", "ir"}));
    evaluate->add_option("--mode", mode, "cat or syn")->check(CLI::IsMember({"syn", "cat"}));

    std::string omw_in, omw_out, omw_lang;
    auto* convert = app.add_subcommand("convert-omw", "Convert an Open Multilingual WordNet .tab file to lexicon TSV");
    convert->add_option("input", omw_in)->required();
    convert->add_option("output", omw_out)->required();
    convert->add_option("--lang", omw_lang);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "xlsim: error[usage]: " << one_line(e.what()) << '\n';
        return 2;
    }
    set_warnings_enabled(!quiet);

    try {
        if (convert->parsed()) {
            std::ofstream out(omw_out, std::ios::binary);
            if (!out) throw IoError("cannot write " + omw_out);
            SynsetLexicon::import_omw_tab(omw_in, omw_lang).write_tsv(out);
            return 0;
        }

        RunConfig cfg;
        if (!config_path.empty()) cfg = RunConfig::load(config_path);
        for (const auto& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw InvalidArgument("--set expects key=value, got '" + kv + "'");
            cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (*seed_opt) cfg.lda.seed = seed;

        if (ingest->parsed()) {
            pl::cmd_ingest(cfg, pl::select_languages(cfg, langs));
        } else if (train->parsed()) {
            for (const auto& p : pl::cmd_train(cfg, pl::select_languages(cfg, langs), labeled)) {
                std::cout << p.string() << '\n';
            }
        } else if (annotate->parsed()) {
            pl::cmd_annotate(cfg, pl::select_languages(cfg, langs));
        } else if (hash->parsed()) {
            pl::cmd_hash(cfg, pl::select_languages(cfg, langs));
        } else if (index->parsed()) {
            pl::cmd_index(cfg, pl::select_languages(cfg, langs), pl::parse_mode(mode));
        } else if (query->parsed()) {
            std::cout << "rank\tid\tdistance\tlang\n" << std::fixed << std::setprecision(6);
            for (const auto& r : pl::cmd_query(cfg, query_text, langs, k, pl::parse_mode(mode))) {
                std::cout << r.rank << '\t' << r.id << '\t' << r.distance << '\t' << r.lang << '\n';
            }
        } else if (evaluate->parsed()) {
            const auto outcome =
                pl::cmd_evaluate(cfg, pl::parse_task(task), pl::parse_mode(mode), pl::select_languages(cfg, langs));
            std::cout << outcome.report.to_tsv();
        }
    } catch (const Error& e) {
        return fail(e.kind(), e.what());
    } catch (const std::exception& e) {
        return fail("internal", e.what());
    }
    return 0;
}
