#include <doctest.h>

#include <json.hpp>

#include "fixture.hpp"
#include "xlsim/config.hpp"
#include "xlsim/error.hpp"
#include "xlsim/log.hpp"
#include "xlsim/pipeline.hpp"
#include "xlsim/search.hpp"

using namespace xlsim;
namespace pl = xlsim::pipeline;
using xlsim::testing::FixtureOptions;
using xlsim::testing::read_text;
using xlsim::testing::TempDir;
using xlsim::testing::write_fixture;
using xlsim::testing::write_text;

namespace {

const char* kSmallRun = "K = 8\niterations = 40\ninfer_iterations = 20\ninfer_burn_in = 10\nmin_chars = 50\n";

struct Quiet {
    Quiet() { set_warnings_enabled(false); }
    ~Quiet() { set_warnings_enabled(true); }
};

}  // namespace

TEST_CASE("config defaults are the published presets") {
    const RunConfig cfg;
    CHECK(cfg.lda.num_topics == 500);
    CHECK(cfg.lda.alpha == 0.1);
    CHECK(cfg.lda.beta == 0.01);
    CHECK(cfg.lda.iterations == 1000);
    CHECK(cfg.topn == 5);
    CHECK(cfg.levels == 3);
    CHECK(cfg.max_df == 0.90);
    CHECK(cfg.min_df == 0.005);
    CHECK(cfg.min_chars == 100);
}

TEST_CASE("config file parsing") {
    TempDir dir;
    auto p = write_text(dir / "sub" / "run.cfg",
                        "# comment\nlanguages = en, es\ncorpus.en = data/en.jsonl\nK = 20\nL = 4\nalpha=0.5\n"
                        "cluster_rule = overlap\n");
    const auto cfg = RunConfig::load(p);
    CHECK(cfg.languages == std::vector<std::string>{"en", "es"});
    CHECK(cfg.corpus.at("en") == (dir / "sub" / "data" / "en.jsonl").lexically_normal());
    CHECK(cfg.lda.num_topics == 20);
    CHECK(cfg.levels == 4);
    CHECK(cfg.lda.alpha == 0.5);
    CHECK(cfg.cluster_rule == ClusterRule::AnyOverlap);
    CHECK_NOTHROW(cfg.validate());

    CHECK_THROWS_AS(RunConfig::load(write_text(dir / "bad1.cfg", "nonsense = 1\n")), ParseError);
    CHECK_THROWS_AS(RunConfig::load(write_text(dir / "bad2.cfg", "K = many\n")), ParseError);
    CHECK_THROWS_AS(RunConfig::load(write_text(dir / "bad3.cfg", "just words\n")), ParseError);

    RunConfig c2 = cfg;
    c2.set("workdir", "/elsewhere");
    CHECK(c2.hash() == cfg.hash());
    c2.set("seed", "9");
    CHECK(c2.hash() != cfg.hash());
    c2.set("levels", "1");
    c2.set("cap", "0");
    CHECK_THROWS_AS(c2.validate(), InvalidArgument);
}

TEST_CASE("language selection") {
    RunConfig cfg;
    cfg.set("languages", "en,es,fr");
    CHECK(pl::select_languages(cfg, "") == std::vector<std::string>{"en", "es", "fr"});
    CHECK(pl::select_languages(cfg, "fr,en") == std::vector<std::string>{"fr", "en"});
    CHECK_THROWS_AS(pl::select_languages(cfg, "de"), InvalidArgument);
    CHECK(pl::qualified_id("en", "42") == "en:42");
}

TEST_CASE("training is byte-identical across runs and language orders") {
    Quiet quiet;
    TempDir dir;
    FixtureOptions opts;
    opts.languages = {"en", "es", "fr"};
    opts.train_docs = 60;
    const auto files = write_fixture(dir.path(), opts, kSmallRun);

    auto cfg_a = RunConfig::load(files.config);
    cfg_a.workdir = dir / "run_a";
    auto cfg_b = cfg_a;
    cfg_b.workdir = dir / "run_b";
    auto cfg_c = cfg_a;
    cfg_c.workdir = dir / "run_c";

    const auto written = pl::cmd_train(cfg_a, {"en", "es", "fr"}, false);
    CHECK(written.size() == 3);
    pl::cmd_train(cfg_b, {"fr", "es", "en"}, false);
    for (const auto& lang : opts.languages) pl::cmd_train(cfg_c, {lang}, false);

    for (const auto& lang : opts.languages) {
        const auto a = read_text(pl::model_path(cfg_a, lang, false));
        CHECK(!a.empty());
        CHECK(a == read_text(pl::model_path(cfg_b, lang, false)));
        CHECK(a == read_text(pl::model_path(cfg_c, lang, false)));
    }
    const auto manifest_a = read_text(pl::manifest_path(cfg_a, false));
    CHECK(manifest_a == read_text(pl::manifest_path(cfg_c, false)));
    const auto m = nlohmann::json::parse(manifest_a);
    CHECK(m["outputs"].size() == 3);
    CHECK(m["config"].size() > 10);

    pl::cmd_train(cfg_a, {"en", "es", "fr"}, false);
    CHECK(read_text(pl::model_path(cfg_a, "en", false)) == read_text(pl::model_path(cfg_b, "en", false)));
}

TEST_CASE("a missing corpus fails before any model is written") {
    Quiet quiet;
    TempDir dir;
    FixtureOptions opts;
    opts.train_docs = 20;
    const auto files = write_fixture(dir.path(), opts, kSmallRun);
    auto cfg = RunConfig::load(files.config);
    std::filesystem::remove(cfg.corpus.at("es"));
    CHECK_THROWS_AS(pl::cmd_train(cfg, {"en", "es"}, false), IoError);
    CHECK_FALSE(std::filesystem::exists(pl::model_path(cfg, "en", false)));
}

TEST_CASE("end-to-end pipeline over a bilingual fixture") {
    Quiet quiet;
    TempDir dir;
    FixtureOptions opts;
    const auto files = write_fixture(dir.path(), opts, kSmallRun);
    const auto cfg = RunConfig::load(files.config);
    const std::vector<std::string> langs = {"en", "es"};

    pl::cmd_ingest(cfg, langs);
    CHECK(std::filesystem::exists(pl::lang_dir(cfg, "en") / "vocab.json"));
    pl::cmd_train(cfg, langs, false);
    pl::cmd_train(cfg, langs, true);
    pl::cmd_annotate(cfg, langs);
    pl::cmd_hash(cfg, langs);
    pl::cmd_index(cfg, langs, pl::Mode::Syn);
    pl::cmd_index(cfg, langs, pl::Mode::Cat);

    const auto index = SimilarityIndex::load(pl::index_path(cfg, pl::Mode::Syn));
    CHECK(index.size() == 2 * opts.heldout_docs);

    const auto labeled = TopicModel::load(pl::model_path(cfg, "en", true));
    CHECK(labeled.topic_labels() == std::vector<std::string>{"G0", "G1", "G2", "G3"});

    // a query made of concept-3 words in Spanish should surface concept-3 documents first
    std::string query;
    for (std::size_t j = 0; j < opts.words_per_concept; ++j) query += xlsim::testing::fixture_word("es", 3, j) + " ";
    const auto hits = pl::cmd_query(cfg, query, "es", 5, pl::Mode::Syn);
    REQUIRE(hits.size() == 5);
    CHECK(hits[0].rank == 1);
    CHECK(hits[0].distance <= hits[4].distance);

    const auto ir = pl::cmd_evaluate(cfg, pl::Task::Ir, pl::Mode::Syn, langs);
    CHECK(ir.report.rows.size() == 3);
    CHECK(ir.report.row("p@3").mean > 0.0);
    CHECK(std::filesystem::exists(ir.tsv_path));
    CHECK(std::filesystem::exists(ir.json_path));
    const auto cls = pl::cmd_evaluate(cfg, pl::Task::Classification, pl::Mode::Cat, langs);
    CHECK(cls.report.row("prec").mean > 0.0);
    CHECK(cls.report.row("f1").mean <= 1.0);
    CHECK(pl::cmd_evaluate(cfg, pl::Task::Ir, pl::Mode::Syn, langs).report.to_tsv() == ir.report.to_tsv());
}

TEST_CASE("evaluation refuses held-out documents seen in training") {
    Quiet quiet;
    TempDir dir;
    FixtureOptions opts;
    opts.languages = {"en"};
    opts.train_docs = 20;
    opts.heldout_docs = 10;
    const auto files = write_fixture(dir.path(), opts, kSmallRun);
    auto cfg = RunConfig::load(files.config);
    cfg.collection["en"] = cfg.corpus.at("en");
    CHECK_THROWS_AS(pl::cmd_evaluate(cfg, pl::Task::Ir, pl::Mode::Syn, {"en"}), InvalidArgument);
}
