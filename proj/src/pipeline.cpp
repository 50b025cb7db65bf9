#include "xlsim/pipeline.hpp"

#include <algorithm>
#include <iomanip>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "xlsim/error.hpp"
#include "xlsim/hashing.hpp"
#include "xlsim/io.hpp"
#include "xlsim/lexicon.hpp"
#include "xlsim/log.hpp"
#include "xlsim/rng.hpp"
#include "xlsim/search.hpp"
#include "xlsim/taxonomy.hpp"
#include "xlsim/topics.hpp"

namespace xlsim::pipeline {

namespace fs = std::filesystem;
using json = nlohmann::json;

Mode parse_mode(std::string_view s) {
    if (s == "syn") return Mode::Syn;
    if (s == "cat") return Mode::Cat;
    throw InvalidArgument("unknown mode '" + std::string(s) + "' (expected cat or syn)");
}

Task parse_task(std::string_view s) {
    if (s == "classification") return Task::Classification;
    if (s == "ir") return Task::Ir;
    throw InvalidArgument("unknown task '" + std::string(s) + "' (expected classification or ir)");
}

std::string_view to_string(Mode m) { return m == Mode::Syn ? "syn" : "cat"; }
std::string_view to_string(Task t) { return t == Task::Classification ? "classification" : "ir"; }

fs::path lang_dir(const RunConfig& cfg, std::string_view lang) { return cfg.workdir / std::string(lang); }

fs::path model_path(const RunConfig& cfg, std::string_view lang, bool labeled) {
    return lang_dir(cfg, lang) / (labeled ? "model.labeled.json" : "model.json");
}

fs::path annotations_path(const RunConfig& cfg, std::string_view lang) {
    return lang_dir(cfg, lang) / "annotations.json";
}

fs::path hashes_path(const RunConfig& cfg, std::string_view lang) { return lang_dir(cfg, lang) / "hashes.jsonl"; }

fs::path index_path(const RunConfig& cfg, Mode mode) {
    return cfg.workdir / (mode == Mode::Syn ? "index.json" : "index.cat.json");
}

fs::path manifest_path(const RunConfig& cfg, bool labeled) {
    return cfg.workdir / (labeled ? "manifest.train-labeled.json" : "manifest.train.json");
}

std::vector<std::string> select_languages(const RunConfig& cfg, std::string_view requested) {
    if (text::trim(requested).empty()) return cfg.languages;
    std::vector<std::string> out;
    for (auto& part : text::split(requested, ',')) {
        const std::string lang(text::trim(part));
        if (lang.empty()) continue;
        if (!cfg.has_language(lang)) throw InvalidArgument("unknown language '" + lang + "'");
        if (std::find(out.begin(), out.end(), lang) == out.end()) out.push_back(lang);
    }
    if (out.empty()) throw InvalidArgument("no language selected");
    return out;
}

std::string qualified_id(std::string_view lang, std::string_view id) {
    return std::string(lang) + ":" + std::string(id);
}

namespace {

std::string hex64(std::uint64_t v) {
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << v;
    return out.str();
}

const fs::path& require_path(const std::map<std::string, fs::path>& m, const std::string& lang, const char* key) {
    auto it = m.find(lang);
    if (it == m.end()) throw InvalidArgument(std::string("config: no ") + key + "." + lang + " configured");
    return it->second;
}

void require_file(const fs::path& p, const std::string& what) {
    if (!fs::is_regular_file(p)) throw IoError(what + " not found: " + p.string());
}

std::unique_ptr<Lemmatizer> make_lemmatizer(const RunConfig& cfg, const std::string& lang) {
    if (auto it = cfg.lemmatizer.find(lang); it != cfg.lemmatizer.end()) {
        return std::make_unique<DictionaryLemmatizer>(DictionaryLemmatizer::load(it->second, lang));
    }
    return std::make_unique<FallbackLemmatizer>();
}

std::optional<Taxonomy> load_taxonomy(const RunConfig& cfg) {
    if (cfg.taxonomy.empty()) return std::nullopt;
    if (cfg.taxonomy.extension() == ".json") return Taxonomy::load_skos_json(cfg.taxonomy);
    return Taxonomy::load(cfg.taxonomy);
}

// Root labels of d; labels unknown to the taxonomy are dropped and counted.
std::set<std::string> effective_labels(const std::set<std::string>& labels, const std::optional<Taxonomy>& tax,
                                       std::size_t& unknown) {
    if (!tax) return labels;
    std::set<std::string> known;
    for (const auto& l : labels) {
        if (tax->contains(l)) {
            known.insert(l);
        } else {
            ++unknown;
        }
    }
    return reduce_to_roots(*tax, known);
}

void warn_unknown(std::size_t unknown, const std::string& where) {
    if (unknown) warn(where + ": ignored " + std::to_string(unknown) + " label(s) missing from the taxonomy");
}

const fs::path& collection_path(const RunConfig& cfg, const std::string& lang) {
    if (auto it = cfg.collection.find(lang); it != cfg.collection.end()) return it->second;
    return require_path(cfg.corpus, lang, "corpus");
}

std::vector<BagOfWords> to_bows(const std::vector<TokenList>& tokens, const Vocabulary& vocab) {
    std::vector<BagOfWords> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(to_bow(t, vocab));
    return out;
}

InferParams infer_params(const RunConfig& cfg, std::uint64_t seed) {
    return InferParams{cfg.infer_iterations, cfg.infer_burn_in, seed};
}

struct HashRecord {
    std::string id;
    std::string lang;
    std::set<std::string> labels;
    HashCode syn;
    std::optional<HashCode> cat;
};

std::vector<HashRecord> read_hashes(const RunConfig& cfg, const std::string& lang) {
    const auto path = hashes_path(cfg, lang);
    require_file(path, "hashes for '" + lang + "' (run `hash` first)");
    auto in = io::open_input(path);
    std::vector<HashRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        try {
            auto j = json::parse(line);
            HashRecord r{j.at("id").get<std::string>(), j.at("lang").get<std::string>(),
                         j.at("labels").get<std::set<std::string>>(), hash_from_json(j.at("syn")), std::nullopt};
            if (j.contains("cat")) r.cat = hash_from_json(j["cat"]);
            out.push_back(std::move(r));
        } catch (const json::exception& e) {
            throw ParseError(path.string(), lineno, e.what());
        }
    }
    return out;
}

const HashCode& hash_for(const HashRecord& r, Mode mode) {
    if (mode == Mode::Syn) return r.syn;
    if (!r.cat) throw InvalidArgument("no category hash for '" + r.id + "' (train with --labeled, then rerun hash)");
    return *r.cat;
}

}  // namespace

PreparedCorpus prepare_corpus(const RunConfig& cfg, std::string_view lang, const fs::path& path) {
    const std::string l(lang);
    PreparedCorpus out;
    const auto raw = ingest_corpus(path, l);
    out.docs = filter_short(raw, cfg.min_chars);
    if (out.docs.size() < raw.size()) {
        warn(path.string() + ": dropped " + std::to_string(raw.size() - out.docs.size()) + " document(s) shorter than " +
             std::to_string(cfg.min_chars) + " characters");
    }
    std::optional<LemmaOverrides> overrides;
    if (auto it = cfg.lemmas.find(l); it != cfg.lemmas.end()) overrides = load_lemma_file(it->second);
    const auto lemmatizer = make_lemmatizer(cfg, l);
    out.tokens = tokenize_corpus(out.docs, *lemmatizer, overrides ? &*overrides : nullptr);
    return out;
}

void cmd_ingest(const RunConfig& cfg, const std::vector<std::string>& langs) {
    cfg.validate();
    for (const auto& lang : langs) require_file(require_path(cfg.corpus, lang, "corpus"), "corpus");
    for (const auto& lang : langs) {
        const auto prepared = prepare_corpus(cfg, lang, cfg.corpus.at(lang));
        write_corpus(lang_dir(cfg, lang) / "corpus.jsonl", prepared.docs);
        std::string tokens;
        for (std::size_t i = 0; i < prepared.docs.size(); ++i) {
            tokens += json{{"id", prepared.docs[i].id}, {"tokens", prepared.tokens[i].tokens}}.dump() + "\n";
        }
        io::write_file(lang_dir(cfg, lang) / "tokens.jsonl", tokens);
        if (!prepared.tokens.empty()) {
            build_vocabulary(prepared.tokens, cfg.max_df, cfg.min_df).save(lang_dir(cfg, lang) / "vocab.json");
        }
    }
}

std::vector<fs::path> cmd_train(const RunConfig& cfg, const std::vector<std::string>& langs, bool labeled) {
    cfg.validate();
    // every input is checked before any training starts
    for (const auto& lang : cfg.languages) require_file(require_path(cfg.corpus, lang, "corpus"), "corpus");
    if (labeled && !cfg.taxonomy.empty()) require_file(cfg.taxonomy, "taxonomy");

    const auto taxonomy = labeled ? load_taxonomy(cfg) : std::nullopt;
    if (labeled && !taxonomy) warn("train --labeled without a taxonomy: raw labels are used as topics");

    // the label universe spans every configured language, so it does not depend on `langs`
    std::vector<std::string> universe;
    if (labeled) {
        std::set<std::string> all;
        std::size_t unknown = 0;
        for (const auto& lang : cfg.languages) {
            for (const auto& d : filter_short(ingest_corpus(cfg.corpus.at(lang), lang), cfg.min_chars)) {
                const auto ls = effective_labels(d.labels, taxonomy, unknown);
                all.insert(ls.begin(), ls.end());
            }
        }
        warn_unknown(unknown, "train");
        universe.assign(all.begin(), all.end());
        if (universe.size() < 2) throw InvalidArgument("train --labeled: fewer than two distinct labels");
    }

    json outputs = json::object();
    std::vector<fs::path> written;
    for (const auto& lang : langs) {
        const auto prepared = prepare_corpus(cfg, lang, cfg.corpus.at(lang));
        if (prepared.docs.empty()) throw InvalidArgument("corpus for '" + lang + "' is empty after filtering");
        const auto vocab = build_vocabulary(prepared.tokens, cfg.max_df, cfg.min_df);
        const auto bows = to_bows(prepared.tokens, vocab);

        LdaParams params = cfg.lda;
        params.seed = substream_seed(cfg.lda.seed, std::string(labeled ? "train-labeled/" : "train/") + lang);
        std::optional<TopicModel> model;
        if (labeled) {
            std::vector<std::set<std::string>> labels;
            labels.reserve(prepared.docs.size());
            std::size_t unknown = 0;
            for (const auto& d : prepared.docs) labels.push_back(effective_labels(d.labels, taxonomy, unknown));
            model.emplace(train_labeled_lda(bows, labels, universe, vocab, params, lang));
        } else {
            model.emplace(train_lda(bows, vocab, params, lang));
        }
        const auto path = model_path(cfg, lang, labeled);
        const auto bytes = model->to_json().dump() + "\n";
        io::write_file(path, bytes);
        written.push_back(path);
        outputs[lang] = {{"path", fs::relative(path, cfg.workdir).generic_string()},
                         {"fnv1a64", hex64(text::fnv1a64(bytes))},
                         {"seed", params.seed},
                         {"documents", prepared.docs.size()},
                         {"vocabulary", vocab.size()}};
    }

    // merge with an existing manifest so per-language runs accumulate
    json manifest;
    const auto mpath = manifest_path(cfg, labeled);
    if (fs::exists(mpath)) {
        try {
            manifest = json::parse(io::read_file(mpath));
            if (manifest.value("config_hash", "") != hex64(cfg.hash())) manifest = json();
        } catch (const json::exception&) {
            manifest = json();
        }
    }
    if (!manifest.is_object()) manifest = json::object();
    std::vector<std::string> lines;
    for (auto& l : text::split(cfg.canonical(), '\n')) {
        if (!l.empty()) lines.push_back(l);
    }
    manifest["command"] = "train";
    manifest["labeled"] = labeled;
    manifest["seed"] = cfg.lda.seed;
    manifest["config_hash"] = hex64(cfg.hash());
    manifest["config"] = lines;
    if (!manifest.contains("outputs")) manifest["outputs"] = json::object();
    for (auto& [lang, entry] : outputs.items()) manifest["outputs"][lang] = entry;
    if (labeled) manifest["label_universe_size"] = universe.size();
    io::write_file(mpath, manifest.dump(2) + "\n");
    return written;
}

void cmd_annotate(const RunConfig& cfg, const std::vector<std::string>& langs) {
    cfg.validate();
    for (const auto& lang : langs) {
        require_file(model_path(cfg, lang, false), "model for '" + lang + "' (run `train` first)");
        require_file(require_path(cfg.lexicon, lang, "lexicon"), "lexicon");
    }
    for (const auto& lang : langs) {
        const auto model = TopicModel::load(model_path(cfg, lang, false));
        const auto lexicon = SynsetLexicon::load(cfg.lexicon.at(lang), lang);
        const auto annotations = annotate_model(model, lexicon, cfg.topn);
        const auto j = annotations_to_json(annotations, lang, cfg.topn);
        if (j["empty_topics"].get<std::size_t>() > 0) {
            warn(lang + ": " + std::to_string(j["empty_topics"].get<std::size_t>()) + " of " +
                 std::to_string(annotations.size()) + " topics have no synset in the lexicon");
        }
        io::write_file(annotations_path(cfg, lang), j.dump() + "\n");
    }
}

void cmd_hash(const RunConfig& cfg, const std::vector<std::string>& langs) {
    cfg.validate();
    for (const auto& lang : langs) {
        require_file(annotations_path(cfg, lang), "annotations for '" + lang + "' (run `annotate` first)");
        require_file(collection_path(cfg, lang), "collection");
    }
    for (const auto& lang : langs) {
        const auto model = TopicModel::load(model_path(cfg, lang, false));
        const auto annotations = annotations_from_json(json::parse(io::read_file(annotations_path(cfg, lang))));
        if (annotations.size() != model.num_topics()) throw FormatError("annotations do not match the model for " + lang);
        std::optional<TopicModel> labeled;
        if (fs::exists(model_path(cfg, lang, true))) labeled.emplace(TopicModel::load(model_path(cfg, lang, true)));

        const auto prepared = prepare_corpus(cfg, lang, collection_path(cfg, lang));
        std::string out;
        for (std::size_t i = 0; i < prepared.docs.size(); ++i) {
            const auto& doc = prepared.docs[i];
            const auto seed = substream_seed(cfg.lda.seed, "infer/" + lang + "/" + doc.id);
            const auto theta = infer(model, to_bow(prepared.tokens[i], model.vocabulary()), infer_params(cfg, seed));
            const auto topic_hash = build_topic_hash(theta, cfg.levels, cfg.cap);
            json rec = {{"id", doc.id},
                        {"lang", lang},
                        {"labels", doc.labels},
                        {"topic", hash_to_json(topic_hash)},
                        {"syn", hash_to_json(to_synset_hash(topic_hash, annotations))}};
            if (labeled) {
                const auto cat_theta = infer(*labeled, to_bow(prepared.tokens[i], labeled->vocabulary()),
                                             infer_params(cfg, substream_seed(seed, "labeled")));
                rec["cat"] = hash_to_json(
                    to_label_hash(build_topic_hash(cat_theta, cfg.levels, cfg.cap), labeled->topic_labels()));
            }
            out += rec.dump() + "\n";
        }
        io::write_file(hashes_path(cfg, lang), out);
    }
}

void cmd_index(const RunConfig& cfg, const std::vector<std::string>& langs, Mode mode) {
    cfg.validate();
    SimilarityIndex index(cfg.levels);
    for (const auto& lang : langs) {
        for (const auto& r : read_hashes(cfg, lang)) index.add(qualified_id(lang, r.id), hash_for(r, mode), lang);
    }
    index.save(index_path(cfg, mode));
}

std::vector<QueryResult> cmd_query(const RunConfig& cfg, std::string_view text_in, std::string_view lang_in,
                                   std::size_t k, Mode mode) {
    cfg.validate();
    const std::string lang(lang_in);
    if (!cfg.has_language(lang)) throw InvalidArgument("unknown language '" + lang + "'");
    if (k < 1) throw InvalidArgument("query: k must be >= 1");
    require_file(index_path(cfg, mode), "index (run `index` first)");
    const bool labeled = mode == Mode::Cat;
    require_file(model_path(cfg, lang, labeled), "model for '" + lang + "'");

    const auto model = TopicModel::load(model_path(cfg, lang, labeled));
    const auto index = SimilarityIndex::load(index_path(cfg, mode));
    const auto lemmatizer = make_lemmatizer(cfg, lang);
    const auto tokens = tokenize(text_in, lang, *lemmatizer);
    const auto theta = infer(model, to_bow(tokens, model.vocabulary()),
                             infer_params(cfg, substream_seed(cfg.lda.seed, "query/" + lang)));
    const auto topic_hash = build_topic_hash(theta, cfg.levels, cfg.cap);

    HashCode probe;
    if (labeled) {
        probe = to_label_hash(topic_hash, model.topic_labels());
    } else {
        require_file(annotations_path(cfg, lang), "annotations for '" + lang + "'");
        const auto annotations = annotations_from_json(json::parse(io::read_file(annotations_path(cfg, lang))));
        probe = to_synset_hash(topic_hash, annotations);
    }

    std::vector<QueryResult> out;
    for (const auto& hit : index.query(probe, k)) {
        out.push_back({out.size() + 1, hit.id, hit.distance, index.tag_of(hit.id)});
    }
    return out;
}

EvalOutcome cmd_evaluate(const RunConfig& cfg, Task task, Mode mode, const std::vector<std::string>& langs) {
    cfg.validate();
    const auto taxonomy = load_taxonomy(cfg);

    // held-out documents must not have been seen in training
    for (const auto& lang : langs) {
        const auto& coll = require_path(cfg.collection, lang, "collection");
        const auto& train = require_path(cfg.corpus, lang, "corpus");
        std::set<std::string> train_ids;
        for (const auto& d : ingest_corpus(train, lang)) train_ids.insert(d.id);
        for (const auto& d : ingest_corpus(coll, lang)) {
            if (train_ids.count(d.id)) {
                throw InvalidArgument("held-out document '" + d.id + "' (" + lang + ") is also a training document");
            }
        }
    }

    // labeled held-out documents of all selected languages, by qualified id
    Corpus docs;
    std::map<std::string, HashCode> hashes;
    std::size_t unknown = 0;
    for (const auto& lang : langs) {
        for (auto& r : read_hashes(cfg, lang)) {
            Document d{qualified_id(lang, r.id), lang, {}, effective_labels(r.labels, taxonomy, unknown)};
            hashes.emplace(d.id, hash_for(r, mode));
            docs.push_back(std::move(d));
        }
    }
    warn_unknown(unknown, "evaluate");
    std::sort(docs.begin(), docs.end(), [](const Document& a, const Document& b) { return a.id < b.id; });
    const auto truth = build_ground_truth(docs, cfg.gold_rule);
    std::vector<std::string> pool;
    for (const auto& [id, _] : truth.gold_key) pool.push_back(id);
    if (pool.empty()) throw InvalidArgument("evaluate: no labeled held-out documents");

    // seeded partial Fisher-Yates over the sorted pool
    std::string langs_key;
    for (const auto& l : langs) langs_key += (langs_key.empty() ? "" : "-") + l;
    Rng rng(substream_seed(cfg.lda.seed, "evaluate/" + std::string(to_string(task)) + "/" + langs_key));
    const std::size_t n = std::min(cfg.eval_sample, pool.size());
    for (std::size_t i = 0; i < n; ++i) std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
    std::vector<std::string> sample(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n));
    std::sort(sample.begin(), sample.end());

    EvalOutcome outcome;
    if (task == Task::Classification) {
        std::map<std::string, HashCode> sample_hashes;
        Corpus sample_docs;
        for (const auto& d : docs) {
            if (std::binary_search(sample.begin(), sample.end(), d.id)) {
                sample_hashes.emplace(d.id, hashes.at(d.id));
                sample_docs.push_back(d);
            }
        }
        const auto system = assign_clusters(sample_hashes, cfg.cluster_rule);
        const auto gold = build_ground_truth(sample_docs, cfg.gold_rule).gold_key;
        outcome.report = bcubed(system, gold).report;
    } else {
        SimilarityIndex index(cfg.levels);
        for (const auto& id : pool) index.add(id, hashes.at(id));
        constexpr std::size_t kDepth = 10;
        std::vector<std::vector<std::string>> rankings;
        std::vector<std::set<std::string>> relevant;
        for (const auto& q : sample) {
            std::vector<std::string> ranking;
            for (const auto& hit : index.query(hashes.at(q), kDepth + 1)) {
                if (hit.id != q && ranking.size() < kDepth) ranking.push_back(hit.id);
            }
            rankings.push_back(std::move(ranking));
            relevant.push_back(truth.relevant.at(q));
        }
        outcome.report.count = sample.size();
        for (std::size_t k : {3, 5, 10}) outcome.report.rows.push_back(precision_at_k(rankings, relevant, k).rows[0]);
    }

    const auto stem = std::string(to_string(task)) + "-" + std::string(to_string(mode)) + "-" + langs_key;
    outcome.tsv_path = cfg.workdir / "eval" / (stem + ".tsv");
    outcome.json_path = cfg.workdir / "eval" / (stem + ".json");
    io::write_file(outcome.tsv_path, outcome.report.to_tsv());
    json j = outcome.report.to_json();
    j["task"] = to_string(task);
    j["mode"] = to_string(mode);
    j["languages"] = langs;
    j["config_hash"] = hex64(cfg.hash());
    io::write_file(outcome.json_path, j.dump(2) + "\n");
    return outcome;
}

}  // namespace xlsim::pipeline
