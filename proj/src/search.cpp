#include "xlsim/search.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <queue>

#include "xlsim/error.hpp"
#include "xlsim/io.hpp"

namespace xlsim {

using json = nlohmann::json;

namespace {
constexpr const char* kIndexFormat = "xlsim.index";
constexpr int kIndexVersion = 1;
constexpr const char* kEmptyClusterKey = "\xE2\x88\x85";  // ∅

bool hit_less(double da, const std::string& a, double db, const std::string& b) {
    return da != db ? da < db : a < b;
}
}  // namespace

SimilarityIndex::SimilarityIndex(std::size_t levels) : levels_(levels), postings_(levels) {
    if (levels_ < 1 || levels_ > 64) throw InvalidArgument("index: level count must be in [1, 64]");
}

void SimilarityIndex::check_hash(const HashCode& hash, const char* what) const {
    if (hash.space() != HashSpace::Synset) throw InvalidArgument(std::string(what) + ": hash must be in synset space");
    if (hash.num_levels() != levels_) {
        throw InvalidArgument(std::string(what) + ": hash has " + std::to_string(hash.num_levels()) +
                              " levels, index has " + std::to_string(levels_));
    }
}

void SimilarityIndex::add(const std::string& id, const HashCode& hash, const std::string& tag) {
    check_hash(hash, "index_add");
    if (id.empty()) throw InvalidArgument("index_add: empty document id");
    if (slot_of_.count(id)) throw DuplicateError("index_add: document '" + id + "' already indexed");

    Entry entry{id, tag, hash, {}, 0, true};
    entry.symbols.resize(levels_);
    for (std::size_t l = 0; l < levels_; ++l) {
        for (const auto& concept_id : hash.level(l)) {
            auto [it, inserted] = symbol_of_.try_emplace(concept_id, static_cast<Symbol>(symbol_names_.size()));
            if (inserted) symbol_names_.push_back(concept_id);
            entry.symbols[l].push_back(it->second);
        }
        if (!hash.level(l).empty()) entry.mask |= std::uint64_t{1} << l;
    }

    Slot slot;
    if (!free_slots_.empty()) {
        slot = free_slots_.back();
        free_slots_.pop_back();
        entries_[slot] = std::move(entry);
    } else {
        slot = static_cast<Slot>(entries_.size());
        entries_.push_back(std::move(entry));
    }
    const Entry& e = entries_[slot];
    for (std::size_t l = 0; l < levels_; ++l) {
        for (Symbol s : e.symbols[l]) postings_[l][s].push_back(slot);
    }
    buckets_[e.mask].emplace(e.id, slot);
    slot_of_.emplace(e.id, slot);
}

bool SimilarityIndex::remove(std::string_view id) {
    auto it = slot_of_.find(std::string(id));
    if (it == slot_of_.end()) return false;
    const Slot slot = it->second;
    Entry& e = entries_[slot];
    for (std::size_t l = 0; l < levels_; ++l) {
        for (Symbol s : e.symbols[l]) {
            auto pit = postings_[l].find(s);
            auto& list = pit->second;
            list.erase(std::find(list.begin(), list.end(), slot));
            if (list.empty()) postings_[l].erase(pit);
        }
    }
    auto bit = buckets_.find(e.mask);
    bit->second.erase(e.id);
    if (bit->second.empty()) buckets_.erase(bit);
    slot_of_.erase(it);
    e = Entry{};
    free_slots_.push_back(slot);
    return true;
}

std::vector<SearchHit> SimilarityIndex::query(const HashCode& probe, std::size_t k) const {
    check_hash(probe, "query");
    if (k < 1) throw InvalidArgument("query: k must be >= 1");
    if (empty()) return {};

    std::uint64_t probe_mask = 0;
    for (std::size_t l = 0; l < levels_; ++l) {
        if (!probe.level(l).empty()) probe_mask |= std::uint64_t{1} << l;
    }

    // per-candidate count of shared concepts at each level
    std::unordered_map<Slot, std::size_t> row_of;
    std::vector<std::uint32_t> shared;
    for (std::size_t l = 0; l < levels_; ++l) {
        for (const auto& concept_id : probe.level(l)) {
            auto sit = symbol_of_.find(concept_id);
            if (sit == symbol_of_.end()) continue;
            auto pit = postings_[l].find(sit->second);
            if (pit == postings_[l].end()) continue;
            for (Slot slot : pit->second) {
                auto [rit, inserted] = row_of.try_emplace(slot, shared.size() / levels_);
                if (inserted) shared.resize(shared.size() + levels_, 0);
                ++shared[rit->second * levels_ + l];
            }
        }
    }

    struct Scored {
        double distance;
        const std::string* id;
    };
    std::vector<Scored> scored;
    scored.reserve(row_of.size());
    for (const auto& [slot, row] : row_of) {
        const Entry& e = entries_[slot];
        double d = 0.0;
        for (std::size_t l = 0; l < levels_; ++l) {
            const std::size_t common = shared[row * levels_ + l];
            const std::size_t uni = probe.level(l).size() + e.symbols[l].size() - common;
            if (uni == 0) continue;
            d += 1.0 - static_cast<double>(common) / static_cast<double>(uni);
        }
        scored.push_back({d, &e.id});
    }
    std::sort(scored.begin(), scored.end(),
              [](const Scored& a, const Scored& b) { return hit_less(a.distance, *a.id, b.distance, *b.id); });

    // Streams sorted by (distance, id): stream 0 is the scored candidates, the
    // rest are empty-pattern buckets whose members all sit at one distance.
    struct Stream {
        double distance = 0.0;
        std::map<std::string, Slot>::const_iterator it, end;
    };
    std::vector<Stream> streams;
    for (const auto& [mask, members] : buckets_) {
        streams.push_back({static_cast<double>(std::popcount(mask | probe_mask)), members.begin(), members.end()});
    }
    auto skip_candidates = [&](Stream& s) {
        while (s.it != s.end && row_of.count(s.it->second)) ++s.it;
    };

    using Head = std::pair<double, const std::string*>;
    auto head_greater = [](const std::pair<Head, std::size_t>& a, const std::pair<Head, std::size_t>& b) {
        return hit_less(b.first.first, *b.first.second, a.first.first, *a.first.second);
    };
    std::priority_queue<std::pair<Head, std::size_t>, std::vector<std::pair<Head, std::size_t>>, decltype(head_greater)>
        heads(head_greater);
    const std::size_t kCandidates = SIZE_MAX;
    std::size_t next_scored = 0;
    if (!scored.empty()) heads.push({{scored[0].distance, scored[0].id}, kCandidates});
    for (std::size_t i = 0; i < streams.size(); ++i) {
        skip_candidates(streams[i]);
        if (streams[i].it != streams[i].end) heads.push({{streams[i].distance, &streams[i].it->first}, i});
    }

    std::vector<SearchHit> hits;
    hits.reserve(std::min(k, size()));
    while (hits.size() < k && !heads.empty()) {
        auto [head, source] = heads.top();
        heads.pop();
        hits.push_back({*head.second, head.first});
        if (source == kCandidates) {
            if (++next_scored < scored.size()) {
                heads.push({{scored[next_scored].distance, scored[next_scored].id}, kCandidates});
            }
        } else {
            auto& s = streams[source];
            ++s.it;
            skip_candidates(s);
            if (s.it != s.end) heads.push({{s.distance, &s.it->first}, source});
        }
    }
    return hits;
}

const HashCode& SimilarityIndex::hash_of(std::string_view id) const {
    auto it = slot_of_.find(std::string(id));
    if (it == slot_of_.end()) throw InvalidArgument("index: unknown document '" + std::string(id) + "'");
    return entries_[it->second].hash;
}

const std::string& SimilarityIndex::tag_of(std::string_view id) const {
    auto it = slot_of_.find(std::string(id));
    if (it == slot_of_.end()) throw InvalidArgument("index: unknown document '" + std::string(id) + "'");
    return entries_[it->second].tag;
}

std::vector<std::string> SimilarityIndex::ids() const {
    std::vector<std::string> out;
    out.reserve(size());
    for (const auto& [id, slot] : slot_of_) out.push_back(id);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> SimilarityIndex::posting(std::size_t level, std::string_view concept_id) const {
    std::vector<std::string> out;
    if (level >= levels_) return out;
    auto sit = symbol_of_.find(std::string(concept_id));
    if (sit == symbol_of_.end()) return out;
    auto pit = postings_[level].find(sit->second);
    if (pit == postings_[level].end()) return out;
    for (Slot slot : pit->second) out.push_back(entries_[slot].id);
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t SimilarityIndex::posting_list_count() const {
    std::size_t n = 0;
    for (const auto& level : postings_) n += level.size();
    return n;
}

json SimilarityIndex::to_json() const {
    json docs = json::array();
    for (const auto& id : ids()) {
        const Entry& e = entries_[slot_of_.at(id)];
        docs.push_back({{"id", e.id}, {"tag", e.tag}, {"hash", hash_to_json(e.hash)}});
    }
    json postings = json::array();
    for (std::size_t l = 0; l < levels_; ++l) {
        json level = json::object();
        for (const auto& [symbol, slots] : postings_[l]) level[symbol_names_[symbol]] = posting(l, symbol_names_[symbol]);
        postings.push_back(std::move(level));
    }
    return {{"format", kIndexFormat},
            {"version", kIndexVersion},
            {"levels", levels_},
            {"documents", std::move(docs)},
            {"postings", std::move(postings)}};
}

SimilarityIndex SimilarityIndex::from_json(const json& j) {
    try {
        if (j.at("format") != kIndexFormat) throw FormatError("not an index document");
        if (j.at("version") != kIndexVersion) throw FormatError("unsupported index version");
        SimilarityIndex index(j.at("levels").get<std::size_t>());
        for (const auto& d : j.at("documents")) {
            index.add(d.at("id").get<std::string>(), hash_from_json(d.at("hash")), d.value("tag", std::string()));
        }
        const auto& postings = j.at("postings");
        if (!postings.is_array() || postings.size() != index.levels_) throw FormatError("index: bad posting levels");
        for (std::size_t l = 0; l < index.levels_; ++l) {
            if (postings[l].size() != index.postings_[l].size()) {
                throw FormatError("index: posting lists disagree with stored hashes");
            }
            for (const auto& [concept_id, list] : postings[l].items()) {
                if (list.get<std::vector<std::string>>() != index.posting(l, concept_id)) {
                    throw FormatError("index: posting list for '" + concept_id + "' disagrees with stored hashes");
                }
            }
        }
        return index;
    } catch (const json::exception& e) {
        throw FormatError(std::string("index: ") + e.what());
    } catch (const InvalidArgument& e) {
        throw FormatError(e.what());
    } catch (const DuplicateError& e) {
        throw FormatError(e.what());
    }
}

void SimilarityIndex::save(const std::filesystem::path& path) const { io::write_file(path, to_json().dump() + "\n"); }

SimilarityIndex SimilarityIndex::load(const std::filesystem::path& path) {
    try {
        return from_json(json::parse(io::read_file(path)));
    } catch (const json::parse_error& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

// ---------------------------------------------------------------- clustering

ClusterRule parse_cluster_rule(std::string_view s) {
    if (s == "exact") return ClusterRule::ExactLevel0;
    if (s == "overlap") return ClusterRule::AnyOverlap;
    throw InvalidArgument("unknown cluster rule '" + std::string(s) + "' (expected exact or overlap)");
}

std::string cluster_key(const HashCode& hash) {
    if (hash.space() != HashSpace::Synset) throw InvalidArgument("cluster_key: hash must be in synset space");
    if (hash.num_levels() == 0 || hash.level(0).empty()) return kEmptyClusterKey;
    std::string key;
    for (const auto& c : hash.level(0)) {
        if (!key.empty()) key.push_back('|');
        key += c;
    }
    return key;
}

std::map<std::string, std::string> assign_clusters(const std::map<std::string, HashCode>& hashes, ClusterRule rule) {
    std::map<std::string, std::string> out;
    if (rule == ClusterRule::ExactLevel0) {
        for (const auto& [id, h] : hashes) out.emplace(id, cluster_key(h));
        return out;
    }

    std::vector<const std::string*> ids;
    for (const auto& [id, h] : hashes) ids.push_back(&id);
    std::vector<std::size_t> parent(ids.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::unordered_map<std::string, std::size_t> first_holder;
    std::size_t i = 0;
    for (const auto& [id, h] : hashes) {
        if (h.space() != HashSpace::Synset) throw InvalidArgument("assign_clusters: hash must be in synset space");
        if (h.num_levels() > 0) {
            for (const auto& c : h.level(0)) {
                auto [it, inserted] = first_holder.try_emplace(c, i);
                if (!inserted) {
                    const auto a = find(i), b = find(it->second);
                    // smaller index (= smaller id) becomes the representative
                    if (a != b) parent[std::max(a, b)] = std::min(a, b);
                }
            }
        }
        ++i;
    }
    i = 0;
    for (const auto& [id, h] : hashes) {
        if (h.num_levels() == 0 || h.level(0).empty()) {
            out.emplace(id, kEmptyClusterKey);
        } else {
            out.emplace(id, "cc:" + *ids[find(i)]);
        }
        ++i;
    }
    return out;
}

}  // namespace xlsim
