#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "xlsim/hashing.hpp"

namespace xlsim {

struct SearchHit {
    std::string id;
    double distance = 0.0;

    bool operator==(const SearchHit&) const = default;
};

/// Exact ranked search over synset-space hash codes.
///
/// Each level keeps an inverted list from concept to documents holding that
/// concept at that level. A query scores every document reached through the
/// probe's concepts with the level-wise Jaccard distance. All other documents
/// share nothing with the probe, so their distance only depends on which of
/// their levels are empty; they are kept in buckets keyed by that pattern and
/// merged in without scoring. Rankings are exact: distance ascending, then id.
///
/// query() is const and may run concurrently; add() and remove() need
/// exclusive access. Both mutators validate before touching any state.
class SimilarityIndex {
public:
    explicit SimilarityIndex(std::size_t levels = kDefaultLevels);

    std::size_t levels() const { return levels_; }
    std::size_t size() const { return slot_of_.size(); }
    bool empty() const { return slot_of_.empty(); }
    bool contains(std::string_view id) const { return slot_of_.count(std::string(id)) != 0; }

    /// `tag` is free-form per-document metadata (the CLI stores the language).
    void add(const std::string& id, const HashCode& hash, const std::string& tag = {});
    bool remove(std::string_view id);

    std::vector<SearchHit> query(const HashCode& probe, std::size_t k) const;

    const HashCode& hash_of(std::string_view id) const;
    const std::string& tag_of(std::string_view id) const;
    /// Ids in ascending order.
    std::vector<std::string> ids() const;
    /// Document ids listed under `concept_id` at `level`, ascending.
    std::vector<std::string> posting(std::size_t level, std::string_view concept_id) const;
    /// Number of (level, concept) posting lists.
    std::size_t posting_list_count() const;

    /// Canonical form: documents and postings sorted, so equal contents give equal bytes.
    nlohmann::json to_json() const;
    /// Rebuilds the index from the stored hashes and rejects files whose
    /// posting lists disagree with them.
    static SimilarityIndex from_json(const nlohmann::json& j);

    void save(const std::filesystem::path& path) const;
    static SimilarityIndex load(const std::filesystem::path& path);

private:
    using Slot = std::uint32_t;
    using Symbol = std::uint32_t;

    struct Entry {
        std::string id;
        std::string tag;
        HashCode hash;
        std::vector<std::vector<Symbol>> symbols;
        std::uint64_t mask = 0;  // bit l set when level l is nonempty
        bool live = false;
    };

    void check_hash(const HashCode& hash, const char* what) const;

    std::size_t levels_;
    std::vector<Entry> entries_;
    std::vector<Slot> free_slots_;
    std::unordered_map<std::string, Slot> slot_of_;
    std::unordered_map<std::string, Symbol> symbol_of_;
    std::vector<std::string> symbol_names_;
    std::vector<std::unordered_map<Symbol, std::vector<Slot>>> postings_;
    std::map<std::uint64_t, std::map<std::string, Slot>> buckets_;
};

enum class ClusterRule {
    ExactLevel0,  // clusters are documents with identical level-0 sets
    AnyOverlap,   // connected components of "level-0 sets intersect"
};

ClusterRule parse_cluster_rule(std::string_view s);

/// Sorted level-0 concepts joined by '|'; "∅" for an empty level 0.
std::string cluster_key(const HashCode& hash);

/// Cluster key per document id under `rule`.
std::map<std::string, std::string> assign_clusters(const std::map<std::string, HashCode>& hashes,
                                                   ClusterRule rule = ClusterRule::ExactLevel0);

}  // namespace xlsim
