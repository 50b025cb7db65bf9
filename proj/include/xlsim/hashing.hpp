#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "xlsim/lexicon.hpp"
#include "xlsim/topics.hpp"

namespace xlsim {

/// Element space of a hash code. Topic-space elements are decimal topic ids;
/// synset-space elements are concept identifiers (synsets, or category labels
/// for hashes derived from a LabeledLDA model).
enum class HashSpace { Topic, Synset };

std::string_view to_string(HashSpace space);
HashSpace parse_hash_space(std::string_view s);

/// Hierarchy of L element sets, level 0 holding the most relevant concepts.
/// Every level is kept sorted and deduplicated, so equal hashes compare equal
/// and serialize to identical bytes.
class HashCode {
public:
    using Level = std::vector<std::string>;

    HashCode() = default;
    HashCode(HashSpace space, std::vector<Level> levels);

    HashSpace space() const { return space_; }
    std::size_t num_levels() const { return levels_.size(); }
    const std::vector<Level>& levels() const { return levels_; }
    const Level& level(std::size_t l) const { return levels_.at(l); }
    bool all_empty() const;

    bool operator==(const HashCode&) const = default;

private:
    HashSpace space_ = HashSpace::Synset;
    std::vector<Level> levels_;
};

inline constexpr std::size_t kDefaultLevels = 3;
inline constexpr std::size_t kDefaultCap = 12;

/// Weight gaps are compared at this resolution; smaller gaps count as ties and
/// never separate levels.
inline constexpr double kGapResolution = 1e-12;

/// Groups the top-`cap` topics of `theta` into `levels` relevance levels,
/// cutting the descending weight sequence at its levels-1 largest gaps.
HashCode build_topic_hash(const TopicDistribution& theta, std::size_t levels = kDefaultLevels,
                          std::size_t cap = kDefaultCap);

/// Topic ids of each level of a topic-space hash, ascending.
std::vector<std::vector<TopicId>> topic_levels(const HashCode& topic_hash);

/// Replaces each topic by its annotation (annotations[t] describes topic t).
/// Levels may overlap afterwards.
HashCode to_synset_hash(const HashCode& topic_hash, std::span<const TopicAnnotation> annotations);

/// Same as to_synset_hash with each topic standing for one label (LabeledLDA).
HashCode to_label_hash(const HashCode& topic_hash, const std::vector<std::string>& topic_labels);

/// Sum over levels of the Jaccard distance 1 - |A∩B|/|A∪B|; a level empty on
/// both sides contributes 0. Result lies in [0, L].
double distance(const HashCode& a, const HashCode& b);

nlohmann::json hash_to_json(const HashCode& hash);
HashCode hash_from_json(const nlohmann::json& j);

}  // namespace xlsim
