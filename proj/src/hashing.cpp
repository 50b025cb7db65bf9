#include "xlsim/hashing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "xlsim/error.hpp"

namespace xlsim {

using json = nlohmann::json;

std::string_view to_string(HashSpace space) { return space == HashSpace::Topic ? "topic" : "synset"; }

HashSpace parse_hash_space(std::string_view s) {
    if (s == "topic") return HashSpace::Topic;
    if (s == "synset") return HashSpace::Synset;
    throw InvalidArgument("unknown hash space '" + std::string(s) + "'");
}

HashCode::HashCode(HashSpace space, std::vector<Level> levels) : space_(space), levels_(std::move(levels)) {
    for (auto& level : levels_) {
        std::sort(level.begin(), level.end());
        level.erase(std::unique(level.begin(), level.end()), level.end());
    }
}

bool HashCode::all_empty() const {
    return std::all_of(levels_.begin(), levels_.end(), [](const Level& l) { return l.empty(); });
}

HashCode build_topic_hash(const TopicDistribution& theta, std::size_t levels, std::size_t cap) {
    if (levels < 1) throw InvalidArgument("build_topic_hash: need at least one level");
    if (cap < levels) throw InvalidArgument("build_topic_hash: cap must be >= levels");
    const auto& w = theta.weights;
    double sum = 0.0;
    for (double x : w) {
        if (!(x >= 0.0) || !std::isfinite(x)) throw InvalidArgument("build_topic_hash: weights must be finite and >= 0");
        sum += x;
    }
    if (!w.empty() && std::abs(sum - 1.0) > 1e-6) throw InvalidArgument("build_topic_hash: weights must sum to 1");

    std::vector<TopicId> order(w.size());
    std::iota(order.begin(), order.end(), TopicId{0});
    std::stable_sort(order.begin(), order.end(), [&](TopicId a, TopicId b) { return w[a] > w[b]; });
    const std::size_t m = std::min(cap, order.size());

    // gap i sits between ranks i and i+1
    std::vector<std::pair<long long, std::size_t>> gaps;
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const auto q = std::llround((w[order[i]] - w[order[i + 1]]) / kGapResolution);
        if (q > 0) gaps.emplace_back(q, i);
    }
    std::sort(gaps.begin(), gaps.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    if (gaps.size() > levels - 1) gaps.resize(levels - 1);
    std::vector<std::size_t> cuts;
    for (const auto& g : gaps) cuts.push_back(g.second);
    std::sort(cuts.begin(), cuts.end());

    std::vector<HashCode::Level> out(levels);
    std::size_t level = 0;
    std::size_t next_cut = 0;
    for (std::size_t i = 0; i < m; ++i) {
        out[level].push_back(std::to_string(order[i]));
        if (next_cut < cuts.size() && cuts[next_cut] == i) {
            ++level;
            ++next_cut;
        }
    }
    return HashCode(HashSpace::Topic, std::move(out));
}

std::vector<std::vector<TopicId>> topic_levels(const HashCode& topic_hash) {
    if (topic_hash.space() != HashSpace::Topic) throw InvalidArgument("topic_levels: hash is not in topic space");
    std::vector<std::vector<TopicId>> out;
    for (const auto& level : topic_hash.levels()) {
        std::vector<TopicId> ids;
        for (const auto& e : level) {
            std::size_t used = 0;
            unsigned long v = 0;
            try {
                v = std::stoul(e, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != e.size() || e.empty()) throw InvalidArgument("topic_levels: '" + e + "' is not a topic id");
            ids.push_back(static_cast<TopicId>(v));
        }
        std::sort(ids.begin(), ids.end());
        out.push_back(std::move(ids));
    }
    return out;
}

namespace {

template <class Lookup>
HashCode map_topics(const HashCode& topic_hash, Lookup&& concepts_of) {
    std::vector<HashCode::Level> out;
    for (const auto& ids : topic_levels(topic_hash)) {
        HashCode::Level level;
        for (TopicId t : ids) concepts_of(t, level);
        out.push_back(std::move(level));
    }
    return HashCode(HashSpace::Synset, std::move(out));
}

}  // namespace

HashCode to_synset_hash(const HashCode& topic_hash, std::span<const TopicAnnotation> annotations) {
    return map_topics(topic_hash, [&](TopicId t, HashCode::Level& level) {
        if (t >= annotations.size()) {
            throw InvalidArgument("to_synset_hash: no annotation for topic " + std::to_string(t));
        }
        const auto& s = annotations[t].synsets;
        level.insert(level.end(), s.begin(), s.end());
    });
}

HashCode to_label_hash(const HashCode& topic_hash, const std::vector<std::string>& topic_labels) {
    return map_topics(topic_hash, [&](TopicId t, HashCode::Level& level) {
        if (t >= topic_labels.size()) throw InvalidArgument("to_label_hash: no label for topic " + std::to_string(t));
        level.push_back(topic_labels[t]);
    });
}

double distance(const HashCode& a, const HashCode& b) {
    if (a.num_levels() != b.num_levels()) throw InvalidArgument("distance: hashes have different level counts");
    if (a.space() != b.space()) throw InvalidArgument("distance: hashes live in different spaces");
    double total = 0.0;
    for (std::size_t l = 0; l < a.num_levels(); ++l) {
        const auto& x = a.level(l);
        const auto& y = b.level(l);
        std::size_t common = 0;
        auto i = x.begin();
        auto j = y.begin();
        while (i != x.end() && j != y.end()) {
            if (*i < *j) {
                ++i;
            } else if (*j < *i) {
                ++j;
            } else {
                ++common;
                ++i;
                ++j;
            }
        }
        const std::size_t uni = x.size() + y.size() - common;
        if (uni == 0) continue;
        total += 1.0 - static_cast<double>(common) / static_cast<double>(uni);
    }
    return total;
}

json hash_to_json(const HashCode& hash) {
    return {{"space", std::string(to_string(hash.space()))}, {"levels", hash.levels()}};
}

HashCode hash_from_json(const json& j) {
    try {
        return HashCode(parse_hash_space(j.at("space").get<std::string>()),
                        j.at("levels").get<std::vector<HashCode::Level>>());
    } catch (const json::exception& e) {
        throw FormatError(std::string("hash: ") + e.what());
    }
}

}  // namespace xlsim
