#include "xlsim/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "xlsim/error.hpp"
#include "xlsim/log.hpp"

namespace xlsim {

using json = nlohmann::json;

MetricSummary summarize(std::span<const double> values) {
    MetricSummary s;
    if (values.empty()) return s;
    s.min = *std::min_element(values.begin(), values.end());
    s.max = *std::max_element(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    s.mean = std::clamp(s.mean, s.min, s.max);
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.dev = std::sqrt(sq / n);
    return s;
}

const MetricSummary& EvalReport::row(std::string_view metric) const {
    for (const auto& [name, summary] : rows) {
        if (name == metric) return summary;
    }
    throw InvalidArgument("report has no metric '" + std::string(metric) + "'");
}

std::string EvalReport::to_tsv() const {
    std::ostringstream out;
    out << "metric\tmin\tmax\tmean\tdev\n" << std::fixed << std::setprecision(6);
    for (const auto& [name, s] : rows) {
        out << name << '\t' << s.min << '\t' << s.max << '\t' << s.mean << '\t' << s.dev << '\n';
    }
    return out.str();
}

json EvalReport::to_json() const {
    json metrics = json::array();
    for (const auto& [name, s] : rows) {
        metrics.push_back({{"metric", name}, {"min", s.min}, {"max", s.max}, {"mean", s.mean}, {"dev", s.dev}});
    }
    return {{"count", count}, {"metrics", std::move(metrics)}};
}

BCubedResult bcubed(const std::map<std::string, std::string>& system, const std::map<std::string, std::string>& gold) {
    if (system.size() != gold.size()) throw InvalidArgument("bcubed: system and gold cover different documents");
    std::unordered_map<std::string, std::size_t> sys_size, gold_size;
    std::map<std::pair<std::string, std::string>, std::size_t> both;
    auto git = gold.begin();
    for (const auto& [id, key] : system) {
        if (git->first != id) throw InvalidArgument("bcubed: document '" + id + "' missing from gold");
        ++sys_size[key];
        ++gold_size[git->second];
        ++both[{key, git->second}];
        ++git;
    }

    BCubedResult result;
    std::vector<double> p, r, f;
    git = gold.begin();
    for (const auto& [id, key] : system) {
        const auto common = static_cast<double>(both.at({key, git->second}));
        BCubedScore s{id, common / static_cast<double>(sys_size.at(key)),
                      common / static_cast<double>(gold_size.at(git->second)), 0.0};
        if (s.precision + s.recall > 0.0) s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
        p.push_back(s.precision);
        r.push_back(s.recall);
        f.push_back(s.f1);
        result.per_doc.push_back(std::move(s));
        ++git;
    }
    result.report.count = result.per_doc.size();
    result.report.rows = {{"prec", summarize(p)}, {"rec", summarize(r)}, {"f1", summarize(f)}};
    return result;
}

std::vector<double> precision_at_k_per_query(std::span<const std::vector<std::string>> rankings,
                                             std::span<const std::set<std::string>> relevant, std::size_t k) {
    if (k < 1) throw InvalidArgument("precision_at_k: k must be >= 1");
    if (rankings.size() != relevant.size()) throw InvalidArgument("precision_at_k: one relevant set per ranking");
    std::vector<double> out;
    out.reserve(rankings.size());
    for (std::size_t q = 0; q < rankings.size(); ++q) {
        const std::size_t n = std::min(k, rankings[q].size());
        std::size_t hits = 0;
        for (std::size_t i = 0; i < n; ++i) hits += relevant[q].count(rankings[q][i]);
        out.push_back(static_cast<double>(hits) / static_cast<double>(k));
    }
    return out;
}

EvalReport precision_at_k(std::span<const std::vector<std::string>> rankings,
                          std::span<const std::set<std::string>> relevant, std::size_t k) {
    const auto values = precision_at_k_per_query(rankings, relevant, k);
    EvalReport report;
    report.count = values.size();
    report.rows = {{"p@" + std::to_string(k), summarize(values)}};
    return report;
}

GoldRule parse_gold_rule(std::string_view s) {
    if (s == "exact") return GoldRule::ExactLabelSet;
    if (s == "overlap") return GoldRule::AnyLabel;
    throw InvalidArgument("unknown gold rule '" + std::string(s) + "' (expected exact or overlap)");
}

std::string label_set_key(const std::set<std::string>& labels) {
    std::string key;
    for (const auto& l : labels) {
        if (!key.empty()) key.push_back('|');
        key += l;
    }
    return key;
}

GroundTruth build_ground_truth(const Corpus& docs, GoldRule rule) {
    GroundTruth truth;
    std::map<std::string, std::vector<const Document*>> by_label;
    std::vector<const Document*> labeled;
    for (const auto& d : docs) {
        if (d.labels.empty()) {
            truth.excluded.push_back(d.id);
            continue;
        }
        labeled.push_back(&d);
        for (const auto& l : d.labels) by_label[l].push_back(&d);
    }
    if (!truth.excluded.empty()) {
        warn("ground truth: " + std::to_string(truth.excluded.size()) + " document(s) without labels excluded");
    }

    for (const Document* d : labeled) {
        auto& rel = truth.relevant[d->id];
        for (const auto& l : d->labels) {
            for (const Document* other : by_label[l]) {
                if (other->id != d->id) rel.insert(other->id);
            }
        }
    }

    if (rule == GoldRule::ExactLabelSet) {
        for (const Document* d : labeled) truth.gold_key[d->id] = label_set_key(d->labels);
    } else {
        // components of the shares-a-label graph, named by their smallest id
        std::map<std::string, std::string> comp;
        for (const Document* d : labeled) {
            if (comp.count(d->id)) continue;
            std::vector<std::string> members{d->id};
            std::set<std::string> seen{d->id};
            for (std::size_t i = 0; i < members.size(); ++i) {
                for (const auto& o : truth.relevant[members[i]]) {
                    if (seen.insert(o).second) members.push_back(o);
                }
            }
            const std::string name = "cc:" + *seen.begin();
            for (const auto& m : members) comp[m] = name;
        }
        truth.gold_key = std::move(comp);
    }
    return truth;
}

}  // namespace xlsim
