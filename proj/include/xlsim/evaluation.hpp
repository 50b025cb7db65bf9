#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "xlsim/corpus.hpp"

namespace xlsim {

/// min/max/mean/population standard deviation of one metric.
struct MetricSummary {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double dev = 0.0;
};

MetricSummary summarize(std::span<const double> values);

/// Rows of metric summaries, printed in insertion order.
struct EvalReport {
    std::size_t count = 0;  // items (documents or queries) summarized
    std::vector<std::pair<std::string, MetricSummary>> rows;

    const MetricSummary& row(std::string_view metric) const;

    /// `metric<TAB>min<TAB>max<TAB>mean<TAB>dev` with a header line.
    std::string to_tsv() const;
    nlohmann::json to_json() const;
};

struct BCubedScore {
    std::string id;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct BCubedResult {
    std::vector<BCubedScore> per_doc;  // ascending id
    EvalReport report;                  // rows "prec", "rec", "f1"
};

/// B-Cubed precision/recall/F1 of a clustering (doc id -> cluster key) against
/// gold clusters; both maps must cover the same ids.
BCubedResult bcubed(const std::map<std::string, std::string>& system, const std::map<std::string, std::string>& gold);

/// Fraction of the first k entries of each ranking found in the matching
/// relevant set; rankings shorter than k count the missing slots as misses.
std::vector<double> precision_at_k_per_query(std::span<const std::vector<std::string>> rankings,
                                             std::span<const std::set<std::string>> relevant, std::size_t k);

/// Single-row report "p@k".
EvalReport precision_at_k(std::span<const std::vector<std::string>> rankings,
                          std::span<const std::set<std::string>> relevant, std::size_t k);

enum class GoldRule {
    ExactLabelSet,  // gold cluster = identical label set
    AnyLabel,       // gold cluster = connected components of "shares a label"
};

GoldRule parse_gold_rule(std::string_view s);

struct GroundTruth {
    /// IR relevance: documents sharing at least one label, excluding the document itself.
    std::map<std::string, std::set<std::string>> relevant;
    /// Classification gold cluster key per document.
    std::map<std::string, std::string> gold_key;
    /// Documents without labels, left out of both.
    std::vector<std::string> excluded;
};

/// Canonical label-set key: sorted labels joined by '|'.
std::string label_set_key(const std::set<std::string>& labels);

GroundTruth build_ground_truth(const Corpus& docs, GoldRule rule = GoldRule::ExactLabelSet);

}  // namespace xlsim
