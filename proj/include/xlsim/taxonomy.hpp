#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace xlsim {

/// Category thesaurus restricted to its broader (child -> parent) relation.
/// The relation is acyclic; labels without parents are roots. Multiple parents
/// are accepted and reduce to the union of their roots.
class Taxonomy {
public:
    Taxonomy() = default;

    /// `broader[label]` lists the parents of label; every parent must also be a key.
    /// Throws InvalidArgument naming one cycle when the relation is cyclic.
    explicit Taxonomy(std::map<std::string, std::set<std::string>> broader);

    /// TSV of `child<TAB>parent` lines. A line holding a single label declares it
    /// without a parent. '#' starts a comment line.
    static Taxonomy load(const std::filesystem::path& path);
    static Taxonomy parse(std::istream& in, const std::string& source = "<stream>");

    /// SKOS subset as JSON: [{"id": "...", "broader": ["...", ...]}, ...], or an
    /// object with that array under "concepts".
    static Taxonomy load_skos_json(const std::filesystem::path& path);

    std::size_t size() const { return broader_.size(); }
    bool contains(std::string_view label) const { return broader_.count(std::string(label)) != 0; }
    const std::set<std::string>& parents(std::string_view label) const;
    std::set<std::string> labels() const;
    const std::set<std::string>& roots() const { return roots_; }

    /// Roots reachable from `label` through broader links (a root maps to itself).
    const std::set<std::string>& roots_of(std::string_view label) const;

private:
    std::map<std::string, std::set<std::string>> broader_;
    std::set<std::string> roots_;
    std::map<std::string, std::set<std::string>> root_cache_;
};

/// Union of the roots of every label. Unknown labels raise InvalidArgument.
std::set<std::string> reduce_to_roots(const Taxonomy& taxonomy, const std::set<std::string>& labels);

}  // namespace xlsim
