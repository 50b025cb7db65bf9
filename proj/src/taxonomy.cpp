#include "xlsim/taxonomy.hpp"

#include <istream>

#include <json.hpp>

#include "xlsim/error.hpp"
#include "xlsim/io.hpp"
#include "xlsim/text.hpp"

namespace xlsim {

using json = nlohmann::json;

Taxonomy::Taxonomy(std::map<std::string, std::set<std::string>> broader) : broader_(std::move(broader)) {
    for (const auto& [label, parents] : broader_) {
        for (const auto& p : parents) {
            if (!broader_.count(p)) throw InvalidArgument("taxonomy: parent '" + p + "' of '" + label + "' is unknown");
        }
    }

    // iterative DFS with colors; a grey hit closes a cycle
    enum Color : char { White, Grey, Black };
    std::map<std::string_view, Color> color;
    for (const auto& [label, _] : broader_) color[label] = White;
    for (const auto& [start, _] : broader_) {
        if (color[start] != White) continue;
        struct Frame {
            const std::string* label;
            std::set<std::string>::const_iterator next;
        };
        std::vector<Frame> stack{{&start, broader_.at(start).begin()}};
        color[start] = Grey;
        while (!stack.empty()) {
            auto& top = stack.back();
            const auto& parents = broader_.at(*top.label);
            if (top.next == parents.end()) {
                color[*top.label] = Black;
                stack.pop_back();
                continue;
            }
            const std::string& p = *top.next++;
            if (color[p] == Grey) {
                std::string cycle;
                bool on = false;
                for (const auto& f : stack) {
                    if (*f.label == p) on = true;
                    if (on) cycle += *f.label + " -> ";
                }
                throw InvalidArgument("taxonomy: cycle " + cycle + p);
            }
            if (color[p] == White) {
                color[p] = Grey;
                stack.push_back({&broader_.find(p)->first, broader_.at(p).begin()});
            }
        }
    }

    for (const auto& [label, parents] : broader_) {
        if (parents.empty()) roots_.insert(label);
    }

    // roots per label, memoized bottom-up along a post-order
    for (const auto& [label, _] : broader_) {
        if (root_cache_.count(label)) continue;
        std::vector<std::pair<const std::string*, bool>> work{{&label, false}};
        while (!work.empty()) {
            auto [l, expanded] = work.back();
            work.pop_back();
            if (root_cache_.count(*l)) continue;
            const auto& parents = broader_.at(*l);
            if (parents.empty()) {
                root_cache_[*l] = {*l};
            } else if (expanded) {
                std::set<std::string> acc;
                for (const auto& p : parents) {
                    const auto& r = root_cache_.at(p);
                    acc.insert(r.begin(), r.end());
                }
                root_cache_[*l] = std::move(acc);
            } else {
                work.push_back({l, true});
                for (const auto& p : parents) {
                    if (!root_cache_.count(p)) work.push_back({&broader_.find(p)->first, false});
                }
            }
        }
    }
}

Taxonomy Taxonomy::parse(std::istream& in, const std::string& source) {
    std::map<std::string, std::set<std::string>> broader;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (text::trim(line).empty() || line[0] == '#') continue;
        auto cols = text::split(line, '\t');
        if (cols.size() > 2) throw ParseError(source, lineno, "expected child<TAB>parent");
        const std::string child(text::trim(cols[0]));
        if (child.empty()) throw ParseError(source, lineno, "empty label");
        broader[child];
        if (cols.size() == 2) {
            const std::string parent(text::trim(cols[1]));
            if (parent.empty()) throw ParseError(source, lineno, "empty parent label");
            if (parent == child) throw ParseError(source, lineno, "label '" + child + "' is its own parent");
            broader[child].insert(parent);
            broader[parent];
        }
    }
    return Taxonomy(std::move(broader));
}

Taxonomy Taxonomy::load(const std::filesystem::path& path) {
    auto in = io::open_input(path);
    return parse(in, path.string());
}

Taxonomy Taxonomy::load_skos_json(const std::filesystem::path& path) {
    std::map<std::string, std::set<std::string>> broader;
    try {
        auto j = json::parse(io::read_file(path));
        const json& concepts = j.is_object() ? j.at("concepts") : j;
        for (const auto& c : concepts) {
            const auto id = c.at("id").get<std::string>();
            if (id.empty()) throw FormatError(path.string() + ": empty concept id");
            auto& parents = broader[id];
            if (c.contains("broader")) {
                for (const auto& p : c["broader"]) {
                    parents.insert(p.get<std::string>());
                    broader[p.get<std::string>()];
                }
            }
        }
    } catch (const json::exception& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
    return Taxonomy(std::move(broader));
}

const std::set<std::string>& Taxonomy::parents(std::string_view label) const {
    auto it = broader_.find(std::string(label));
    if (it == broader_.end()) throw InvalidArgument("taxonomy: unknown label '" + std::string(label) + "'");
    return it->second;
}

std::set<std::string> Taxonomy::labels() const {
    std::set<std::string> out;
    for (const auto& [label, _] : broader_) out.insert(label);
    return out;
}

const std::set<std::string>& Taxonomy::roots_of(std::string_view label) const {
    auto it = root_cache_.find(std::string(label));
    if (it == root_cache_.end()) throw InvalidArgument("taxonomy: unknown label '" + std::string(label) + "'");
    return it->second;
}

std::set<std::string> reduce_to_roots(const Taxonomy& taxonomy, const std::set<std::string>& labels) {
    std::set<std::string> out;
    for (const auto& label : labels) {
        const auto& r = taxonomy.roots_of(label);
        out.insert(r.begin(), r.end());
    }
    return out;
}

}  // namespace xlsim
