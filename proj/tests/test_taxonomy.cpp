#include <doctest.h>

#include <queue>
#include <random>
#include <sstream>

#include "test_util.hpp"
#include "xlsim/error.hpp"
#include "xlsim/taxonomy.hpp"

using namespace xlsim;

namespace {

Taxonomy parse_tax(const std::string& s) {
    std::istringstream in(s);
    return Taxonomy::parse(in);
}

// Roots reachable from `label` by breadth-first search over parent links.
std::set<std::string> bfs_roots(const std::map<std::string, std::set<std::string>>& broader, const std::string& label) {
    std::set<std::string> roots, seen{label};
    std::queue<std::string> todo;
    todo.push(label);
    while (!todo.empty()) {
        const auto cur = todo.front();
        todo.pop();
        const auto& ps = broader.at(cur);
        if (ps.empty()) roots.insert(cur);
        for (const auto& p : ps)
            if (seen.insert(p).second) todo.push(p);
    }
    return roots;
}

}  // namespace

TEST_CASE("chain reduces to its top") {
    const auto t = parse_tax("a\tb\nb\tc\n");
    CHECK(t.size() == 3);
    CHECK(t.roots() == std::set<std::string>{"c"});
    CHECK(reduce_to_roots(t, {"a"}) == std::set<std::string>{"c"});
    CHECK(reduce_to_roots(t, {"c"}) == std::set<std::string>{"c"});
    CHECK(reduce_to_roots(t, {}).empty());
}

TEST_CASE("empty taxonomy") {
    const auto t = parse_tax("");
    CHECK(t.size() == 0);
    CHECK(t.roots().empty());
}

TEST_CASE("cycles are rejected with the cycle named") {
    try {
        parse_tax("a\tb\nb\ta\n");
        FAIL("expected a cycle error");
    } catch (const InvalidArgument& e) {
        const std::string msg = e.what();
        CHECK(msg.find("cycle") != std::string::npos);
        CHECK(msg.find("a -> b -> a") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_tax("x\tx\n"), ParseError);
    CHECK_THROWS_AS(Taxonomy(std::map<std::string, std::set<std::string>>{{"a", {"missing"}}}), InvalidArgument);
}

TEST_CASE("single-column lines declare roots, comments are skipped") {
    const auto t = parse_tax("# thesaurus\nlonely\nchild\tparent\n");
    CHECK(t.roots() == std::set<std::string>{"lonely", "parent"});
    CHECK(t.parents("child") == std::set<std::string>{"parent"});
    CHECK_THROWS_AS(reduce_to_roots(t, {"ghost"}), InvalidArgument);
}

TEST_CASE("multiple parents reduce to the union of roots") {
    const auto t = parse_tax("x\tp\nx\tq\np\tr1\nq\tr2\n");
    CHECK(reduce_to_roots(t, {"x"}) == std::set<std::string>{"r1", "r2"});
}

TEST_CASE("SKOS JSON subset") {
    xlsim::testing::TempDir dir;
    auto p = xlsim::testing::write_text(
        dir / "t.json", R"({"concepts":[{"id":"a","broader":["b"]},{"id":"b","broader":[]},{"id":"c"}]})");
    const auto t = Taxonomy::load_skos_json(p);
    CHECK(t.roots() == std::set<std::string>{"b", "c"});
    auto q = xlsim::testing::write_text(dir / "u.json", R"([{"id":"a","broader":["b"]},{"id":"b"}])");
    CHECK(Taxonomy::load_skos_json(q).roots() == std::set<std::string>{"b"});
}

TEST_CASE("root reduction matches a reachability oracle on random DAGs") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 5 + rng() % 60;
        std::map<std::string, std::set<std::string>> broader;
        std::vector<std::string> names;
        for (std::size_t i = 0; i < n; ++i) names.push_back("L" + std::to_string(i));
        for (std::size_t i = 0; i < n; ++i) {
            broader[names[i]];
            // parents only among higher indices keeps the graph acyclic
            for (std::size_t j = i + 1; j < n; ++j)
                if (rng() % 10 == 0) broader[names[i]].insert(names[j]);
        }
        const Taxonomy t(broader);
        for (const auto& name : names) {
            const auto expected = bfs_roots(broader, name);
            CHECK(t.roots_of(name) == expected);
            const auto r = reduce_to_roots(t, {name});
            CHECK(!r.empty());
            for (const auto& x : r) CHECK(t.roots().count(x) == 1);
            CHECK(reduce_to_roots(t, r) == r);
        }
    }
}
