#include <doctest.h>

#include <sstream>

#include "semre/matcher.hpp"
#include "semre/triangle.hpp"
#include "support.hpp"

using namespace semre;

namespace {

UndirectedGraph graph(std::uint32_t n, std::initializer_list<std::pair<std::uint32_t, std::uint32_t>> edges) {
    UndirectedGraph g;
    g.n = n;
    for (auto [a, b] : edges) g.add_edge(a, b);
    return g;
}

bool reduce(const TriangleInstance& t) { return match_semre(t.pattern, t.input, t.oracle); }

UndirectedGraph random_graph(testsupport::Rng& rng, std::uint32_t n, double p) {
    UndirectedGraph g;
    g.n = n;
    for (std::uint32_t i = 1; i <= n; ++i)
        for (std::uint32_t j = i + 1; j <= n; ++j)
            if (testsupport::coin(rng, p)) g.add_edge(i, j);
    return g;
}

} // namespace

TEST_CASE("graph basics") {
    auto g = graph(3, {{2, 1}});
    CHECK(g.has_edge(1, 2));
    CHECK(g.has_edge(2, 1));
    CHECK_FALSE(g.has_edge(1, 3));
    CHECK(g.edges.count({1, 2}) == 1);
    CHECK_THROWS_AS(g.add_edge(2, 2), std::invalid_argument);
    CHECK_THROWS_AS(g.add_edge(0, 1), std::invalid_argument);
    CHECK_THROWS_AS(g.add_edge(1, 4), std::invalid_argument);
}

TEST_CASE("unary symbols are distinct and avoid the separator") {
    std::set<char> seen;
    for (std::uint32_t v = 1; v <= kMaxUnaryVertices; ++v) {
        char c = unary_symbol(v);
        CHECK(c != '#');
        CHECK(c >= ' ');
        CHECK(c <= '~');
        seen.insert(c);
    }
    CHECK(seen.size() == kMaxUnaryVertices);
    CHECK(unary_symbol(1) == '1');
}

TEST_CASE("unary encoding") {
    auto k3 = graph(3, {{1, 2}, {2, 3}, {1, 3}});
    auto t = encode_instance(k3);
    CHECK(t.input == "#11#22#33");
    CHECK(reduce(t));
    CHECK_FALSE(reduce(encode_instance(graph(3, {{1, 2}, {2, 3}}))));
    CHECK(has_nested_queries(t.pattern));
    REQUIRE(queries_of(t.pattern).size() == 1);
    CHECK(queries_of(t.pattern)[0].name == "E");
    CHECK(refine_count(t.pattern) == 3);
}

TEST_CASE("edge oracle looks at the ends of its window") {
    auto t = encode_instance(graph(3, {{1, 3}}));
    CHECK(t.oracle->evaluate(Query{"E"}, "1#22#3"));
    CHECK(t.oracle->evaluate(Query{"E"}, "3#1"));
    CHECK_FALSE(t.oracle->evaluate(Query{"E"}, "1#2"));
    CHECK_FALSE(t.oracle->evaluate(Query{"E"}, "1"));
    CHECK_FALSE(t.oracle->evaluate(Query{"E"}, ""));
}

TEST_CASE("binary encoding") {
    CHECK(binary_width(1) == 1);
    CHECK(binary_width(2) == 1);
    CHECK(binary_width(3) == 2);
    CHECK(binary_width(4) == 2);
    CHECK(binary_width(5) == 3);
    CHECK(binary_width(12) == 4);
    auto t2 = encode_instance_binary(graph(2, {{1, 2}}));
    CHECK(t2.input == "#00#11");
    CHECK_FALSE(reduce(t2));
    auto k3 = encode_instance_binary(graph(3, {{1, 2}, {2, 3}, {1, 3}}));
    CHECK(k3.input == "#0000#0101#1010");
    CHECK(reduce(k3));
    CHECK(has_nested_queries(k3.pattern));
}

TEST_CASE("no vertices is an error") {
    UndirectedGraph empty;
    CHECK_THROWS_AS(encode_instance(empty), std::invalid_argument);
    CHECK_THROWS_AS(encode_instance_binary(empty), std::invalid_argument);
    UndirectedGraph big;
    big.n = kMaxUnaryVertices + 1;
    CHECK_THROWS_AS(encode_instance(big), std::invalid_argument);
    CHECK_NOTHROW(encode_instance_binary(big));
}

TEST_CASE("brute force") {
    CHECK(brute_force_triangle(graph(3, {{1, 2}, {2, 3}, {1, 3}})));
    CHECK_FALSE(brute_force_triangle(graph(5, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 1}})));
    CHECK_FALSE(brute_force_triangle(graph(7, {{1, 2}, {1, 3}, {3, 4}, {3, 5}, {6, 7}})));
    CHECK_FALSE(brute_force_triangle(graph(1, {})));
}

TEST_CASE("C5 and forests through the reduction") {
    auto c5 = graph(5, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 1}});
    CHECK_FALSE(reduce(encode_instance(c5)));
    CHECK_FALSE(reduce(encode_instance_binary(c5)));
    auto c5chord = c5;
    c5chord.add_edge(1, 3);
    CHECK(reduce(encode_instance(c5chord)));
    CHECK(reduce(encode_instance_binary(c5chord)));
    auto forest = graph(7, {{1, 2}, {1, 3}, {3, 4}, {3, 5}, {6, 7}});
    CHECK_FALSE(reduce(encode_instance(forest)));
}

TEST_CASE("binary and unary encodings agree on random graphs") {
    testsupport::Rng rng(61);
    for (int t = 0; t < 200; ++t) {
        auto n = static_cast<std::uint32_t>(testsupport::uniform(rng, 1, 10));
        auto g = random_graph(rng, n, 0.3);
        bool expected = brute_force_triangle(g);
        INFO("n=" << n << " edges=" << g.edges.size());
        CHECK(reduce(encode_instance(g)) == expected);
        CHECK(reduce(encode_instance_binary(g)) == expected);
    }
}

TEST_CASE("edge lists") {
    std::istringstream in("# a triangle\n1 2\n\n2 3\n3 1\n");
    auto g = parse_edge_list(in);
    CHECK(g.n == 3);
    CHECK(g.edges.size() == 3);

    std::istringstream declared("n 6\n1 2\n");
    auto h = parse_edge_list(declared);
    CHECK(h.n == 6);
    CHECK(h.edges.size() == 1);

    for (const char* bad : {"1\n", "1 2 3\n", "a b\n", "2 2\n", "0 1\n", "n 2\n1 3\n", "n 0\n", "1x 2\n"}) {
        INFO(bad);
        std::istringstream s(bad);
        CHECK_THROWS_AS(parse_edge_list(s), ConfigError);
    }
    std::istringstream none("# nothing\n");
    CHECK(parse_edge_list(none).n == 0);
}
