#include "semre/triangle.hpp"

#include <sstream>
#include <stdexcept>

namespace semre {

void UndirectedGraph::add_edge(std::uint32_t a, std::uint32_t b) {
    if (a == b) throw std::invalid_argument("self-loop on vertex " + std::to_string(a));
    if (a < 1 || b < 1 || a > n || b > n) throw std::invalid_argument("edge endpoint out of range");
    edges.emplace(std::min(a, b), std::max(a, b));
}

bool UndirectedGraph::has_edge(std::uint32_t a, std::uint32_t b) const {
    return edges.count({std::min(a, b), std::max(a, b)}) != 0;
}

char unary_symbol(std::uint32_t v) {
    if (v < 1 || v > kMaxUnaryVertices) throw std::invalid_argument("vertex has no unary symbol");
    if (v <= '~' - '1' + 1) return static_cast<char>('1' + v - 1);
    char c = static_cast<char>(' ' + (v - ('~' - '1' + 2)));
    return c >= '#' ? static_cast<char>(c + 1) : c;
}

namespace {

// Σ* # ((Σ·((ΣΣ*#Σ)∧E)·((ΣΣ*#Σ)∧E)·Σ)∧E) Σ*, where `sym` stands for one
// vertex position and `any` for one arbitrary character.
SemRE triangle_pattern(const SemRE& sym, const SemRE& any) {
    Query e{"E"};
    auto hash = make_lit(static_cast<unsigned char>('#'));
    auto edge = [&] { return make_refine(make_cat_chain({sym, make_star(any), hash, sym}), e); };
    auto outer = make_refine(make_cat_chain({sym, edge(), edge(), sym}), e);
    return make_cat_chain({make_star(any), hash, outer, make_star(any)});
}

class EdgeOracle final : public Oracle {
public:
    EdgeOracle(UndirectedGraph g, std::uint32_t width, bool binary) : g_(std::move(g)), width_(width), binary_(binary) {}

    bool evaluate(const Query&, std::string_view s) override {
        if (s.size() < 2 * width_) return false;
        std::uint32_t a = decode(s.substr(0, width_)), b = decode(s.substr(s.size() - width_));
        return a != 0 && b != 0 && a != b && g_.has_edge(a, b);
    }

private:
    // Returns the 1-based vertex, or 0 if the block names none.
    std::uint32_t decode(std::string_view block) const {
        if (!binary_) {
            for (std::uint32_t v = 1; v <= g_.n; ++v)
                if (unary_symbol(v) == block[0]) return v;
            return 0;
        }
        std::uint32_t id = 0;
        for (char c : block) {
            if (c != '0' && c != '1') return 0;
            id = id * 2 + static_cast<std::uint32_t>(c - '0');
        }
        return id < g_.n ? id + 1 : 0;
    }

    UndirectedGraph g_;
    std::uint32_t width_;
    bool binary_;
};

} // namespace

TriangleInstance encode_instance(const UndirectedGraph& g) {
    if (g.n == 0) throw std::invalid_argument("graph has no vertices");
    if (g.n > kMaxUnaryVertices) throw std::invalid_argument("too many vertices for the unary encoding");
    CharSet sigma = CharSet::single('#');
    std::string w;
    for (std::uint32_t v = 1; v <= g.n; ++v) {
        char c = unary_symbol(v);
        sigma.insert(static_cast<unsigned char>(c));
        w += '#';
        w += c;
        w += c;
    }
    auto any = make_lit(sigma);
    return {triangle_pattern(any, any), w, std::make_shared<EdgeOracle>(g, 1, false)};
}

std::uint32_t binary_width(std::uint32_t n) {
    std::uint32_t b = 1;
    while ((std::uint64_t{1} << b) < n) ++b;
    return b;
}

TriangleInstance encode_instance_binary(const UndirectedGraph& g) {
    if (g.n == 0) throw std::invalid_argument("graph has no vertices");
    std::uint32_t b = binary_width(g.n);
    std::string w;
    for (std::uint32_t v = 0; v < g.n; ++v) {
        std::string id(b, '0');
        for (std::uint32_t k = 0; k < b; ++k)
            if ((v >> (b - 1 - k)) & 1U) id[k] = '1';
        w += '#' + id + id;
    }
    CharSet sigma = CharSet::single('0') | CharSet::single('1') | CharSet::single('#');
    auto any = make_lit(sigma);
    std::vector<SemRE> block(b, any);
    return {triangle_pattern(make_cat_chain(block), any), w, std::make_shared<EdgeOracle>(g, b, true)};
}

bool brute_force_triangle(const UndirectedGraph& g) {
    for (std::uint32_t i = 1; i <= g.n; ++i)
        for (std::uint32_t j = i + 1; j <= g.n; ++j)
            for (std::uint32_t k = j + 1; k <= g.n; ++k)
                if (g.has_edge(i, j) && g.has_edge(j, k) && g.has_edge(i, k)) return true;
    return false;
}

UndirectedGraph parse_edge_list(std::istream& in) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    std::uint32_t declared = 0, largest = 0;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first) || first[0] == '#') continue;
        auto bad = [&] { return ConfigError("edge list line " + std::to_string(lineno) + ": expected 'u v' or 'n N'"); };
        std::string rest;
        if (first == "n") {
            long long n;
            if (!(ls >> n) || n < 1 || (ls >> rest)) throw bad();
            declared = static_cast<std::uint32_t>(n);
            continue;
        }
        long long u, v;
        try {
            std::size_t used = 0;
            u = std::stoll(first, &used);
            if (used != first.size()) throw bad();
        } catch (const std::logic_error&) {
            throw bad();
        }
        if (!(ls >> v) || (ls >> rest) || u < 1 || v < 1) throw bad();
        pairs.emplace_back(static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v));
        largest = std::max({largest, static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v)});
    }
    UndirectedGraph g;
    g.n = declared ? declared : largest;
    if (largest > g.n) throw ConfigError("edge list mentions a vertex above the declared count");
    for (auto [u, v] : pairs) {
        try {
            g.add_edge(u, v);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("edge list: ") + e.what());
        }
    }
    return g;
}

} // namespace semre
