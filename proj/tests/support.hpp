#pragma once

// Shared helpers for the test binaries: random instance generators and
// reference evaluators that do not reuse the engines under test.

#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "semre/ast.hpp"
#include "semre/oracle.hpp"
#include "semre/query_graph.hpp"

namespace testsupport {

using Rng = std::mt19937_64;
using semre::SemRE;

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

/// Random pattern over {a, b, c}, nesting depth <= `depth`, refinements
/// drawn from `queries`.
inline SemRE random_semre(Rng& rng, int depth, const std::vector<std::string>& queries = {"q1", "q2"}) {
    using namespace semre;
    if (depth == 0 || uniform(rng, 0, 5) == 0) {
        int k = uniform(rng, 0, 11);
        if (k == 0) return make_epsilon();
        if (k == 1) return make_empty();
        if (k <= 3) {
            CharSet s;
            for (char c : {'a', 'b', 'c'})
                if (coin(rng)) s.insert(static_cast<unsigned char>(c));
            if (s.empty()) s.insert('a');
            return make_lit(s);
        }
        return make_lit(static_cast<unsigned char>("abc"[uniform(rng, 0, 2)]));
    }
    switch (uniform(rng, 0, queries.empty() ? 2 : 3)) {
    case 0: return make_alt(random_semre(rng, depth - 1, queries), random_semre(rng, depth - 1, queries));
    case 1: return make_cat(random_semre(rng, depth - 1, queries), random_semre(rng, depth - 1, queries));
    case 2: return make_star(random_semre(rng, depth - 1, queries));
    default:
        return make_refine(random_semre(rng, depth - 1, queries),
                           Query{queries[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(queries.size()) - 1))]});
    }
}

inline std::string random_word(Rng& rng, int max_len, const std::string& letters = "abc") {
    std::string w;
    int n = uniform(rng, 0, max_len);
    for (int i = 0; i < n; ++i) w += letters[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(letters.size()) - 1))];
    return w;
}

/// Table oracle with an explicit random answer for every (query, substring
/// of w), the empty string included.
inline std::shared_ptr<semre::TableOracle> random_table(Rng& rng, const std::string& w,
                                                        const std::vector<std::string>& queries = {"q1", "q2"},
                                                        double p_true = 0.5) {
    auto t = std::make_shared<semre::TableOracle>(false);
    for (const auto& q : queries)
        for (std::size_t i = 0; i <= w.size(); ++i)
            for (std::size_t j = i; j <= w.size(); ++j) t->set(semre::Query{q}, w.substr(i, j - i), coin(rng, p_true));
    return t;
}

/// Relational semantics: the set of spans (i, j) of w matched by r,
/// computed bottom-up as a boolean matrix. Star is the reflexive-transitive
/// closure of its operand's relation.
class SpanEvaluator {
public:
    SpanEvaluator(const std::string& w, semre::Oracle& oracle) : w_(w), n1_(w.size() + 1), oracle_(oracle) {}

    bool matches(const SemRE& r) { return spans(r)[0 * n1_ + w_.size()]; }

    std::vector<char> spans(const SemRE& r) {
        using semre::Kind;
        std::vector<char> out(n1_ * n1_, 0);
        auto at = [&](std::vector<char>& m, std::size_t i, std::size_t j) -> char& { return m[i * n1_ + j]; };
        switch (r->kind) {
        case Kind::Empty: break;
        case Kind::Epsilon:
            for (std::size_t i = 0; i < n1_; ++i) at(out, i, i) = 1;
            break;
        case Kind::Lit:
            for (std::size_t i = 0; i < w_.size(); ++i)
                if (r->chars.contains(static_cast<unsigned char>(w_[i]))) at(out, i, i + 1) = 1;
            break;
        case Kind::Alt: {
            auto a = spans(r->left), b = spans(r->right);
            for (std::size_t k = 0; k < out.size(); ++k) out[k] = a[k] || b[k];
            break;
        }
        case Kind::Cat: {
            auto a = spans(r->left), b = spans(r->right);
            for (std::size_t i = 0; i < n1_; ++i)
                for (std::size_t k = i; k < n1_; ++k)
                    if (at(a, i, k))
                        for (std::size_t j = k; j < n1_; ++j)
                            if (at(b, k, j)) at(out, i, j) = 1;
            break;
        }
        case Kind::Star: {
            auto a = spans(r->left);
            for (std::size_t i = 0; i < n1_; ++i) at(out, i, i) = 1;
            // Spans only grow rightwards, so one pass in increasing j suffices.
            for (std::size_t j = 0; j < n1_; ++j)
                for (std::size_t i = 0; i <= j; ++i)
                    for (std::size_t k = i; k < j; ++k)
                        if (at(out, i, k) && at(a, k, j)) {
                            at(out, i, j) = 1;
                            break;
                        }
            break;
        }
        case Kind::Refine: {
            auto a = spans(r->left);
            for (std::size_t i = 0; i < n1_; ++i)
                for (std::size_t j = i; j < n1_; ++j)
                    if (at(a, i, j) && oracle_.evaluate(r->query, std::string_view(w_).substr(i, j - i)))
                        at(out, i, j) = 1;
            break;
        }
        }
        return out;
    }

private:
    std::string w_;
    std::size_t n1_;
    semre::Oracle& oracle_;
};

/// Per-vertex facts about tentatively feasible prefixes start ->* v, found
/// by exhaustive search over (vertex, open-vertex stack) configurations.
struct PrefixFacts {
    std::set<std::uint32_t> alive;
    /// Top of the open stack after a prefix ending at v (v included); a
    /// missing entry means the stack was empty on every such prefix.
    std::map<std::uint32_t, std::set<std::uint32_t>> top;
};

inline PrefixFacts prefix_facts(const semre::QueryGraph& g, semre::Oracle& oracle) {
    PrefixFacts facts;
    std::set<std::vector<std::uint32_t>> seen;
    std::vector<std::vector<std::uint32_t>> work;
    auto enter = [&](const semre::QGVertex& v, std::vector<std::uint32_t> stack) {
        auto l = g.label(v);
        if (l.is_open()) {
            stack.push_back(g.id(v));
        } else if (l.is_close()) {
            if (stack.empty()) return;
            auto o = g.vertex(stack.back());
            if (g.label(o).query != l.query) return;
            auto window = g.input().substr(o.index - 1, v.index - o.index);
            if (!oracle.evaluate(g.snfa().queries()[l.query], window)) return;
            stack.pop_back();
        }
        facts.alive.insert(g.id(v));
        if (!stack.empty()) facts.top[g.id(v)].insert(stack.back());
        std::vector<std::uint32_t> c{g.id(v)};
        c.insert(c.end(), stack.begin(), stack.end());
        if (seen.insert(c).second) work.push_back(std::move(c));
    };
    enter(g.start(), {});
    while (!work.empty()) {
        auto c = work.back();
        work.pop_back();
        std::vector<std::uint32_t> stack(c.begin() + 1, c.end());
        for (const auto& s : g.successors(g.vertex(c[0]))) enter(s, stack);
    }
    return facts;
}

} // namespace testsupport
