#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "semre/charset.hpp"

namespace semre {

/// Name of an oracle query. Two refinements with equal names denote the
/// same query.
struct Query {
    std::string name;

    bool operator==(const Query&) const = default;
    auto operator<=>(const Query&) const = default;
};

enum class Kind : unsigned char { Empty, Epsilon, Lit, Alt, Cat, Star, Refine };

struct Node;
using SemRE = std::shared_ptr<const Node>;

/// One immutable AST node. Only the fields relevant to `kind` are set:
/// `chars` for Lit, `left`/`right` for Alt and Cat, `left` for Star and
/// Refine, `query` for Refine.
struct Node {
    Kind kind;
    CharSet chars;
    Query query;
    SemRE left;
    SemRE right;
};

SemRE make_empty();
SemRE make_epsilon();
SemRE make_lit(const CharSet& chars);
SemRE make_lit(unsigned char c);
SemRE make_alt(SemRE a, SemRE b);
SemRE make_cat(SemRE a, SemRE b);
SemRE make_star(SemRE r);
SemRE make_refine(SemRE r, Query q);

/// Concatenate a non-empty list left to right: ((a b) c) ...
SemRE make_cat_chain(const std::vector<SemRE>& parts);

bool structurally_equal(const SemRE& a, const SemRE& b);

/// Number of AST nodes; always >= 1.
std::size_t size(const SemRE& r);

/// The classical regular expression left after erasing every refinement.
SemRE skeleton(const SemRE& r);

std::size_t refine_count(const SemRE& r);

/// Distinct queries in first-occurrence (pre-order) order.
std::vector<Query> queries_of(const SemRE& r);

/// True if some Refine node has another Refine node below it.
bool has_nested_queries(const SemRE& r);

/// Pretty-print in the concrete pattern syntax accepted by `parse_semre`.
/// `alphabet` decides when a literal is rendered as `.`.
std::string to_pattern(const SemRE& r, const Alphabet& alphabet = Alphabet::ascii());

/// Debug rendering of the tree shape, e.g. `Cat(Lit{a},Star(Lit{b}))`.
std::string to_debug_string(const SemRE& r);

} // namespace semre
