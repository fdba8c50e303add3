#pragma once

#include <cstdint>
#include <istream>
#include <set>
#include <string>
#include <utility>

#include "semre/ast.hpp"
#include "semre/oracle.hpp"

namespace semre {

/// Simple undirected graph on vertices 1..n.
struct UndirectedGraph {
    std::uint32_t n = 0;
    std::set<std::pair<std::uint32_t, std::uint32_t>> edges;  // (min, max)

    /// Throws std::invalid_argument for self-loops or out-of-range vertices.
    void add_edge(std::uint32_t a, std::uint32_t b);
    bool has_edge(std::uint32_t a, std::uint32_t b) const;
};

/// A membership instance whose answer is whether the graph has a triangle.
struct TriangleInstance {
    SemRE pattern;
    std::string input;
    OraclePtr oracle;  // answers the single query "E"
};

/// Largest graph the one-symbol-per-vertex encoding can express.
inline constexpr std::uint32_t kMaxUnaryVertices = 94;

/// Printable symbol of vertex v: '1', '2', ... '~', then the printable
/// characters below '1' except '#'.
char unary_symbol(std::uint32_t v);

/// One symbol per vertex; input "#11#22...#nn". Throws std::invalid_argument
/// for n == 0 or n > kMaxUnaryVertices.
TriangleInstance encode_instance(const UndirectedGraph& g);

/// Vertices as fixed-width binary ids 0..n-1 over {0, 1, #}; each vertex
/// position of the pattern spans one id block. Throws for n == 0.
TriangleInstance encode_instance_binary(const UndirectedGraph& g);

/// Width of a binary vertex id: max(1, ceil(log2 n)).
std::uint32_t binary_width(std::uint32_t n);

bool brute_force_triangle(const UndirectedGraph& g);

/// Reads "u v" lines (1-based vertices). An optional "n N" line fixes the
/// vertex count; otherwise it is the largest vertex mentioned. Blank lines
/// and lines starting with '#' are ignored. Throws ConfigError on bad input.
UndirectedGraph parse_edge_list(std::istream& in);

} // namespace semre
