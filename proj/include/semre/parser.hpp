#pragma once

#include <string_view>

#include "semre/ast.hpp"
#include "semre/error.hpp"

namespace semre {

/// Parse a pattern in the concrete syntax:
///
///   a|b        alternation          ab        concatenation
///   r* r+ r?   repetition           r{i,j}    bounded repetition, r{i} exact
///   .          any character        [a-z]     class, [^...] negated class
///   r&<q>      refinement of the preceding atom by query q
///   <q>        shorthand for .*&<q>  <+q>      shorthand for .+&<q>
///   ()         the empty string     %empty%   the empty language
///
/// Sugar is expanded while parsing; the result only uses the seven core
/// constructors. Throws ParseError with the byte offset of the problem.
SemRE parse_semre(std::string_view text, const Alphabet& alphabet = Alphabet::ascii());

/// The sugared forms accepted by the parser, for direct testing of their
/// expansions.
struct Sugar {
    enum class Form {
        Optional,        // r?      -> r + ε
        Plus,            // r+      -> r r*
        Repeat,          // r{i,j}  -> r^i + ... + r^j
        AnyRefine,       // <q>     -> Σ* ∧ <q>
        NonemptyRefine,  // <+q>    -> Σ Σ* ∧ <q>
        Dot,             // .       -> Σ
    };
    Form form;
    SemRE operand;  // Optional, Plus, Repeat
    Query query;    // AnyRefine, NonemptyRefine
    unsigned lo = 0, hi = 0;  // Repeat
};

SemRE expand_sugar(const Sugar& s, const Alphabet& alphabet = Alphabet::ascii());

/// Largest accepted bound in r{i,j}.
inline constexpr unsigned kMaxRepeat = 255;

} // namespace semre
