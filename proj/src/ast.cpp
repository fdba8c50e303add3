#include "semre/ast.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <stdexcept>

namespace semre {

namespace {

SemRE node(Kind k, CharSet chars = {}, Query q = {}, SemRE l = nullptr, SemRE r = nullptr) {
    return std::make_shared<const Node>(Node{k, chars, std::move(q), std::move(l), std::move(r)});
}

} // namespace

SemRE make_empty() { return node(Kind::Empty); }
SemRE make_epsilon() { return node(Kind::Epsilon); }
SemRE make_lit(const CharSet& chars) { return node(Kind::Lit, chars); }
SemRE make_lit(unsigned char c) { return node(Kind::Lit, CharSet::single(c)); }
SemRE make_alt(SemRE a, SemRE b) { return node(Kind::Alt, {}, {}, std::move(a), std::move(b)); }
SemRE make_cat(SemRE a, SemRE b) { return node(Kind::Cat, {}, {}, std::move(a), std::move(b)); }
SemRE make_star(SemRE r) { return node(Kind::Star, {}, {}, std::move(r)); }

SemRE make_refine(SemRE r, Query q) {
    if (q.name.empty()) throw std::invalid_argument("empty query name");
    return node(Kind::Refine, {}, std::move(q), std::move(r));
}

SemRE make_cat_chain(const std::vector<SemRE>& parts) {
    if (parts.empty()) return make_epsilon();
    SemRE acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) acc = make_cat(acc, parts[i]);
    return acc;
}

bool structurally_equal(const SemRE& a, const SemRE& b) {
    if (a == b) return true;
    if (!a || !b || a->kind != b->kind) return false;
    switch (a->kind) {
    case Kind::Empty:
    case Kind::Epsilon: return true;
    case Kind::Lit: return a->chars == b->chars;
    case Kind::Alt:
    case Kind::Cat:
        return structurally_equal(a->left, b->left) && structurally_equal(a->right, b->right);
    case Kind::Star: return structurally_equal(a->left, b->left);
    case Kind::Refine: return a->query == b->query && structurally_equal(a->left, b->left);
    }
    return false;
}

std::size_t size(const SemRE& r) {
    switch (r->kind) {
    case Kind::Alt:
    case Kind::Cat: return 1 + size(r->left) + size(r->right);
    case Kind::Star:
    case Kind::Refine: return 1 + size(r->left);
    default: return 1;
    }
}

SemRE skeleton(const SemRE& r) {
    switch (r->kind) {
    case Kind::Alt: return make_alt(skeleton(r->left), skeleton(r->right));
    case Kind::Cat: return make_cat(skeleton(r->left), skeleton(r->right));
    case Kind::Star: return make_star(skeleton(r->left));
    case Kind::Refine: return skeleton(r->left);
    default: return r;
    }
}

std::size_t refine_count(const SemRE& r) {
    switch (r->kind) {
    case Kind::Alt:
    case Kind::Cat: return refine_count(r->left) + refine_count(r->right);
    case Kind::Star: return refine_count(r->left);
    case Kind::Refine: return 1 + refine_count(r->left);
    default: return 0;
    }
}

namespace {

void collect_queries(const SemRE& r, std::vector<Query>& out) {
    if (r->kind == Kind::Refine && std::find(out.begin(), out.end(), r->query) == out.end())
        out.push_back(r->query);
    if (r->left) collect_queries(r->left, out);
    if (r->right) collect_queries(r->right, out);
}

} // namespace

std::vector<Query> queries_of(const SemRE& r) {
    std::vector<Query> out;
    collect_queries(r, out);
    return out;
}

bool has_nested_queries(const SemRE& r) {
    switch (r->kind) {
    case Kind::Alt:
    case Kind::Cat: return has_nested_queries(r->left) || has_nested_queries(r->right);
    case Kind::Star: return has_nested_queries(r->left);
    case Kind::Refine: return refine_count(r->left) > 0;
    default: return false;
    }
}

// ---------------------------------------------------------------------------
// Pretty printing

namespace {

// Characters that always need a backslash outside brackets.
bool is_meta(unsigned char c) {
    switch (c) {
    case '\\': case '.': case '|': case '(': case ')': case '[': case ']':
    case '<': case '>': case '{': case '}': case '*': case '+': case '?':
    case '&': case '%':
        return true;
    default:
        return false;
    }
}

std::string hex_escape(unsigned char c) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "\\x%02X", c);
    return buf;
}

std::string escape_char(unsigned char c) {
    if (c == '\n') return "\\n";
    if (c == '\t') return "\\t";
    if (c == '\r') return "\\r";
    if (c < 0x20 || c >= 0x7F) return hex_escape(c);
    if (is_meta(c)) return std::string("\\") + static_cast<char>(c);
    return std::string(1, static_cast<char>(c));
}

std::string escape_class_char(unsigned char c) {
    if (c == '\n') return "\\n";
    if (c == '\t') return "\\t";
    if (c == '\r') return "\\r";
    if (c < 0x20 || c >= 0x7F) return hex_escape(c);
    if (c == ']' || c == '\\' || c == '-' || c == '^') return std::string("\\") + static_cast<char>(c);
    return std::string(1, static_cast<char>(c));
}

std::string render_ranges(const CharSet& s) {
    std::string out;
    int c = 0;
    while (c < 256) {
        if (!s.contains(static_cast<unsigned char>(c))) {
            ++c;
            continue;
        }
        int hi = c;
        while (hi + 1 < 256 && s.contains(static_cast<unsigned char>(hi + 1))) ++hi;
        out += escape_class_char(static_cast<unsigned char>(c));
        if (hi == c + 1) {
            out += escape_class_char(static_cast<unsigned char>(hi));
        } else if (hi > c + 1) {
            out += '-';
            out += escape_class_char(static_cast<unsigned char>(hi));
        }
        c = hi + 1;
    }
    return out;
}

std::string render_set(const CharSet& s, const Alphabet& alphabet) {
    if (s == alphabet.sigma) return ".";
    if (s.count() == 1) return escape_char(static_cast<unsigned char>(s.first()));
    // An empty set would be "[]", which the parser reads as a literal ']'.
    if (s.empty()) return "[^" + render_ranges(alphabet.sigma) + "]";
    std::string pos = "[" + render_ranges(s) + "]";
    if ((s & alphabet.sigma) == s) {
        std::string neg = "[^" + render_ranges(s.complement_in(alphabet.sigma)) + "]";
        if (neg.size() < pos.size()) return neg;
    }
    return pos;
}

// Precedence: 0 = alternation, 1 = concatenation, 2 = postfix/atom.
int precedence(Kind k) {
    switch (k) {
    case Kind::Alt: return 0;
    case Kind::Cat: return 1;
    default: return 2;
    }
}

void print(const SemRE& r, const Alphabet& a, std::string& out);

void print_at(const SemRE& r, int min_prec, const Alphabet& a, std::string& out) {
    if (precedence(r->kind) < min_prec) {
        out += '(';
        print(r, a, out);
        out += ')';
    } else {
        print(r, a, out);
    }
}

void print(const SemRE& r, const Alphabet& a, std::string& out) {
    switch (r->kind) {
    case Kind::Empty: out += "%empty%"; break;
    case Kind::Epsilon: out += "()"; break;
    case Kind::Lit: out += render_set(r->chars, a); break;
    case Kind::Alt:
        print_at(r->left, 0, a, out);
        out += '|';
        print_at(r->right, 1, a, out);
        break;
    case Kind::Cat:
        print_at(r->left, 1, a, out);
        print_at(r->right, 2, a, out);
        break;
    case Kind::Star:
        print_at(r->left, 2, a, out);
        out += '*';
        break;
    case Kind::Refine:
        print_at(r->left, 2, a, out);
        out += "&<" + r->query.name + ">";
        break;
    }
}

void debug(const SemRE& r, std::string& out) {
    switch (r->kind) {
    case Kind::Empty: out += "Empty"; return;
    case Kind::Epsilon: out += "Eps"; return;
    case Kind::Lit:
        out += "Lit{";
        if (r->chars.count() == 1) {
            out += escape_char(static_cast<unsigned char>(r->chars.first()));
        } else {
            out += "[" + render_ranges(r->chars) + "]";
        }
        out += "}";
        return;
    case Kind::Alt: out += "Alt("; break;
    case Kind::Cat: out += "Cat("; break;
    case Kind::Star: out += "Star("; break;
    case Kind::Refine: out += "Refine("; break;
    }
    debug(r->left, out);
    if (r->right) {
        out += ',';
        debug(r->right, out);
    }
    if (r->kind == Kind::Refine) out += "," + r->query.name;
    out += ')';
}

} // namespace

std::string to_pattern(const SemRE& r, const Alphabet& alphabet) {
    std::string out;
    print(r, alphabet, out);
    return out;
}

std::string to_debug_string(const SemRE& r) {
    std::string out;
    debug(r, out);
    return out;
}

} // namespace semre
