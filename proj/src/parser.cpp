#include "semre/parser.hpp"

#include <cctype>
#include <string>

namespace semre {

SemRE expand_sugar(const Sugar& s, const Alphabet& alphabet) {
    switch (s.form) {
    case Sugar::Form::Optional: return make_alt(s.operand, make_epsilon());
    case Sugar::Form::Plus: return make_cat(s.operand, make_star(s.operand));
    case Sugar::Form::Repeat: {
        if (s.lo > s.hi) throw std::invalid_argument("repetition lower bound exceeds upper bound");
        auto power = [&](unsigned k) {
            if (k == 0) return make_epsilon();
            return make_cat_chain(std::vector<SemRE>(k, s.operand));
        };
        SemRE acc = power(s.lo);
        for (unsigned k = s.lo + 1; k <= s.hi; ++k) acc = make_alt(acc, power(k));
        return acc;
    }
    case Sugar::Form::AnyRefine:
        return make_refine(make_star(make_lit(alphabet.sigma)), s.query);
    case Sugar::Form::NonemptyRefine:
        return make_refine(make_cat(make_lit(alphabet.sigma), make_star(make_lit(alphabet.sigma))),
                           s.query);
    case Sugar::Form::Dot: return make_lit(alphabet.sigma);
    }
    throw std::logic_error("unknown sugar form");
}

namespace {

bool is_query_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' || c == ':' || c == '\'';
}

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

class Parser {
public:
    Parser(std::string_view text, const Alphabet& alphabet) : text_(text), alphabet_(alphabet) {}

    SemRE parse() {
        SemRE r = parse_alt();
        if (pos_ < text_.size()) {
            // parse_alt only stops early at an unmatched ')'.
            throw ParseError("unmatched ')'", pos_);
        }
        return r;
    }

private:
    bool at_end() const { return pos_ >= text_.size(); }
    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
    }
    bool starts_with(std::string_view s) const { return text_.substr(pos_).starts_with(s); }

    SemRE parse_alt() {
        SemRE acc = parse_cat();
        while (!at_end() && peek() == '|') {
            ++pos_;
            acc = make_alt(acc, parse_cat());
        }
        return acc;
    }

    SemRE parse_cat() {
        SemRE acc;
        while (!at_end() && peek() != '|' && peek() != ')') {
            SemRE next = parse_postfix();
            acc = acc ? make_cat(acc, next) : next;
        }
        return acc ? acc : make_epsilon();
    }

    SemRE parse_postfix() {
        SemRE r = parse_atom();
        for (;;) {
            if (at_end()) return r;
            char c = peek();
            if (c == '*') {
                ++pos_;
                r = make_star(r);
            } else if (c == '+') {
                ++pos_;
                r = expand_sugar({Sugar::Form::Plus, r, {}}, alphabet_);
            } else if (c == '?') {
                ++pos_;
                r = expand_sugar({Sugar::Form::Optional, r, {}}, alphabet_);
            } else if (c == '{') {
                r = parse_repeat(r);
            } else if (c == '&' && peek(1) == '<') {
                pos_ += 2;
                r = make_refine(r, parse_query_name());
            } else {
                return r;
            }
        }
    }

    SemRE parse_repeat(const SemRE& r) {
        std::size_t start = pos_;
        ++pos_;  // '{'
        unsigned lo = parse_number(start);
        unsigned hi = lo;
        if (peek() == ',') {
            ++pos_;
            hi = parse_number(start);
        }
        if (peek() != '}') throw ParseError("malformed repetition bounds", start);
        ++pos_;
        if (lo > hi) throw ParseError("repetition bounds with lower > upper", start);
        if (hi > kMaxRepeat) throw ParseError("repetition bound too large", start);
        return expand_sugar({Sugar::Form::Repeat, r, {}, lo, hi}, alphabet_);
    }

    unsigned parse_number(std::size_t err_pos) {
        if (!std::isdigit(static_cast<unsigned char>(peek())))
            throw ParseError("malformed repetition bounds", err_pos);
        unsigned long v = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            v = v * 10 + static_cast<unsigned>(peek() - '0');
            if (v > 100000) throw ParseError("repetition bound too large", err_pos);
            ++pos_;
        }
        return static_cast<unsigned>(v);
    }

    // After the opening '<' (or '&<', '<+'): name '>'.
    Query parse_query_name() {
        std::size_t start = pos_;
        while (!at_end() && peek() != '>') {
            if (!is_query_char(peek())) throw ParseError("invalid character in query name", pos_);
            ++pos_;
        }
        if (at_end()) throw ParseError("unterminated query name", start);
        std::string name(text_.substr(start, pos_ - start));
        ++pos_;  // '>'
        if (name.empty()) throw ParseError("empty query name", start);
        return Query{std::move(name)};
    }

    SemRE parse_atom() {
        std::size_t start = pos_;
        char c = peek();
        switch (c) {
        case '(': {
            ++pos_;
            SemRE inner = parse_alt();
            if (peek() != ')') throw ParseError("unterminated group", start);
            ++pos_;
            return inner;
        }
        case '[': return parse_class();
        case '.': ++pos_; return expand_sugar({Sugar::Form::Dot, nullptr, {}}, alphabet_);
        case '<': {
            ++pos_;
            bool nonempty = false;
            if (peek() == '+') {
                nonempty = true;
                ++pos_;
            }
            Query q = parse_query_name();
            return expand_sugar({nonempty ? Sugar::Form::NonemptyRefine : Sugar::Form::AnyRefine, nullptr, q},
                                alphabet_);
        }
        case '\\': return make_lit(CharSet::single(parse_escape(false)));
        case '*': case '+': case '?': case '{':
            throw ParseError("repetition operator without operand", start);
        case '&':
            if (peek(1) == '<') throw ParseError("refinement without operand", start);
            break;
        case '%':
            if (starts_with("%empty%")) {
                pos_ += 7;
                return make_empty();
            }
            break;
        default: break;
        }
        ++pos_;
        return make_lit(static_cast<unsigned char>(c));
    }

    // At a backslash. Returns the escaped byte.
    unsigned char parse_escape(bool in_class) {
        std::size_t start = pos_;
        ++pos_;
        if (at_end()) throw ParseError("dangling backslash", start);
        char c = peek();
        ++pos_;
        switch (c) {
        case 'n': return '\n';
        case 't': return '\t';
        case 'r': return '\r';
        case 'x': {
            int h = hex_value(peek()), l = hex_value(peek(1));
            if (h < 0 || l < 0) throw ParseError("malformed \\x escape", start);
            pos_ += 2;
            return static_cast<unsigned char>(h * 16 + l);
        }
        case '\\': case '.': case '|': case '(': case ')': case '[': case ']':
        case '<': case '>': case '{': case '}': case '*': case '+': case '?':
        case '&': case '%': case '-': case '^': case '/': case '"': case '\'':
            return static_cast<unsigned char>(c);
        default: break;
        }
        (void)in_class;
        throw ParseError(std::string("unknown escape '\\") + c + "'", start);
    }

    SemRE parse_class() {
        std::size_t start = pos_;
        ++pos_;  // '['
        bool negated = false;
        if (peek() == '^') {
            negated = true;
            ++pos_;
        }
        CharSet set;
        bool first = true;
        for (;;) {
            if (at_end()) throw ParseError("unterminated character class", start);
            if (peek() == ']' && !first) {
                ++pos_;
                break;
            }
            first = false;
            unsigned char lo = class_char();
            if (peek() == '-' && peek(1) != ']' && pos_ + 1 < text_.size()) {
                std::size_t range_pos = pos_;
                ++pos_;
                unsigned char hi = class_char();
                if (hi < lo) throw ParseError("reversed character range", range_pos);
                set.insert_range(lo, hi);
            } else {
                set.insert(lo);
            }
        }
        if (negated) set = set.complement_in(alphabet_.sigma);
        return make_lit(set);
    }

    unsigned char class_char() {
        if (peek() == '\\') return parse_escape(true);
        return static_cast<unsigned char>(text_[pos_++]);
    }

    std::string_view text_;
    const Alphabet& alphabet_;
    std::size_t pos_ = 0;
};

} // namespace

SemRE parse_semre(std::string_view text, const Alphabet& alphabet) {
    return Parser(text, alphabet).parse();
}

} // namespace semre
