#pragma once

#include <bitset>
#include <cstddef>
#include <cstdint>
#include <string>

namespace semre {

/// A set of byte values. Literals in a SemRE are character sets rather than
/// single characters; a singleton set behaves exactly like a plain literal.
class CharSet {
public:
    CharSet() = default;

    static CharSet single(unsigned char c) {
        CharSet s;
        s.bits_.set(c);
        return s;
    }
    static CharSet range(unsigned char lo, unsigned char hi) {
        CharSet s;
        for (unsigned c = lo; c <= hi; ++c) s.bits_.set(c);
        return s;
    }

    bool contains(unsigned char c) const { return bits_.test(c); }
    void insert(unsigned char c) { bits_.set(c); }
    void insert_range(unsigned char lo, unsigned char hi) {
        for (unsigned c = lo; c <= hi; ++c) bits_.set(c);
    }

    std::size_t count() const { return bits_.count(); }
    bool empty() const { return bits_.none(); }

    CharSet operator|(const CharSet& o) const { return CharSet(bits_ | o.bits_); }
    CharSet operator&(const CharSet& o) const { return CharSet(bits_ & o.bits_); }
    /// Complement relative to `universe`.
    CharSet complement_in(const CharSet& universe) const { return CharSet(universe.bits_ & ~bits_); }

    bool operator==(const CharSet& o) const { return bits_ == o.bits_; }
    bool operator!=(const CharSet& o) const { return bits_ != o.bits_; }

    /// Smallest member, or -1 when empty.
    int first() const {
        for (unsigned c = 0; c < 256; ++c)
            if (bits_.test(c)) return static_cast<int>(c);
        return -1;
    }

private:
    explicit CharSet(std::bitset<256> b) : bits_(b) {}
    std::bitset<256> bits_;
};

/// The alphabet Σ. ASCII (bytes 0-127) by default; optionally all 256 bytes.
struct Alphabet {
    CharSet sigma;

    static Alphabet ascii() { return Alphabet{CharSet::range(0, 127)}; }
    static Alphabet bytes() { return Alphabet{CharSet::range(0, 255)}; }
    static Alphabet of(const std::string& symbols) {
        Alphabet a;
        for (unsigned char c : symbols) a.sigma.insert(c);
        return a;
    }
};

} // namespace semre
