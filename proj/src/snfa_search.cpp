#include <map>
#include <tuple>
#include <unordered_set>

#include "semre/matcher.hpp"

namespace semre {

bool snfa_accepts_bruteforce(const Snfa& m, std::string_view w, Oracle& oracle, std::size_t max_configurations) {
    // Configuration: state, position, then (query, start) pairs of the open stack.
    using Config = std::vector<std::uint32_t>;
    struct Hash {
        std::size_t operator()(const Config& c) const {
            std::size_t h = c.size();
            for (auto x : c) h = h * 1000003u ^ x;
            return h;
        }
    };
    std::unordered_set<Config, Hash> seen;
    std::vector<Config> work;
    std::map<std::tuple<QueryId, std::uint32_t, std::uint32_t>, bool> answers;

    auto ask = [&](QueryId q, std::uint32_t i, std::uint32_t j) {
        auto key = std::make_tuple(q, i, j);
        auto it = answers.find(key);
        if (it != answers.end()) return it->second;
        bool a = oracle.evaluate(m.queries()[q], w.substr(i, j - i));
        answers.emplace(key, a);
        return a;
    };
    auto push = [&](Config c) {
        if (seen.insert(c).second) {
            if (seen.size() > max_configurations) throw TooLargeError("SNFA search exceeded its budget");
            work.push_back(std::move(c));
        }
    };
    // Entering state t at position pos with the given stack.
    auto enter = [&](StateId t, std::uint32_t pos, const Config& from) {
        Config c{t, pos};
        c.insert(c.end(), from.begin() + 2, from.end());
        const StateLabel& l = m.label(t);
        if (l.is_open()) {
            c.push_back(l.query);
            c.push_back(pos);
        } else if (l.is_close()) {
            if (c.size() < 4 || c[c.size() - 2] != l.query) return;
            if (!ask(l.query, c.back(), pos)) return;
            c.resize(c.size() - 2);
        }
        push(std::move(c));
    };

    Config root{m.start(), 0};
    enter(m.start(), 0, root);
    while (!work.empty()) {
        Config c = std::move(work.back());
        work.pop_back();
        StateId s = c[0];
        std::uint32_t pos = c[1];
        if (s == m.end() && pos == w.size() && c.size() == 2) return true;
        for (StateId t : m.eps_out(s)) enter(t, pos, c);
        if (pos < w.size())
            for (std::uint32_t e : m.char_out(s)) {
                const auto& edge = m.char_edges()[e];
                if (edge.chars.contains(static_cast<unsigned char>(w[pos]))) enter(edge.to, pos + 1, c);
            }
    }
    return false;
}

} // namespace semre
