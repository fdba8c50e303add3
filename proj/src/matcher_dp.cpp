#include <functional>
#include <map>
#include <unordered_map>

#include "call_recorder.hpp"
#include "semre/matcher.hpp"

namespace semre {

DpMatcher::DpMatcher(SemRE r, OraclePtr oracle) : r_(std::move(r)), oracle_(std::move(oracle)) {
    if (!r_) throw std::invalid_argument("null pattern");
    if (!oracle_) throw std::invalid_argument("null oracle");
    std::map<std::string, std::uint32_t> qids;
    std::function<std::uint32_t(const SemRE&)> flatten = [&](const SemRE& n) -> std::uint32_t {
        Node node{n->kind, n->chars, n->query};
        if (n->left) node.left = flatten(n->left);
        if (n->right) node.right = flatten(n->right);
        if (n->kind == Kind::Refine) qids.emplace(n->query.name, static_cast<std::uint32_t>(qids.size()));
        nodes_.push_back(std::move(node));
        return static_cast<std::uint32_t>(nodes_.size() - 1);
    };
    flatten(r_);
    // A Refine node has no right child; `right` carries its query id.
    for (auto& node : nodes_)
        if (node.kind == Kind::Refine) node.right = qids.at(node.query.name);
}

namespace {

class DpRun {
public:
    template <class Nodes>
    DpRun(const Nodes& nodes, std::string_view w, detail::CallRecorder& rec, Deadline d)
        : w_(w), n1_(w.size() + 1), rec_(rec), deadline_(d) {
        count_ = nodes.size();
        if (count_ * n1_ * n1_ <= (std::size_t{1} << 26)) dense_.assign(count_ * n1_ * n1_, 0);
    }

    template <class Nodes>
    bool eval(const Nodes& nodes, std::uint32_t id, std::size_t i, std::size_t j) {
        deadline_.tick();
        std::uint8_t& slot = memo(id, i, j);
        if (slot) return slot == 2;
        bool r = compute(nodes, id, i, j);
        // `slot` may dangle after a rehash of the sparse memo.
        memo(id, i, j) = r ? 2 : 1;
        return r;
    }

private:
    template <class Nodes>
    bool compute(const Nodes& nodes, std::uint32_t id, std::size_t i, std::size_t j) {
        const auto& n = nodes[id];
        switch (n.kind) {
        case Kind::Empty: return false;
        case Kind::Epsilon: return i == j;
        case Kind::Lit: return j == i + 1 && n.chars.contains(static_cast<unsigned char>(w_[i]));
        case Kind::Alt: return eval(nodes, n.left, i, j) || eval(nodes, n.right, i, j);
        case Kind::Cat:
            for (std::size_t k = i; k <= j; ++k)
                if (eval(nodes, n.left, i, k) && eval(nodes, n.right, k, j)) return true;
            return false;
        case Kind::Star: return star(nodes, id, i, j);
        case Kind::Refine:
            return eval(nodes, n.left, i, j) &&
                   rec_.ask(n.query, n.right, static_cast<std::uint32_t>(i + 1), static_cast<std::uint32_t>(j + 1),
                            w_.substr(i, j - i));
        }
        return false;
    }

    // star(i, j) = i == j, or some k > i with inner(i, k) and star(k, j).
    // Depth-first over k ascending, as the recursion would, but with an
    // explicit stack so long lines do not exhaust the call stack.
    template <class Nodes>
    bool star(const Nodes& nodes, std::uint32_t id, std::size_t i, std::size_t j) {
        if (i == j) return true;
        std::uint32_t inner = nodes[id].left;
        struct F {
            std::size_t p, k;
        };
        std::vector<F> frames{{i, i + 1}};
        while (!frames.empty()) {
            F& f = frames.back();
            if (f.k > j) {
                memo(id, f.p, j) = 1;
                frames.pop_back();
                continue;
            }
            std::size_t p = f.p, k = f.k++;
            if (!eval(nodes, inner, p, k)) continue;
            if (k == j) {
                for (const auto& g : frames) memo(id, g.p, j) = 2;
                return true;
            }
            std::uint8_t known = memo(id, k, j);
            if (known == 2) {
                for (const auto& g : frames) memo(id, g.p, j) = 2;
                return true;
            }
            if (known == 0) frames.push_back({k, k + 1});
        }
        return false;
    }

    std::uint8_t& memo(std::uint32_t id, std::size_t i, std::size_t j) {
        std::size_t key = (id * n1_ + i) * n1_ + j;
        if (!dense_.empty()) return dense_[key];
        return sparse_[key];
    }

    std::string_view w_;
    std::size_t n1_;
    std::size_t count_ = 0;
    detail::CallRecorder& rec_;
    detail::DeadlineCheck deadline_;
    std::vector<std::uint8_t> dense_;
    std::unordered_map<std::size_t, std::uint8_t> sparse_;
};

} // namespace

bool DpMatcher::match(std::string_view w, MatchMetrics* metrics, Deadline deadline) const {
    auto t0 = Clock::now();
    if (metrics) *metrics = {};
    detail::CallRecorder rec(*oracle_, metrics);
    DpRun run(nodes_, w, rec, deadline);
    bool matched = run.eval(nodes_, static_cast<std::uint32_t>(nodes_.size() - 1), 0, w.size());
    if (metrics) {
        metrics->matched = matched;
        metrics->wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    }
    return matched;
}

bool match_dp(const SemRE& r, std::string_view w, OraclePtr oracle, MatchMetrics* metrics) {
    return DpMatcher(r, std::move(oracle)).match(w, metrics);
}

// ---------------------------------------------------------------------------

namespace {

bool naive(const SemRE& r, std::string_view w, std::size_t i, std::size_t j, Oracle& oracle) {
    switch (r->kind) {
    case Kind::Empty: return false;
    case Kind::Epsilon: return i == j;
    case Kind::Lit: return j == i + 1 && r->chars.contains(static_cast<unsigned char>(w[i]));
    case Kind::Alt: return naive(r->left, w, i, j, oracle) || naive(r->right, w, i, j, oracle);
    case Kind::Cat:
        for (std::size_t k = i; k <= j; ++k)
            if (naive(r->left, w, i, k, oracle) && naive(r->right, w, k, j, oracle)) return true;
        return false;
    case Kind::Star:
        if (i == j) return true;
        for (std::size_t k = i + 1; k <= j; ++k)
            if (naive(r->left, w, i, k, oracle) && naive(r, w, k, j, oracle)) return true;
        return false;
    case Kind::Refine: return naive(r->left, w, i, j, oracle) && oracle.evaluate(r->query, w.substr(i, j - i));
    }
    return false;
}

} // namespace

bool match_naive(const SemRE& r, std::string_view w, Oracle& oracle) {
    if (w.size() > kNaiveMaxLength)
        throw TooLargeError("naive evaluator is limited to " + std::to_string(kNaiveMaxLength) + " characters");
    return naive(r, w, 0, w.size(), oracle);
}

} // namespace semre
