#pragma once

#include <chrono>
#include <cstdint>
#include <string_view>
#include <unordered_set>

#include "semre/matcher.hpp"

namespace semre::detail {

/// Forwards oracle calls and accumulates MatchMetrics.
class CallRecorder {
public:
    CallRecorder(Oracle& oracle, MatchMetrics* metrics) : oracle_(oracle), metrics_(metrics) {}

    /// `qid` identifies the query within the pattern; `i`/`j` are the
    /// 1-based window bounds used for the distinct-window count.
    bool ask(const Query& q, std::uint32_t qid, std::uint32_t i, std::uint32_t j, std::string_view window) {
        if (!metrics_) return oracle_.evaluate(q, window);
        auto t0 = Clock::now();
        bool answer = oracle_.evaluate(q, window);
        metrics_->oracle_seconds += std::chrono::duration<double>(Clock::now() - t0).count();
        ++metrics_->oracle_calls;
        metrics_->submitted_chars += window.size();
        std::uint64_t key = (std::uint64_t{qid} << 42) | (std::uint64_t{i} << 21) | j;
        if (distinct_.insert(key).second) ++metrics_->distinct_queries;
        return answer;
    }

private:
    Oracle& oracle_;
    MatchMetrics* metrics_;
    std::unordered_set<std::uint64_t> distinct_;
};

/// Throws TimeoutError once the deadline has passed; the clock is read on
/// every 1024th call only.
class DeadlineCheck {
public:
    explicit DeadlineCheck(Deadline d) : d_(d) {}
    void tick() {
        if (d_.at && (++n_ & 1023) == 0 && d_.expired()) throw TimeoutError("match timed out");
    }

private:
    Deadline d_;
    std::uint32_t n_ = 0;
};

} // namespace semre::detail
