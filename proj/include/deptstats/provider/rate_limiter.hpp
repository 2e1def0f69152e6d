#pragma once

#include <chrono>
#include <cstddef>
#include <deque>
#include <mutex>
#include <vector>

#include "deptstats/provider/clock.hpp"

namespace deptstats::provider {

// Sliding-window limiter: at most max_requests grants in any window of the
// given length. acquire() blocks (via the clock) until a slot frees up.
// Safe to share between threads; this is the gateway's only shared lock.
class RateLimiter {
public:
    RateLimiter(std::size_t max_requests, std::chrono::milliseconds window, Clock &clock, bool record_trace = false);

    // Returns the time at which the request was admitted.
    TimePoint acquire();

    std::vector<TimePoint> trace() const;
    std::size_t max_requests() const { return max_requests_; }
    std::chrono::milliseconds window() const { return window_; }

private:
    std::size_t max_requests_;
    std::chrono::milliseconds window_;
    Clock &clock_;
    bool record_trace_;
    mutable std::mutex mutex_;
    std::deque<TimePoint> recent_;
    std::vector<TimePoint> trace_;
};

} // namespace deptstats::provider
