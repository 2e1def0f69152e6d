#include "deptstats/provider/rate_limiter.hpp"

#include "deptstats/core/errors.hpp"

namespace deptstats::provider {

RateLimiter::RateLimiter(std::size_t max_requests, std::chrono::milliseconds window, Clock &clock, bool record_trace)
    : max_requests_(max_requests), window_(window), clock_(clock), record_trace_(record_trace) {
    if (max_requests == 0)
        throw ValidationError("rate limit must allow at least one request");
    if (window.count() <= 0)
        throw ValidationError("rate limit window must be positive");
}

TimePoint RateLimiter::acquire() {
    while (true) {
        TimePoint wake;
        {
            std::lock_guard lock(mutex_);
            const TimePoint now = clock_.now();
            while (!recent_.empty() && recent_.front() <= now - window_)
                recent_.pop_front();
            if (recent_.size() < max_requests_) {
                recent_.push_back(now);
                if (record_trace_)
                    trace_.push_back(now);
                return now;
            }
            wake = recent_.front() + window_;
        }
        clock_.sleep_until(wake);
    }
}

std::vector<TimePoint> RateLimiter::trace() const {
    std::lock_guard lock(mutex_);
    return trace_;
}

} // namespace deptstats::provider
