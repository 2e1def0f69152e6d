#pragma once

#include <chrono>
#include <mutex>

namespace deptstats::provider {

using TimePoint = std::chrono::system_clock::time_point;

// Time source for rate limiting, backoff and cache expiry. Tests substitute
// ManualClock so that waiting is instantaneous and traces are exact.
class Clock {
public:
    virtual ~Clock() = default;
    virtual TimePoint now() const = 0;
    virtual void sleep_until(TimePoint deadline) = 0;
    void sleep_for(std::chrono::milliseconds duration) { sleep_until(now() + duration); }
};

class SystemClock final : public Clock {
public:
    TimePoint now() const override;
    void sleep_until(TimePoint deadline) override;
};

// Virtual time: sleeping advances the clock immediately.
class ManualClock final : public Clock {
public:
    explicit ManualClock(TimePoint start = TimePoint{}) : now_(start) { }

    TimePoint now() const override;
    void sleep_until(TimePoint deadline) override;
    void advance(std::chrono::milliseconds by);

private:
    mutable std::mutex mutex_;
    TimePoint now_;
};

} // namespace deptstats::provider
