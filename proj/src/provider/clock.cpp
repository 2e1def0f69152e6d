#include "deptstats/provider/clock.hpp"

#include <thread>

namespace deptstats::provider {

TimePoint SystemClock::now() const {
    return std::chrono::system_clock::now();
}

void SystemClock::sleep_until(TimePoint deadline) {
    std::this_thread::sleep_until(deadline);
}

TimePoint ManualClock::now() const {
    std::lock_guard lock(mutex_);
    return now_;
}

void ManualClock::sleep_until(TimePoint deadline) {
    std::lock_guard lock(mutex_);
    if (deadline > now_)
        now_ = deadline;
}

void ManualClock::advance(std::chrono::milliseconds by) {
    std::lock_guard lock(mutex_);
    now_ += by;
}

} // namespace deptstats::provider
