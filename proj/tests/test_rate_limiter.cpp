#include <gtest/gtest.h>

#include <random>
#include <thread>

#include "deptstats/provider/rate_limiter.hpp"

using namespace deptstats::provider;
using std::chrono::milliseconds;

namespace {

// Every run of max+1 consecutive grants must span at least one full window.
::testing::AssertionResult within_budget(const std::vector<TimePoint> &trace, std::size_t max, milliseconds window) {
    for (std::size_t i = 1; i < trace.size(); ++i)
        if (trace[i] < trace[i - 1])
            return ::testing::AssertionFailure() << "grant " << i << " precedes grant " << i - 1;
    for (std::size_t i = 0; i + max < trace.size(); ++i)
        if (trace[i + max] - trace[i] < window)
            return ::testing::AssertionFailure()
                   << "grants " << i << ".." << i + max << " fall within one window";
    return ::testing::AssertionSuccess();
}

} // namespace

TEST(RateLimiter, BurstIsSpreadAcrossWindows) {
    ManualClock clock;
    RateLimiter limiter(3, milliseconds(1000), clock, true);
    for (int i = 0; i < 7; ++i)
        limiter.acquire();
    const auto trace = limiter.trace();
    ASSERT_EQ(trace.size(), 7u);
    EXPECT_EQ(trace[2] - trace[0], milliseconds(0));
    EXPECT_EQ(trace[3] - trace[0], milliseconds(1000));
    EXPECT_EQ(trace[6] - trace[0], milliseconds(2000));
    EXPECT_TRUE(within_budget(trace, 3, milliseconds(1000)));
}

TEST(RateLimiter, IdleCallerIsNotDelayed) {
    ManualClock clock;
    RateLimiter limiter(2, milliseconds(100), clock, true);
    const auto first = limiter.acquire();
    clock.advance(milliseconds(500));
    const auto second = limiter.acquire();
    EXPECT_EQ(second - first, milliseconds(500));
}

TEST(RateLimiter, RandomArrivalsNeverExceedBudget) {
    std::mt19937_64 rng(42);
    for (int round = 0; round < 200; ++round) {
        const std::size_t max = 1 + rng() % 10;
        const milliseconds window(1 + static_cast<int>(rng() % 2000));
        ManualClock clock;
        RateLimiter limiter(max, window, clock, true);
        for (int i = 0; i < 60; ++i) {
            if (rng() % 3 == 0)
                clock.advance(milliseconds(static_cast<int>(rng() % (window.count() + 1))));
            limiter.acquire();
        }
        ASSERT_TRUE(within_budget(limiter.trace(), max, window)) << "round " << round;
    }
}

TEST(RateLimiter, ConcurrentCallersShareOneBudget) {
    SystemClock clock;
    RateLimiter limiter(4, milliseconds(40), clock, true);
    std::vector<std::thread> threads;
    for (int t = 0; t < 4; ++t)
        threads.emplace_back([&] {
            for (int i = 0; i < 4; ++i)
                limiter.acquire();
        });
    for (auto &thread : threads)
        thread.join();
    const auto trace = limiter.trace();
    ASSERT_EQ(trace.size(), 16u);
    EXPECT_TRUE(within_budget(trace, 4, milliseconds(40)));
}
