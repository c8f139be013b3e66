#pragma once

#include <chrono>
#include <functional>
#include <mutex>

namespace meditools::net {

/// Spaces calls at least `1/rate` apart across all threads. Clock and sleep
/// are injectable so tests never wait on wall time.
class RateLimiter {
public:
    using Clock = std::chrono::steady_clock;
    using Now = std::function<Clock::time_point()>;
    using Sleep = std::function<void(Clock::duration)>;

    explicit RateLimiter(double requests_per_second, Now now = Clock::now, Sleep sleep = default_sleep);

    /// Blocks until the next slot; returns how long it waited.
    Clock::duration acquire();

    Clock::duration interval() const { return interval_; }

private:
    static void default_sleep(Clock::duration d);

    Clock::duration interval_;
    Now now_;
    Sleep sleep_;
    std::mutex mutex_;
    Clock::time_point next_slot_{};
    bool first_ = true;
};

} // namespace meditools::net
