#include "meditools/net/rate_limiter.hpp"

#include <stdexcept>
#include <thread>

namespace meditools::net {

RateLimiter::RateLimiter(double requests_per_second, Now now, Sleep sleep)
    : now_(std::move(now)), sleep_(std::move(sleep))
{
    if (!(requests_per_second > 0.0))
        throw std::invalid_argument("rate must be positive");
    interval_ = std::chrono::duration_cast<Clock::duration>(
        std::chrono::duration<double>(1.0 / requests_per_second));
}

void RateLimiter::default_sleep(Clock::duration d)
{
    std::this_thread::sleep_for(d);
}

RateLimiter::Clock::duration RateLimiter::acquire()
{
    Clock::duration wait{0};
    {
        std::lock_guard lock(mutex_);
        const auto now = now_();
        if (first_ || now >= next_slot_) {
            next_slot_ = now + interval_;
            first_ = false;
        } else {
            wait = next_slot_ - now;
            next_slot_ += interval_;
        }
    }
    if (wait > Clock::duration::zero())
        sleep_(wait);
    return wait;
}

} // namespace meditools::net
