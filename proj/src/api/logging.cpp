#include "meditools/api/logging.hpp"

#include <spdlog/details/log_msg.h>
#include <spdlog/sinks/base_sink.h>
#include <spdlog/sinks/stdout_color_sinks.h>

#include <mutex>

namespace meditools::api {

namespace {

class ScrubbingSink : public spdlog::sinks::base_sink<std::mutex> {
public:
    ScrubbingSink(spdlog::sink_ptr inner, std::shared_ptr<const SecretScrubber> scrubber)
        : inner_(std::move(inner)), scrubber_(std::move(scrubber))
    {
    }

protected:
    void sink_it_(const spdlog::details::log_msg& msg) override
    {
        const std::string clean = scrubber_->scrub(std::string(msg.payload.data(), msg.payload.size()));
        spdlog::details::log_msg copy(msg.time, msg.source, msg.logger_name, msg.level, clean);
        copy.thread_id = msg.thread_id;
        inner_->log(copy);
    }

    void flush_() override { inner_->flush(); }

private:
    spdlog::sink_ptr inner_;
    std::shared_ptr<const SecretScrubber> scrubber_;
};

} // namespace

std::shared_ptr<spdlog::logger> make_scrubbed_logger(const std::string& name, spdlog::sink_ptr sink,
                                                     std::shared_ptr<const SecretScrubber> scrubber)
{
    auto wrapped = std::make_shared<ScrubbingSink>(std::move(sink), std::move(scrubber));
    return std::make_shared<spdlog::logger>(name, std::move(wrapped));
}

std::shared_ptr<spdlog::logger> make_console_logger(std::shared_ptr<const SecretScrubber> scrubber)
{
    return make_scrubbed_logger("meditools", std::make_shared<spdlog::sinks::stderr_color_sink_mt>(),
                                std::move(scrubber));
}

} // namespace meditools::api
