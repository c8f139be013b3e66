#pragma once

#include "meditools/api/errors.hpp"

#include <spdlog/logger.h>
#include <spdlog/sinks/sink.h>

#include <memory>
#include <string>

namespace meditools::api {

/// Logger whose every line is scrubbed of secrets before reaching `sink`.
std::shared_ptr<spdlog::logger> make_scrubbed_logger(const std::string& name, spdlog::sink_ptr sink,
                                                     std::shared_ptr<const SecretScrubber> scrubber);

/// Scrubbed logger writing to stderr.
std::shared_ptr<spdlog::logger> make_console_logger(std::shared_ptr<const SecretScrubber> scrubber);

} // namespace meditools::api
