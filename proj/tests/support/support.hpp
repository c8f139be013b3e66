#pragma once

#include "meditools/error.hpp"
#include "meditools/llm/mock_provider.hpp"
#include "meditools/llm/types.hpp"

#include <filesystem>
#include <optional>
#include <random>
#include <string>

namespace support {

std::filesystem::path fixture_dir();
std::filesystem::path data_dir();

/// Self-deleting scratch directory.
class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

/// 16-bit mono PCM WAV of silence.
std::string make_wav(double seconds, int sample_rate = 16000);

/// Scripted responder used across derm and API tests: canned text per
/// purpose, with the patient echoing the question.
meditools::llm::MockProvider::Responder scripted_responder();

/// Random string of tokens drawn from a mixed vocabulary (ASCII words,
/// accented and Greek letters, digits) with assorted separators.
std::string random_phrase(std::mt19937_64& rng, int max_tokens = 5);

/// Code of the meditools::Error thrown by f, or nullopt when it returns.
template <typename F>
std::optional<meditools::ErrorCode> error_code_of(F&& f)
{
    try {
        f();
    } catch (const meditools::Error& e) {
        return e.code();
    }
    return std::nullopt;
}

} // namespace support
