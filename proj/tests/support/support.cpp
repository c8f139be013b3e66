#include "support.hpp"

#include <cstring>

namespace support {

std::filesystem::path fixture_dir()
{
    return MEDITOOLS_FIXTURE_DIR;
}

std::filesystem::path data_dir()
{
    return MEDITOOLS_DATA_DIR;
}

TempDir::TempDir()
{
    static std::mt19937_64 rng{std::random_device{}()};
    path_ = std::filesystem::temp_directory_path() / ("meditools-test-" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
}

TempDir::~TempDir()
{
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

std::string make_wav(double seconds, int sample_rate)
{
    const auto samples = static_cast<std::uint32_t>(seconds * sample_rate);
    const std::uint32_t data_bytes = samples * 2;
    std::string out;
    auto u32 = [&](std::uint32_t v) {
        for (int i = 0; i < 4; ++i)
            out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    };
    auto u16 = [&](std::uint16_t v) {
        out.push_back(static_cast<char>(v & 0xFF));
        out.push_back(static_cast<char>(v >> 8));
    };
    out += "RIFF";
    u32(36 + data_bytes);
    out += "WAVEfmt ";
    u32(16);
    u16(1);
    u16(1);
    u32(static_cast<std::uint32_t>(sample_rate));
    u32(static_cast<std::uint32_t>(sample_rate) * 2);
    u16(2);
    u16(16);
    out += "data";
    u32(data_bytes);
    out.append(data_bytes, '\0');
    return out;
}

meditools::llm::MockProvider::Responder scripted_responder()
{
    return &meditools::llm::MockProvider::scripted;
}

std::string random_phrase(std::mt19937_64& rng, int max_tokens)
{
    static const std::vector<std::string> kWords{
        "bullous", "disease", "psoriasis", "eczema", "atopic", "dermatitis", "acne", "vulgaris", "rosacea",
        "melanoma", "nevi", "moles", "skin", "cancer", "lichen", "planus", "tinea", "corporis", "urticaria",
        "Pemphigus", "VULGARIS", "Éczéma", "Ökzem", "ΣΊΣΥΦΟΣ", "σίσυφος", "straße", "STRASSE", "naïve", "café",
        "x1", "b12", "2024", "a", "ab", "abc"};
    static const std::vector<std::string> kSeparators{" ", "  ", "-", ", ", "/", "_", ".", "\t", " (", ") "};
    std::uniform_int_distribution<int> count(0, max_tokens);
    std::uniform_int_distribution<std::size_t> word(0, kWords.size() - 1);
    std::uniform_int_distribution<std::size_t> sep(0, kSeparators.size() - 1);
    std::uniform_int_distribution<int> coin(0, 3);
    std::uniform_int_distribution<int> letter('a', 'z');
    std::uniform_int_distribution<int> length(1, 9);

    std::string out;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
        if (i > 0 || coin(rng) == 0)
            out += kSeparators[sep(rng)];
        if (coin(rng) == 0) {
            const int len = length(rng);
            for (int k = 0; k < len; ++k)
                out.push_back(static_cast<char>(letter(rng)));
        } else {
            out += kWords[word(rng)];
        }
    }
    return out;
}

} // namespace support
