#include "meditools/llm/prompt_template.hpp"

#include "meditools/error.hpp"

#include <cctype>
#include <fstream>
#include <functional>
#include <sstream>

namespace meditools::llm {

namespace {

bool ident_start(char c)
{
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// Walks the body once, reporting literal runs and placeholder names.
void scan(const std::string& body, const std::function<void(std::string_view)>& on_text,
          const std::function<void(const std::string&)>& on_key)
{
    std::size_t i = 0;
    while (i < body.size()) {
        const char c = body[i];
        if ((c == '{' || c == '}') && i + 1 < body.size() && body[i + 1] == c) {
            on_text(std::string_view(&body[i], 1));
            i += 2;
            continue;
        }
        if (c == '{' && i + 1 < body.size() && ident_start(body[i + 1])) {
            std::size_t j = i + 1;
            while (j < body.size() && ident_char(body[j]))
                ++j;
            if (j < body.size() && body[j] == '}') {
                on_key(body.substr(i + 1, j - i - 1));
                i = j + 1;
                continue;
            }
        }
        on_text(std::string_view(&body[i], 1));
        ++i;
    }
}

} // namespace

PromptTemplate::PromptTemplate(std::string body) : body_(std::move(body))
{
    scan(body_, [](std::string_view) {}, [this](const std::string& key) { keys_.insert(key); });
}

PromptTemplate PromptTemplate::load(const std::filesystem::path& file)
{
    std::ifstream in(file, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::MissingFile, "cannot read prompt template " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return PromptTemplate(buf.str());
}

std::string PromptTemplate::render(const std::map<std::string, std::string>& bindings) const
{
    std::string out;
    out.reserve(body_.size());
    scan(
        body_, [&](std::string_view text) { out += text; },
        [&](const std::string& key) {
            auto it = bindings.find(key);
            if (it == bindings.end())
                throw Error(ErrorCode::MissingKey, "template placeholder {" + key + "} is unbound",
                            {{"key", key}});
            out += it->second;
        });
    return out;
}

} // namespace meditools::llm
