#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>

namespace meditools::llm {

/// Text with `{name}` placeholders. Names are [A-Za-z_][A-Za-z0-9_]*;
/// `{{` and `}}` are literal braces. Any other brace is kept verbatim.
class PromptTemplate {
public:
    explicit PromptTemplate(std::string body);

    static PromptTemplate load(const std::filesystem::path& file);

    const std::string& body() const { return body_; }
    const std::set<std::string>& required_keys() const { return keys_; }

    /// Throws Error(MissingKey) naming the first unbound placeholder in body order.
    std::string render(const std::map<std::string, std::string>& bindings) const;

private:
    std::string body_;
    std::set<std::string> keys_;
};

} // namespace meditools::llm
