#include "meditools/catalog/catalog.hpp"

#include "meditools/error.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>

namespace meditools::catalog {

namespace fs = std::filesystem;

namespace {

std::optional<ImageFormat> format_for(const fs::path& file)
{
    std::string ext = file.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == ".jpg" || ext == ".jpeg")
        return ImageFormat::Jpeg;
    if (ext == ".png")
        return ImageFormat::Png;
    return std::nullopt;
}

std::string strip_index(const std::string& stem)
{
    std::size_t end = stem.size();
    while (end > 0 && std::isdigit(static_cast<unsigned char>(stem[end - 1])))
        --end;
    if (end == stem.size())
        return stem;
    if (end > 0 && (stem[end - 1] == '-' || stem[end - 1] == '_' || stem[end - 1] == ' '))
        --end;
    return stem.substr(0, end);
}

} // namespace

std::string_view media_type(ImageFormat format)
{
    return format == ImageFormat::Png ? "image/png" : "image/jpeg";
}

ConditionRef condition_from_path(const std::string& relative_path)
{
    std::string normalized = relative_path;
    std::replace(normalized.begin(), normalized.end(), '\\', '/');
    const fs::path path(normalized);
    if (path.is_absolute())
        throw Error(ErrorCode::MalformedPath, "catalog paths are relative: " + relative_path);

    std::vector<std::string> parts;
    for (const auto& part : path)
        if (!part.empty() && part != ".")
            parts.push_back(part.string());
    if (parts.size() < 2)
        throw Error(ErrorCode::MalformedPath, "image path has no condition directory: " + relative_path);
    if (std::any_of(parts.begin(), parts.end(), [](const auto& p) { return p == ".."; }))
        throw Error(ErrorCode::MalformedPath, "image path escapes the catalog: " + relative_path);

    const fs::path file(parts.back());
    if (!format_for(file))
        throw Error(ErrorCode::MalformedPath, "not a catalog image: " + relative_path);
    ConditionRef ref;
    ref.condition_name = parts[parts.size() - 2];
    ref.condition_type = strip_index(file.stem().string());
    if (ref.condition_type.empty())
        throw Error(ErrorCode::MalformedPath, "image filename carries no type: " + relative_path);
    return ref;
}

Catalog Catalog::scan(const fs::path& root)
{
    std::error_code ec;
    if (!fs::is_directory(root, ec))
        throw Error(ErrorCode::MissingRoot, "image root is not a directory: " + root.string(),
                    {{"root", root.string()}});

    Catalog catalog;
    catalog.root_ = root;
    for (auto it = fs::recursive_directory_iterator(root, fs::directory_options::skip_permission_denied, ec);
         it != fs::recursive_directory_iterator(); it.increment(ec)) {
        if (ec)
            break;
        if (!it->is_regular_file(ec))
            continue;
        const auto format = format_for(it->path());
        if (!format)
            continue;
        const std::string rel = fs::relative(it->path(), root, ec).generic_string();
        if (ec)
            continue;
        ConditionRef ref;
        try {
            ref = condition_from_path(rel);
        } catch (const Error&) {
            continue;
        }
        if (!std::ifstream(it->path(), std::ios::binary))
            continue;
        catalog.entries_.push_back({rel, ref.condition_name, ref.condition_type, *format});
    }

    if (catalog.entries_.empty())
        throw Error(ErrorCode::EmptyCatalog, "no images found under " + root.string(), {{"root", root.string()}});
    std::sort(catalog.entries_.begin(), catalog.entries_.end(),
              [](const ImageEntry& a, const ImageEntry& b) { return a.path < b.path; });
    return catalog;
}

const ImageEntry& Catalog::sample(std::mt19937_64& rng) const
{
    if (entries_.empty())
        throw Error(ErrorCode::EmptyCatalog, "cannot sample from an empty catalog");
    std::uniform_int_distribution<std::size_t> pick(0, entries_.size() - 1);
    return entries_[pick(rng)];
}

std::string Catalog::read(const ImageEntry& entry) const
{
    std::ifstream in(root_ / fs::path(entry.path), std::ios::binary);
    if (!in)
        throw Error(ErrorCode::MissingFile, "image file is missing: " + entry.path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

const ImageEntry* Catalog::find(const std::string& relative_path) const
{
    auto it = std::lower_bound(entries_.begin(), entries_.end(), relative_path,
                               [](const ImageEntry& e, const std::string& p) { return e.path < p; });
    return it != entries_.end() && it->path == relative_path ? &*it : nullptr;
}

} // namespace meditools::catalog
