#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace meditools::catalog {

enum class ImageFormat { Jpeg, Png };

std::string_view media_type(ImageFormat format);

/// One image under `<root>/<Condition Name>/<type>[-<n>].<ext>`.
struct ImageEntry {
    std::string path; // relative to the catalog root, '/'-separated
    std::string condition_name;
    std::string condition_type;
    ImageFormat format = ImageFormat::Jpeg;

    bool operator==(const ImageEntry&) const = default;
};

struct ConditionRef {
    std::string condition_name;
    std::string condition_type;

    bool operator==(const ConditionRef&) const = default;
};

/// Recovers the condition from a catalog-relative path: the parent directory
/// names the condition, the filename stem minus a trailing numeric index
/// (`-3`, `_3`, ` 3` or bare digits) names its type.
/// Throws Error(MalformedPath).
ConditionRef condition_from_path(const std::string& relative_path);

/// Immutable snapshot of an image directory tree, sorted by path.
class Catalog {
public:
    /// Throws Error(MissingRoot) or Error(EmptyCatalog).
    static Catalog scan(const std::filesystem::path& root);

    const std::filesystem::path& root() const { return root_; }
    const std::vector<ImageEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }

    /// Uniform draw. Throws Error(EmptyCatalog).
    const ImageEntry& sample(std::mt19937_64& rng) const;

    /// Raw file bytes of an entry. Throws Error(MissingFile).
    std::string read(const ImageEntry& entry) const;

    const ImageEntry* find(const std::string& relative_path) const;

    bool operator==(const Catalog&) const = default;

private:
    std::filesystem::path root_;
    std::vector<ImageEntry> entries_;
};

} // namespace meditools::catalog
