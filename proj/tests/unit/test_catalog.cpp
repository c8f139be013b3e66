#include "support.hpp"

#include "meditools/catalog/catalog.hpp"

#include <doctest.h>

#include <fstream>
#include <map>

using namespace meditools;
using namespace meditools::catalog;
using support::error_code_of;

namespace {

void touch(const std::filesystem::path& p, const std::string& bytes = "x")
{
    std::filesystem::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary) << bytes;
}

} // namespace

TEST_SUITE("catalog")
{
    TEST_CASE("condition recovered from path")
    {
        auto ref = condition_from_path("Bullous Disease/bullous-pemphigoid-1.png");
        CHECK(ref.condition_name == "Bullous Disease");
        CHECK(ref.condition_type == "bullous-pemphigoid");
        CHECK(condition_from_path("Psoriasis/guttate_12.JPG").condition_type == "guttate");
        CHECK(condition_from_path("Psoriasis/plaque 3.jpeg").condition_type == "plaque");
        CHECK(condition_from_path("Psoriasis/plaque3.jpg").condition_type == "plaque");
        CHECK(condition_from_path("Psoriasis\\inverse.png").condition_type == "inverse");
        CHECK(condition_from_path("Group/Eczema/nummular-2.png").condition_name == "Eczema");

        for (const char* bad : {"plaque-1.png", "/abs/Psoriasis/p-1.png", "../Psoriasis/p-1.png",
                                "Psoriasis/notes.txt", "Psoriasis/123.png"})
            CHECK_MESSAGE(error_code_of([&] { condition_from_path(bad); }) == ErrorCode::MalformedPath, bad);
    }

    TEST_CASE("scan of the fixture tree")
    {
        const auto cat = Catalog::scan(support::fixture_dir() / "images");
        CHECK(cat.size() == 8);
        std::map<std::string, int> per_condition;
        for (const auto& e : cat.entries())
            ++per_condition[e.condition_name];
        CHECK(per_condition.size() == 5);
        CHECK(per_condition["Psoriasis"] == 2);
        CHECK(std::is_sorted(cat.entries().begin(), cat.entries().end(),
                             [](const auto& a, const auto& b) { return a.path < b.path; }));

        const auto* entry = cat.find("Eczema/atopic-dermatitis-1.png");
        REQUIRE(entry != nullptr);
        CHECK(entry->format == ImageFormat::Png);
        CHECK(cat.read(*entry).substr(1, 3) == "PNG");
        CHECK(media_type(entry->format) == "image/png");
        CHECK(cat == Catalog::scan(support::fixture_dir() / "images"));
    }

    TEST_CASE("scan errors")
    {
        CHECK(error_code_of([] { Catalog::scan("/definitely/not/here"); }) == ErrorCode::MissingRoot);
        support::TempDir dir;
        touch(dir.path() / "loose.png");
        touch(dir.path() / "Cond" / "readme.md");
        CHECK(error_code_of([&] { Catalog::scan(dir.path()); }) == ErrorCode::EmptyCatalog);
        touch(dir.path() / "Cond" / "type-1.jpg");
        const auto cat = Catalog::scan(dir.path());
        CHECK(cat.size() == 1);
        std::filesystem::remove(dir.path() / "Cond" / "type-1.jpg");
        CHECK(error_code_of([&] { cat.read(cat.entries()[0]); }) == ErrorCode::MissingFile);
    }

    TEST_CASE("sampling is uniform and reproducible")
    {
        const auto cat = Catalog::scan(support::fixture_dir() / "images");
        std::mt19937_64 a(11), b(11);
        for (int i = 0; i < 50; ++i)
            CHECK(cat.sample(a) == cat.sample(b));

        std::map<std::string, int> hits;
        std::mt19937_64 rng(5);
        const int draws = 80000;
        for (int i = 0; i < draws; ++i)
            ++hits[cat.sample(rng).path];
        CHECK(hits.size() == cat.size());
        const double expected = double(draws) / cat.size();
        for (const auto& [path, n] : hits)
            CHECK_MESSAGE(std::abs(n - expected) < 0.05 * expected, path);

        std::mt19937_64 r(1);
        Catalog empty;
        CHECK(error_code_of([&] { empty.sample(r); }) == ErrorCode::EmptyCatalog);
    }
}
