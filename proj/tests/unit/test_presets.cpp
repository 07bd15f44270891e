#include <fstream>
#include <sstream>

#include "doctest.h"
#include "mobiq/config.hpp"
#include "mobiq/presets.hpp"

using namespace mobiq;

TEST_CASE("preset listing is sorted and described") {
    const auto list = preset_list();
    REQUIRE(list.size() >= 6);
    for (std::size_t i = 1; i < list.size(); ++i) {
        CHECK(list[i - 1].name < list[i].name);
    }
    for (const auto& p : list) {
        CHECK_FALSE(p.description.empty());
        CHECK_FALSE(p.text.empty());
    }
    const auto listing = format_preset_listing();
    for (const auto& p : list) {
        CHECK(listing.find(std::string(p.name)) != std::string::npos);
    }
}

TEST_CASE("find_preset resolves known names only") {
    CHECK(find_preset("fig3") != nullptr);
    CHECK(find_preset("fig8") != nullptr);
    CHECK(find_preset("zzz") == nullptr);
    CHECK(find_preset("") == nullptr);
}

TEST_CASE("every preset parses and validates") {
    for (const auto& p : preset_list()) {
        CAPTURE(p.name);
        ExperimentConfig cfg;
        CHECK_NOTHROW(cfg = parse_config(std::string(p.text)));
        CHECK_NOTHROW(validate_config(cfg));
    }
}

TEST_CASE("embedded presets mirror the files they were generated from") {
    for (const auto& p : preset_list()) {
        CAPTURE(p.name);
        const std::string path =
            std::string(MOBIQ_SOURCE_DIR) + "/presets/" + std::string(p.name) + ".ini";
        std::ifstream in(path, std::ios::binary);
        REQUIRE(in);
        std::ostringstream buf;
        buf << in.rdbuf();
        CHECK(buf.str() == p.text);
    }
}
