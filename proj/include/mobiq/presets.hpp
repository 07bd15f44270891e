#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mobiq {

namespace detail {
struct PresetEntry {
    std::string_view name;
    std::string_view text;
};
extern const PresetEntry kPresets[];
extern const std::size_t kPresetCount;
}  // namespace detail

struct Preset {
    std::string_view name;
    std::string_view description;  // first comment line of the file
    std::string_view text;
};

// Embedded copies of the presets/ directory, sorted by name.
std::vector<Preset> preset_list();

// nullptr when the name is unknown.
const Preset* find_preset(std::string_view name);

// One "name - description" line per preset.
std::string format_preset_listing();

}  // namespace mobiq
