#include "mobiq/presets.hpp"

namespace mobiq {
namespace {

std::string_view first_comment_line(std::string_view text) {
    while (!text.empty()) {
        const std::size_t eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) {
            line.remove_prefix(1);
        }
        if (!line.empty() && line.front() == '#') {
            line.remove_prefix(1);
            while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
            while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
                line.remove_suffix(1);
            }
            return line;
        }
        if (!line.empty() && line.front() != '\r') break;  // content before any comment
        if (eol == std::string_view::npos) break;
        text.remove_prefix(eol + 1);
    }
    return {};
}

Preset make(const detail::PresetEntry& entry) {
    return Preset{entry.name, first_comment_line(entry.text), entry.text};
}

}  // namespace

std::vector<Preset> preset_list() {
    std::vector<Preset> out;
    out.reserve(detail::kPresetCount);
    for (std::size_t i = 0; i < detail::kPresetCount; ++i) {
        out.push_back(make(detail::kPresets[i]));
    }
    return out;
}

const Preset* find_preset(std::string_view name) {
    static const std::vector<Preset> all = preset_list();
    for (const auto& p : all) {
        if (p.name == name) return &p;
    }
    return nullptr;
}

std::string format_preset_listing() {
    std::string out;
    for (const auto& p : preset_list()) {
        out += p.name;
        out += " - ";
        out += p.description;
        out += '\n';
    }
    return out;
}

}  // namespace mobiq
