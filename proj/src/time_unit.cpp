#include "tsqa/time_unit.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace tsqa {

namespace {

struct UnitInfo {
    TimeUnit unit;
    const char* name;
    int64_t seconds;
};

constexpr std::array<UnitInfo, 6> kUnits{{
    {TimeUnit::minute, "minute", 60},
    {TimeUnit::hour, "hour", 3600},
    {TimeUnit::day, "day", 86400},
    {TimeUnit::week, "week", 604800},
    {TimeUnit::month, "month", 2592000},   // 30 days
    {TimeUnit::year, "year", 31536000},    // 365 days
}};

}  // namespace

int unit_rank(TimeUnit u) { return static_cast<int>(u); }

int64_t unit_seconds(TimeUnit u) { return kUnits[static_cast<size_t>(u)].seconds; }

std::string to_string(TimeUnit u) { return kUnits[static_cast<size_t>(u)].name; }

std::optional<TimeUnit> parse_time_unit(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower.size() > 1 && lower.back() == 's') lower.pop_back();
    for (const auto& info : kUnits) {
        if (lower == info.name) return info.unit;
    }
    return std::nullopt;
}

const std::vector<std::string>& valid_time_units() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& info : kUnits) v.emplace_back(info.name);
        return v;
    }();
    return names;
}

}  // namespace tsqa
