#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tsqa {

enum class TimeUnit { minute, hour, day, week, month, year };

// Fineness rank: minute < hour < day < week < month < year.
int unit_rank(TimeUnit u);

// Fixed span used for lookback arithmetic. Calendar-aware period
// boundaries live in calendar.hpp; these constants only size windows
// (month = 30 days, year = 365 days).
int64_t unit_seconds(TimeUnit u);

std::string to_string(TimeUnit u);

// Case-insensitive, accepts an optional plural 's' ("days" -> day).
std::optional<TimeUnit> parse_time_unit(std::string_view text);

// Canonical singular lowercase names, finest first.
const std::vector<std::string>& valid_time_units();

}  // namespace tsqa
