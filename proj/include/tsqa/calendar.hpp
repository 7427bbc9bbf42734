#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tsqa/time_unit.hpp"

namespace tsqa {

// All calendar math is UTC. Epoch values are seconds since 1970-01-01T00:00:00Z.

struct CivilTime {
    int year;
    unsigned month;   // 1..12
    unsigned day;     // 1..31
    unsigned hour;    // 0..23
    unsigned minute;  // 0..59
    unsigned second;  // 0..59
    unsigned weekday; // 0 = Monday .. 6 = Sunday
};

CivilTime civil_from_epoch(int64_t epoch_seconds);
int64_t epoch_from_civil(int year, unsigned month, unsigned day,
                         unsigned hour = 0, unsigned minute = 0, unsigned second = 0);

// "2024-03-05 14:00 UTC"
std::string format_utc(int64_t epoch_seconds);

// Start of the calendar period containing ts: hour/day floor, week -> Monday
// 00:00, month -> first of month, year -> Jan 1.
int64_t period_start(int64_t ts, TimeUnit unit);
int64_t period_next(int64_t period_start_ts, TimeUnit unit);

// The seasonality tools bucket candles by a calendar component of
// granularity_unit inside one period_unit span. Supported pairs and labels:
//   (week, day)   -> 7 buckets,  "Monday" .. "Sunday"
//   (day, hour)   -> 24 buckets, "00:00 UTC" .. "23:00 UTC"
//   (year, month) -> 12 buckets, "January" .. "December"
//   (month, day)  -> 31 buckets, "Day 01" .. "Day 31"
// Anything else raises a data error naming the pair.
struct BucketScheme {
    TimeUnit period_unit;
    TimeUnit granularity_unit;

    int bucket_count() const;
    int bucket_index(int64_t ts) const;
    std::string bucket_label(int index) const;
    // Start timestamp of bucket `index` inside the period beginning at
    // period_start_ts.
    int64_t bucket_start(int64_t period_start_ts, int index) const;
};

BucketScheme make_bucket_scheme(TimeUnit period_unit, TimeUnit granularity_unit);

}  // namespace tsqa
