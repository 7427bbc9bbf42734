#include "tsqa/calendar.hpp"

#include <array>
#include <chrono>
#include <cstdio>

#include "tsqa/error.hpp"

namespace tsqa {

namespace {

namespace chr = std::chrono;

constexpr std::array<const char*, 7> kWeekdayNames{
    "Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday", "Sunday"};

constexpr std::array<const char*, 12> kMonthNames{
    "January", "February", "March",     "April",   "May",      "June",
    "July",    "August",   "September", "October", "November", "December"};

chr::sys_days day_of(int64_t epoch_seconds) {
    return chr::floor<chr::days>(chr::sys_seconds(chr::seconds(epoch_seconds)));
}

}  // namespace

CivilTime civil_from_epoch(int64_t epoch_seconds) {
    const auto sd = day_of(epoch_seconds);
    const chr::year_month_day ymd(sd);
    const chr::weekday wd(sd);
    const int64_t secs_of_day = epoch_seconds - chr::sys_seconds(sd).time_since_epoch().count();
    CivilTime c;
    c.year = static_cast<int>(ymd.year());
    c.month = static_cast<unsigned>(ymd.month());
    c.day = static_cast<unsigned>(ymd.day());
    c.hour = static_cast<unsigned>(secs_of_day / 3600);
    c.minute = static_cast<unsigned>((secs_of_day / 60) % 60);
    c.second = static_cast<unsigned>(secs_of_day % 60);
    c.weekday = wd.iso_encoding() - 1;  // ISO: Mon=1..Sun=7
    return c;
}

int64_t epoch_from_civil(int year, unsigned month, unsigned day,
                         unsigned hour, unsigned minute, unsigned second) {
    const chr::year_month_day ymd{chr::year(year), chr::month(month), chr::day(day)};
    const chr::sys_days sd(ymd);
    return chr::sys_seconds(sd).time_since_epoch().count() +
           int64_t(hour) * 3600 + int64_t(minute) * 60 + int64_t(second);
}

std::string format_utc(int64_t epoch_seconds) {
    const CivilTime c = civil_from_epoch(epoch_seconds);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u %02u:%02u UTC",
                  c.year, c.month, c.day, c.hour, c.minute);
    return buf;
}

int64_t period_start(int64_t ts, TimeUnit unit) {
    switch (unit) {
        case TimeUnit::minute:
            return ts - ((ts % 60) + 60) % 60;
        case TimeUnit::hour:
            return ts - ((ts % 3600) + 3600) % 3600;
        case TimeUnit::day:
            return chr::sys_seconds(day_of(ts)).time_since_epoch().count();
        case TimeUnit::week: {
            const auto sd = day_of(ts);
            const chr::weekday wd(sd);
            const auto monday = sd - chr::days(wd.iso_encoding() - 1);
            return chr::sys_seconds(monday).time_since_epoch().count();
        }
        case TimeUnit::month: {
            const CivilTime c = civil_from_epoch(ts);
            return epoch_from_civil(c.year, c.month, 1);
        }
        case TimeUnit::year: {
            const CivilTime c = civil_from_epoch(ts);
            return epoch_from_civil(c.year, 1, 1);
        }
    }
    throw data_error("period_start: unknown time unit");
}

int64_t period_next(int64_t period_start_ts, TimeUnit unit) {
    switch (unit) {
        case TimeUnit::minute: return period_start_ts + 60;
        case TimeUnit::hour: return period_start_ts + 3600;
        case TimeUnit::day: return period_start_ts + 86400;
        case TimeUnit::week: return period_start_ts + 7 * 86400;
        case TimeUnit::month: {
            const CivilTime c = civil_from_epoch(period_start_ts);
            const unsigned month = c.month == 12 ? 1 : c.month + 1;
            const int year = c.month == 12 ? c.year + 1 : c.year;
            return epoch_from_civil(year, month, 1);
        }
        case TimeUnit::year: {
            const CivilTime c = civil_from_epoch(period_start_ts);
            return epoch_from_civil(c.year + 1, 1, 1);
        }
    }
    throw data_error("period_next: unknown time unit");
}

int BucketScheme::bucket_count() const {
    if (period_unit == TimeUnit::week && granularity_unit == TimeUnit::day) return 7;
    if (period_unit == TimeUnit::day && granularity_unit == TimeUnit::hour) return 24;
    if (period_unit == TimeUnit::year && granularity_unit == TimeUnit::month) return 12;
    if (period_unit == TimeUnit::month && granularity_unit == TimeUnit::day) return 31;
    throw data_error("unsupported period/granularity pair: " + to_string(period_unit) +
                     "/" + to_string(granularity_unit));
}

int BucketScheme::bucket_index(int64_t ts) const {
    const CivilTime c = civil_from_epoch(ts);
    if (period_unit == TimeUnit::week && granularity_unit == TimeUnit::day)
        return static_cast<int>(c.weekday);
    if (period_unit == TimeUnit::day && granularity_unit == TimeUnit::hour)
        return static_cast<int>(c.hour);
    if (period_unit == TimeUnit::year && granularity_unit == TimeUnit::month)
        return static_cast<int>(c.month) - 1;
    if (period_unit == TimeUnit::month && granularity_unit == TimeUnit::day)
        return static_cast<int>(c.day) - 1;
    throw data_error("unsupported period/granularity pair: " + to_string(period_unit) +
                     "/" + to_string(granularity_unit));
}

std::string BucketScheme::bucket_label(int index) const {
    if (index < 0 || index >= bucket_count())
        throw data_error("bucket index out of range: " + std::to_string(index));
    if (period_unit == TimeUnit::week && granularity_unit == TimeUnit::day)
        return kWeekdayNames[static_cast<size_t>(index)];
    if (period_unit == TimeUnit::day && granularity_unit == TimeUnit::hour) {
        char buf[24];
        std::snprintf(buf, sizeof(buf), "%02d:00 UTC", index);
        return buf;
    }
    if (period_unit == TimeUnit::year && granularity_unit == TimeUnit::month)
        return kMonthNames[static_cast<size_t>(index)];
    char buf[24];
    std::snprintf(buf, sizeof(buf), "Day %02d", index + 1);
    return buf;
}

int64_t BucketScheme::bucket_start(int64_t period_start_ts, int index) const {
    if (index < 0 || index >= bucket_count())
        throw data_error("bucket index out of range: " + std::to_string(index));
    if (period_unit == TimeUnit::week && granularity_unit == TimeUnit::day)
        return period_start_ts + int64_t(index) * 86400;
    if (period_unit == TimeUnit::day && granularity_unit == TimeUnit::hour)
        return period_start_ts + int64_t(index) * 3600;
    if (period_unit == TimeUnit::year && granularity_unit == TimeUnit::month) {
        const CivilTime c = civil_from_epoch(period_start_ts);
        return epoch_from_civil(c.year, static_cast<unsigned>(index) + 1, 1);
    }
    return period_start_ts + int64_t(index) * 86400;
}

BucketScheme make_bucket_scheme(TimeUnit period_unit, TimeUnit granularity_unit) {
    BucketScheme scheme{period_unit, granularity_unit};
    scheme.bucket_count();  // validates the pair
    return scheme;
}

}  // namespace tsqa
