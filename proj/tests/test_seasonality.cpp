#include <random>

#include "doctest.h"

#include "tsqa/analytics.hpp"
#include "tsqa/calendar.hpp"
#include "tsqa/error.hpp"
#include "test_support.hpp"

using namespace tsqa;
using namespace tsqa::testing;

namespace {

const InstrumentKey kBtc{"BTC", "USDT", "BINANCE"};

// Daily series spanning `weeks` complete calendar weeks starting at kMonday.
// volume_of(weekday 0..6, week) supplies volumes.
template <typename VolumeFn>
MarketStore weekly_store(int weeks, VolumeFn volume_of) {
    CandleSeries series;
    series.key = kBtc;
    series.candle_interval = 86400;
    for (int w = 0; w < weeks; ++w)
        for (int d = 0; d < 7; ++d) {
            const int64_t ts = kMonday + (int64_t(w) * 7 + d) * 86400;
            series.candles.push_back(flat_candle(ts, 100.0, volume_of(d, w)));
        }
    MarketStore store;
    store.add_series(std::move(series));
    return store;
}

WindowSpec year_window() { return WindowSpec{1, TimeUnit::year}; }

analytics::SeasonalityQuery weekday_query(double threshold = 5.0) {
    return {TimeUnit::week, TimeUnit::day, threshold};
}

int64_t last_ts(const MarketStore& store) { return store.at(kBtc).last_timestamp(); }

}  // namespace

TEST_CASE("peak: uniform volume yields nothing above threshold") {
    auto store = weekly_store(52, [](int, int) { return 10.0; });
    const auto labels = analytics::peak_traded_volume(store, kBtc, year_window(), weekday_query(),
                                                      last_ts(store));
    CHECK(labels.empty());
}

TEST_CASE("peak: Monday volume tripled across a year singles out Monday") {
    auto store = weekly_store(52, [](int d, int) { return d == 0 ? 30.0 : 10.0; });
    const auto labels = analytics::peak_traded_volume(store, kBtc, year_window(), weekday_query(),
                                                      last_ts(store));
    // hand check: Monday share 30/90 = 33.33%, uniform 14.29%, bound 15%
    CHECK(labels == std::vector<std::string>{"Monday"});
}

TEST_CASE("peak: two planted spikes come back ordered by share") {
    auto store = weekly_store(52, [](int d, int) {
        if (d == 0) return 50.0;  // Monday
        if (d == 4) return 30.0;  // Friday
        return 10.0;
    });
    const auto labels = analytics::peak_traded_volume(store, kBtc, year_window(), weekday_query(),
                                                      last_ts(store));
    CHECK(labels == std::vector<std::string>{"Monday", "Friday"});
}

TEST_CASE("lowest: uniform yields nothing; a starved Sunday is found") {
    auto uniform = weekly_store(52, [](int, int) { return 10.0; });
    CHECK(analytics::lowest_traded_volume(uniform, kBtc, year_window(), weekday_query(),
                                          last_ts(uniform))
              .empty());

    auto store = weekly_store(52, [](int d, int) { return d == 6 ? 1.0 : 10.0; });
    const auto labels = analytics::lowest_traded_volume(store, kBtc, year_window(),
                                                        weekday_query(), last_ts(store));
    CHECK(labels == std::vector<std::string>{"Sunday"});
}

TEST_CASE("lowest: threshold zero returns every at-or-below-uniform bucket, ascending") {
    auto store = weekly_store(10, [](int d, int) { return d == 0 ? 20.0 : 10.0; });
    const auto labels = analytics::lowest_traded_volume(store, kBtc, year_window(),
                                                        weekday_query(0.0), last_ts(store));
    // all six non-Monday buckets sit below uniform; ties keep weekday order
    CHECK(labels.size() == 6);
    CHECK(std::find(labels.begin(), labels.end(), "Monday") == labels.end());
}

TEST_CASE("seasonality outputs are subsets of the bucket set and monotone in the threshold") {
    std::mt19937_64 rng(40);
    std::uniform_real_distribution<double> vol(1.0, 100.0);
    const std::vector<std::string> weekdays{"Monday", "Tuesday", "Wednesday", "Thursday",
                                            "Friday", "Saturday", "Sunday"};
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> base(7);
        for (auto& v : base) v = vol(rng);
        auto store = weekly_store(8, [&](int d, int) { return base[size_t(d)]; });
        std::vector<std::string> previous_peak;
        std::vector<std::string> previous_low;
        bool first = true;
        for (const double t : {0.0, 5.0, 10.0, 25.0, 50.0}) {
            const auto peak = analytics::peak_traded_volume(store, kBtc, year_window(),
                                                            weekday_query(t), last_ts(store));
            const auto low = analytics::lowest_traded_volume(store, kBtc, year_window(),
                                                             weekday_query(t), last_ts(store));
            for (const auto& label : peak)
                CHECK(std::find(weekdays.begin(), weekdays.end(), label) != weekdays.end());
            if (!first) {
                for (const auto& label : peak)
                    CHECK(std::find(previous_peak.begin(), previous_peak.end(), label) !=
                          previous_peak.end());
                for (const auto& label : low)
                    CHECK(std::find(previous_low.begin(), previous_low.end(), label) !=
                          previous_low.end());
            }
            if (t > 0.0) {  // peak and lowest are disjoint for positive thresholds
                for (const auto& label : peak)
                    CHECK(std::find(low.begin(), low.end(), label) == low.end());
            }
            previous_peak = peak;
            previous_low = low;
            first = false;
        }
    }
}

TEST_CASE("round_the_clock_pattern equals its two components for random inputs") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> vol(1.0, 100.0);
    std::uniform_real_distribution<double> threshold(0.0, 30.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> base(7);
        for (auto& v : base) v = vol(rng);
        auto store = weekly_store(6, [&](int d, int w) { return base[size_t(d)] + w; });
        const auto q = weekday_query(threshold(rng));
        const auto combined =
            analytics::round_the_clock_pattern(store, kBtc, year_window(), q, last_ts(store));
        CHECK(combined.first ==
              analytics::peak_traded_volume(store, kBtc, year_window(), q, last_ts(store)));
        CHECK(combined.second ==
              analytics::lowest_traded_volume(store, kBtc, year_window(), q, last_ts(store)));
    }
}

TEST_CASE("hour-of-day buckets work over a day period") {
    CandleSeries series;
    series.key = kBtc;
    series.candle_interval = 3600;
    for (int day = 0; day < 14; ++day)
        for (int hour = 0; hour < 24; ++hour) {
            const int64_t ts = kMonday + (int64_t(day) * 24 + hour) * 3600;
            series.candles.push_back(flat_candle(ts, 100.0, hour == 14 ? 50.0 : 10.0));
        }
    MarketStore store;
    store.add_series(std::move(series));
    analytics::SeasonalityQuery q{TimeUnit::day, TimeUnit::hour, 5.0};
    const auto labels = analytics::peak_traded_volume(store, kBtc, WindowSpec{1, TimeUnit::month},
                                                      q, last_ts(store));
    CHECK(labels == std::vector<std::string>{"14:00 UTC"});
}

TEST_CASE("no complete period raises") {
    auto store = weekly_store(1, [](int, int) { return 10.0; });
    // clip the window to three days: the only week is incomplete
    CHECK_THROWS_WITH_AS(analytics::peak_traded_volume(store, kBtc, WindowSpec{3, TimeUnit::day},
                                                       weekday_query(), last_ts(store)),
                         doctest::Contains("no complete"), Error);
}

TEST_CASE("unsupported unit pair raises") {
    auto store = weekly_store(4, [](int, int) { return 10.0; });
    analytics::SeasonalityQuery q{TimeUnit::year, TimeUnit::minute, 5.0};
    CHECK_THROWS_WITH_AS(
        analytics::peak_traded_volume(store, kBtc, year_window(), q, last_ts(store)),
        doctest::Contains("unsupported period/granularity"), Error);
}

TEST_CASE("candle interval coarser than the granularity raises") {
    auto store = weekly_store(4, [](int, int) { return 10.0; });  // daily candles
    analytics::SeasonalityQuery q{TimeUnit::day, TimeUnit::hour, 5.0};
    CHECK_THROWS_WITH_AS(
        analytics::peak_traded_volume(store, kBtc, year_window(), q, last_ts(store)),
        doctest::Contains("coarser than granularity"), Error);
}

TEST_CASE("calendar helpers: civil breakdown and period boundaries") {
    // kMonday is 2023-01-02 00:00 UTC
    const CivilTime c = civil_from_epoch(kMonday);
    CHECK(c.year == 2023);
    CHECK(c.month == 1);
    CHECK(c.day == 2);
    CHECK(c.hour == 0);
    CHECK(c.weekday == 0);  // Monday

    CHECK(epoch_from_civil(2023, 1, 2) == kMonday);
    CHECK(format_utc(kMonday) == "2023-01-02 00:00 UTC");

    // week periods snap back to Monday even across a year boundary
    const int64_t new_year = epoch_from_civil(2023, 1, 1, 15, 30);  // a Sunday
    CHECK(period_start(new_year, TimeUnit::week) == epoch_from_civil(2022, 12, 26));
    CHECK(period_start(new_year, TimeUnit::year) == epoch_from_civil(2023, 1, 1));
    CHECK(period_start(new_year, TimeUnit::month) == epoch_from_civil(2023, 1, 1));
    CHECK(period_start(new_year, TimeUnit::day) == epoch_from_civil(2023, 1, 1));
    CHECK(period_start(new_year, TimeUnit::hour) == epoch_from_civil(2023, 1, 1, 15));

    // month arithmetic handles December -> January and leap February
    CHECK(period_next(epoch_from_civil(2023, 12, 1), TimeUnit::month) ==
          epoch_from_civil(2024, 1, 1));
    CHECK(period_next(epoch_from_civil(2024, 2, 1), TimeUnit::month) ==
          epoch_from_civil(2024, 3, 1));  // 29 days in between
    CHECK(period_next(epoch_from_civil(2024, 2, 1), TimeUnit::month) -
              epoch_from_civil(2024, 2, 1) ==
          29 * 86400);
    CHECK(period_next(epoch_from_civil(2024, 1, 1), TimeUnit::year) ==
          epoch_from_civil(2025, 1, 1));
}

TEST_CASE("month-of-year buckets over daily data find a planted December spike") {
    // two complete calendar years of daily bars, 2023 + leap 2024
    CandleSeries series;
    series.key = kBtc;
    series.candle_interval = 86400;
    const int64_t start = epoch_from_civil(2023, 1, 1);
    const int64_t end = epoch_from_civil(2025, 1, 1);
    for (int64_t ts = start; ts < end; ts += 86400) {
        const CivilTime c = civil_from_epoch(ts);
        series.candles.push_back(flat_candle(ts, 100.0, c.month == 12 ? 30.0 : 10.0));
    }
    CHECK(series.size() == 731);  // 365 + 366
    MarketStore store;
    store.add_series(std::move(series));

    analytics::SeasonalityQuery q{TimeUnit::year, TimeUnit::month, 5.0};
    const auto labels = analytics::peak_traded_volume(
        store, kBtc, WindowSpec{3, TimeUnit::year}, q, last_ts(store));
    CHECK(labels == std::vector<std::string>{"December"});

    const auto lows = analytics::lowest_traded_volume(
        store, kBtc, WindowSpec{3, TimeUnit::year}, q, last_ts(store));
    // every other month sits below the uniform share
    CHECK(lows.size() == 11);
    CHECK(std::find(lows.begin(), lows.end(), "December") == lows.end());
}

// ---------------------------------------------------------------------------
// abnormal_deviations
// ---------------------------------------------------------------------------

TEST_CASE("deviations: last period identical to the historical mean is quiet") {
    auto store = weekly_store(10, [](int, int) { return 10.0; });
    const auto report = analytics::abnormal_deviations(store, kBtc, year_window(),
                                                       weekday_query(50.0), last_ts(store));
    CHECK(report.timestamps.empty());
    CHECK(report.deviation_percents.empty());
}

TEST_CASE("deviations: doubled last Monday reports +100 percent") {
    auto store = weekly_store(10, [](int d, int w) {
        if (d == 0 && w == 9) return 20.0;  // final Monday doubled
        return d == 0 ? 10.0 : 5.0;
    });
    const auto report = analytics::abnormal_deviations(store, kBtc, year_window(),
                                                       weekday_query(50.0), last_ts(store));
    REQUIRE(report.timestamps.size() == 1);
    REQUIRE(report.deviation_percents.size() == 1);
    CHECK(report.deviation_percents[0] == doctest::Approx(100.0).epsilon(1e-9));
    // the timestamp is the Monday opening the final week
    CHECK(report.timestamps[0] == kMonday + 9 * 7 * 86400);
}

TEST_CASE("deviations: threshold zero returns every bucket of the last period") {
    auto store = weekly_store(6, [](int d, int w) { return 10.0 + d + (w == 5 ? 1.0 : 0.0); });
    const auto report = analytics::abnormal_deviations(store, kBtc, year_window(),
                                                       weekday_query(0.0), last_ts(store));
    CHECK(report.timestamps.size() == 7);
    CHECK(report.deviation_percents.size() == 7);
    for (const double d : report.deviation_percents) CHECK(std::abs(d) >= 0.0);
}

TEST_CASE("deviations: ordering is by absolute deviation, lists stay parallel") {
    auto store = weekly_store(8, [](int d, int w) {
        if (w != 7) return 10.0;
        if (d == 2) return 40.0;   // +300%
        if (d == 5) return 25.0;   // +150%
        if (d == 6) return 2.0;    // -80%
        return 10.0;
    });
    const auto report = analytics::abnormal_deviations(store, kBtc, year_window(),
                                                       weekday_query(50.0), last_ts(store));
    REQUIRE(report.timestamps.size() == 3);
    CHECK(report.deviation_percents[0] == doctest::Approx(300.0));
    CHECK(report.deviation_percents[1] == doctest::Approx(150.0));
    CHECK(report.deviation_percents[2] == doctest::Approx(-80.0));
    const int64_t final_week = kMonday + 7 * 7 * 86400;
    CHECK(report.timestamps[0] == final_week + 2 * 86400);
    CHECK(report.timestamps[1] == final_week + 5 * 86400);
    CHECK(report.timestamps[2] == final_week + 6 * 86400);
    for (const double d : report.deviation_percents) CHECK(std::abs(d) >= 50.0);
}

TEST_CASE("deviations: a single complete period is insufficient history") {
    auto store = weekly_store(1, [](int, int) { return 10.0; });
    CHECK_THROWS_WITH_AS(analytics::abnormal_deviations(store, kBtc, year_window(),
                                                        weekday_query(), last_ts(store)),
                         doctest::Contains("at least 2 complete"), Error);
}

TEST_CASE("deviations: zero historical mean excludes the bucket with a flag") {
    auto store = weekly_store(5, [](int d, int w) {
        if (d == 3) return w == 4 ? 10.0 : 0.0;  // Thursday silent until the last week
        return 10.0;
    });
    const auto report = analytics::abnormal_deviations(store, kBtc, year_window(),
                                                       weekday_query(50.0), last_ts(store));
    CHECK(report.excluded_buckets == std::vector<std::string>{"Thursday"});
    CHECK(report.timestamps.empty());
}
