#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tsqa/time_unit.hpp"

namespace tsqa {

// One OHLCV bar. Timestamp is the bar's open time, UTC epoch seconds.
struct Candle {
    int64_t timestamp = 0;
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;
    double volume = 0.0;

    // Throws data_error when OHLC ordering or positivity is violated.
    void validate() const;

    bool operator==(const Candle&) const = default;
};

// (base, quote, exchange) uniquely identifies a series. Normalized to
// uppercase on construction.
struct InstrumentKey {
    std::string base_token;
    std::string quote_token;
    std::string exchange;

    InstrumentKey() = default;
    InstrumentKey(std::string base, std::string quote, std::string venue);

    std::string label() const;  // "BTC/USDT@BINANCE"

    bool operator==(const InstrumentKey&) const = default;
    auto operator<=>(const InstrumentKey&) const = default;
};

struct CandleSeries {
    InstrumentKey key;
    int64_t candle_interval = 0;  // seconds per bar
    std::vector<Candle> candles;  // strictly increasing, gapless timestamps
    std::vector<int64_t> filled_timestamps;  // bars synthesized by forward-fill

    // Checks interval positivity, per-candle invariants, strict ordering and
    // exact spacing. Throws data_error naming the first offender.
    void validate() const;

    bool empty() const { return candles.empty(); }
    size_t size() const { return candles.size(); }
    int64_t first_timestamp() const;
    int64_t last_timestamp() const;

    bool operator==(const CandleSeries&) const = default;
};

// Lookback plus the optional seasonality parameters; mirrors the common
// tool-parameter block (time_interval, time_unit, period_unit,
// granularity_unit, threshold_percent).
struct WindowSpec {
    int64_t time_interval = 1;
    TimeUnit time_unit = TimeUnit::day;
    std::optional<TimeUnit> period_unit;
    std::optional<TimeUnit> granularity_unit;
    std::optional<double> threshold_percent;

    int64_t lookback_seconds() const;

    // granularity strictly finer than period; period no longer than the
    // lookback; threshold non-negative; interval positive.
    void validate() const;
};

}  // namespace tsqa
