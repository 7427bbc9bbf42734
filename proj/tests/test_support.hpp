#pragma once

// Shared builders and independent oracles for the test suites. The oracles
// deliberately re-derive results through a different computation path than
// the library (term-by-term sums, two-pass statistics, linear scans).

#include <cmath>
#include <random>
#include <vector>

#include "tsqa/calendar.hpp"
#include "tsqa/market_store.hpp"

namespace tsqa::testing {

// Monday 2023-01-02 00:00 UTC; a clean week boundary for seasonality tests.
constexpr int64_t kMonday = 1672617600;

inline Candle make_candle(int64_t ts, double open, double high, double low, double close,
                          double volume) {
    return Candle{ts, open, high, low, close, volume};
}

inline Candle flat_candle(int64_t ts, double level, double volume = 1.0) {
    return make_candle(ts, level, level, level, level, volume);
}

struct SeriesBuilder {
    InstrumentKey key{"BTC", "USDT", "BINANCE"};
    int64_t interval = 3600;
    int64_t start = kMonday;

    template <typename PriceFn, typename VolumeFn>
    CandleSeries build(size_t n, PriceFn price, VolumeFn volume) const {
        CandleSeries series;
        series.key = key;
        series.candle_interval = interval;
        for (size_t i = 0; i < n; ++i) {
            const int64_t ts = start + static_cast<int64_t>(i) * interval;
            const double p = price(i);
            Candle c = flat_candle(ts, p, volume(i));
            series.candles.push_back(c);
        }
        return series;
    }
};

// Random OHLCV series with genuine high/low ranges.
inline CandleSeries random_series(std::mt19937_64& rng, const InstrumentKey& key, size_t n,
                                  int64_t interval = 3600, int64_t start = kMonday) {
    std::uniform_real_distribution<double> range(0.0, 0.05);
    std::normal_distribution<double> step(0.0, 0.01);
    CandleSeries series;
    series.key = key;
    series.candle_interval = interval;
    double level = 100.0;
    for (size_t i = 0; i < n; ++i) {
        const double open = level;
        level = std::max(1.0, level * (1.0 + step(rng)));
        const double close = level;
        const double high = std::max(open, close) * (1.0 + range(rng));
        const double low = std::min(open, close) / (1.0 + range(rng));
        std::uniform_real_distribution<double> vol(0.0, 1000.0);
        series.candles.push_back(make_candle(start + static_cast<int64_t>(i) * interval, open,
                                             high, low, close, vol(rng)));
    }
    return series;
}

// --------------------------------------------------------------------------
// Oracles
// --------------------------------------------------------------------------

// Independent Parkinson evaluation: per-term list, then an explicit sum.
inline double parkinson_oracle(const std::vector<Candle>& candles) {
    std::vector<double> terms;
    for (const auto& c : candles) {
        const double r = std::log(c.high / c.low);
        terms.push_back(r * r);
    }
    double sum = 0.0;
    for (const double t : terms) sum += t;
    const double n = static_cast<double>(terms.size());
    return 100.0 * std::sqrt(sum / (4.0 * n * std::log(2.0)));
}

// Textbook two-pass Pearson: means first, then deviation products.
inline double pearson_oracle(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = x.size();
    double mean_x = 0.0, mean_y = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mean_x += x[i];
        mean_y += y[i];
    }
    mean_x /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mean_x) * (y[i] - mean_y);
        sxx += (x[i] - mean_x) * (x[i] - mean_x);
        syy += (y[i] - mean_y) * (y[i] - mean_y);
    }
    return sxy / std::sqrt(sxx * syy);
}

// Brute-force window filter: linear scan over all candles.
inline std::vector<Candle> window_oracle(const CandleSeries& series, int64_t lookback_seconds,
                                         int64_t as_of) {
    std::vector<Candle> out;
    for (const auto& c : series.candles)
        if (c.timestamp > as_of - lookback_seconds && c.timestamp <= as_of) out.push_back(c);
    return out;
}

}  // namespace tsqa::testing
