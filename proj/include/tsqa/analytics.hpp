#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tsqa/market_store.hpp"

namespace tsqa::analytics {

// ---------------------------------------------------------------------------
// Core estimators
// ---------------------------------------------------------------------------

// Parkinson range volatility over a slice of bars, reported as a percent:
//   100 * sqrt( (1 / (4 n ln 2)) * sum_i ln(high_i / low_i)^2 )
// Requires n >= 2 and low > 0 on every bar.
double parkinson_volatility_percent(std::span<const Candle> slice);

// Pearson r over two aligned samples, n >= 2, both non-constant.
// Single-pass co-moment update; result clamped to [-1, 1].
double pearson(std::span<const double> x, std::span<const double> y);

// ---------------------------------------------------------------------------
// Price / volatility tools
// ---------------------------------------------------------------------------

double price(const MarketStore& store, const InstrumentKey& key, const WindowSpec& window,
             int64_t as_of);
double volatility(const MarketStore& store, const InstrumentKey& key, const WindowSpec& window,
                  int64_t as_of);

// One-step linear extrapolation over two adjacent windows of equal span
// ending at as_of: next = last + (last - prev).
double predict_price(const MarketStore& store, const InstrumentKey& key,
                     const WindowSpec& window, int64_t as_of);
// Same extrapolation on the volatility value, clamped at >= 0.
double predict_volatility(const MarketStore& store, const InstrumentKey& key,
                          const WindowSpec& window, int64_t as_of);

// ---------------------------------------------------------------------------
// Correlation tools
// ---------------------------------------------------------------------------

// Pearson r over close prices at the intersection of the two series'
// timestamps inside the window. Never interpolates.
double correlation_between_tokens(const MarketStore& store, const std::string& base_token_a,
                                  const std::string& base_token_b, const std::string& quote_token,
                                  const std::string& exchange, const WindowSpec& window,
                                  int64_t as_of);
double correlation_between_exchanges(const MarketStore& store, const std::string& base_token,
                                     const std::string& quote_token,
                                     const std::string& exchange_a,
                                     const std::string& exchange_b, const WindowSpec& window,
                                     int64_t as_of);

// ---------------------------------------------------------------------------
// Seasonality tools
// ---------------------------------------------------------------------------

struct SeasonalityQuery {
    TimeUnit period_unit = TimeUnit::week;
    TimeUnit granularity_unit = TimeUnit::day;
    double threshold_percent = 5.0;
};

// Buckets whose average volume share across complete periods is at least
// (100/B) * (1 + threshold/100), ordered by share descending.
std::vector<std::string> peak_traded_volume(const MarketStore& store, const InstrumentKey& key,
                                            const WindowSpec& window, const SeasonalityQuery& q,
                                            int64_t as_of);
// Mirror: share at most (100/B) * (1 - threshold/100), ordered ascending.
std::vector<std::string> lowest_traded_volume(const MarketStore& store, const InstrumentKey& key,
                                              const WindowSpec& window, const SeasonalityQuery& q,
                                              int64_t as_of);
// Exactly (peak, lowest) with the same arguments.
std::pair<std::vector<std::string>, std::vector<std::string>> round_the_clock_pattern(
    const MarketStore& store, const InstrumentKey& key, const WindowSpec& window,
    const SeasonalityQuery& q, int64_t as_of);

struct DeviationReport {
    std::vector<int64_t> timestamps;          // bucket starts in the most recent period
    std::vector<double> deviation_percents;   // signed, parallel to timestamps
    std::vector<std::string> excluded_buckets;  // zero historical mean, skipped
};

// Compares each bucket of the most recent complete period against its mean
// over all earlier complete periods; reports buckets whose absolute
// deviation percent reaches the threshold, largest magnitude first.
DeviationReport abnormal_deviations(const MarketStore& store, const InstrumentKey& key,
                                    const WindowSpec& window, const SeasonalityQuery& q,
                                    int64_t as_of);

}  // namespace tsqa::analytics
