#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "tsqa/candle.hpp"

namespace tsqa {

enum class GapPolicy { reject, forward_fill };

// In-memory OHLCV store. Loaded once at startup (single-threaded), then
// immutable; reads are safe from any number of threads.
class MarketStore {
public:
    // Parses a CSV with header timestamp,open,high,low,close,volume,
    // validates every invariant and registers the series under key.
    // Gaps are either rejected (naming the missing timestamp) or filled with
    // flat zero-volume bars that get flagged in filled_timestamps.
    const CandleSeries& ingest_csv(const std::filesystem::path& path, const InstrumentKey& key,
                                   int64_t candle_interval,
                                   GapPolicy policy = GapPolicy::reject);

    // Registers an already-built series after validating it.
    const CandleSeries& add_series(CandleSeries series);

    // Loads every entry of <dir>/manifest.json. Each entry maps a CSV file to
    // (exchange, base, quote, interval).
    void load_data_dir(const std::filesystem::path& dir, GapPolicy policy = GapPolicy::reject);

    bool contains(const InstrumentKey& key) const;
    // Throws data_error listing the known keys when absent.
    const CandleSeries& at(const InstrumentKey& key) const;

    // All candles with timestamp in (as_of - lookback, as_of], time-ordered.
    std::span<const Candle> query_window(const InstrumentKey& key, const WindowSpec& lookback,
                                         int64_t as_of) const;

    // Sorted, de-duplicated values over all registered keys.
    std::vector<std::string> base_tokens() const;
    std::vector<std::string> quote_tokens() const;
    std::vector<std::string> exchanges() const;

    std::vector<InstrumentKey> keys() const;
    size_t size() const { return series_.size(); }

private:
    std::map<InstrumentKey, CandleSeries> series_;
};

// Standalone CSV routines (also used by the round-trip tests).
CandleSeries parse_candles_csv(const std::filesystem::path& path, const InstrumentKey& key,
                               int64_t candle_interval, GapPolicy policy);
// Byte-stable writer: shortest round-trip decimal formatting, LF line ends.
void write_candles_csv(const CandleSeries& series, const std::filesystem::path& path);
std::string candles_to_csv(const CandleSeries& series);

// Parses "90s" / "15m" / "4h" / "1d" / "1w" or a bare number of seconds.
int64_t parse_interval(const std::string& text);

}  // namespace tsqa
