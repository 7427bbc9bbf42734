#include "tsqa/candle.hpp"

#include <algorithm>
#include <cctype>

#include "tsqa/error.hpp"

namespace tsqa {

namespace {

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

}  // namespace

void Candle::validate() const {
    if (!(open > 0.0) || !(high > 0.0) || !(low > 0.0) || !(close > 0.0))
        throw data_error("candle at " + std::to_string(timestamp) +
                         ": prices must be positive");
    if (low > high)
        throw data_error("candle at " + std::to_string(timestamp) + ": low > high");
    if (low > std::min(open, close))
        throw data_error("candle at " + std::to_string(timestamp) +
                         ": low above min(open, close)");
    if (high < std::max(open, close))
        throw data_error("candle at " + std::to_string(timestamp) +
                         ": high below max(open, close)");
    if (volume < 0.0)
        throw data_error("candle at " + std::to_string(timestamp) + ": negative volume");
}

InstrumentKey::InstrumentKey(std::string base, std::string quote, std::string venue)
    : base_token(upper(std::move(base))),
      quote_token(upper(std::move(quote))),
      exchange(upper(std::move(venue))) {
    if (base_token.empty() || quote_token.empty() || exchange.empty())
        throw data_error("instrument key fields must be non-empty");
}

std::string InstrumentKey::label() const {
    return base_token + "/" + quote_token + "@" + exchange;
}

void CandleSeries::validate() const {
    if (candle_interval <= 0) throw data_error(key.label() + ": candle interval must be positive");
    for (const auto& c : candles) c.validate();
    for (size_t i = 1; i < candles.size(); ++i) {
        const int64_t prev = candles[i - 1].timestamp;
        const int64_t cur = candles[i].timestamp;
        if (cur == prev)
            throw data_error(key.label() + ": duplicate timestamp " + std::to_string(cur));
        if (cur < prev)
            throw data_error(key.label() + ": out-of-order timestamp " + std::to_string(cur));
        if (cur - prev != candle_interval)
            throw data_error(key.label() + ": gap before timestamp " + std::to_string(cur) +
                             " (missing " + std::to_string(prev + candle_interval) + ")");
    }
}

int64_t CandleSeries::first_timestamp() const {
    if (candles.empty()) throw data_error(key.label() + ": empty series");
    return candles.front().timestamp;
}

int64_t CandleSeries::last_timestamp() const {
    if (candles.empty()) throw data_error(key.label() + ": empty series");
    return candles.back().timestamp;
}

int64_t WindowSpec::lookback_seconds() const {
    return time_interval * unit_seconds(time_unit);
}

void WindowSpec::validate() const {
    if (time_interval <= 0) throw data_error("time_interval must be positive");
    if (threshold_percent && *threshold_percent < 0.0)
        throw data_error("threshold_percent must be non-negative");
    if (period_unit && granularity_unit &&
        unit_rank(*granularity_unit) >= unit_rank(*period_unit))
        throw data_error("granularity_unit must be strictly finer than period_unit");
    if (period_unit && unit_seconds(*period_unit) > lookback_seconds())
        throw data_error("period_unit longer than the lookback window");
}

}  // namespace tsqa
