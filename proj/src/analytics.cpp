#include "tsqa/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "tsqa/calendar.hpp"
#include "tsqa/error.hpp"

namespace tsqa::analytics {

namespace {

constexpr double kLn2 = 0.6931471805599453;

std::span<const Candle> window_slice(const MarketStore& store, const InstrumentKey& key,
                                     const WindowSpec& window, int64_t as_of) {
    return store.query_window(key, window, as_of);
}

}  // namespace

double parkinson_volatility_percent(std::span<const Candle> slice) {
    const size_t n = slice.size();
    if (n < 2)
        throw tool_error("volatility needs at least 2 candles in the window, got " +
                         std::to_string(n));
    double sum = 0.0;
    for (const Candle& c : slice) {
        if (!(c.low > 0.0))
            throw tool_error("volatility: non-positive low at " + std::to_string(c.timestamp));
        if (c.high < c.low)
            throw tool_error("volatility: high below low at " + std::to_string(c.timestamp));
        const double r = std::log(c.high / c.low);
        sum += r * r;
    }
    return 100.0 * std::sqrt(sum / (4.0 * static_cast<double>(n) * kLn2));
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw tool_error("correlation inputs differ in length");
    const size_t n = x.size();
    if (n < 2)
        throw tool_error("correlation needs at least 2 aligned points, got " + std::to_string(n));
    // Online co-moment update keeps the computation stable for large means;
    // the (k-1)/k form treats x and y identically, so r(x,y) == r(y,x) bit
    // for bit.
    double mean_x = 0.0, mean_y = 0.0, cxy = 0.0, cxx = 0.0, cyy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double k = static_cast<double>(i + 1);
        const double w = static_cast<double>(i) / k;
        const double dx = x[i] - mean_x;
        const double dy = y[i] - mean_y;
        cxy += w * (dx * dy);
        cxx += w * (dx * dx);
        cyy += w * (dy * dy);
        mean_x += dx / k;
        mean_y += dy / k;
    }
    if (cxx == 0.0 || cyy == 0.0)
        throw tool_error("correlation undefined: one input has zero variance");
    const double r = cxy / std::sqrt(cxx * cyy);
    return std::clamp(r, -1.0, 1.0);
}

double price(const MarketStore& store, const InstrumentKey& key, const WindowSpec& window,
             int64_t as_of) {
    const auto slice = window_slice(store, key, window, as_of);
    if (slice.empty())
        throw tool_error("no data for " + key.label() + " in the lookback window ending at " +
                         std::to_string(as_of));
    return slice.back().close;
}

double volatility(const MarketStore& store, const InstrumentKey& key, const WindowSpec& window,
                  int64_t as_of) {
    return parkinson_volatility_percent(window_slice(store, key, window, as_of));
}

namespace {

double extrapolate(double prev, double last) { return last + (last - prev); }

}  // namespace

double predict_price(const MarketStore& store, const InstrumentKey& key, const WindowSpec& window,
                     int64_t as_of) {
    const int64_t span = window.lookback_seconds();
    double prev, last;
    try {
        last = price(store, key, window, as_of);
        prev = price(store, key, window, as_of - span);
    } catch (const Error& e) {
        throw tool_error(std::string("predict_price needs two adjacent windows of history: ") +
                         e.what());
    }
    return extrapolate(prev, last);
}

double predict_volatility(const MarketStore& store, const InstrumentKey& key,
                          const WindowSpec& window, int64_t as_of) {
    const int64_t span = window.lookback_seconds();
    double prev, last;
    try {
        last = volatility(store, key, window, as_of);
        prev = volatility(store, key, window, as_of - span);
    } catch (const Error& e) {
        throw tool_error(
            std::string("predict_volatility needs two adjacent windows of history: ") + e.what());
    }
    return std::max(0.0, extrapolate(prev, last));
}

namespace {

std::vector<double> aligned_closes(std::span<const Candle> a, std::span<const Candle> b,
                                   std::vector<double>& out_b) {
    std::vector<double> out_a;
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].timestamp == b[j].timestamp) {
            out_a.push_back(a[i].close);
            out_b.push_back(b[j].close);
            ++i;
            ++j;
        } else if (a[i].timestamp < b[j].timestamp) {
            ++i;
        } else {
            ++j;
        }
    }
    return out_a;
}

double correlation_of_series(const MarketStore& store, const InstrumentKey& key_a,
                             const InstrumentKey& key_b, const WindowSpec& window, int64_t as_of) {
    const auto slice_a = store.query_window(key_a, window, as_of);
    const auto slice_b = store.query_window(key_b, window, as_of);
    std::vector<double> closes_b;
    const std::vector<double> closes_a = aligned_closes(slice_a, slice_b, closes_b);
    if (closes_a.size() < 2)
        throw tool_error("correlation: timestamp intersection of " + key_a.label() + " and " +
                         key_b.label() + " leaves " + std::to_string(closes_a.size()) +
                         " aligned points (need 2)");
    return pearson(closes_a, closes_b);
}

}  // namespace

double correlation_between_tokens(const MarketStore& store, const std::string& base_token_a,
                                  const std::string& base_token_b, const std::string& quote_token,
                                  const std::string& exchange, const WindowSpec& window,
                                  int64_t as_of) {
    return correlation_of_series(store, InstrumentKey(base_token_a, quote_token, exchange),
                                 InstrumentKey(base_token_b, quote_token, exchange), window,
                                 as_of);
}

double correlation_between_exchanges(const MarketStore& store, const std::string& base_token,
                                     const std::string& quote_token, const std::string& exchange_a,
                                     const std::string& exchange_b, const WindowSpec& window,
                                     int64_t as_of) {
    return correlation_of_series(store, InstrumentKey(base_token, quote_token, exchange_a),
                                 InstrumentKey(base_token, quote_token, exchange_b), window,
                                 as_of);
}

// ---------------------------------------------------------------------------
// Seasonality machinery
// ---------------------------------------------------------------------------

namespace {

struct PeriodVolumes {
    int64_t start = 0;
    std::vector<double> bucket_volume;  // indexed by bucket, size B
};

// Groups the window slice into complete calendar periods. A period is
// complete when every interval slot between its calendar start and end is
// present; clipped head/tail periods are dropped.
std::vector<PeriodVolumes> complete_periods(std::span<const Candle> slice, int64_t interval,
                                            const BucketScheme& scheme) {
    if (interval > unit_seconds(scheme.granularity_unit))
        throw tool_error("candle interval (" + std::to_string(interval) +
                         "s) is coarser than granularity_unit " +
                         to_string(scheme.granularity_unit));
    const int buckets = scheme.bucket_count();
    std::vector<PeriodVolumes> periods;
    std::map<int64_t, std::pair<size_t, std::vector<double>>> grouped;  // start -> (count, volumes)
    for (const Candle& c : slice) {
        const int64_t start = period_start(c.timestamp, scheme.period_unit);
        auto& [count, volumes] = grouped[start];
        if (volumes.empty()) volumes.assign(static_cast<size_t>(buckets), 0.0);
        volumes[static_cast<size_t>(scheme.bucket_index(c.timestamp))] += c.volume;
        ++count;
    }
    for (auto& [start, entry] : grouped) {
        const int64_t end = period_next(start, scheme.period_unit);
        const auto expected_slots = static_cast<size_t>((end - start) / interval);
        if (entry.first != expected_slots) continue;  // clipped or gapped
        periods.push_back(PeriodVolumes{start, std::move(entry.second)});
    }
    return periods;
}

struct BucketShare {
    int bucket = 0;
    double share = 0.0;  // percent, averaged across periods
};

std::vector<BucketShare> average_shares(const std::vector<PeriodVolumes>& periods, int buckets) {
    std::vector<double> sum(static_cast<size_t>(buckets), 0.0);
    size_t counted = 0;
    for (const auto& p : periods) {
        const double total = std::accumulate(p.bucket_volume.begin(), p.bucket_volume.end(), 0.0);
        if (total <= 0.0) continue;  // a dead period has no shares
        for (int b = 0; b < buckets; ++b)
            sum[static_cast<size_t>(b)] += 100.0 * p.bucket_volume[static_cast<size_t>(b)] / total;
        ++counted;
    }
    std::vector<BucketShare> shares;
    if (counted == 0) return shares;
    shares.reserve(static_cast<size_t>(buckets));
    for (int b = 0; b < buckets; ++b)
        shares.push_back({b, sum[static_cast<size_t>(b)] / static_cast<double>(counted)});
    return shares;
}

std::vector<BucketShare> shares_for(const MarketStore& store, const InstrumentKey& key,
                                    const WindowSpec& window, const SeasonalityQuery& q,
                                    int64_t as_of, const BucketScheme& scheme) {
    if (q.threshold_percent < 0.0) throw tool_error("threshold_percent must be non-negative");
    const auto slice = store.query_window(key, window, as_of);
    if (slice.empty())
        throw tool_error("no data for " + key.label() + " in the lookback window");
    const auto periods = complete_periods(slice, store.at(key).candle_interval, scheme);
    if (periods.empty())
        throw tool_error("no complete " + to_string(q.period_unit) + " period for " +
                         key.label() + " in the lookback window");
    return average_shares(periods, scheme.bucket_count());
}

}  // namespace

std::vector<std::string> peak_traded_volume(const MarketStore& store, const InstrumentKey& key,
                                            const WindowSpec& window, const SeasonalityQuery& q,
                                            int64_t as_of) {
    const BucketScheme scheme = make_bucket_scheme(q.period_unit, q.granularity_unit);
    auto shares = shares_for(store, key, window, q, as_of, scheme);
    const double uniform = 100.0 / scheme.bucket_count();
    const double bound = uniform * (1.0 + q.threshold_percent / 100.0);
    std::erase_if(shares, [&](const BucketShare& s) { return s.share < bound; });
    std::stable_sort(shares.begin(), shares.end(),
                     [](const BucketShare& a, const BucketShare& b) { return a.share > b.share; });
    std::vector<std::string> labels;
    for (const auto& s : shares) labels.push_back(scheme.bucket_label(s.bucket));
    return labels;
}

std::vector<std::string> lowest_traded_volume(const MarketStore& store, const InstrumentKey& key,
                                              const WindowSpec& window, const SeasonalityQuery& q,
                                              int64_t as_of) {
    const BucketScheme scheme = make_bucket_scheme(q.period_unit, q.granularity_unit);
    auto shares = shares_for(store, key, window, q, as_of, scheme);
    const double uniform = 100.0 / scheme.bucket_count();
    const double bound = uniform * (1.0 - q.threshold_percent / 100.0);
    std::erase_if(shares, [&](const BucketShare& s) { return s.share > bound; });
    std::stable_sort(shares.begin(), shares.end(),
                     [](const BucketShare& a, const BucketShare& b) { return a.share < b.share; });
    std::vector<std::string> labels;
    for (const auto& s : shares) labels.push_back(scheme.bucket_label(s.bucket));
    return labels;
}

std::pair<std::vector<std::string>, std::vector<std::string>> round_the_clock_pattern(
    const MarketStore& store, const InstrumentKey& key, const WindowSpec& window,
    const SeasonalityQuery& q, int64_t as_of) {
    return {peak_traded_volume(store, key, window, q, as_of),
            lowest_traded_volume(store, key, window, q, as_of)};
}

DeviationReport abnormal_deviations(const MarketStore& store, const InstrumentKey& key,
                                    const WindowSpec& window, const SeasonalityQuery& q,
                                    int64_t as_of) {
    if (q.threshold_percent < 0.0) throw tool_error("threshold_percent must be non-negative");
    const BucketScheme scheme = make_bucket_scheme(q.period_unit, q.granularity_unit);
    const auto slice = store.query_window(key, window, as_of);
    if (slice.empty())
        throw tool_error("no data for " + key.label() + " in the lookback window");
    const auto periods = complete_periods(slice, store.at(key).candle_interval, scheme);
    if (periods.size() < 2)
        throw tool_error("abnormal_deviations needs at least 2 complete " +
                         to_string(q.period_unit) + " periods, got " +
                         std::to_string(periods.size()));

    const int buckets = scheme.bucket_count();
    const auto& latest = periods.back();
    std::vector<double> mean(static_cast<size_t>(buckets), 0.0);
    for (size_t p = 0; p + 1 < periods.size(); ++p)
        for (int b = 0; b < buckets; ++b)
            mean[static_cast<size_t>(b)] += periods[p].bucket_volume[static_cast<size_t>(b)];
    const double history = static_cast<double>(periods.size() - 1);
    for (double& m : mean) m /= history;

    struct Hit {
        int bucket;
        double deviation;
    };
    std::vector<Hit> hits;
    DeviationReport report;
    for (int b = 0; b < buckets; ++b) {
        const double m = mean[static_cast<size_t>(b)];
        const double v = latest.bucket_volume[static_cast<size_t>(b)];
        if (m == 0.0) {
            report.excluded_buckets.push_back(scheme.bucket_label(b));
            continue;
        }
        const double deviation = 100.0 * (v - m) / m;
        if (std::abs(deviation) >= q.threshold_percent) hits.push_back({b, deviation});
    }
    std::stable_sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
        return std::abs(a.deviation) > std::abs(b.deviation);
    });
    for (const Hit& h : hits) {
        report.timestamps.push_back(scheme.bucket_start(latest.start, h.bucket));
        report.deviation_percents.push_back(h.deviation);
    }
    return report;
}

}  // namespace tsqa::analytics
