#include "tsqa/market_store.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tsqa/error.hpp"

namespace tsqa {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_double_field(const std::string& raw, const char* field, size_t line_no) {
    const std::string text = trim(raw);
    double value = 0.0;
    const auto* begin = text.data();
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc() || res.ptr != end || text.empty())
        throw data_error("line " + std::to_string(line_no) + ": bad " + std::string(field) +
                         " value '" + raw + "'");
    return value;
}

int64_t parse_int_field(const std::string& raw, const char* field, size_t line_no) {
    const std::string text = trim(raw);
    int64_t value = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty())
        throw data_error("line " + std::to_string(line_no) + ": bad " + std::string(field) +
                         " value '" + raw + "'");
    return value;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, sep)) out.push_back(field);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

CandleSeries parse_candles_csv(const std::filesystem::path& path, const InstrumentKey& key,
                               int64_t candle_interval, GapPolicy policy) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open candle file: " + path.string());

    CandleSeries series;
    series.key = key;
    series.candle_interval = candle_interval;

    std::string line;
    size_t line_no = 0;
    if (!std::getline(in, line)) throw data_error(path.string() + ": empty file");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line) != "timestamp,open,high,low,close,volume")
        throw data_error(path.string() + ": bad header '" + line + "'");

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != 6)
            throw data_error(path.string() + " line " + std::to_string(line_no) +
                             ": expected 6 fields, got " + std::to_string(fields.size()));
        Candle c;
        c.timestamp = parse_int_field(fields[0], "timestamp", line_no);
        c.open = parse_double_field(fields[1], "open", line_no);
        c.high = parse_double_field(fields[2], "high", line_no);
        c.low = parse_double_field(fields[3], "low", line_no);
        c.close = parse_double_field(fields[4], "close", line_no);
        c.volume = parse_double_field(fields[5], "volume", line_no);
        try {
            c.validate();
        } catch (const Error& e) {
            throw data_error(path.string() + " line " + std::to_string(line_no) + ": " + e.what());
        }

        if (!series.candles.empty()) {
            const int64_t prev = series.candles.back().timestamp;
            if (c.timestamp == prev)
                throw data_error(path.string() + " line " + std::to_string(line_no) +
                                 ": duplicate timestamp " + std::to_string(c.timestamp));
            if (c.timestamp < prev)
                throw data_error(path.string() + " line " + std::to_string(line_no) +
                                 ": out-of-order timestamp " + std::to_string(c.timestamp));
            int64_t expected = prev + candle_interval;
            if (c.timestamp != expected) {
                if (policy == GapPolicy::reject)
                    throw data_error(path.string() + " line " + std::to_string(line_no) +
                                     ": gap in series, missing timestamp " +
                                     std::to_string(expected));
                const double level = series.candles.back().close;
                while (expected < c.timestamp) {
                    Candle fill;
                    fill.timestamp = expected;
                    fill.open = fill.high = fill.low = fill.close = level;
                    fill.volume = 0.0;
                    series.candles.push_back(fill);
                    series.filled_timestamps.push_back(expected);
                    expected += candle_interval;
                }
            }
        }
        series.candles.push_back(c);
    }

    series.validate();
    return series;
}

std::string candles_to_csv(const CandleSeries& series) {
    std::string out = "timestamp,open,high,low,close,volume\n";
    for (const auto& c : series.candles) {
        out += std::to_string(c.timestamp);
        out += ',';
        out += format_double(c.open);
        out += ',';
        out += format_double(c.high);
        out += ',';
        out += format_double(c.low);
        out += ',';
        out += format_double(c.close);
        out += ',';
        out += format_double(c.volume);
        out += '\n';
    }
    return out;
}

void write_candles_csv(const CandleSeries& series, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write candle file: " + path.string());
    out << candles_to_csv(series);
}

int64_t parse_interval(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) throw data_error("empty candle interval");
    int64_t scale = 1;
    std::string digits = t;
    switch (t.back()) {
        case 's': scale = 1; digits = t.substr(0, t.size() - 1); break;
        case 'm': scale = 60; digits = t.substr(0, t.size() - 1); break;
        case 'h': scale = 3600; digits = t.substr(0, t.size() - 1); break;
        case 'd': scale = 86400; digits = t.substr(0, t.size() - 1); break;
        case 'w': scale = 604800; digits = t.substr(0, t.size() - 1); break;
        default: break;
    }
    int64_t value = 0;
    const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (res.ec != std::errc() || res.ptr != digits.data() + digits.size() || value <= 0)
        throw data_error("bad candle interval '" + text + "'");
    return value * scale;
}

const CandleSeries& MarketStore::ingest_csv(const std::filesystem::path& path,
                                            const InstrumentKey& key, int64_t candle_interval,
                                            GapPolicy policy) {
    return add_series(parse_candles_csv(path, key, candle_interval, policy));
}

const CandleSeries& MarketStore::add_series(CandleSeries series) {
    series.validate();
    const InstrumentKey key = series.key;
    auto [it, inserted] = series_.insert_or_assign(key, std::move(series));
    (void)inserted;
    return it->second;
}

void MarketStore::load_data_dir(const std::filesystem::path& dir, GapPolicy policy) {
    const auto manifest_path = dir / "manifest.json";
    std::ifstream in(manifest_path);
    if (!in) throw data_error("cannot open manifest: " + manifest_path.string());
    nlohmann::json manifest;
    try {
        in >> manifest;
    } catch (const nlohmann::json::exception& e) {
        throw data_error(manifest_path.string() + ": " + e.what());
    }
    if (!manifest.contains("series") || !manifest["series"].is_array())
        throw data_error(manifest_path.string() + ": missing 'series' array");
    for (const auto& entry : manifest["series"]) {
        for (const char* field : {"file", "base", "quote", "exchange", "interval"})
            if (!entry.contains(field))
                throw data_error(manifest_path.string() + ": series entry missing '" +
                                 std::string(field) + "'");
        const InstrumentKey key(entry["base"].get<std::string>(),
                                entry["quote"].get<std::string>(),
                                entry["exchange"].get<std::string>());
        const int64_t interval =
            entry["interval"].is_number()
                ? entry["interval"].get<int64_t>()
                : parse_interval(entry["interval"].get<std::string>());
        ingest_csv(dir / entry["file"].get<std::string>(), key, interval, policy);
    }
}

bool MarketStore::contains(const InstrumentKey& key) const { return series_.count(key) > 0; }

const CandleSeries& MarketStore::at(const InstrumentKey& key) const {
    const auto it = series_.find(key);
    if (it == series_.end()) {
        std::string known;
        for (const auto& [k, _] : series_) {
            if (!known.empty()) known += ", ";
            known += k.label();
        }
        throw data_error("unknown instrument " + key.label() +
                         (known.empty() ? " (store is empty)" : "; known: " + known));
    }
    return it->second;
}

std::span<const Candle> MarketStore::query_window(const InstrumentKey& key,
                                                  const WindowSpec& lookback,
                                                  int64_t as_of) const {
    lookback.validate();
    const CandleSeries& series = at(key);
    const int64_t start_exclusive = as_of - lookback.lookback_seconds();
    const auto& cs = series.candles;
    if (cs.empty()) return {};
    const auto lo = std::upper_bound(cs.begin(), cs.end(), start_exclusive,
                                     [](int64_t t, const Candle& c) { return t < c.timestamp; });
    const auto hi = std::upper_bound(cs.begin(), cs.end(), as_of,
                                     [](int64_t t, const Candle& c) { return t < c.timestamp; });
    return std::span<const Candle>(cs.data() + (lo - cs.begin()), static_cast<size_t>(hi - lo));
}

namespace {

std::vector<std::string> sorted_unique(std::set<std::string> values) {
    return {values.begin(), values.end()};
}

}  // namespace

std::vector<std::string> MarketStore::base_tokens() const {
    std::set<std::string> out;
    for (const auto& [k, _] : series_) out.insert(k.base_token);
    return sorted_unique(std::move(out));
}

std::vector<std::string> MarketStore::quote_tokens() const {
    std::set<std::string> out;
    for (const auto& [k, _] : series_) out.insert(k.quote_token);
    return sorted_unique(std::move(out));
}

std::vector<std::string> MarketStore::exchanges() const {
    std::set<std::string> out;
    for (const auto& [k, _] : series_) out.insert(k.exchange);
    return sorted_unique(std::move(out));
}

std::vector<InstrumentKey> MarketStore::keys() const {
    std::vector<InstrumentKey> out;
    for (const auto& [k, _] : series_) out.push_back(k);
    return out;
}

}  // namespace tsqa
