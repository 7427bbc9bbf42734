#include "tsqa/toolset.hpp"

#include <algorithm>
#include <cmath>

#include "tsqa/analytics.hpp"
#include "tsqa/error.hpp"
#include "tsqa/time_unit.hpp"

namespace tsqa {

namespace {

ToolParam required_string(std::string name, std::string description) {
    ToolParam p;
    p.name = std::move(name);
    p.type = ParamType::string;
    p.required = true;
    p.description = std::move(description);
    return p;
}

ToolParam optional_string(std::string name, std::string def, std::string description,
                          std::vector<std::string> allowed = {}) {
    ToolParam p;
    p.name = std::move(name);
    p.type = ParamType::string;
    p.required = false;
    p.default_value = std::move(def);
    p.allowed = std::move(allowed);
    p.description = std::move(description);
    return p;
}

ToolParam optional_integer(std::string name, int64_t def, std::string description) {
    ToolParam p;
    p.name = std::move(name);
    p.type = ParamType::integer;
    p.required = false;
    p.default_value = def;
    p.description = std::move(description);
    return p;
}

ToolParam optional_number(std::string name, double def, std::string description) {
    ToolParam p;
    p.name = std::move(name);
    p.type = ParamType::number;
    p.required = false;
    p.default_value = def;
    p.description = std::move(description);
    return p;
}

std::vector<std::string> unit_names() { return valid_time_units(); }

// The shared (time_interval, time_unit) lookback block.
void add_window_params(ToolSchema& s, int64_t interval_default, const char* unit_default) {
    s.params.push_back(optional_integer("time_interval", interval_default,
                                        "number of time units in the lookback window"));
    s.params.push_back(optional_string("time_unit", unit_default,
                                       "unit of the lookback window", unit_names()));
}

void add_seasonality_params(ToolSchema& s) {
    s.params.push_back(optional_string("period_unit", "week",
                                       "span of one repetition, e.g. week", unit_names()));
    s.params.push_back(optional_string("granularity_unit", "day",
                                       "bucket size inside one period, e.g. day", unit_names()));
    s.params.push_back(optional_number("threshold_percent", 5.0,
                                       "relative threshold in percent"));
}

TimeUnit unit_arg(const nlohmann::json& args, const char* name) {
    const auto parsed = parse_time_unit(args.at(name).get<std::string>());
    if (!parsed) throw usage_error(std::string(name) + ": unknown time unit");
    return *parsed;
}

WindowSpec window_from_args(const nlohmann::json& args) {
    WindowSpec w;
    w.time_interval = args.at("time_interval").get<int64_t>();
    w.time_unit = unit_arg(args, "time_unit");
    w.validate();
    return w;
}

analytics::SeasonalityQuery seasonality_from_args(const nlohmann::json& args) {
    analytics::SeasonalityQuery q;
    q.period_unit = unit_arg(args, "period_unit");
    q.granularity_unit = unit_arg(args, "granularity_unit");
    q.threshold_percent = args.at("threshold_percent").get<double>();
    WindowSpec w = window_from_args(args);
    w.period_unit = q.period_unit;
    w.granularity_unit = q.granularity_unit;
    w.threshold_percent = q.threshold_percent;
    w.validate();
    return q;
}

InstrumentKey key_from_args(const nlohmann::json& args) {
    return InstrumentKey(args.at("base_token").get<std::string>(),
                         args.at("quote_token").get<std::string>(),
                         args.at("exchange").get<std::string>());
}

ToolResult make_result(const char* tool, const char* key, nlohmann::json value) {
    if (value.is_number_float() && !std::isfinite(value.get<double>()))
        throw tool_error(std::string(tool) + ": non-finite result");
    ToolResult r;
    r.tool_name = tool;
    r.payload[key] = std::move(value);
    return r;
}

}  // namespace

ToolRegistry build_default_registry(const MarketStore& store,
                                    std::optional<int64_t> as_of_override) {
    ToolRegistry registry;
    const MarketStore* s = &store;

    auto as_of_for = [s, as_of_override](const InstrumentKey& key) {
        if (as_of_override) return *as_of_override;
        return s->at(key).last_timestamp();
    };
    auto as_of_for_pair = [s, as_of_override](const InstrumentKey& a, const InstrumentKey& b) {
        if (as_of_override) return *as_of_override;
        return std::min(s->at(a).last_timestamp(), s->at(b).last_timestamp());
    };

    // -- price / volatility -------------------------------------------------
    {
        ToolSchema schema;
        schema.name = "price";
        schema.description = "Latest trade price of a token pair within the lookback window.";
        schema.params = {required_string("base_token", "token symbol, e.g. BTC"),
                         optional_string("quote_token", "USDT", "quote currency symbol"),
                         optional_string("exchange", "BINANCE", "trading venue")};
        add_window_params(schema, 1, "day");
        schema.return_kind = "number";
        registry.register_tool(schema, [s, as_of_for](const nlohmann::json& args) {
            const auto key = key_from_args(args);
            const double v =
                analytics::price(*s, key, window_from_args(args), as_of_for(key));
            return make_result("price", "price", v);
        });
    }
    {
        ToolSchema schema;
        schema.name = "volatility";
        schema.description =
            "Historical price volatility (Parkinson high/low range estimator) over the "
            "lookback window, in percent.";
        schema.params = {required_string("base_token", "token symbol, e.g. BTC"),
                         optional_string("quote_token", "USDT", "quote currency symbol"),
                         optional_string("exchange", "BINANCE", "trading venue")};
        add_window_params(schema, 1, "day");
        schema.return_kind = "number";
        registry.register_tool(schema, [s, as_of_for](const nlohmann::json& args) {
            const auto key = key_from_args(args);
            const double v =
                analytics::volatility(*s, key, window_from_args(args), as_of_for(key));
            return make_result("volatility", "volatility_percent", v);
        });
    }
    {
        ToolSchema schema;
        schema.name = "predict_price";
        schema.description =
            "Predicted price for the next window by linear extrapolation of the last two "
            "windows.";
        schema.params = {required_string("base_token", "token symbol, e.g. BTC"),
                         optional_string("quote_token", "USDT", "quote currency symbol"),
                         optional_string("exchange", "BINANCE", "trading venue")};
        add_window_params(schema, 1, "day");
        schema.return_kind = "number";
        registry.register_tool(schema, [s, as_of_for](const nlohmann::json& args) {
            const auto key = key_from_args(args);
            const double v =
                analytics::predict_price(*s, key, window_from_args(args), as_of_for(key));
            return make_result("predict_price", "predicted_price", v);
        });
    }
    {
        ToolSchema schema;
        schema.name = "predict_volatility";
        schema.description =
            "Predicted volatility for the next window by linear extrapolation of the last two "
            "windows, in percent.";
        schema.params = {required_string("base_token", "token symbol, e.g. BTC"),
                         optional_string("quote_token", "USDT", "quote currency symbol"),
                         optional_string("exchange", "BINANCE", "trading venue")};
        add_window_params(schema, 1, "day");
        schema.return_kind = "number";
        registry.register_tool(schema, [s, as_of_for](const nlohmann::json& args) {
            const auto key = key_from_args(args);
            const double v = analytics::predict_volatility(*s, key, window_from_args(args),
                                                           as_of_for(key));
            return make_result("predict_volatility", "predicted_volatility_percent", v);
        });
    }

    // -- correlations ---------------------------------------------------------
    {
        ToolSchema schema;
        schema.name = "correlation_between_tokens";
        schema.description =
            "Pearson correlation of the close prices of two tokens on one exchange over the "
            "lookback window.";
        schema.params = {required_string("base_token_a", "first token symbol"),
                         required_string("base_token_b", "second token symbol"),
                         optional_string("quote_token", "USDT", "quote currency symbol"),
                         optional_string("exchange", "BINANCE", "trading venue")};
        add_window_params(schema, 7, "day");
        schema.return_kind = "number";
        registry.register_tool(schema, [s, as_of_for_pair](const nlohmann::json& args) {
            const std::string quote = args.at("quote_token").get<std::string>();
            const std::string exchange = args.at("exchange").get<std::string>();
            const InstrumentKey a(args.at("base_token_a").get<std::string>(), quote, exchange);
            const InstrumentKey b(args.at("base_token_b").get<std::string>(), quote, exchange);
            const double v = analytics::correlation_between_tokens(
                *s, a.base_token, b.base_token, quote, exchange, window_from_args(args),
                as_of_for_pair(a, b));
            return make_result("correlation_between_tokens", "correlation", v);
        });
    }
    {
        ToolSchema schema;
        schema.name = "correlation_between_exchanges";
        schema.description =
            "Pearson correlation of one token pair's close prices on two exchanges over the "
            "lookback window.";
        schema.params = {required_string("base_token", "token symbol, e.g. BTC"),
                         optional_string("quote_token", "USDT", "quote currency symbol"),
                         required_string("exchange_a", "first trading venue"),
                         required_string("exchange_b", "second trading venue")};
        add_window_params(schema, 7, "day");
        schema.return_kind = "number";
        registry.register_tool(schema, [s, as_of_for_pair](const nlohmann::json& args) {
            const std::string base = args.at("base_token").get<std::string>();
            const std::string quote = args.at("quote_token").get<std::string>();
            const InstrumentKey a(base, quote, args.at("exchange_a").get<std::string>());
            const InstrumentKey b(base, quote, args.at("exchange_b").get<std::string>());
            const double v = analytics::correlation_between_exchanges(
                *s, base, quote, a.exchange, b.exchange, window_from_args(args),
                as_of_for_pair(a, b));
            return make_result("correlation_between_exchanges", "correlation", v);
        });
    }

    // -- seasonality ----------------------------------------------------------
    const auto seasonality_schema = [&](const char* name, const char* description,
                                        const char* kind) {
        ToolSchema schema;
        schema.name = name;
        schema.description = description;
        schema.params = {required_string("base_token", "token symbol, e.g. BTC"),
                         optional_string("quote_token", "USDT", "quote currency symbol"),
                         optional_string("exchange", "BINANCE", "trading venue")};
        add_window_params(schema, 1, "year");
        add_seasonality_params(schema);
        schema.return_kind = kind;
        return schema;
    };
    registry.register_tool(
        seasonality_schema("peak_traded_volume",
                           "Calendar buckets (e.g. weekdays) whose average traded-volume share "
                           "across periods is highest, above a relative threshold.",
                           "label_list"),
        [s, as_of_for](const nlohmann::json& args) {
            const auto key = key_from_args(args);
            const auto labels =
                analytics::peak_traded_volume(*s, key, window_from_args(args),
                                              seasonality_from_args(args), as_of_for(key));
            return make_result("peak_traded_volume", "labels", labels);
        });
    registry.register_tool(
        seasonality_schema("lowest_traded_volume",
                           "Calendar buckets (e.g. weekdays) whose average traded-volume share "
                           "across periods is lowest, below a relative threshold.",
                           "label_list"),
        [s, as_of_for](const nlohmann::json& args) {
            const auto key = key_from_args(args);
            const auto labels =
                analytics::lowest_traded_volume(*s, key, window_from_args(args),
                                                seasonality_from_args(args), as_of_for(key));
            return make_result("lowest_traded_volume", "labels", labels);
        });
    registry.register_tool(
        seasonality_schema("round_the_clock_pattern",
                           "Peak and lowest traded-volume buckets combined into one pattern "
                           "summary.",
                           "label_pair"),
        [s, as_of_for](const nlohmann::json& args) {
            const auto key = key_from_args(args);
            const auto [peaks, lows] =
                analytics::round_the_clock_pattern(*s, key, window_from_args(args),
                                                   seasonality_from_args(args), as_of_for(key));
            ToolResult r;
            r.tool_name = "round_the_clock_pattern";
            r.payload["peaks"] = peaks;
            r.payload["lows"] = lows;
            return r;
        });
    registry.register_tool(
        seasonality_schema("abnormal_deviations",
                           "Buckets of the most recent period whose volume deviates from its "
                           "historical mean by at least the threshold percent.",
                           "deviation_pair"),
        [s, as_of_for](const nlohmann::json& args) {
            const auto key = key_from_args(args);
            const auto report =
                analytics::abnormal_deviations(*s, key, window_from_args(args),
                                               seasonality_from_args(args), as_of_for(key));
            ToolResult r;
            r.tool_name = "abnormal_deviations";
            r.payload["timestamps"] = report.timestamps;
            r.payload["deviation_percents"] = report.deviation_percents;
            if (!report.excluded_buckets.empty())
                r.payload["excluded_buckets"] = report.excluded_buckets;
            return r;
        });

    // -- metadata -------------------------------------------------------------
    {
        ToolSchema schema;
        schema.name = "get_base_tokens";
        schema.description = "All base token symbols available in the data store.";
        schema.return_kind = "string_list";
        registry.register_tool(schema, [s](const nlohmann::json&) {
            return make_result("get_base_tokens", "base_tokens", s->base_tokens());
        });
    }
    {
        ToolSchema schema;
        schema.name = "get_exchanges";
        schema.description = "All exchange names available in the data store.";
        schema.return_kind = "string_list";
        registry.register_tool(schema, [s](const nlohmann::json&) {
            return make_result("get_exchanges", "exchanges", s->exchanges());
        });
    }

    return registry;
}

std::string to_string(ToolMode mode) { return mode == ToolMode::real ? "real" : "stub"; }

ToolMode parse_tool_mode(const std::string& text) {
    if (text == "real") return ToolMode::real;
    if (text == "stub") return ToolMode::stub;
    throw usage_error("mode must be 'real' or 'stub', got '" + text + "'");
}

ToolRouter::ToolRouter(const ToolRegistry& registry, ToolMode mode, const StubTable* stubs)
    : registry_(&registry), mode_(mode), stubs_(stubs) {
    if (mode_ == ToolMode::stub && !stubs_)
        throw usage_error("stub mode needs a stub table");
}

RoutedResult ToolRouter::route(const ToolCall& filled,
                               const std::optional<std::string>& item_id) const {
    if (mode_ == ToolMode::real) return {registry_->dispatch(filled), {}};
    if (!item_id)
        throw data_error("stub mode: no benchmark item id for call to " + filled.tool_name);
    StubLookup hit = stubs_->lookup(*item_id, filled);
    RoutedResult out{std::move(hit.result), {}};
    if (hit.warning) out.warnings.push_back(*hit.warning);
    return out;
}

}  // namespace tsqa
