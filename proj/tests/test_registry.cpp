#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"

#include "tsqa/benchmark.hpp"
#include "tsqa/error.hpp"
#include "tsqa/toolset.hpp"
#include "test_support.hpp"

using namespace tsqa;
using namespace tsqa::testing;

namespace {

const InstrumentKey kBtc{"BTC", "USDT", "BINANCE"};
const InstrumentKey kEth{"ETH", "USDT", "BINANCE"};

MarketStore demo_store() {
    std::mt19937_64 rng(50);
    MarketStore store;
    store.add_series(random_series(rng, kBtc, 21 * 24));
    store.add_series(random_series(rng, kEth, 21 * 24));
    return store;
}

}  // namespace

TEST_CASE("default registry exposes the 12 standard tools") {
    auto store = demo_store();
    const ToolRegistry registry = build_default_registry(store);
    CHECK(registry.size() == 12);
    for (const char* name :
         {"price", "volatility", "predict_price", "predict_volatility",
          "correlation_between_tokens", "correlation_between_exchanges", "peak_traded_volume",
          "lowest_traded_volume", "round_the_clock_pattern", "abnormal_deviations",
          "get_base_tokens", "get_exchanges"})
        CHECK(registry.has(name));
}

TEST_CASE("fill_defaults: volatility with only base_token gets the standard defaults") {
    auto store = demo_store();
    const ToolRegistry registry = build_default_registry(store);
    const auto filled = fill_defaults(registry.schema("volatility"), {{"base_token", "BTC"}});
    CHECK(filled.args["base_token"] == "BTC");
    CHECK(filled.args["quote_token"] == "USDT");
    CHECK(filled.args["exchange"] == "BINANCE");
    CHECK(filled.args["time_interval"] == 1);
    CHECK(filled.args["time_unit"] == "day");
    CHECK(filled.warnings.empty());
}

TEST_CASE("fill_defaults: peak_traded_volume seasonality defaults") {
    auto store = demo_store();
    const ToolRegistry registry = build_default_registry(store);
    const auto filled =
        fill_defaults(registry.schema("peak_traded_volume"), {{"base_token", "ETH"}});
    CHECK(filled.args["threshold_percent"] == 5.0);
    CHECK(filled.args["period_unit"] == "week");
    CHECK(filled.args["granularity_unit"] == "day");
    CHECK(filled.args["time_unit"] == "year");
    CHECK(filled.args["time_interval"] == 1);
}

TEST_CASE("fill_defaults: complete args pass through unchanged and idempotently") {
    auto store = demo_store();
    const ToolRegistry registry = build_default_registry(store);
    const nlohmann::json complete{{"base_token", "BTC"}, {"quote_token", "USDC"},
                                  {"exchange", "KRAKEN"}, {"time_interval", 3},
                                  {"time_unit", "week"}};
    const auto& schema = registry.schema("price");
    const auto once = fill_defaults(schema, complete);
    CHECK(once.args == complete);
    const auto twice = fill_defaults(schema, once.args);
    CHECK(twice.args == once.args);
}

TEST_CASE("fill_defaults is idempotent for partial argument maps") {
    auto store = demo_store();
    const ToolRegistry registry = build_default_registry(store);
    for (const auto& schema : registry.schemas()) {
        nlohmann::json raw = nlohmann::json::object();
        for (const auto& p : schema.params)
            if (p.required) raw[p.name] = "BTC";  // all required params are strings
        const auto once = fill_defaults(schema, raw);
        const auto twice = fill_defaults(schema, once.args);
        CHECK(once.args == twice.args);
    }
}

TEST_CASE("fill_defaults: unknown and missing parameters are named") {
    auto store = demo_store();
    const ToolRegistry registry = build_default_registry(store);
    CHECK_THROWS_WITH_AS(
        fill_defaults(registry.schema("price"), {{"base_token", "BTC"}, {"venue", "BINANCE"}}),
        doctest::Contains("unknown parameter 'venue'"), Error);
    CHECK_THROWS_WITH_AS(fill_defaults(registry.schema("price"), nlohmann::json::object()),
                         doctest::Contains("missing required parameter 'base_token'"), Error);
}

TEST_CASE("fill_defaults: coercions") {
    auto store = demo_store();
    const ToolRegistry registry = build_default_registry(store);
    const auto& schema = registry.schema("peak_traded_volume");

    // integer accepted for a float param, silently
    auto filled = fill_defaults(schema, {{"base_token", "BTC"}, {"threshold_percent", 7}});
    CHECK(filled.args["threshold_percent"].is_number_float());
    CHECK(filled.args["threshold_percent"] == 7.0);
    CHECK(filled.warnings.empty());

    // numeric strings coerced with a recorded warning
    filled = fill_defaults(schema, {{"base_token", "BTC"}, {"time_interval", "2"}});
    CHECK(filled.args["time_interval"] == 2);
    REQUIRE(filled.warnings.size() == 1);
    CHECK(filled.warnings[0].find("coerced") != std::string::npos);

    // enum values are canonicalized and validated
    filled = fill_defaults(schema, {{"base_token", "BTC"}, {"time_unit", "Year"}});
    CHECK(filled.args["time_unit"] == "year");
    CHECK_THROWS_WITH_AS(fill_defaults(schema, {{"base_token", "BTC"}, {"time_unit", "eon"}}),
                         doctest::Contains("not one of"), Error);

    // hopeless coercion fails
    CHECK_THROWS_AS(fill_defaults(schema, {{"base_token", "BTC"}, {"time_interval", "two"}}),
                    Error);
}

TEST_CASE("match_calls: equality, strictness and default-fill invariance") {
    auto store = demo_store();
    const ToolRegistry registry = build_default_registry(store);

    const ToolCall a = registry.make_call("volatility", {{"base_token", "BTC"}});
    const ToolCall b = registry.make_call("volatility", {{"base_token", "btc"}});
    CHECK(match_calls(a, b));  // case-normalized strings

    // identical fully-specified calls
    const ToolCall c = registry.make_call(
        "volatility", {{"base_token", "BTC"}, {"quote_token", "USDT"}, {"exchange", "BINANCE"},
                       {"time_interval", 1}, {"time_unit", "day"}});
    CHECK(match_calls(a, c));  // explicit defaults equal filled defaults

    // one differing numeric parameter breaks the match
    const ToolCall d = registry.make_call("volatility",
                                          {{"base_token", "BTC"}, {"time_interval", 7}});
    CHECK_FALSE(match_calls(a, d));

    // different tools never match
    const ToolCall e = registry.make_call("price", {{"base_token", "BTC"}});
    CHECK_FALSE(match_calls(a, e));

    // integer-typed JSON equals float-typed JSON after canonicalization
    const ToolCall f = registry.make_call(
        "peak_traded_volume", {{"base_token", "BTC"}, {"threshold_percent", 5}});
    const ToolCall g = registry.make_call(
        "peak_traded_volume", {{"base_token", "BTC"}, {"threshold_percent", 5.0}});
    CHECK(match_calls(f, g));
}

TEST_CASE("match_calls is an equivalence relation on filled calls") {
    auto store = demo_store();
    const ToolRegistry registry = build_default_registry(store);
    std::vector<ToolCall> calls;
    calls.push_back(registry.make_call("volatility", {{"base_token", "BTC"}}));
    calls.push_back(registry.make_call("volatility", {{"base_token", "btc"},
                                                      {"quote_token", "usdt"}}));
    calls.push_back(registry.make_call("price", {{"base_token", "BTC"}}));
    for (const auto& x : calls) CHECK(match_calls(x, x));  // reflexive
    for (const auto& x : calls)
        for (const auto& y : calls)
            CHECK(match_calls(x, y) == match_calls(y, x));  // symmetric
    for (const auto& x : calls)
        for (const auto& y : calls)
            for (const auto& z : calls)
                if (match_calls(x, y) && match_calls(y, z)) CHECK(match_calls(x, z));
}

TEST_CASE("export_schemas: one declaration per tool, round-trip identity") {
    auto store = demo_store();
    const ToolRegistry registry = build_default_registry(store);
    const auto declarations = registry.export_schemas();
    REQUIRE(declarations.size() == 12);

    for (size_t i = 0; i < registry.schemas().size(); ++i) {
        const ToolSchema& original = registry.schemas()[i];
        const ToolSchema parsed = ToolRegistry::parse_schema(declarations[i]);
        CHECK(parsed.name == original.name);
        CHECK(parsed.description == original.description);
        CHECK(parsed.return_kind == original.return_kind);
        REQUIRE(parsed.params.size() == original.params.size());
        for (size_t p = 0; p < original.params.size(); ++p) {
            CHECK(parsed.params[p].name == original.params[p].name);
            CHECK(parsed.params[p].type == original.params[p].type);
            CHECK(parsed.params[p].required == original.params[p].required);
            CHECK(parsed.params[p].default_value == original.params[p].default_value);
            CHECK(parsed.params[p].allowed == original.params[p].allowed);
            CHECK(parsed.params[p].description == original.params[p].description);
        }
    }
}

TEST_CASE("export_schemas: volatility declaration lists five params, defaults optional") {
    auto store = demo_store();
    const ToolRegistry registry = build_default_registry(store);
    const auto declarations = registry.export_schemas();
    nlohmann::ordered_json vol;
    for (const auto& d : declarations)
        if (d["function"]["name"] == "volatility") vol = d;
    REQUIRE(!vol.is_null());
    const auto& params = vol["function"]["parameters"];
    CHECK(params["properties"].size() == 5);
    CHECK(params["required"] == nlohmann::ordered_json::array({"base_token"}));
    CHECK(params["properties"]["quote_token"]["default"] == "USDT");
    CHECK(params["properties"]["exchange"]["default"] == "BINANCE");
    CHECK(params["properties"]["time_interval"]["default"] == 1);
    CHECK(params["properties"]["time_unit"]["default"] == "day");
}

TEST_CASE("dispatch: real mode routes to the grounding functions") {
    auto store = demo_store();
    const ToolRegistry registry = build_default_registry(store);
    const ToolCall call = registry.make_call("price", {{"base_token", "BTC"}});
    const ToolResult result = registry.dispatch(call);
    CHECK(result.tool_name == "price");
    CHECK(result.payload["price"] == doctest::Approx(store.at(kBtc).candles.back().close));

    const ToolCall meta = registry.make_call("get_base_tokens", nlohmann::json::object());
    CHECK(registry.dispatch(meta).payload["base_tokens"] ==
          nlohmann::json::array({"BTC", "ETH"}));
}

TEST_CASE("dispatch: unknown tool lists the registered names") {
    auto store = demo_store();
    const ToolRegistry registry = build_default_registry(store);
    ToolCall call;
    call.tool_name = "foo";
    try {
        registry.dispatch(call);
        FAIL("expected unknown-tool error");
    } catch (const Error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("unknown tool 'foo'") != std::string::npos);
        CHECK(msg.find("volatility") != std::string::npos);
    }
}

TEST_CASE("dispatch: tool errors carry the tool name") {
    auto store = demo_store();
    const ToolRegistry registry = build_default_registry(store);
    // ADA is not in the store
    const ToolCall call = registry.make_call("price", {{"base_token", "ADA"}});
    try {
        registry.dispatch(call);
        FAIL("expected unknown-instrument error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("price:") != std::string::npos);
    }
}

TEST_CASE("stub routing returns canned results and flags mismatches") {
    auto store = demo_store();
    const ToolRegistry registry = build_default_registry(store);

    StubTable stubs;
    StubEntry entry;
    entry.expected_call = registry.make_call("volatility", {{"base_token", "BTC"}});
    entry.result.tool_name = "volatility";
    entry.result.payload = {{"volatility_percent", 5.0}};
    stubs.add("q1", entry);

    const ToolRouter router(registry, ToolMode::stub, &stubs);

    // exact expected call: payload verbatim, no warning
    const ToolCall call = registry.make_call("volatility", {{"base_token", "BTC"}});
    auto routed = router.route(call, std::string("q1"));
    CHECK(routed.result.payload == nlohmann::json{{"volatility_percent", 5.0}});
    CHECK(routed.warnings.empty());

    // same tool, different args: flagged, same payload
    const ToolCall off = registry.make_call("volatility", {{"base_token", "ETH"}});
    routed = router.route(off, std::string("q1"));
    CHECK(routed.result.payload == nlohmann::json{{"volatility_percent", 5.0}});
    REQUIRE(routed.warnings.size() == 1);
    CHECK(routed.warnings[0].find("arguments differ") != std::string::npos);

    // wrong tool entirely: routing error flagged, not fatal
    const ToolCall wrong = registry.make_call("price", {{"base_token", "BTC"}});
    routed = router.route(wrong, std::string("q1"));
    REQUIRE(routed.warnings.size() == 1);
    CHECK(routed.warnings[0].find("expects volatility") != std::string::npos);

    // unknown item id is an error
    CHECK_THROWS_WITH_AS(router.route(call, std::string("nope")),
                         doctest::Contains("no stub entry"), Error);

    // byte-identical across repeated lookups
    const auto first = router.route(call, std::string("q1")).result.payload.dump();
    const auto second = router.route(call, std::string("q1")).result.payload.dump();
    CHECK(first == second);
}

TEST_CASE("registering the same tool name twice is rejected") {
    ToolRegistry registry;
    ToolSchema schema;
    schema.name = "echo";
    schema.description = "echoes";
    registry.register_tool(schema, [](const nlohmann::json&) { return ToolResult{}; });
    CHECK_THROWS_WITH_AS(
        registry.register_tool(schema, [](const nlohmann::json&) { return ToolResult{}; }),
        doctest::Contains("registered twice"), Error);
}

TEST_CASE("standalone stub table files load into the same table shape") {
    auto store = demo_store();
    const ToolRegistry registry = build_default_registry(store);
    const auto path = std::filesystem::temp_directory_path() / "tsqa_stubs.json";
    {
        nlohmann::json doc = nlohmann::json::array();
        doc.push_back({{"item_id", "q9"},
                       {"tool_name", "volatility"},
                       {"payload", {{"volatility_percent", 5.0}}},
                       {"expected_call",
                        {{"tool_name", "volatility"}, {"args", {{"base_token", "BTC"}}}}}});
        doc.push_back({{"item_id", "q9"},
                       {"tool_name", "price"},
                       {"payload", {{"price", 123.0}}}});
        std::ofstream out(path);
        out << doc.dump();
    }
    const StubTable table = StubTable::from_file(path.string());
    CHECK(table.contains("q9"));
    const ToolCall call = registry.make_call("price", {{"base_token", "BTC"}});
    const StubLookup hit = table.lookup("q9", call);
    CHECK(hit.result.payload == nlohmann::json{{"price", 123.0}});
    std::filesystem::remove(path);

    CHECK_THROWS_AS(StubTable::from_file("/nonexistent/stubs.json"), Error);
}

TEST_CASE("stub mode without an item id fails cleanly") {
    auto store = demo_store();
    const ToolRegistry registry = build_default_registry(store);
    StubTable stubs;
    StubEntry entry;
    entry.result.tool_name = "price";
    entry.result.payload = {{"price", 1.0}};
    stubs.add("q1", entry);
    const ToolRouter router(registry, ToolMode::stub, &stubs);
    const ToolCall call = registry.make_call("price", {{"base_token", "BTC"}});
    CHECK_THROWS_WITH_AS(router.route(call, std::nullopt),
                         doctest::Contains("no benchmark item id"), Error);
}
