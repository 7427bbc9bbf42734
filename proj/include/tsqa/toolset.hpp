#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "tsqa/market_store.hpp"
#include "tsqa/stub_table.hpp"
#include "tsqa/tool_registry.hpp"

namespace tsqa {

// Builds the standard 12-tool registry over a store:
//   price, volatility, predict_price, predict_volatility,
//   correlation_between_tokens, correlation_between_exchanges,
//   peak_traded_volume, lowest_traded_volume, round_the_clock_pattern,
//   abnormal_deviations, get_base_tokens, get_exchanges.
// Every handler resolves its as_of to as_of_override when set, otherwise to
// the latest bar of the series involved (the minimum of the two for the
// correlation tools).
ToolRegistry build_default_registry(const MarketStore& store,
                                    std::optional<int64_t> as_of_override = std::nullopt);

enum class ToolMode { real, stub };

std::string to_string(ToolMode mode);
ToolMode parse_tool_mode(const std::string& text);

struct RoutedResult {
    ToolResult result;
    std::vector<std::string> warnings;
};

// Sends a filled call either to the live grounding handler or to the stub
// table for the current benchmark item.
class ToolRouter {
public:
    ToolRouter(const ToolRegistry& registry, ToolMode mode, const StubTable* stubs = nullptr);

    ToolMode mode() const { return mode_; }
    const StubTable* stubs() const { return stubs_; }

    RoutedResult route(const ToolCall& filled,
                       const std::optional<std::string>& item_id) const;

private:
    const ToolRegistry* registry_;
    ToolMode mode_;
    const StubTable* stubs_;
};

}  // namespace tsqa
