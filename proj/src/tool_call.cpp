#include "tsqa/tool_call.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace tsqa {

void to_json(nlohmann::json& j, const ToolResult& r) {
    j = nlohmann::json{{"tool_name", r.tool_name}, {"payload", r.payload}};
}

void from_json(const nlohmann::json& j, ToolResult& r) {
    j.at("tool_name").get_to(r.tool_name);
    r.payload = j.at("payload");
}

void to_json(nlohmann::json& j, const ToolCall& c) {
    j = nlohmann::json{{"tool_name", c.tool_name}, {"args", c.args}};
    if (!c.raw_args.empty()) j["raw_args"] = c.raw_args;
}

void from_json(const nlohmann::json& j, ToolCall& c) {
    j.at("tool_name").get_to(c.tool_name);
    c.args = j.value("args", nlohmann::json::object());
    c.raw_args = j.value("raw_args", c.args);
}

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    return s;
}

std::string shortest_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

nlohmann::json canonicalize(const nlohmann::json& v) {
    if (v.is_number_integer()) return shortest_double(static_cast<double>(v.get<int64_t>()));
    if (v.is_number_unsigned()) return shortest_double(static_cast<double>(v.get<uint64_t>()));
    if (v.is_number_float()) return shortest_double(v.get<double>());
    if (v.is_string()) return lower(v.get<std::string>());
    if (v.is_array()) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& e : v) out.push_back(canonicalize(e));
        return out;
    }
    if (v.is_object()) {
        nlohmann::json out = nlohmann::json::object();
        for (const auto& [k, e] : v.items()) out[k] = canonicalize(e);
        return out;
    }
    return v;
}

}  // namespace

std::string canonical_signature(const ToolCall& call) {
    nlohmann::json j{{"tool", call.tool_name}, {"args", canonicalize(call.args)}};
    return j.dump();
}

bool match_calls(const ToolCall& actual, const ToolCall& expected) {
    return canonical_signature(actual) == canonical_signature(expected);
}

}  // namespace tsqa
