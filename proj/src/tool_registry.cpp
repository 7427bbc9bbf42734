#include "tsqa/tool_registry.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "tsqa/error.hpp"

namespace tsqa {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    return s;
}

const char* type_name(ParamType t) {
    switch (t) {
        case ParamType::string: return "string";
        case ParamType::integer: return "integer";
        case ParamType::number: return "number";
    }
    return "string";
}

ParamType type_from_name(const std::string& name) {
    if (name == "string") return ParamType::string;
    if (name == "integer") return ParamType::integer;
    if (name == "number") return ParamType::number;
    throw data_error("unknown parameter type '" + name + "'");
}

nlohmann::json coerce_value(const ToolSchema& schema, const ToolParam& param,
                            const nlohmann::json& value, std::vector<std::string>& warnings) {
    const std::string where = schema.name + "." + param.name;
    nlohmann::json out = value;
    switch (param.type) {
        case ParamType::string:
            if (!out.is_string())
                throw usage_error(where + ": expected a string, got " + out.dump());
            break;
        case ParamType::integer:
            if (out.is_number_integer() || out.is_number_unsigned()) break;
            if (out.is_number_float()) {
                const double d = out.get<double>();
                const auto i = static_cast<int64_t>(d);
                if (static_cast<double>(i) != d)
                    throw usage_error(where + ": expected an integer, got " + out.dump());
                out = i;
                break;
            }
            if (out.is_string()) {
                const std::string s = out.get<std::string>();
                int64_t i = 0;
                const auto res = std::from_chars(s.data(), s.data() + s.size(), i);
                if (res.ec != std::errc() || res.ptr != s.data() + s.size())
                    throw usage_error(where + ": cannot coerce '" + s + "' to an integer");
                warnings.push_back(where + ": coerced string '" + s + "' to integer");
                out = i;
                break;
            }
            throw usage_error(where + ": expected an integer, got " + out.dump());
        case ParamType::number:
            if (out.is_number_float()) break;
            if (out.is_number_integer() || out.is_number_unsigned()) {
                out = out.is_number_unsigned()
                          ? static_cast<double>(out.get<uint64_t>())
                          : static_cast<double>(out.get<int64_t>());
                break;
            }
            if (out.is_string()) {
                const std::string s = out.get<std::string>();
                double d = 0.0;
                const auto res = std::from_chars(s.data(), s.data() + s.size(), d);
                if (res.ec != std::errc() || res.ptr != s.data() + s.size())
                    throw usage_error(where + ": cannot coerce '" + s + "' to a number");
                warnings.push_back(where + ": coerced string '" + s + "' to number");
                out = d;
                break;
            }
            throw usage_error(where + ": expected a number, got " + out.dump());
    }
    if (!param.allowed.empty()) {
        const std::string canon = lower(out.get<std::string>());
        if (std::find(param.allowed.begin(), param.allowed.end(), canon) == param.allowed.end()) {
            std::string allowed;
            for (const auto& a : param.allowed) {
                if (!allowed.empty()) allowed += ", ";
                allowed += a;
            }
            throw usage_error(where + ": '" + out.get<std::string>() +
                              "' is not one of [" + allowed + "]");
        }
        out = canon;
    }
    return out;
}

}  // namespace

const ToolParam* ToolSchema::find_param(const std::string& param_name) const {
    for (const auto& p : params)
        if (p.name == param_name) return &p;
    return nullptr;
}

FillResult fill_defaults(const ToolSchema& schema, const nlohmann::json& raw_args) {
    if (!raw_args.is_object())
        throw usage_error(schema.name + ": arguments must be an object, got " + raw_args.dump());
    for (const auto& [key, _] : raw_args.items())
        if (!schema.find_param(key))
            throw usage_error(schema.name + ": unknown parameter '" + key + "'");

    FillResult result;
    for (const auto& param : schema.params) {
        if (raw_args.contains(param.name)) {
            result.args[param.name] =
                coerce_value(schema, param, raw_args.at(param.name), result.warnings);
        } else if (param.required) {
            throw usage_error(schema.name + ": missing required parameter '" + param.name + "'");
        } else {
            result.args[param.name] = param.default_value;
        }
    }
    return result;
}

void ToolRegistry::register_tool(ToolSchema schema, ToolHandler handler) {
    if (index_.count(schema.name))
        throw usage_error("tool '" + schema.name + "' registered twice");
    if (schema.description.empty())
        throw usage_error("tool '" + schema.name + "' needs a description");
    for (const auto& p : schema.params)
        if (!p.required && p.default_value.is_null())
            throw usage_error(schema.name + "." + p.name + ": optional parameter needs a default");
    index_[schema.name] = schemas_.size();
    handlers_[schema.name] = std::move(handler);
    schemas_.push_back(std::move(schema));
}

bool ToolRegistry::has(const std::string& name) const { return index_.count(name) > 0; }

const ToolSchema& ToolRegistry::schema(const std::string& name) const {
    const auto it = index_.find(name);
    if (it == index_.end()) {
        std::string names;
        for (const auto& s : schemas_) {
            if (!names.empty()) names += ", ";
            names += s.name;
        }
        throw usage_error("unknown tool '" + name + "'; registered tools: " + names);
    }
    return schemas_[it->second];
}

ToolCall ToolRegistry::make_call(const std::string& tool_name, const nlohmann::json& raw_args,
                                 std::vector<std::string>* warnings) const {
    const ToolSchema& s = schema(tool_name);
    FillResult filled = fill_defaults(s, raw_args);
    if (warnings)
        warnings->insert(warnings->end(), filled.warnings.begin(), filled.warnings.end());
    ToolCall call;
    call.tool_name = tool_name;
    call.raw_args = raw_args;
    call.args = std::move(filled.args);
    return call;
}

nlohmann::ordered_json ToolRegistry::export_schemas() const {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto& s : schemas_) {
        nlohmann::ordered_json properties = nlohmann::ordered_json::object();
        nlohmann::ordered_json required = nlohmann::ordered_json::array();
        for (const auto& p : s.params) {
            nlohmann::ordered_json prop{{"type", type_name(p.type)}};
            if (!p.description.empty()) prop["description"] = p.description;
            if (!p.allowed.empty()) prop["enum"] = p.allowed;
            if (p.required)
                required.push_back(p.name);
            else
                prop["default"] = p.default_value;
            properties[p.name] = prop;
        }
        out.push_back({{"type", "function"},
                       {"function",
                        {{"name", s.name},
                         {"description", s.description},
                         {"parameters",
                          {{"type", "object"},
                           {"properties", properties},
                           {"required", required}}},
                         {"returns", s.return_kind}}}});
    }
    return out;
}

ToolSchema ToolRegistry::parse_schema(const nlohmann::ordered_json& declaration) {
    const auto& fn = declaration.at("function");
    ToolSchema schema;
    schema.name = fn.at("name").get<std::string>();
    schema.description = fn.at("description").get<std::string>();
    schema.return_kind = fn.value("returns", "");
    const auto& params = fn.at("parameters");
    const auto& properties = params.at("properties");
    std::vector<std::string> required =
        params.value("required", std::vector<std::string>{});
    for (const auto& [name, prop] : properties.items()) {
        ToolParam p;
        p.name = name;
        p.type = type_from_name(prop.at("type").get<std::string>());
        p.description = prop.value("description", "");
        p.required = std::find(required.begin(), required.end(), name) != required.end();
        if (!p.required) p.default_value = prop.at("default");
        if (prop.contains("enum")) p.allowed = prop["enum"].get<std::vector<std::string>>();
        schema.params.push_back(std::move(p));
    }
    return schema;
}

ToolResult ToolRegistry::dispatch(const ToolCall& filled) const {
    const auto it = handlers_.find(filled.tool_name);
    if (it == handlers_.end()) schema(filled.tool_name);  // throws with the name list
    try {
        return it->second(filled.args);
    } catch (const Error& e) {
        throw Error(e.kind(), filled.tool_name + ": " + e.what());
    }
}

}  // namespace tsqa
